#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include <hexmark/configuration.hpp>
#include <hexmark/exact.hpp>
#include <hexmark/functionals.hpp>
#include <hexmark/lattice.hpp>
#include <hexmark/model.hpp>

using namespace hexmark;

TEST(Enumerate, InfiniteTemperatureIsUniform) {
  const HexTorus lat(3, 3);
  const VertexEnergies e{0.7, -0.4, 1.3};
  const auto sum = enumerate(lat, e, Temperature(1e12));
  EXPECT_NEAR(sum.log_Z, 9 * std::log(2.0), 1e-6);
  EXPECT_NEAR(sum.expectations.at("filled_density"), 0.5, 1e-9);
  // Each vertex sees three independent fair faces: Binomial(3, 1/2).
  EXPECT_NEAR(sum.expectations.at("frac_E"), 1.0 / 8, 1e-9);
  EXPECT_NEAR(sum.expectations.at("frac_C"), 3.0 / 8, 1e-9);
  EXPECT_NEAR(sum.expectations.at("frac_H"), 3.0 / 8, 1e-9);
  EXPECT_NEAR(sum.expectations.at("frac_F"), 1.0 / 8, 1e-9);
  for (double m : sum.marginals) EXPECT_NEAR(m, 0.5, 1e-9);
}

TEST(Enumerate, MatchesBruteForceSummation) {
  const HexTorus lat(3, 3);
  const VertexEnergies e{0.9, -0.2, 0.4};
  const Temperature T(0.8);
  const double beta = T.beta();

  double Z = 0, Eh = 0;
  for (int bits = 0; bits < (1 << 9); ++bits) {
    std::vector<bool> filled(9);
    for (int k = 0; k < 9; ++k) filled[k] = (bits >> k) & 1;
    const Configuration c(lat, filled);
    const double w = std::exp(-beta * energy(c, e));
    Z += w;
    Eh += w * energy(c, e);
  }
  const auto sum = enumerate(lat, e, T);
  EXPECT_NEAR(sum.log_Z, std::log(Z), 1e-10);
  EXPECT_NEAR(sum.expectations.at("energy"), Eh / Z, 1e-10);
}

TEST(Enumerate, ThreadCountDoesNotChangeBits) {
  const HexTorus lat(3, 6);
  const VertexEnergies e{0.3, 0.9, -0.5};
  const Temperature T(0.7);
  EnumerateOptions one;
  one.threads = 1;
  EnumerateOptions four;
  four.threads = 4;
  const auto a = enumerate(lat, e, T, one);
  const auto b = enumerate(lat, e, T, four);
  EXPECT_EQ(a.log_Z, b.log_Z);
  EXPECT_EQ(a.expectations, b.expectations);
  EXPECT_EQ(a.marginals, b.marginals);
}

TEST(Enumerate, CapIsEnforced) {
  const HexTorus lat(3, 6);
  EnumerateOptions opts;
  opts.cap = 10;
  EXPECT_THROW(enumerate(lat, {1, 1, 1}, Temperature(1), opts), ResourceCapError);
}

TEST(Enumerate, TopConfigurationsAreSortedGroundFirst) {
  const HexTorus lat(3, 3);
  const VertexEnergies e{1, 2, 3};  // E region: empty is the unique ground
  EnumerateOptions opts;
  opts.top_configs = 5;
  const auto sum = enumerate(lat, e, Temperature(0.5), opts);
  ASSERT_EQ(sum.top.size(), 5u);
  EXPECT_EQ(sum.top[0].mask, 0u);
  EXPECT_EQ(sum.top[0].energy, 0.0);
  for (std::size_t k = 1; k < sum.top.size(); ++k) {
    EXPECT_GE(sum.top[k].energy, sum.top[k - 1].energy);
  }
  // The next five configurations are the five single-face flips... all nine,
  // actually, tied at 6 e_C; the reported ones must be single-face masks.
  for (std::size_t k = 1; k < sum.top.size(); ++k) {
    EXPECT_EQ(std::popcount(sum.top[k].mask), 1);
    EXPECT_NEAR(sum.top[k].energy, 6 * e.c, 1e-12);
  }
}

TEST(Enumerate, ComplementDualityShiftsLogZ) {
  const HexTorus lat(3, 6);
  const VertexEnergies e{0.45, -0.8, 1.2};
  const Temperature T(0.9);
  const auto a = enumerate(lat, e, T);
  const auto b = enumerate(lat, e.swapped(), T);
  const double V = static_cast<double>(2 * lat.face_count());
  EXPECT_NEAR(b.log_Z - a.log_Z, T.beta() * V * e.f, 1e-8 * (1 + std::abs(a.log_Z)));
  EXPECT_NEAR(b.expectations.at("filled_density"),
              1 - a.expectations.at("filled_density"), 1e-9);
  EXPECT_NEAR(b.expectations.at("frac_E"), a.expectations.at("frac_F"), 1e-9);
  EXPECT_NEAR(b.expectations.at("frac_C"), a.expectations.at("frac_H"), 1e-9);
}

TEST(Enumerate, DomainMarginalsMatchConditional) {
  // One free face inside a fixed ring: the exact marginal must equal the
  // closed-form single-site conditional, for every ring pattern.
  const HexTorus host(6, 6);
  const VertexEnergies e{0.35, 1.4, -0.6};
  const Temperature T(0.75);
  const int center = host.face_index(2, 2);
  const auto nb = host.face_neighbors(center);

  for (int ring = 0; ring < NeighborBoundary::kCount; ++ring) {
    std::map<int, bool> boundary;
    for (int k = 0; k < 6; ++k) boundary[nb[k]] = ((ring >> k) & 1) != 0;
    const HexDomain dom(host, {center}, boundary);
    const auto sum = enumerate(dom, e, T);
    ASSERT_EQ(sum.marginals.size(), 1u);
    const double expected =
        single_site_conditional(NeighborBoundary{static_cast<std::uint8_t>(ring)}, e, T).p_fill;
    EXPECT_NEAR(sum.marginals[0], expected, 1e-12) << "ring " << ring;
  }
}

TEST(NeighborBoundaryApi, DihedralClassesCount13) {
  const auto& reps = NeighborBoundary::class_representatives();
  EXPECT_EQ(reps.size(), 13u);
  std::set<int> seen;
  for (int r = 0; r < NeighborBoundary::kCount; ++r) {
    const NeighborBoundary b{static_cast<std::uint8_t>(r)};
    // Canonical form is invariant on the orbit.
    for (int k = 0; k < 6; ++k) {
      const NeighborBoundary rot{NeighborBoundary::rotate(b.ring, k)};
      EXPECT_EQ(rot.canonical(), b.canonical());
      const NeighborBoundary ref{NeighborBoundary::rotate(NeighborBoundary::reflect(b.ring), k)};
      EXPECT_EQ(ref.canonical(), b.canonical());
    }
    seen.insert(b.dihedral_class());
  }
  EXPECT_EQ(seen.size(), 13u);
}

TEST(Conditional, WeightsFollowRingStates) {
  const VertexEnergies e{0.5, 1.25, 2.5};
  const Temperature T(1);
  // Empty ring: filling the center makes six C vertices.
  const auto empty = single_site_conditional(NeighborBoundary{0}, e, T);
  EXPECT_NEAR(empty.energy_empty, 0, 1e-12);
  EXPECT_NEAR(empty.energy_fill, 6 * e.c, 1e-12);
  // Full ring: six H vertices turn into six F vertices.
  const auto full = single_site_conditional(NeighborBoundary{63}, e, T);
  EXPECT_NEAR(full.energy_empty, 6 * e.h, 1e-12);
  EXPECT_NEAR(full.energy_fill, 6 * e.f, 1e-12);
  // Probabilities are stable logistic values.
  EXPECT_NEAR(empty.p_fill, 1 / (1 + std::exp(6 * e.c)), 1e-12);
}

TEST(HardHexagon, MatchesIndependentSetOracle) {
  const HexTorus lat(3, 3);
  const auto table = hard_hexagon_distribution(lat);

  std::set<std::uint64_t> oracle;
  for (std::uint64_t bits = 0; bits < (1 << 9); ++bits) {
    bool ok = true;
    for (int f = 0; f < 9 && ok; ++f) {
      if (!((bits >> f) & 1)) continue;
      for (int g : lat.face_neighbors(f)) {
        if ((bits >> g) & 1) {
          ok = false;
          break;
        }
      }
    }
    if (ok) oracle.insert(bits);
  }
  // Free faces of a torus enumerate in face order, so masks align with bits.
  const std::set<std::uint64_t> got(table.masks.begin(), table.masks.end());
  EXPECT_EQ(got, oracle);
  EXPECT_NEAR(table.probability * static_cast<double>(oracle.size()), 1.0, 1e-12);
}

TEST(HardHexagon, InfeasibleBoundaryIsAnError) {
  const HexTorus host(6, 6);
  const auto interior = face_block(host, 1, 1, 3, 3);
  const HexDomain dom = domain_with_uniform_boundary(host, interior, true);
  EXPECT_THROW(hard_hexagon_distribution(dom), ValidationError);
  const HexDomain ok = domain_with_uniform_boundary(host, interior, false);
  EXPECT_NO_THROW(hard_hexagon_distribution(ok));
}
