#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include <hexmark/configuration.hpp>
#include <hexmark/functionals.hpp>
#include <hexmark/lattice.hpp>
#include <hexmark/model.hpp>
#include <hexmark/rng.hpp>

using namespace hexmark;

namespace {

Configuration random_config(const HexTorus& lat, SplitMix64& rng) {
  std::vector<bool> filled(static_cast<std::size_t>(lat.face_count()));
  for (std::size_t k = 0; k < filled.size(); ++k) filled[k] = rng.next_bool();
  return Configuration(lat, filled);
}

}  // namespace

TEST(Functionals, SingleHexagon) {
  const HexTorus lat(6, 6);
  Configuration c(lat);
  c.set(lat.face_index(2, 2), true);
  const GeometricValues direct = geometric_values_direct(c);
  EXPECT_EQ(direct.area, 1);
  EXPECT_EQ(direct.perimeter, 6);
  EXPECT_EQ(direct.euler, 1);
  const GeometricValues via_states = geometric_values_from_states(c);
  EXPECT_EQ(via_states.area, direct.area);
  EXPECT_EQ(via_states.perimeter, direct.perimeter);
  EXPECT_EQ(via_states.euler, direct.euler);
}

TEST(Functionals, AdjacentPair) {
  const HexTorus lat(6, 6);
  Configuration c(lat);
  c.set(lat.face_index(2, 2), true);
  c.set(lat.face_index(3, 2), true);
  const GeometricValues v = geometric_values_from_states(c);
  EXPECT_EQ(v.area, 2);
  EXPECT_EQ(v.perimeter, 10);
  EXPECT_EQ(v.euler, 1);
}

TEST(Functionals, TorusMinusOneFaceHasNegativeEuler) {
  const HexTorus lat(6, 6);
  Configuration c(lat, true);
  c.set(lat.face_index(0, 0), false);
  const GeometricValues v = geometric_values_from_states(c);
  EXPECT_EQ(v.area, 35);
  EXPECT_EQ(v.perimeter, 6);
  EXPECT_EQ(v.euler, -1);

  Configuration full(lat, true);
  const GeometricValues w = geometric_values_from_states(full);
  EXPECT_EQ(w.area, 36);
  EXPECT_EQ(w.perimeter, 0);
  EXPECT_EQ(w.euler, 0);
}

// The state-census route must agree with the direct cell-complex count on
// every configuration, not just curated ones.
TEST(Functionals, StatesRouteMatchesDirectExhaustive3x3) {
  const HexTorus lat(3, 3);
  for (int bits = 0; bits < (1 << 9); ++bits) {
    std::vector<bool> filled(9);
    for (int k = 0; k < 9; ++k) filled[k] = (bits >> k) & 1;
    const Configuration c(lat, filled);
    const GeometricValues a = geometric_values_direct(c);
    const GeometricValues b = geometric_values_from_states(c);
    EXPECT_EQ(a.area, b.area) << bits;
    EXPECT_EQ(a.perimeter, b.perimeter) << bits;
    EXPECT_EQ(a.euler, b.euler) << bits;
  }
}

TEST(Functionals, StatesRouteMatchesDirectRandomLarge) {
  SplitMix64 rng(20240601);
  for (const auto& [w, h] : {std::pair{6, 6}, std::pair{9, 9}, std::pair{5, 7}}) {
    const HexTorus lat(w, h);
    for (int rep = 0; rep < 200; ++rep) {
      const Configuration c = random_config(lat, rng);
      const GeometricValues a = geometric_values_direct(c);
      const GeometricValues b = geometric_values_from_states(c);
      ASSERT_EQ(a.area, b.area);
      ASSERT_EQ(a.perimeter, b.perimeter);
      ASSERT_EQ(a.euler, b.euler);
    }
  }
}

TEST(Functionals, CacheSurvivesFlipSequences) {
  const HexTorus lat(6, 6);
  SplitMix64 rng(99);
  Configuration c = random_config(lat, rng);
  for (int step = 0; step < 2000; ++step) {
    c.flip(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(lat.face_count()))));
    if (step % 250 == 0) {
      EXPECT_EQ(recount_state_counts(c), c.state_counts());
    }
  }
  EXPECT_EQ(recount_state_counts(c), c.state_counts());
}

TEST(Functionals, DeltaEnergyMatchesFullRecompute) {
  const HexTorus lat(5, 5);
  SplitMix64 rng(7);
  const VertexEnergies e{0.37, -1.21, 2.05};
  Configuration c = random_config(lat, rng);
  for (int rep = 0; rep < 500; ++rep) {
    const int f = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(lat.face_count())));
    const double before = energy(c, e);
    const double delta = delta_energy(c, f, e);
    c.flip(f);
    EXPECT_NEAR(energy(c, e) - before, delta, 1e-10);
  }
}

TEST(Functionals, EnergyEqualsGeometricCombination) {
  const HexTorus lat(6, 6);
  SplitMix64 rng(404);
  for (int rep = 0; rep < 100; ++rep) {
    const GeometricParams g{rng.next_double() * 10 - 5, rng.next_double() * 10 - 5,
                            rng.next_double() * 10 - 5};
    const VertexEnergies e = to_vertex_energies(g);
    const Configuration c = random_config(lat, rng);
    const double via_states = energy(c, e);
    const double via_geometry = geometric_energy(geometric_values_direct(c), g);
    EXPECT_NEAR(via_states, via_geometry, 1e-9 * (1 + std::abs(via_geometry)));
  }
}

TEST(Functionals, ComplementSwapsCountsAndShiftsEnergy) {
  const HexTorus lat(6, 6);
  SplitMix64 rng(11);
  const VertexEnergies e{0.8, -0.3, 1.7};
  const VertexEnergies swapped = e.swapped();
  for (int rep = 0; rep < 50; ++rep) {
    const Configuration c = random_config(lat, rng);
    const Configuration cc = c.complemented();
    const auto n = c.state_counts();
    const auto m = cc.state_counts();
    EXPECT_EQ(m[0], n[3]);
    EXPECT_EQ(m[1], n[2]);
    EXPECT_EQ(m[2], n[1]);
    EXPECT_EQ(m[3], n[0]);
    const double V = static_cast<double>(c.counted_vertex_count());
    EXPECT_NEAR(energy(cc, swapped) - energy(c, e), -V * e.f, 1e-9);
  }
}

TEST(Functionals, SextantEnergiesAreExact) {
  const HexTorus lat(5, 5);
  SplitMix64 rng(31337);
  for (int rep = 0; rep < 20; ++rep) {
    const SextantEnergies s{static_cast<std::int64_t>(rng.next_below(121)) - 60,
                            static_cast<std::int64_t>(rng.next_below(121)) - 60,
                            static_cast<std::int64_t>(rng.next_below(121)) - 60};
    const VertexEnergies e = s.to_doubles();
    const auto round_trip = to_sextants(e);
    ASSERT_TRUE(round_trip.has_value());
    EXPECT_EQ(round_trip->c, s.c);
    EXPECT_EQ(round_trip->h, s.h);
    EXPECT_EQ(round_trip->f, s.f);

    Configuration c = random_config(lat, rng);
    for (int step = 0; step < 100; ++step) {
      const int f =
          static_cast<int>(rng.next_below(static_cast<std::uint64_t>(lat.face_count())));
      const std::int64_t before = energy_sextants(c, s);
      const std::int64_t delta = delta_energy_sextants(c, f, s);
      c.flip(f);
      EXPECT_EQ(energy_sextants(c, s), before + delta);
    }
    // The double-precision energy agrees with the integer route up to
    // rounding in e = s/6.
    EXPECT_NEAR(energy(c, e), static_cast<double>(energy_sextants(c, s)) / 6.0, 1e-9);
  }
}

TEST(Functionals, ToSextantsRejectsNonRepresentable) {
  EXPECT_FALSE(to_sextants({M_PI, 0, 0}).has_value());
  EXPECT_FALSE(to_sextants({0.25, 0, 0}).has_value());
  const auto ok = to_sextants({1.0, 0.5, 1.0 / 3.0});
  ASSERT_TRUE(ok.has_value());
  EXPECT_EQ(ok->c, 6);
  EXPECT_EQ(ok->h, 3);
  EXPECT_EQ(ok->f, 2);
}

TEST(Functionals, DivisibilityGuardCatchesCorruption) {
  // A census that cannot come from any configuration (A not integral).
  const std::array<std::int64_t, 4> bad{10, 1, 0, 0};
  EXPECT_THROW(geometric_values_from_states(bad), ValidationError);
}
