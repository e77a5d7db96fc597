#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include <hexmark/configuration.hpp>
#include <hexmark/functionals.hpp>
#include <hexmark/lattice.hpp>
#include <hexmark/model.hpp>
#include <hexmark/rng.hpp>

using namespace hexmark;

TEST(Conversions, KnownPoints) {
  // Pure Euler weight: vertex energies (1, -1, 0).
  const VertexEnergies chi = to_vertex_energies({6, 0, 0});
  EXPECT_NEAR(chi.c, 1, 1e-12);
  EXPECT_NEAR(chi.h, -1, 1e-12);
  EXPECT_NEAR(chi.f, 0, 1e-12);

  // Pure perimeter: every boundary vertex costs 1.
  const VertexEnergies per = to_vertex_energies({0, 1, 0});
  EXPECT_NEAR(per.c, 1, 1e-12);
  EXPECT_NEAR(per.h, 1, 1e-12);
  EXPECT_NEAR(per.f, 0, 1e-12);

  // Pure area: e scales linearly with the vertex fill count.
  const VertexEnergies area = to_vertex_energies({0, 0, 6});
  EXPECT_NEAR(area.c, 1, 1e-12);
  EXPECT_NEAR(area.h, 2, 1e-12);
  EXPECT_NEAR(area.f, 3, 1e-12);
}

TEST(Conversions, RoundTripBothWays) {
  SplitMix64 rng(5150);
  for (int rep = 0; rep < 100; ++rep) {
    const GeometricParams g{rng.next_double() * 10 - 5, rng.next_double() * 10 - 5,
                            rng.next_double() * 10 - 5};
    const GeometricParams back = to_geometric_params(to_vertex_energies(g));
    EXPECT_NEAR(back.x, g.x, 1e-12);
    EXPECT_NEAR(back.p, g.p, 1e-12);
    EXPECT_NEAR(back.a, g.a, 1e-12);

    const VertexEnergies e{rng.next_double() * 4 - 2, rng.next_double() * 4 - 2,
                           rng.next_double() * 4 - 2};
    const VertexEnergies eback = to_vertex_energies(to_geometric_params(e));
    EXPECT_NEAR(eback.c, e.c, 1e-12);
    EXPECT_NEAR(eback.h, e.h, 1e-12);
    EXPECT_NEAR(eback.f, e.f, 1e-12);
  }
}

TEST(Classify, RegionsLinesAndCorners) {
  EXPECT_EQ(classify({1, 1, 1}).name(), "E");
  EXPECT_EQ(classify({-1, 0.5, 2}).name(), "C");
  EXPECT_EQ(classify({0.5, -1, 2}).name(), "H");
  EXPECT_EQ(classify({0.5, 1, -1}).name(), "F");

  EXPECT_EQ(classify({0, 1, 1}).name(), "E|C");
  EXPECT_EQ(classify({1, 0, 1}).name(), "E|H");
  EXPECT_EQ(classify({1, 1, 0}).name(), "E|F");
  EXPECT_EQ(classify({-1, -1, 0.5}).name(), "C|H");
  EXPECT_EQ(classify({-1, 0.5, -1}).name(), "C|F");
  EXPECT_EQ(classify({0.5, -1, -1}).name(), "H|F");

  EXPECT_EQ(classify({0, 0, 1}).name(), "E|C|H");
  EXPECT_EQ(classify({0, 0, 0}).name(), "E|C|H|F");

  EXPECT_EQ(classify({1, 1, 1}).kind, RegionLabel::Kind::region);
  EXPECT_EQ(classify({0, 1, 1}).kind, RegionLabel::Kind::line);
  EXPECT_EQ(classify({0, 0, 1}).kind, RegionLabel::Kind::multi);
}

TEST(Classify, PeierlsFlagFollowsThePairTable) {
  // Separable pairs: E-H, E-F, C-F.
  EXPECT_TRUE(classify({1, 0, 1}).peierls);
  EXPECT_TRUE(classify({1, 1, 0}).peierls);
  EXPECT_TRUE(classify({-1, 1, -1}).peierls);
  // Entropy-degenerate pairs: E-C, C-H, H-F.
  EXPECT_FALSE(classify({0, 1, 1}).peierls);
  EXPECT_FALSE(classify({-1, -1, 1}).peierls);
  EXPECT_FALSE(classify({1, -1, -1}).peierls);
  // Regions always admit the argument.
  EXPECT_TRUE(classify({1, 2, 3}).peierls);
}

TEST(Classify, ScaleInvariant) {
  SplitMix64 rng(808);
  for (int rep = 0; rep < 200; ++rep) {
    const VertexEnergies e{rng.next_double() * 2 - 1, rng.next_double() * 2 - 1,
                           rng.next_double() * 2 - 1};
    const RegionLabel base = classify(e);
    for (double s : {1e-8, 1e-3, 1.0, 1e3, 1e8}) {
      EXPECT_EQ(classify({e.c * s, e.h * s, e.f * s}), base);
    }
  }
}

TEST(Classify, RelativeToleranceMergesNearTies) {
  // Well inside the tolerance: treated as the transition line.
  EXPECT_EQ(classify({1e-12, 1, 1}).name(), "E|C");
  // Clearly outside: a region.
  EXPECT_EQ(classify({1e-6, 1, 1}).name(), "E");
}

TEST(VertexEnergiesApi, OfFillAndSwap) {
  const VertexEnergies e{1, 2, 3};
  EXPECT_EQ(e.of_fill(0), 0.0);
  EXPECT_EQ(e.of_fill(1), 1.0);
  EXPECT_EQ(e.of_fill(2), 2.0);
  EXPECT_EQ(e.of_fill(3), 3.0);
  const VertexEnergies s = e.swapped();
  EXPECT_EQ(s.c, e.h - e.f);
  EXPECT_EQ(s.h, e.c - e.f);
  EXPECT_EQ(s.f, -e.f);
  // Swapping twice is the identity.
  const VertexEnergies ss = s.swapped();
  EXPECT_NEAR(ss.c, e.c, 1e-12);
  EXPECT_NEAR(ss.h, e.h, 1e-12);
  EXPECT_NEAR(ss.f, e.f, 1e-12);
}

TEST(Temperature, Validation) {
  EXPECT_THROW(Temperature(0), ValidationError);
  EXPECT_THROW(Temperature(-1), ValidationError);
  EXPECT_NEAR(Temperature::from_beta(4).t, 0.25, 1e-15);
  EXPECT_NEAR(Temperature(0.5).beta(), 2.0, 1e-15);
}

TEST(Presets, KnownParameterPoints) {
  const ModelPoint ferro = preset("ising_ferro");
  EXPECT_EQ(ferro.geo.p, 1.0);
  EXPECT_EQ(classify(ferro.energies).name(), "E|F");

  const ModelPoint anti = preset("ising_antiferro");
  EXPECT_EQ(classify(anti.energies).name(), "C|H");

  const ModelPoint triplet = preset("triplet");
  EXPECT_EQ(classify(triplet.energies).name(), "C|F");
  EXPECT_NEAR(triplet.geo.x, -8, 1e-12);
  EXPECT_NEAR(triplet.geo.p, 0, 1e-12);
  EXPECT_NEAR(triplet.geo.a, -4, 1e-12);

  const ModelPoint field = preset("ising_field(0.5)");
  EXPECT_NEAR(field.geo.a, 0.5, 1e-12);

  EXPECT_THROW(preset("nope"), ValidationError);
  EXPECT_THROW(preset("ising_field(x)"), ValidationError);
  EXPECT_THROW(preset("ising_field(1e)"), ValidationError);
}

TEST(GroundConfigurations, CensusOnSublatticeTorus) {
  const HexTorus lat(6, 6);

  const auto e_only = ground_configurations(classify({1, 1, 1}), lat);
  ASSERT_EQ(e_only.size(), 1u);
  EXPECT_EQ(e_only[0].name, "empty");
  EXPECT_EQ(e_only[0].config.filled_count(), 0);

  const auto c_only = ground_configurations(classify({-1, 1, 1}), lat);
  ASSERT_EQ(c_only.size(), 3u);
  for (const auto& g : c_only) {
    EXPECT_EQ(g.state_class, VertexState::C);
    EXPECT_EQ(g.config.filled_count(), lat.face_count() / 3);
    for (int v = 0; v < lat.vertex_count(); ++v) {
      EXPECT_EQ(g.config.vertex_state(v), VertexState::C);
    }
  }

  const auto h_only = ground_configurations(classify({1, -1, 1}), lat);
  ASSERT_EQ(h_only.size(), 3u);
  for (const auto& g : h_only) {
    EXPECT_EQ(g.config.filled_count(), 2 * lat.face_count() / 3);
    for (int v = 0; v < lat.vertex_count(); ++v) {
      EXPECT_EQ(g.config.vertex_state(v), VertexState::H);
    }
  }

  const auto f_only = ground_configurations(classify({1, 1, -1}), lat);
  ASSERT_EQ(f_only.size(), 1u);
  EXPECT_EQ(f_only[0].config.filled_count(), lat.face_count());

  // Pair labels take unions, in E, C, H, F order.
  EXPECT_EQ(ground_configurations(classify({1, 1, 0}), lat).size(), 2u);
  EXPECT_EQ(ground_configurations(classify({1, 0, 1}), lat).size(), 4u);
  EXPECT_EQ(ground_configurations(classify({-1, 1, -1}), lat).size(), 4u);
}

TEST(GroundConfigurations, RequiresSublatticesForCAndH) {
  const HexTorus lat(4, 4);
  EXPECT_NO_THROW(ground_configurations(classify({1, 1, 1}), lat));
  EXPECT_THROW(ground_configurations(classify({-1, 1, 1}), lat), ValidationError);
  EXPECT_THROW(ground_configurations(classify({1, -1, 1}), lat), ValidationError);
}

TEST(GroundConfigurations, RejectsNonPeierlsLabels) {
  const HexTorus lat(6, 6);
  EXPECT_THROW(ground_configurations(classify({0, 1, 1}), lat), ValidationError);
  EXPECT_THROW(ground_configurations(classify({1, -1, -1}), lat), ValidationError);
}

// Brute-force check on the 3x3 torus: the configurations returned as ground
// states are exactly the global energy minimizers.
TEST(GroundConfigurations, MatchExhaustiveMinimizers) {
  const HexTorus lat(3, 3);
  struct Case {
    VertexEnergies e;
    std::size_t count;
  };
  const Case cases[] = {
      {{1, 1, 1}, 1},    // E
      {{-1, 1, 1}, 3},   // C
      {{1, -1, 1}, 3},   // H
      {{1, 1, -1}, 1},   // F
      {{1, 1, 0}, 2},    // E|F
      {{1, 0, 1}, 4},    // E|H
      {{-1, 1, -1}, 4},  // C|F
  };
  for (const auto& cs : cases) {
    double best = 1e300;
    std::set<std::uint64_t> minimizers;
    for (int bits = 0; bits < (1 << 9); ++bits) {
      std::vector<bool> filled(9);
      for (int k = 0; k < 9; ++k) filled[k] = (bits >> k) & 1;
      const Configuration c(lat, filled);
      const double en = energy(c, cs.e);
      if (en < best - 1e-9) {
        best = en;
        minimizers.clear();
      }
      if (en < best + 1e-9) minimizers.insert(c.free_bits());
    }
    const auto grounds = ground_configurations(classify(cs.e), lat);
    std::set<std::uint64_t> produced;
    for (const auto& g : grounds) produced.insert(g.config.free_bits());
    EXPECT_EQ(produced, minimizers) << "energies (" << cs.e.c << ", " << cs.e.h << ", "
                                    << cs.e.f << ")";
    EXPECT_EQ(grounds.size(), cs.count);
  }
}
