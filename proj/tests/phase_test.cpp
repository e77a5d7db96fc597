#include <cmath>
#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include <hexmark/lattice.hpp>
#include <hexmark/model.hpp>
#include <hexmark/phase.hpp>

using namespace hexmark;

TEST(Excitations, EmptyGroundHasOneClass) {
  const HexTorus lat(6, 6);
  const VertexEnergies e{0.7, 1.1, 2.0};  // E region
  const auto spec = excitation_spectrum(Configuration(lat), e);
  ASSERT_EQ(spec.classes.size(), 1u);
  const auto& cls = spec.classes[0];
  EXPECT_NEAR(cls.delta, 6 * e.c, 1e-12);
  EXPECT_EQ(cls.faces, lat.face_count());
  EXPECT_EQ(cls.total_faces, lat.face_count());
  EXPECT_EQ(cls.description, "6 E->C");
  EXPECT_DOUBLE_EQ(cls.multiplicity(), 1.0);
}

TEST(Excitations, HGroundSplitsByDirection) {
  const HexTorus lat(3, 3);
  const VertexEnergies e{0.5, -1.0, 0.5};  // H region
  const auto refs = ground_configurations(classify(e), lat);
  ASSERT_EQ(refs.size(), 3u);
  const auto spec = excitation_spectrum(refs[0].config, e);
  ASSERT_EQ(spec.classes.size(), 2u);

  std::map<std::string, const ExcitationClass*> by_desc;
  for (const auto& c : spec.classes) by_desc[c.description] = &c;
  ASSERT_TRUE(by_desc.count("6 H->F"));
  ASSERT_TRUE(by_desc.count("6 H->C"));
  // Filling the empty sublattice face costs 6(e_F - e_H); emptying a filled
  // face costs 6(e_C - e_H). Both are 9 here, but the patterns differ.
  EXPECT_NEAR(by_desc["6 H->F"]->delta, 6 * (e.f - e.h), 1e-12);
  EXPECT_NEAR(by_desc["6 H->C"]->delta, 6 * (e.c - e.h), 1e-12);
  EXPECT_EQ(by_desc["6 H->F"]->faces, 3);
  EXPECT_EQ(by_desc["6 H->C"]->faces, 6);
  EXPECT_NEAR(by_desc["6 H->F"]->multiplicity(), 1.0 / 3, 1e-12);
  EXPECT_NEAR(by_desc["6 H->C"]->multiplicity(), 2.0 / 3, 1e-12);
}

TEST(Excitations, CoexistenceLineGapsDriveTheOffset) {
  // On the E-H line e = (1-f, 0, f) the two phases trade excitation costs
  // 6(1-f) and 6f; these gaps are exactly what the offset formula uses.
  const double f = 0.3;
  const VertexEnergies e{1 - f, 0, f};
  const HexTorus lat(6, 6);

  const auto above_e = excitation_spectrum(Configuration(lat), e);
  ASSERT_EQ(above_e.classes.size(), 1u);
  EXPECT_NEAR(above_e.classes[0].delta, 6 * (1 - f), 1e-12);

  const auto refs = ground_configurations(classify({0.5, -1, 0.5}), lat);
  // Reuse an H-type filling but score it with the line energies.
  const auto above_h = excitation_spectrum(refs[0].config, e);
  ASSERT_EQ(above_h.classes.size(), 2u);
  std::map<std::string, double> deltas;
  for (const auto& c : above_h.classes) deltas[c.description] = c.delta;
  EXPECT_NEAR(deltas["6 H->F"], 6 * f, 1e-12);
  EXPECT_NEAR(deltas["6 H->C"], 6 * (1 - f), 1e-12);
}

TEST(Excitations, RejectsNonGroundConfigurations) {
  const HexTorus lat(3, 3);
  Configuration c(lat);
  c.set(4, true);
  EXPECT_THROW(excitation_spectrum(c, {1, 2, 3}), ValidationError);
  // The full configuration is not minimal in the E region either.
  EXPECT_THROW(excitation_spectrum(Configuration(lat, true), {1, 2, 3}), ValidationError);
}

TEST(SlawnyOffset, SignsAndSymmetry) {
  for (double beta : {1.0, 2.5}) {
    EXPECT_DOUBLE_EQ(slawny_offset_EH(0.5, beta).offset, 0.0);
    EXPECT_DOUBLE_EQ(slawny_offset_EF(0.5, beta).offset, 0.0);
    EXPECT_GT(slawny_offset_EH(0.3, beta).offset, 0.0);
    EXPECT_LT(slawny_offset_EH(0.7, beta).offset, 0.0);
    EXPECT_GT(slawny_offset_EF(0.2, beta).offset, 0.0);
    EXPECT_LT(slawny_offset_EF(0.8, beta).offset, 0.0);
    // Antisymmetry about the midpoint of each line.
    for (double x : {0.1, 0.25, 0.4}) {
      EXPECT_NEAR(slawny_offset_EH(x, beta).offset + slawny_offset_EH(1 - x, beta).offset,
                  0.0, 1e-15);
      EXPECT_NEAR(slawny_offset_EF(x, beta).offset + slawny_offset_EF(1 - x, beta).offset,
                  0.0, 1e-15);
    }
  }
  // The kappa prefactor scales linearly.
  EXPECT_NEAR(slawny_offset_EH(0.3, 2, 2.5).offset, 2.5 * slawny_offset_EH(0.3, 2).offset,
              1e-15);
}

TEST(SlawnyOffset, DecaysAtTheDominantGapRate) {
  // At f = 0.3 the offset is controlled by exp(-6*0.3*beta) once the
  // competing exp(-6*0.7*beta) term is negligible.
  const double f = 0.3;
  for (double beta : {3.0, 4.0, 5.0}) {
    const double ratio =
        slawny_offset_EH(f, beta + 1).offset / slawny_offset_EH(f, beta).offset;
    EXPECT_NEAR(ratio, std::exp(-6 * f), 0.02 * std::exp(-6 * f));
  }
}

TEST(SlawnyOffset, RejectsBadArguments) {
  EXPECT_THROW(slawny_offset_EH(0.0, 1), ValidationError);
  EXPECT_THROW(slawny_offset_EH(1.0, 1), ValidationError);
  EXPECT_THROW(slawny_offset_EH(0.5, 0), ValidationError);
  EXPECT_THROW(slawny_offset_EH(0.5, -2), ValidationError);
  EXPECT_THROW(slawny_offset_EF(1.2, 1), ValidationError);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(slawny_offset_EF(0.5, inf), ValidationError);
}

TEST(ZeroTempScan, CountsAndLabels) {
  EXPECT_THROW(zero_temp_scan(7), ValidationError);
  const int res = 8;
  const auto scan = zero_temp_scan(res);
  EXPECT_EQ(scan.resolution, res);
  ASSERT_EQ(scan.points.size(), static_cast<std::size_t>(2 * res * res + 6 * res + 4));

  const auto hist = scan.label_histogram();
  // All four regions show up in the bulk sample.
  for (const char* r : {"E", "C", "H", "F"}) {
    ASSERT_TRUE(hist.count(r)) << r;
    EXPECT_GT(hist.at(r), 0) << r;
  }
  // Line points classify as exact two-state ties, res of each.
  for (const char* l : {"E|C", "E|H", "E|F", "C|H", "C|F", "H|F"}) {
    ASSERT_TRUE(hist.count(l)) << l;
    EXPECT_GE(hist.at(l), res) << l;
  }
  // Exactly the four triple points.
  std::int64_t corners = 0;
  for (const char* t : {"E|C|H", "E|C|F", "E|H|F", "C|H|F"}) {
    ASSERT_TRUE(hist.count(t)) << t;
    EXPECT_EQ(hist.at(t), 1) << t;
    corners += hist.at(t);
  }
  EXPECT_EQ(corners, 4);

  // Every point sits on the unit sphere.
  for (const auto& p : scan.points) {
    const double norm2 = p.e[0] * p.e[0] + p.e[1] * p.e[1] + p.e[2] * p.e[2];
    EXPECT_NEAR(norm2, 1.0, 1e-12);
  }
}

namespace {

std::map<std::string, std::map<std::string, int>> line_predictions(const LowTempScan& scan) {
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& p : scan.points) {
    if (p.kind != ScanPointKind::line) continue;
    out[p.zero_t_label.name()][p.predicted] += 1;
  }
  return out;
}

}  // namespace

TEST(LowTempScan, SlawnySplitsTheCoexistenceLines) {
  EXPECT_THROW(low_temp_scan(0, 8), ValidationError);
  EXPECT_THROW(low_temp_scan(-1, 8), ValidationError);

  const auto scan = low_temp_scan(2.0, 8);
  EXPECT_EQ(scan.points.size(), 180u);
  EXPECT_NEAR(scan.band, 1.0 / 12, 1e-12);

  const auto lines = line_predictions(scan);
  // Peierls lines split into the two neighboring phases. E-H and E-F cross
  // their midpoint at the arc center; the C-F balance point sits at the
  // zero of e_H, about three quarters of the way to the C|H|F corner.
  EXPECT_EQ(lines.at("E|H").at("E"), 4);
  EXPECT_EQ(lines.at("E|H").at("H"), 4);
  EXPECT_EQ(lines.at("E|F").at("E"), 4);
  EXPECT_EQ(lines.at("E|F").at("F"), 4);
  EXPECT_EQ(lines.at("C|F").at("C"), 6);
  EXPECT_EQ(lines.at("C|F").at("F"), 2);
  // E-C is covered by the uniqueness analysis where e_F >= e_H, open beyond.
  EXPECT_EQ(lines.at("E|C").at("none"), 4);
  EXPECT_EQ(lines.at("E|C").at("unresolved"), 4);
  EXPECT_EQ(lines.at("H|F").at("none"), 6);
  EXPECT_EQ(lines.at("H|F").at("unresolved"), 2);
  EXPECT_EQ(lines.at("C|H").at("unresolved"), 8);

  for (const auto& p : scan.points) {
    if (p.kind == ScanPointKind::corner) {
      EXPECT_EQ(p.predicted, "unresolved");
      EXPECT_EQ(p.annotation, "corner");
    } else if (p.annotation == "slawny") {
      EXPECT_TRUE(std::isfinite(p.offset));
    } else if (p.annotation.empty()) {
      // Deep region points keep their zero-temperature label.
      EXPECT_EQ(p.predicted, p.zero_t_label.name());
    }
    // The analytic method never fills the measured column.
    EXPECT_TRUE(p.measured.empty());
    EXPECT_TRUE(std::isnan(p.measured_agreement));
  }
}

TEST(LowTempScan, BandTracksBeta) {
  EXPECT_NEAR(low_temp_scan(100, 8).band, 0.02, 1e-12);
  EXPECT_NEAR(low_temp_scan(0.1, 8).band, 0.25, 1e-12);
  LowTempScanOptions opts;
  opts.band = 0.4;
  EXPECT_NEAR(low_temp_scan(3, 8, opts).band, 0.4, 1e-12);
}

TEST(LowTempScan, ExactMeasurementConfirmsDeepRegions) {
  LowTempScanOptions opts;
  opts.method = ScanMethod::exact;
  opts.torus_width = 3;
  opts.torus_height = 3;
  opts.band = 0.3;  // wide band keeps only well-separated region points
  const auto scan = low_temp_scan(3.0, 8, opts);

  int checked = 0, mismatched = 0;
  for (const auto& p : scan.points) {
    if (p.kind != ScanPointKind::bulk || !p.annotation.empty()) continue;
    ++checked;
    EXPECT_TRUE(std::isfinite(p.measured_agreement));
    if (p.measured != p.predicted) ++mismatched;
  }
  EXPECT_GE(checked, 40);
  // A 3x3 torus at beta 3 resolves every deep region; tolerate a stray
  // borderline point rather than pinning the sampler geometry.
  EXPECT_LE(mismatched, 2) << "of " << checked;
}

TEST(LowTempScan, McmcMethodIsDeterministicAndLabelsNonPeierlsNone) {
  LowTempScanOptions opts;
  opts.method = ScanMethod::mcmc;
  opts.torus_width = 3;
  opts.torus_height = 3;
  opts.band = 0.3;
  opts.chain.sweeps = 300;
  opts.chain.burn_in = 100;
  opts.chain.seed = 11;
  const auto a = low_temp_scan(3.0, 8, opts);
  const auto b = low_temp_scan(3.0, 8, opts);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].measured, b.points[k].measured);
    const auto& p = a.points[k];
    EXPECT_FALSE(p.measured.empty());
    if (p.zero_t_label.name() == "C|H") {
      // No finite ground set exists there, so nothing can dominate.
      EXPECT_EQ(p.measured, "none");
    }
  }
}
