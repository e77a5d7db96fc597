#pragma once

// Phase-diagram machinery.
//
// Single-flip excitation spectra above a ground configuration are computed
// mechanically with delta_energy, then grouped into symmetry classes; no
// energy is hard-coded. On the two Peierls transition lines that admit a
// low-temperature expansion the leading coexistence offsets are
//
//   E-H line (e_C = 1-f, e_F = f, perturbing e_H):
//       h*(f, beta) = kappa * ( (1/3) exp(-6 f beta) - (1/3) exp(-6 (1-f) beta) )
//   E-F line (e_H = h, e_C = 1-h, perturbing e_F):
//       f*(h, beta) = kappa * ( exp(-6 h beta) - exp(-6 (1-h) beta) )
//
// balancing the dilute-excitation pressures of the two bordering ground
// states: each minimal excitation flips one face and pays 6 times the
// per-vertex energy step, with multiplicity 1 per face around an E or F
// ground and 1/3 (empty sublattice) + 2/3 (filled sublattices) around an H
// or C ground. The normalization kappa is not pinned here; signs and decay
// are, and those are what gets validated against the exact oracle.
//
// Scans sample the unit sphere of (e_C, e_H, e_F) with equal-area Fibonacci
// points, plus explicit arcs for the six transition lines and the four
// triple points (the lines have measure zero and would otherwise be missed).

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/exact.hpp"
#include "hexmark/functionals.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"
#include "hexmark/sampler.hpp"

namespace hexmark {

struct ExcitationClass {
  double delta = 0;               // energy cost of the flip
  std::int64_t faces = 0;         // faces in this class
  std::int64_t total_faces = 0;
  std::map<std::string, int> transitions;  // e.g. {"H->F": 6}
  std::string description;        // "6 H->F" or mixed

  double multiplicity() const {
    return static_cast<double>(faces) / static_cast<double>(total_faces);
  }
};

struct ExcitationSpectrum {
  std::vector<ExcitationClass> classes;  // ascending energy
};

// Spectrum of single-face flips above a ground configuration, grouped by
// (energy, vertex-replacement pattern). Fails when the configuration is not
// actually minimal for e (some vertex outside the minimal state set).
inline ExcitationSpectrum excitation_spectrum(const Configuration& ground,
                                              const VertexEnergies& e) {
  const RegionLabel label = classify(e);
  const HexTorus& lat = ground.lattice();
  for (int v = 0; v < lat.vertex_count(); ++v) {
    if (!ground.vertex_counted(v)) continue;
    if (!label.contains(ground.vertex_state(v))) {
      throw ValidationError("not a ground configuration: vertex " + std::to_string(v) +
                            " is in state " +
                            std::string(1, vertex_state_name(ground.vertex_state(v))) +
                            " which is not minimal for these energies");
    }
  }

  auto free = ground.free_faces();
  struct Key {
    std::int64_t energy_key;
    std::map<std::string, int> transitions;
    bool operator<(const Key& o) const {
      if (energy_key != o.energy_key) return energy_key < o.energy_key;
      return transitions < o.transitions;
    }
  };
  std::map<Key, std::pair<double, std::int64_t>> groups;

  Configuration work = ground;
  for (int f : free) {
    const double delta = delta_energy(work, f, e);
    const int d = work.filled(f) ? -1 : 1;
    std::map<std::string, int> transitions;
    for (int v : lat.face_vertices(f)) {
      const int k = work.vertex_fill(v);
      std::string t;
      t += vertex_state_name(static_cast<VertexState>(k));
      t += "->";
      t += vertex_state_name(static_cast<VertexState>(k + d));
      ++transitions[t];
    }
    // Group energies on a relative grid so numerically equal costs coincide.
    const std::int64_t energy_key = std::llround(delta * 1e9);
    auto& slot = groups[Key{energy_key, std::move(transitions)}];
    slot.first = delta;
    slot.second += 1;
  }

  ExcitationSpectrum spectrum;
  for (const auto& [key, value] : groups) {
    ExcitationClass cls;
    cls.delta = value.first;
    cls.faces = value.second;
    cls.total_faces = static_cast<std::int64_t>(free.size());
    cls.transitions = key.transitions;
    std::string desc;
    for (const auto& [name, count] : key.transitions) {
      if (!desc.empty()) desc += ", ";
      desc += std::to_string(count) + " " + name;
    }
    cls.description = desc;
    spectrum.classes.push_back(std::move(cls));
  }
  return spectrum;
}

struct CoexistenceOffset {
  std::string line;   // "E-H" or "E-F"
  double coordinate;  // position along the line (f or h)
  double beta;
  double kappa;
  double offset;      // predicted perpendicular displacement of coexistence
};

namespace detail {
inline void check_line_coordinate(double x, double beta, const char* name) {
  if (!(x > 0) || !(x < 1)) {
    throw ValidationError(std::string(name) +
                          " must lie strictly inside (0, 1); the expansion breaks down at "
                          "the triple points");
  }
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw ValidationError("beta must be positive and finite");
  }
}
}  // namespace detail

// Offset of the E-H coexistence line at (e_C, e_H, e_F) = (1-f, h, f):
// positive for f < 1/2 (the H side reaches past h = 0), zero at f = 1/2,
// magnitude decreasing in beta.
inline CoexistenceOffset slawny_offset_EH(double f, double beta, double kappa = 1.0) {
  detail::check_line_coordinate(f, beta, "f");
  const double offset =
      kappa * ((1.0 / 3.0) * std::exp(-6 * f * beta) - (1.0 / 3.0) * std::exp(-6 * (1 - f) * beta));
  return {"E-H", f, beta, kappa, offset};
}

// Offset of the E-F coexistence line at (e_C, e_H, e_F) = (1-h, h, f_pert):
// antisymmetric about h = 1/2.
inline CoexistenceOffset slawny_offset_EF(double h, double beta, double kappa = 1.0) {
  detail::check_line_coordinate(h, beta, "h");
  const double offset = kappa * (std::exp(-6 * h * beta) - std::exp(-6 * (1 - h) * beta));
  return {"E-F", h, beta, kappa, offset};
}

enum class ScanPointKind { bulk, line, corner };

inline const char* scan_point_kind_name(ScanPointKind k) {
  switch (k) {
    case ScanPointKind::bulk: return "bulk";
    case ScanPointKind::line: return "line";
    default: return "corner";
  }
}

struct ScanPoint {
  ScanPointKind kind = ScanPointKind::bulk;
  std::array<double, 3> e{};  // (e_C, e_H, e_F) on the unit sphere
  RegionLabel label;
};

struct ZeroTempScan {
  int resolution = 0;
  std::vector<ScanPoint> points;

  std::map<std::string, std::int64_t> label_histogram() const {
    std::map<std::string, std::int64_t> h;
    for (const auto& p : points) ++h[p.label.name()];
    return h;
  }
};

namespace detail {

inline std::array<double, 3> normalized(std::array<double, 3> v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Great-circle interpolation between two unit vectors, t in (0, 1).
inline std::array<double, 3> slerp(const std::array<double, 3>& a,
                                   const std::array<double, 3>& b, double t) {
  double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  dot = std::clamp(dot, -1.0, 1.0);
  const double omega = std::acos(dot);
  const double sa = std::sin((1 - t) * omega) / std::sin(omega);
  const double sb = std::sin(t * omega) / std::sin(omega);
  return {sa * a[0] + sb * b[0], sa * a[1] + sb * b[1], sa * a[2] + sb * b[2]};
}

// The four triple points of the diagram sphere.
inline const std::array<std::array<double, 3>, 4>& triple_points() {
  static const std::array<std::array<double, 3>, 4> pts = {{
      {0, 0, 1},                                        // E,C,H
      {0, 1, 0},                                        // E,C,F
      {1, 0, 0},                                        // E,H,F
      normalized({-1, -1, -1}),                         // C,H,F
  }};
  return pts;
}

// Endpoints (indices into triple_points) of the six transition lines.
inline const std::array<std::pair<int, int>, 6>& line_endpoints() {
  // E-C: ECH..ECF, E-H: ECH..EHF, E-F: ECF..EHF,
  // C-H: ECH..CHF, C-F: ECF..CHF, H-F: EHF..CHF.
  static const std::array<std::pair<int, int>, 6> ends = {{
      {0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3},
  }};
  return ends;
}

}  // namespace detail

// Sample the unit sphere of canonical energies and label every point.
// bulk: 2*resolution^2 Fibonacci points; line: resolution points per
// transition arc; corner: the four triple points.
inline ZeroTempScan zero_temp_scan(int resolution) {
  if (resolution < 8) {
    throw ValidationError("scan resolution must be at least 8");
  }
  ZeroTempScan scan;
  scan.resolution = resolution;

  const std::int64_t n_bulk = 2ll * resolution * resolution;
  const double golden = (std::sqrt(5.0) - 1) / 2;
  for (std::int64_t k = 0; k < n_bulk; ++k) {
    const double z = 1 - (2.0 * k + 1) / static_cast<double>(n_bulk);
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    const double phi = 2 * M_PI * std::fmod(golden * static_cast<double>(k), 1.0);
    std::array<double, 3> e{r * std::cos(phi), r * std::sin(phi), z};
    scan.points.push_back({ScanPointKind::bulk, e, classify({e[0], e[1], e[2]})});
  }
  for (const auto& [ia, ib] : detail::line_endpoints()) {
    const auto& a = detail::triple_points()[ia];
    const auto& b = detail::triple_points()[ib];
    for (int k = 0; k < resolution; ++k) {
      const double t = (k + 0.5) / resolution;
      auto e = detail::slerp(a, b, t);
      scan.points.push_back({ScanPointKind::line, e, classify({e[0], e[1], e[2]})});
    }
  }
  for (const auto& e : detail::triple_points()) {
    scan.points.push_back({ScanPointKind::corner, e, classify({e[0], e[1], e[2]})});
  }
  return scan;
}

enum class ScanMethod { slawny, mcmc, exact };

inline const char* scan_method_name(ScanMethod m) {
  switch (m) {
    case ScanMethod::slawny: return "slawny";
    case ScanMethod::mcmc: return "mcmc";
    default: return "exact";
  }
}

struct LowTempScanOptions {
  double band = -1;          // relative gap below which a point counts as near-line; <0 = auto
  double kappa = 1.0;
  ScanMethod method = ScanMethod::slawny;
  int torus_width = 6;       // measurement torus for mcmc/exact methods
  int torus_height = 6;
  ChainSettings chain;       // for mcmc
  double domination_threshold = 0.9;
  int exact_cap = 18;        // refuse exact measurement above this many faces
};

// Near-line points on the Peierls lines get a side prediction from the
// Slawny offset; near-line points on the non-Peierls lines sit in the
// Pirogov-Sinai-inapplicable band and stay unresolved. The band is a
// relative energy-gap threshold; by default it shrinks like 1/beta but
// never empties.
struct LowTempPoint {
  ScanPointKind kind = ScanPointKind::bulk;
  std::array<double, 3> e{};
  RegionLabel zero_t_label;
  std::string predicted;   // "E","C","H","F", "E|H" style coexistence, or "unresolved"/"none"
  std::string annotation;  // "", "slawny", "ps_inapplicable", "no_domination", "non_peierls_line", "corner"
  double offset = std::numeric_limits<double>::quiet_NaN();
  // Filled by mcmc/exact methods:
  std::string measured;    // winning reference class, or "none"
  double measured_agreement = std::numeric_limits<double>::quiet_NaN();
};

struct LowTempScan {
  double beta = 0;
  int resolution = 0;
  double band = 0;
  ScanMethod method = ScanMethod::slawny;
  std::vector<LowTempPoint> points;
};

namespace detail {

// The two lowest of {e_E, e_C, e_H, e_F} and the relative gap between them.
struct NearestPair {
  int first;   // state index of the minimum
  int second;  // state index of the runner-up
  double gap;  // (second - first) / scale
};

inline NearestPair nearest_pair(const std::array<double, 3>& e) {
  const std::array<double, 4> vals{0.0, e[0], e[1], e[2]};
  int lo = 0, second = -1;
  for (int s = 1; s < 4; ++s) {
    if (vals[s] < vals[lo]) lo = s;
  }
  for (int s = 0; s < 4; ++s) {
    if (s == lo) continue;
    if (second < 0 || vals[s] < vals[second]) second = s;
  }
  double scale = 0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  return {lo, second, (vals[second] - vals[lo]) / (scale > 0 ? scale : 1.0)};
}

inline std::string state_letter(int s) {
  return std::string(1, vertex_state_name(static_cast<VertexState>(s)));
}

}  // namespace detail

inline LowTempScan low_temp_scan(double beta, int resolution,
                                 const LowTempScanOptions& opts = {}) {
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw ValidationError("beta must be positive and finite");
  }
  ZeroTempScan zero = zero_temp_scan(resolution);

  LowTempScan scan;
  scan.beta = beta;
  scan.resolution = resolution;
  scan.method = opts.method;
  scan.band = opts.band >= 0 ? opts.band
                             : std::min(0.25, std::max(0.02, 1.0 / (6.0 * beta)));

  for (const auto& zp : zero.points) {
    LowTempPoint p;
    p.kind = zp.kind;
    p.e = zp.e;
    p.zero_t_label = zp.label;

    const auto pair = detail::nearest_pair(zp.e);
    const bool near_line = pair.gap <= scan.band;
    const int a = std::min(pair.first, pair.second);
    const int b = std::max(pair.first, pair.second);
    const VertexEnergies e{zp.e[0], zp.e[1], zp.e[2]};

    if (zp.kind == ScanPointKind::corner || (near_line && zp.label.count() > 2)) {
      p.predicted = "unresolved";
      p.annotation = "corner";
    } else if (!near_line) {
      p.predicted = detail::state_letter(pair.first);
    } else if ((a == 0 && b == 2) || (a == 0 && b == 3) || (a == 1 && b == 3)) {
      // Peierls pairs E-H, E-F, C-F: decide the side with the Slawny offset.
      p.annotation = "slawny";
      if (a == 0 && b == 2) {  // E-H
        const double s = e.c + e.f;
        const double f = e.f / s;
        const double h = e.h / s;
        const auto off = slawny_offset_EH(f, beta * s, opts.kappa);
        p.offset = off.offset;
        p.predicted = h > off.offset ? "E" : (h < off.offset ? "H" : "E|H");
      } else if (a == 0 && b == 3) {  // E-F
        const double s = e.c + e.h;
        const double h = e.h / s;
        const double fp = e.f / s;
        const auto off = slawny_offset_EF(h, beta * s, opts.kappa);
        p.offset = off.offset;
        p.predicted = fp > off.offset ? "E" : (fp < off.offset ? "F" : "E|F");
      } else {  // C-F mirrors E-H under inversion (E<->F, C<->H).
        const VertexEnergies dual = e.swapped();
        const double s = dual.c + dual.f;
        const double f = dual.f / s;
        const double h = dual.h / s;
        const auto off = slawny_offset_EH(f, beta * s, opts.kappa);
        p.offset = off.offset;
        p.predicted = h > off.offset ? "F" : (h < off.offset ? "C" : "C|F");
      }
    } else {
      // Non-Peierls pairs E-C, C-H, H-F.
      const bool on_line = zp.label.count() == 2;
      if (on_line) {
        if (a == 0 && b == 1 && e.f >= e.h) {
          p.predicted = "none";
          p.annotation = "no_domination";
        } else if (a == 2 && b == 3 && e.c >= 0) {
          // H-F is the inversion image of E-C; the hypothesis mirrors to e_C >= e_E.
          p.predicted = "none";
          p.annotation = "no_domination";
        } else {
          p.predicted = "unresolved";
          p.annotation = "non_peierls_line";
        }
      } else {
        p.predicted = "unresolved";
        p.annotation = "ps_inapplicable";
      }
    }

    scan.points.push_back(std::move(p));
  }

  if (opts.method != ScanMethod::slawny) {
    const HexTorus torus(opts.torus_width, opts.torus_height);
    std::uint64_t stream = 0;
    for (auto& p : scan.points) {
      const VertexEnergies e{p.e[0], p.e[1], p.e[2]};
      const Temperature T(1.0 / beta);
      std::vector<GroundConfiguration> refs;
      try {
        refs = ground_configurations(classify(e), torus);
      } catch (const ValidationError&) {
        p.measured = "none";
        ++stream;
        continue;
      }
      if (opts.method == ScanMethod::mcmc) {
        ChainSettings settings = opts.chain;
        settings.stream = stream;
        auto series = run_chain(Configuration(torus), e, T, settings, refs);
        auto verdict = domination_test(series, refs, opts.domination_threshold);
        p.measured = verdict.dominated ? verdict.state_class : "none";
        p.measured_agreement = verdict.max_agreement;
      } else {
        const EnumScheme scheme(torus);
        if (scheme.n_free() > opts.exact_cap) {
          throw ResourceCapError("exact phase measurement over " +
                                 std::to_string(scheme.n_free()) +
                                 " free faces exceeds the cap of " +
                                 std::to_string(opts.exact_cap));
        }
        // Exact Gibbs expectation of the domination statistic: the agreement
        // of each configuration with its best-matching reference. Per-face
        // marginals would average over symmetry-related C or H phases and
        // report none deep inside an ordered region.
        std::vector<std::uint64_t> ref_masks;
        ref_masks.reserve(refs.size());
        for (const auto& ref : refs) ref_masks.push_back(ref.config.free_bits());
        const int n = scheme.n_free();
        const auto energy_of = [&](const std::array<std::int64_t, 4>& counts) {
          return static_cast<double>(counts[1]) * e.c + static_cast<double>(counts[2]) * e.h +
                 static_cast<double>(counts[3]) * e.f;
        };
        double lowest = std::numeric_limits<double>::infinity();
        scheme.scan(0, scheme.config_count(),
                    [&](std::uint64_t, const std::array<std::int64_t, 4>& counts) {
                      lowest = std::min(lowest, energy_of(counts));
                    });
        double z = 0;
        double weighted = 0;
        std::vector<double> per_ref(refs.size(), 0.0);
        scheme.scan(0, scheme.config_count(),
                    [&](std::uint64_t mask, const std::array<std::int64_t, 4>& counts) {
                      const double w = std::exp(-beta * (energy_of(counts) - lowest));
                      int best_match = 0;
                      for (std::size_t r = 0; r < ref_masks.size(); ++r) {
                        const int match = n - std::popcount(mask ^ ref_masks[r]);
                        best_match = std::max(best_match, match);
                        per_ref[r] += w * static_cast<double>(match);
                      }
                      z += w;
                      weighted += w * static_cast<double>(best_match);
                    });
        const double best = weighted / (z * n);
        std::size_t top = 0;
        for (std::size_t r = 1; r < per_ref.size(); ++r) {
          if (per_ref[r] > per_ref[top]) top = r;
        }
        p.measured = best >= opts.domination_threshold
                         ? std::string(1, vertex_state_name(refs[top].state_class))
                         : "none";
        p.measured_agreement = best;
      }
      ++stream;
    }
  }

  return scan;
}

}  // namespace hexmark
