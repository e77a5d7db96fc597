#pragma once

// Uniqueness and its failure, made quantitative.
//
// Disagreement percolation: the interaction estimate p_i is the largest
// total-variation distance between single-site conditionals over all pairs
// of neighbor rings. Since each conditional is a fill probability, p_i is
// just (max - min) over the 64 rings. The comparison threshold is the site
// percolation threshold of the triangular lattice (the adjacency of faces
// here), which is exactly 1/2; p_i < 1/2 certifies a unique Gibbs measure.
// The threshold is a cited exact constant, not something estimated here.
//
// Chessboard estimate on the E-C line (e_C = e_E = 0 <= e_H <= e_F): the
// probability that a given vertex is in state H or F is bounded by
// exp(-2 e_F beta) + 3 exp(-e_H beta). The second term is the conservative
// reading of the reflection argument (an all-H pattern costs at least e_H
// per block); the commonly printed variant with e_F in both exponents is
// reported alongside for comparison, and the two coincide when e_H = e_F.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/exact.hpp"
#include "hexmark/functionals.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"

namespace hexmark {

inline constexpr double kTriangularSiteThreshold = 0.5;

struct UniquenessCertificate {
  double temperature = 0;
  double p_i = 0;        // max over ring pairs of |p_fill difference|
  double p_c = kTriangularSiteThreshold;
  bool unique = false;   // p_i < p_c
  NeighborBoundary witness_high;  // ring with the largest fill probability
  NeighborBoundary witness_low;   // ring with the smallest
  double p_high = 0;
  double p_low = 0;
};

inline UniquenessCertificate disagreement_certificate(const VertexEnergies& e, Temperature T) {
  UniquenessCertificate cert;
  cert.temperature = T.t;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < NeighborBoundary::kCount; ++r) {
    const NeighborBoundary b{static_cast<std::uint8_t>(r)};
    const double p = single_site_conditional(b, e, T).p_fill;
    if (p > hi) {
      hi = p;
      cert.witness_high = b;
    }
    if (p < lo) {
      lo = p;
      cert.witness_low = b;
    }
  }
  cert.p_high = hi;
  cert.p_low = lo;
  cert.p_i = hi - lo;
  cert.unique = cert.p_i < cert.p_c;
  return cert;
}

namespace detail {
inline void require_ec_line(const VertexEnergies& e, const char* who) {
  const RegionLabel label = classify(e);
  RegionLabel ec;
  ec.minimal = {true, true, false, false};
  if (!(label == ec)) {
    throw ValidationError(std::string(who) + " needs a point on the E-C transition line "
                          "(minimal states exactly {E, C}), got label " + label.name());
  }
  if (!(e.f >= e.h)) {
    throw ValidationError(std::string(who) + " needs e_F >= e_H");
  }
}
}  // namespace detail

struct DecayReport {
  std::vector<double> betas;
  std::vector<double> measured;        // exact P(vertex in {H, F}) on the torus
  std::vector<double> bound;           // exp(-2 e_F beta) + 3 exp(-e_H beta)
  std::vector<double> literal_bound;   // exp(-2 e_F beta) + 3 exp(-e_F beta)
  std::vector<bool> respected;
  std::vector<bool> literal_respected;
  double fitted_rate = 0;              // least-squares slope of -log(measured) vs beta
};

inline DecayReport chessboard_decay_report(const VertexEnergies& e, const HexTorus& torus,
                                           std::span<const double> betas,
                                           const EnumerateOptions& opts = {}) {
  detail::require_ec_line(e, "chessboard_decay_report");
  if (betas.empty()) {
    throw ValidationError("decay report needs a non-empty beta grid");
  }
  DecayReport report;
  EnumerateOptions eopts = opts;
  eopts.marginals = false;
  for (double beta : betas) {
    const auto summary = enumerate(torus, e, Temperature::from_beta(beta), eopts);
    const double measured = summary.expectations.at("vertex_HF_prob");
    const double bound = std::exp(-2 * e.f * beta) + 3 * std::exp(-e.h * beta);
    const double literal = std::exp(-2 * e.f * beta) + 3 * std::exp(-e.f * beta);
    report.betas.push_back(beta);
    report.measured.push_back(measured);
    report.bound.push_back(bound);
    report.literal_bound.push_back(literal);
    report.respected.push_back(measured <= bound);
    report.literal_respected.push_back(measured <= literal);
  }
  // Fit -log p = rate * beta + const over points with positive measure.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < report.betas.size(); ++k) {
    if (report.measured[k] <= 0) continue;
    const double x = report.betas[k];
    const double y = -std::log(report.measured[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && sxx * n - sx * sx > 0) {
    report.fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

struct DensityReport {
  double delta = 0;
  std::vector<double> betas;
  std::vector<double> filled_density;
  std::vector<bool> inside;  // density in (delta, 1 - delta)
  bool all_inside = true;
};

// On the E-C line with e_F >= e_H no single phase dominates: the exact
// filled density stays bounded away from both 0 and 1 at every temperature.
inline DensityReport no_domination_check(const VertexEnergies& e, const HexTorus& torus,
                                         std::span<const double> betas, double delta = 0.05,
                                         const EnumerateOptions& opts = {}) {
  detail::require_ec_line(e, "no_domination_check");
  if (!(delta > 0) || !(delta < 0.5)) {
    throw ValidationError("delta must lie in (0, 0.5)");
  }
  DensityReport report;
  report.delta = delta;
  EnumerateOptions eopts = opts;
  eopts.marginals = false;
  for (double beta : betas) {
    const auto summary = enumerate(torus, e, Temperature::from_beta(beta), eopts);
    const double density = summary.expectations.at("filled_density");
    report.betas.push_back(beta);
    report.filled_density.push_back(density);
    const bool ok = density > delta && density < 1 - delta;
    report.inside.push_back(ok);
    report.all_inside = report.all_inside && ok;
  }
  return report;
}

struct ConvergenceReport {
  std::vector<double> betas;
  std::vector<double> tv_distance;
  bool event_based = false;  // true: |P(A) - Q(A)|; false: full total variation
};

// Total-variation distance between the finite-temperature measure and the
// uniform hard-hexagon distribution on the same domain. With an event
// predicate the distance is over the two-set algebra {A, not A}.
inline ConvergenceReport hard_hexagon_convergence(
    const HexDomain& domain, const VertexEnergies& e, std::span<const double> betas,
    const std::function<bool(std::uint64_t)>& event = nullptr,
    const EnumerateOptions& opts = {}) {
  detail::require_ec_line(e, "hard_hexagon_convergence");
  const EnumScheme scheme(domain);
  if (scheme.n_free() > opts.cap) {
    throw ResourceCapError("hard_hexagon_convergence over " + std::to_string(scheme.n_free()) +
                           " free faces exceeds the cap of " + std::to_string(opts.cap));
  }
  // Feasibility table; throws when the boundary itself is infeasible.
  const HardHexagonTable table = detail::hard_hexagon_impl(scheme, opts.cap);
  std::vector<char> feasible(scheme.config_count(), 0);
  for (std::uint64_t gray_mask : table.masks) {
    feasible[gray_mask] = 1;  // masks are free-face bit patterns
  }
  const double q = table.probability;

  ConvergenceReport report;
  report.event_based = static_cast<bool>(event);

  for (double beta : betas) {
    if (!(beta > 0) || !std::isfinite(beta)) {
      throw ValidationError("beta grid must be positive and finite");
    }
    // Pass 1: reference energy and partition function.
    double ref = std::numeric_limits<double>::infinity();
    double sum_w = 0;
    scheme.scan(0, scheme.config_count(),
                [&](std::uint64_t, const std::array<std::int64_t, 4>& counts) {
                  const double energy = static_cast<double>(counts[1]) * e.c +
                                        static_cast<double>(counts[2]) * e.h +
                                        static_cast<double>(counts[3]) * e.f;
                  if (energy < ref) {
                    if (sum_w > 0) sum_w *= std::exp(-beta * (ref - energy));
                    ref = energy;
                  }
                  sum_w += std::exp(-beta * (energy - ref));
                });
    // Pass 2: accumulate the distance.
    double tv = 0;
    double p_event = 0, q_event = 0;
    scheme.scan(0, scheme.config_count(),
                [&](std::uint64_t mask, const std::array<std::int64_t, 4>& counts) {
                  const double energy = static_cast<double>(counts[1]) * e.c +
                                        static_cast<double>(counts[2]) * e.h +
                                        static_cast<double>(counts[3]) * e.f;
                  const double p = std::exp(-beta * (energy - ref)) / sum_w;
                  const double qq = feasible[mask] ? q : 0.0;
                  if (event) {
                    if (event(mask)) {
                      p_event += p;
                      q_event += qq;
                    }
                  } else {
                    tv += std::abs(p - qq);
                  }
                });
    report.betas.push_back(beta);
    report.tv_distance.push_back(event ? std::abs(p_event - q_event) : tv / 2);
  }
  return report;
}

struct BoundaryIndependence {
  std::vector<std::int64_t> interior_sizes;
  std::vector<double> difference;  // |P(A | eta1) - P(A | eta2)| per domain
};

// Under a uniqueness certificate, conditional probabilities of a core event
// forget the boundary as the domain grows. Boundary values are read off two
// host-wide configurations; the domains must be nested and share the core
// on which the event lives.
inline BoundaryIndependence boundary_independence_check(
    const VertexEnergies& e, Temperature T, const HexTorus& host,
    const std::vector<std::vector<int>>& nested_interiors, const Configuration& eta1,
    const Configuration& eta2, const std::function<double(const ExactSummary&)>& event_prob,
    const EnumerateOptions& opts = {}) {
  const auto cert = disagreement_certificate(e, T);
  if (!cert.unique) {
    throw ValidationError("boundary independence needs a uniqueness certificate; p_i = " +
                          std::to_string(cert.p_i) + " is not below 1/2");
  }
  if (nested_interiors.size() < 2) {
    throw ValidationError("need at least two nested domains");
  }
  BoundaryIndependence out;
  for (const auto& interior : nested_interiors) {
    std::array<double, 2> prob{};
    const Configuration* etas[2] = {&eta1, &eta2};
    for (int k = 0; k < 2; ++k) {
      std::vector<char> in_interior(host.face_count(), 0);
      for (int f : interior) in_interior[f] = 1;
      std::map<int, bool> boundary;
      for (int f : interior) {
        for (int g : host.face_neighbors(f)) {
          if (!in_interior[g]) boundary[g] = etas[k]->filled(g);
        }
      }
      HexDomain domain(host, interior, boundary);
      prob[k] = event_prob(enumerate(domain, e, T, opts));
    }
    out.interior_sizes.push_back(static_cast<std::int64_t>(interior.size()));
    out.difference.push_back(std::abs(prob[0] - prob[1]));
  }
  return out;
}

}  // namespace hexmark
