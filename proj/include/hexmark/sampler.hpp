#pragma once

// Single-flip Markov chains. A step proposes one uniformly random free face
// and accepts with the Metropolis rule min(1, exp(-beta*dH)) or the Glauber
// rule 1/(1 + exp(beta*dH)); both satisfy detailed balance for exp(-H/T).
// One sweep is (number of free faces) proposals. Every step consumes exactly
// one face draw and one uniform, so two chains driven by the same seed see
// identical proposal streams; this is what the inversion-commutation
// property tests ride on.
//
// No cluster updates: the Euler term is not a ferromagnetic pair coupling,
// so Fortuin-Kasteleyn style moves do not apply.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/functionals.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"
#include "hexmark/rng.hpp"

namespace hexmark {

enum class Dynamics { metropolis, glauber };

inline const char* dynamics_name(Dynamics d) {
  return d == Dynamics::metropolis ? "metropolis" : "glauber";
}

// Acceptance probability of a move with energy change dh at inverse
// temperature beta.
inline double acceptance_probability(Dynamics d, double beta, double dh) {
  const double y = beta * dh;
  if (d == Dynamics::metropolis) {
    return y <= 0 ? 1.0 : std::exp(-y);
  }
  if (y >= 0) {
    const double t = std::exp(-y);
    return t / (1 + t);
  }
  return 1 / (1 + std::exp(y));
}

class Chain {
public:
  Chain(Configuration initial, const VertexEnergies& e, Temperature T, Dynamics dynamics,
        std::uint64_t seed, std::uint64_t stream = 0)
      : config_(std::move(initial)),
        energies_(e),
        beta_(T.beta()),
        dynamics_(dynamics),
        rng_(seed, stream),
        free_faces_(config_.free_faces()) {}

  const Configuration& config() const { return config_; }
  const VertexEnergies& energies() const { return energies_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t accepted() const { return accepted_; }

  // One proposal; always consumes one face draw and one uniform.
  void step() {
    const int f = free_faces_[rng_.next_below(free_faces_.size())];
    const double dh = delta_energy(config_, f, energies_);
    const double u = rng_.next_double();
    ++steps_;
    if (u < acceptance_probability(dynamics_, beta_, dh)) {
      config_.flip(f);
      ++accepted_;
    }
  }

  void sweep() {
    for (std::size_t k = 0; k < free_faces_.size(); ++k) step();
  }

private:
  Configuration config_;
  VertexEnergies energies_;
  double beta_;
  Dynamics dynamics_;
  SplitMix64 rng_;
  std::vector<int> free_faces_;
  std::int64_t steps_ = 0;
  std::int64_t accepted_ = 0;
};

struct ChainSettings {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::int64_t sweeps = 1000;   // total, including burn-in
  std::int64_t burn_in = 100;   // discarded leading sweeps
  std::int64_t thinning = 1;    // record every this many sweeps after burn-in
  Dynamics dynamics = Dynamics::metropolis;

  void validate() const {
    if (sweeps <= 0 || burn_in < 0 || sweeps <= burn_in) {
      throw ValidationError("chain needs sweeps > burn_in >= 0");
    }
    if (thinning < 1) {
      throw ValidationError("thinning must be at least 1");
    }
  }
};

// One recorded snapshot of chain observables.
struct Observables {
  std::int64_t sweep = 0;
  double energy_density = 0;             // per counted vertex
  std::array<double, 4> state_frac{};    // vertex-state fractions
  std::array<double, 3> sublattice_density{};  // NaN when undefined
  bool has_sublattices = false;
  std::vector<double> agreement;         // per reference, fraction of matching free faces
};

inline Observables measure(const Configuration& c, const VertexEnergies& e,
                           const std::vector<GroundConfiguration>& references,
                           std::int64_t sweep = 0) {
  Observables obs;
  obs.sweep = sweep;
  const double V = static_cast<double>(c.counted_vertex_count());
  obs.energy_density = energy(c, e) / V;
  const auto& n = c.state_counts();
  for (int s = 0; s < 4; ++s) obs.state_frac[s] = static_cast<double>(n[s]) / V;

  const HexTorus& lat = c.lattice();
  obs.has_sublattices = lat.has_sublattices();
  auto free = c.free_faces();
  if (obs.has_sublattices) {
    std::array<double, 3> filled{};
    std::array<double, 3> denom{};
    for (int f : free) {
      const int s = lat.sublattice(f);
      denom[s] += 1;
      if (c.filled(f)) filled[s] += 1;
    }
    for (int s = 0; s < 3; ++s) {
      obs.sublattice_density[s] = denom[s] > 0 ? filled[s] / denom[s]
                                               : std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    obs.sublattice_density = {std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN()};
  }

  obs.agreement.reserve(references.size());
  for (const auto& ref : references) {
    std::int64_t match = 0;
    for (int f : free) {
      if (c.filled(f) == ref.config.filled(f)) ++match;
    }
    obs.agreement.push_back(static_cast<double>(match) / static_cast<double>(free.size()));
  }
  return obs;
}

// Run a chain and record thinned observables after burn-in.
inline std::vector<Observables> run_chain(Configuration initial, const VertexEnergies& e,
                                          Temperature T, const ChainSettings& settings,
                                          const std::vector<GroundConfiguration>& references = {},
                                          Configuration* final_config = nullptr) {
  settings.validate();
  Chain chain(std::move(initial), e, T, settings.dynamics, settings.seed, settings.stream);
  std::vector<Observables> records;
  for (std::int64_t s = 1; s <= settings.sweeps; ++s) {
    chain.sweep();
    if (s > settings.burn_in && (s - settings.burn_in) % settings.thinning == 0) {
      records.push_back(measure(chain.config(), e, references, s));
    }
  }
  if (final_config != nullptr) *final_config = chain.config();
  return records;
}

struct DominationVerdict {
  bool dominated = false;
  std::string reference;     // winning reference name, empty when none
  std::string state_class;   // its class: "E", "C", "H" or "F"
  double max_agreement = 0;  // mean agreement of the winner
  double threshold = 0;
  std::vector<double> mean_agreement;  // per reference
};

// A phase dominates when the chain's mean agreement with one reference
// ground configuration stays above the threshold. Symmetry-related
// references (the three C or three H configurations) share a class in the
// verdict.
inline DominationVerdict domination_test(const std::vector<Observables>& series,
                                         const std::vector<GroundConfiguration>& references,
                                         double threshold = 0.9) {
  if (references.empty()) {
    throw ValidationError("domination test needs at least one reference configuration");
  }
  for (const auto& obs : series) {
    if (obs.agreement.size() != references.size()) {
      throw ValidationError("observable series does not carry one agreement per reference");
    }
  }
  DominationVerdict verdict;
  verdict.threshold = threshold;
  verdict.mean_agreement.assign(references.size(), 0.0);
  if (series.empty()) {
    throw ValidationError("domination test needs a non-empty observable series");
  }
  for (const auto& obs : series) {
    for (std::size_t r = 0; r < references.size(); ++r) {
      verdict.mean_agreement[r] += obs.agreement[r];
    }
  }
  std::size_t best = 0;
  for (std::size_t r = 0; r < references.size(); ++r) {
    verdict.mean_agreement[r] /= static_cast<double>(series.size());
    if (verdict.mean_agreement[r] > verdict.mean_agreement[best]) best = r;
  }
  verdict.max_agreement = verdict.mean_agreement[best];
  if (verdict.max_agreement >= threshold) {
    verdict.dominated = true;
    verdict.reference = references[best].name;
    verdict.state_class = std::string(1, vertex_state_name(references[best].state_class));
  }
  return verdict;
}

}  // namespace hexmark
