#pragma once

// Exact summation over all configurations of a small system (torus, or
// domain interior with fixed ring). Configurations are visited in Gray-code
// order so each step flips one face and updates the vertex-state census in
// O(6). Weights accumulate in the log domain against a running minimum
// energy, partial sums are formed per chunk and merged in fixed chunk order,
// so results are bit-identical for any worker count.
//
// Also here: the exact single-site conditional given a 6-neighbor ring (the
// object behind the disagreement-percolation certificate) and the uniform
// hard-hexagon distribution (no vertex in state H or F).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/functionals.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"
#include "hexmark/parallel.hpp"

namespace hexmark {

// Precomputed tables for Gray-code enumeration over the free faces of a
// torus or domain. scan() walks a subrange of configuration indices and
// hands the visitor the current bit mask plus vertex-state counts.
class EnumScheme {
public:
  explicit EnumScheme(const HexTorus& torus) : base_(torus) { build(); }

  explicit EnumScheme(const HexDomain& domain) : base_(domain) { build(); }

  int n_free() const { return static_cast<int>(free_faces_.size()); }
  std::uint64_t config_count() const { return std::uint64_t{1} << n_free(); }
  const std::vector<int>& free_faces() const { return free_faces_; }
  std::int64_t counted_vertex_count() const { return base_.counted_vertex_count(); }
  const Configuration& base_configuration() const { return base_; }
  // Sublattice of free face k, or -1 when the host has no sublattices.
  int sublattice_of(int k) const { return sublattices_[k]; }

  template <class Visitor>
  void scan(std::uint64_t begin, std::uint64_t end, Visitor&& visit) const {
    std::vector<std::uint8_t> vf = base_vfill_;
    std::array<std::int64_t, 4> counts = base_counts_;
    std::uint64_t mask = 0;

    auto flip = [&](int b) {
      const int d = ((mask >> b) & 1) ? -1 : 1;
      mask ^= std::uint64_t{1} << b;
      for (int s : slots_[b]) {
        --counts[vf[s]];
        vf[s] = static_cast<std::uint8_t>(vf[s] + d);
        ++counts[vf[s]];
      }
    };

    std::uint64_t gray = begin ^ (begin >> 1);
    while (gray != 0) {
      flip(std::countr_zero(gray));
      gray &= gray - 1;
    }
    visit(mask, counts);
    for (std::uint64_t idx = begin + 1; idx < end; ++idx) {
      flip(std::countr_zero(idx));
      visit(mask, counts);
    }
  }

private:
  void build() {
    free_faces_ = base_.free_faces();
    if (free_faces_.size() > 64) {
      throw ValidationError("exact enumeration supports at most 64 free faces");
    }
    const HexTorus& lat = base_.lattice();

    std::vector<int> dense(lat.vertex_count(), -1);
    int n_dense = 0;
    for (int v = 0; v < lat.vertex_count(); ++v) {
      if (base_.vertex_counted(v)) dense[v] = n_dense++;
    }
    base_vfill_.assign(n_dense, 0);
    for (int v = 0; v < lat.vertex_count(); ++v) {
      if (dense[v] >= 0) base_vfill_[dense[v]] = static_cast<std::uint8_t>(base_.vertex_fill(v));
    }
    base_counts_ = base_.state_counts();

    slots_.resize(free_faces_.size());
    sublattices_.resize(free_faces_.size());
    for (std::size_t k = 0; k < free_faces_.size(); ++k) {
      auto verts = lat.face_vertices(free_faces_[k]);
      for (int q = 0; q < 6; ++q) slots_[k][q] = dense[verts[q]];
      sublattices_[k] = lat.has_sublattices() ? lat.sublattice(free_faces_[k]) : -1;
    }
  }

  Configuration base_;
  std::vector<int> free_faces_;
  std::vector<std::array<int, 6>> slots_;
  std::vector<int> sublattices_;
  std::vector<std::uint8_t> base_vfill_;
  std::array<std::int64_t, 4> base_counts_{};
};

struct EnumerateOptions {
  int cap = 30;        // refuse systems with more free faces than this
  int threads = 0;     // 0 = resolve from environment
  bool marginals = true;
  int top_configs = 0; // keep this many lowest-energy configurations
};

struct TopConfig {
  std::uint64_t mask = 0;  // bits over free faces, in free-face order
  double energy = 0;
  double probability = 0;
};

struct ExactSummary {
  double temperature = 0;
  double beta = 0;
  double log_Z = 0;
  double min_energy = 0;
  std::int64_t n_free_faces = 0;
  std::int64_t n_counted_vertices = 0;
  std::map<std::string, double> expectations;
  std::vector<int> free_face_ids;
  std::vector<double> marginals;  // empty when disabled
  std::vector<TopConfig> top;     // ascending energy
};

namespace detail {

struct ExactAccum {
  double ref = std::numeric_limits<double>::infinity();  // running minimum energy
  double sum_w = 0;
  double sum_wh = 0;
  double sum_wfill = 0;
  std::array<double, 4> sum_wstate{};
  std::array<double, 3> sum_wsub{};
  std::vector<double> marg;
  std::vector<std::pair<double, std::uint64_t>> top;  // sorted ascending

  void rescale(double factor) {
    sum_w *= factor;
    sum_wh *= factor;
    sum_wfill *= factor;
    for (auto& s : sum_wstate) s *= factor;
    for (auto& s : sum_wsub) s *= factor;
    for (auto& m : marg) m *= factor;
  }
};

inline void merge_top(std::vector<std::pair<double, std::uint64_t>>& into,
                      std::vector<std::pair<double, std::uint64_t>>&& from,
                      std::size_t k) {
  std::vector<std::pair<double, std::uint64_t>> merged;
  merged.reserve(std::min(k, into.size() + from.size()));
  std::merge(into.begin(), into.end(), from.begin(), from.end(),
             std::back_inserter(merged));
  if (merged.size() > k) merged.resize(k);
  into = std::move(merged);
}

inline ExactSummary enumerate_impl(const EnumScheme& scheme, const VertexEnergies& e,
                                   Temperature T, const EnumerateOptions& opts) {
  if (scheme.n_free() > opts.cap) {
    throw ResourceCapError("enumeration over " + std::to_string(scheme.n_free()) +
                           " free faces exceeds the cap of " + std::to_string(opts.cap));
  }
  const double beta = T.beta();
  const int n = scheme.n_free();
  const std::uint64_t total = scheme.config_count();
  const bool want_bits = opts.marginals || scheme.sublattice_of(0) >= 0;
  const std::size_t top_k = static_cast<std::size_t>(std::max(0, opts.top_configs));

  auto chunk_fn = [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    ExactAccum acc;
    if (opts.marginals) acc.marg.assign(n, 0.0);
    scheme.scan(begin, end, [&](std::uint64_t mask, const std::array<std::int64_t, 4>& counts) {
      const double energy = static_cast<double>(counts[1]) * e.c +
                            static_cast<double>(counts[2]) * e.h +
                            static_cast<double>(counts[3]) * e.f;
      if (energy < acc.ref) {
        if (acc.sum_w > 0) acc.rescale(std::exp(-beta * (acc.ref - energy)));
        acc.ref = energy;
      }
      const double w = std::exp(-beta * (energy - acc.ref));
      acc.sum_w += w;
      acc.sum_wh += w * energy;
      acc.sum_wfill += w * static_cast<double>(std::popcount(mask));
      for (int s = 0; s < 4; ++s) acc.sum_wstate[s] += w * static_cast<double>(counts[s]);
      if (want_bits) {
        std::uint64_t bits = mask;
        while (bits != 0) {
          const int b = std::countr_zero(bits);
          bits &= bits - 1;
          if (opts.marginals) acc.marg[b] += w;
          const int sub = scheme.sublattice_of(b);
          if (sub >= 0) acc.sum_wsub[sub] += w;
        }
      }
      if (top_k > 0) {
        if (acc.top.size() < top_k || energy < acc.top.back().first ||
            (energy == acc.top.back().first && mask < acc.top.back().second)) {
          auto entry = std::make_pair(energy, mask);
          auto pos = std::lower_bound(acc.top.begin(), acc.top.end(), entry);
          acc.top.insert(pos, entry);
          if (acc.top.size() > top_k) acc.top.pop_back();
        }
      }
    });
    return acc;
  };

  auto merge_fn = [&](ExactAccum& into, ExactAccum&& part) {
    if (part.sum_w == 0 && part.top.empty()) return;
    if (into.sum_w == 0 && into.top.empty()) {
      into = std::move(part);
      return;
    }
    const double ref = std::min(into.ref, part.ref);
    if (into.ref > ref) into.rescale(std::exp(-beta * (into.ref - ref)));
    if (part.ref > ref) part.rescale(std::exp(-beta * (part.ref - ref)));
    into.ref = ref;
    into.sum_w += part.sum_w;
    into.sum_wh += part.sum_wh;
    into.sum_wfill += part.sum_wfill;
    for (int s = 0; s < 4; ++s) into.sum_wstate[s] += part.sum_wstate[s];
    for (int s = 0; s < 3; ++s) into.sum_wsub[s] += part.sum_wsub[s];
    if (opts.marginals) {
      for (int b = 0; b < n; ++b) into.marg[b] += part.marg[b];
    }
    merge_top(into.top, std::move(part.top), top_k);
  };

  const std::uint64_t per_chunk = std::uint64_t{1} << 14;
  ExactAccum acc =
      chunked_reduce<ExactAccum>(total, per_chunk, opts.threads, chunk_fn, merge_fn);

  ExactSummary out;
  out.temperature = T.t;
  out.beta = beta;
  out.min_energy = acc.ref;
  out.log_Z = -beta * acc.ref + std::log(acc.sum_w);
  out.n_free_faces = n;
  out.n_counted_vertices = scheme.counted_vertex_count();
  out.free_face_ids = scheme.free_faces();

  const double V = static_cast<double>(out.n_counted_vertices);
  auto& ex = out.expectations;
  ex["energy"] = acc.sum_wh / acc.sum_w;
  ex["energy_density"] = ex["energy"] / V;
  ex["filled_density"] = acc.sum_wfill / acc.sum_w / static_cast<double>(n);
  const char* frac_names[4] = {"frac_E", "frac_C", "frac_H", "frac_F"};
  for (int s = 0; s < 4; ++s) ex[frac_names[s]] = acc.sum_wstate[s] / acc.sum_w / V;
  ex["vertex_HF_prob"] = ex["frac_H"] + ex["frac_F"];
  if (scheme.sublattice_of(0) >= 0) {
    std::array<double, 3> denom{};
    for (int k = 0; k < n; ++k) denom[scheme.sublattice_of(k)] += 1;
    for (int s = 0; s < 3; ++s) {
      if (denom[s] > 0) {
        ex["subl_density_" + std::to_string(s)] = acc.sum_wsub[s] / acc.sum_w / denom[s];
      }
    }
  }
  if (opts.marginals) {
    out.marginals.resize(n);
    for (int b = 0; b < n; ++b) out.marginals[b] = acc.marg[b] / acc.sum_w;
  }
  out.top.reserve(acc.top.size());
  for (const auto& [energy, mask] : acc.top) {
    out.top.push_back({mask, energy, std::exp(-beta * (energy - acc.ref)) / acc.sum_w});
  }
  return out;
}

}  // namespace detail

inline ExactSummary enumerate(const HexTorus& torus, const VertexEnergies& e, Temperature T,
                              const EnumerateOptions& opts = {}) {
  return detail::enumerate_impl(EnumScheme(torus), e, T, opts);
}

inline ExactSummary enumerate(const HexDomain& domain, const VertexEnergies& e, Temperature T,
                              const EnumerateOptions& opts = {}) {
  return detail::enumerate_impl(EnumScheme(domain), e, T, opts);
}

// The 6-bit ring of neighbor values around one face, bit k = neighbor k in
// the cyclic order of HexTorus::face_neighbors. Vertex k of the center face
// sees neighbors k and k+1 (mod 6), which is all the conditional needs.
struct NeighborBoundary {
  std::uint8_t ring = 0;

  static constexpr int kCount = 64;

  bool neighbor(int k) const { return ((ring >> k) & 1) != 0; }
  int fill_count() const { return std::popcount(static_cast<unsigned>(ring & 63)); }

  static std::uint8_t rotate(std::uint8_t r, int k) {
    const unsigned v = r & 63u;
    return static_cast<std::uint8_t>(((v << k) | (v >> (6 - k))) & 63u);
  }
  static std::uint8_t reflect(std::uint8_t r) {
    std::uint8_t out = 0;
    for (int k = 0; k < 6; ++k) {
      if ((r >> k) & 1) out |= static_cast<std::uint8_t>(1u << (5 - k));
    }
    return out;
  }

  // Least image under the 12 dihedral symmetries of the ring.
  std::uint8_t canonical() const {
    std::uint8_t best = 63;
    for (int k = 0; k < 6; ++k) {
      best = std::min(best, rotate(ring, k));
      best = std::min(best, rotate(reflect(ring), k));
    }
    return best;
  }

  // Index of the dihedral equivalence class (13 classes for 6-bit rings).
  int dihedral_class() const {
    const auto& reps = class_representatives();
    return static_cast<int>(std::lower_bound(reps.begin(), reps.end(), canonical()) -
                            reps.begin());
  }

  static const std::vector<std::uint8_t>& class_representatives() {
    static const std::vector<std::uint8_t> reps = [] {
      std::vector<std::uint8_t> out;
      for (int r = 0; r < kCount; ++r) {
        NeighborBoundary b{static_cast<std::uint8_t>(r)};
        if (b.canonical() == r) out.push_back(static_cast<std::uint8_t>(r));
      }
      return out;
    }();
    return reps;
  }
};

struct ConditionalWeights {
  double energy_empty = 0;
  double energy_fill = 0;
  double w_empty = 0;  // exp(-beta * energy_empty), may underflow for huge beta
  double w_fill = 0;
  double p_fill = 0;   // computed stably, independent of the raw weights
};

// Exact conditional of one face given its neighbor ring: the center face has
// six vertices, vertex k in state (center + ring_k + ring_{k+1}).
inline ConditionalWeights single_site_conditional(NeighborBoundary b, const VertexEnergies& e,
                                                  Temperature T) {
  ConditionalWeights out;
  for (int k = 0; k < 6; ++k) {
    const int pair = (b.neighbor(k) ? 1 : 0) + (b.neighbor((k + 1) % 6) ? 1 : 0);
    out.energy_empty += e.of_fill(pair);
    out.energy_fill += e.of_fill(pair + 1);
  }
  const double beta = T.beta();
  out.w_empty = std::exp(-beta * out.energy_empty);
  out.w_fill = std::exp(-beta * out.energy_fill);
  const double y = beta * (out.energy_fill - out.energy_empty);
  if (y >= 0) {
    const double t = std::exp(-y);
    out.p_fill = t / (1 + t);
  } else {
    out.p_fill = 1 / (1 + std::exp(y));
  }
  return out;
}

// Total-variation distance of the two single-site conditionals.
inline double conditional_tv_distance(NeighborBoundary a, NeighborBoundary b,
                                      const VertexEnergies& e, Temperature T) {
  return std::abs(single_site_conditional(a, e, T).p_fill -
                  single_site_conditional(b, e, T).p_fill);
}

// Uniform measure over configurations with no counted vertex in state H or F
// (equivalently: no two adjacent filled faces seen by a counted vertex).
struct HardHexagonTable {
  std::vector<std::uint64_t> masks;  // ascending, bits over free faces
  std::vector<int> free_face_ids;
  double probability = 0;  // uniform weight of each listed configuration
};

namespace detail {

inline HardHexagonTable hard_hexagon_impl(const EnumScheme& scheme, int cap) {
  if (scheme.n_free() > cap) {
    throw ResourceCapError("hard-hexagon table over " + std::to_string(scheme.n_free()) +
                           " free faces exceeds the cap of " + std::to_string(cap));
  }
  HardHexagonTable out;
  out.free_face_ids = scheme.free_faces();
  scheme.scan(0, scheme.config_count(),
              [&](std::uint64_t mask, const std::array<std::int64_t, 4>& counts) {
                if (counts[2] == 0 && counts[3] == 0) out.masks.push_back(mask);
              });
  if (out.masks.empty()) {
    throw ValidationError("boundary is hard-hexagon infeasible: it already creates an H/F "
                          "vertex among counted vertices");
  }
  std::sort(out.masks.begin(), out.masks.end());
  out.probability = 1.0 / static_cast<double>(out.masks.size());
  return out;
}

}  // namespace detail

inline HardHexagonTable hard_hexagon_distribution(const HexTorus& torus, int cap = 30) {
  return detail::hard_hexagon_impl(EnumScheme(torus), cap);
}

inline HardHexagonTable hard_hexagon_distribution(const HexDomain& domain, int cap = 30) {
  return detail::hard_hexagon_impl(EnumScheme(domain), cap);
}

}  // namespace hexmark
