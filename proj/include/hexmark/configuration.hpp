#pragma once

// Binary assignment on the faces of a hexagonal torus, or on the interior of
// a hosted domain with a fixed boundary ring. Keeps an incremental cache of
// vertex-state counts (n_E, n_C, n_H, n_F) over counted vertices; the cache
// is what makes energy() O(1) and delta_energy() O(1) per proposal.
//
// Domain configurations leave faces outside interior + ring undetermined;
// reading a vertex whose three faces are not all determined is an error.

#include <array>
#include <cstdint>
#include <vector>

#include "hexmark/errors.hpp"
#include "hexmark/lattice.hpp"

namespace hexmark {

class Configuration {
public:
  explicit Configuration(const HexTorus& lattice, bool fill = false)
      : lattice_(lattice), domain_(nullptr) {
    init_torus(std::vector<bool>(lattice.face_count(), fill));
  }

  Configuration(const HexTorus& lattice, const std::vector<bool>& filled)
      : lattice_(lattice), domain_(nullptr) {
    if (static_cast<int>(filled.size()) != lattice.face_count()) {
      throw ValidationError("configuration needs one value per face");
    }
    init_torus(filled);
  }

  // Interior defaults to empty; boundary ring values come from the domain.
  // The domain must outlive the configuration.
  explicit Configuration(const HexDomain& domain)
      : Configuration(domain, std::vector<bool>(domain.interior().size(), false)) {}

  Configuration(const HexDomain& domain, const std::vector<bool>& interior_filled)
      : lattice_(domain.host()), domain_(&domain) {
    if (interior_filled.size() != domain.interior().size()) {
      throw ValidationError("configuration needs one value per interior face");
    }
    const int F = lattice_.face_count();
    filled_.assign(F, 0);
    determined_.assign(F, 0);
    for (int f : domain.boundary_ring()) {
      filled_[f] = domain.boundary_value(f) ? 1 : 0;
      determined_[f] = 1;
    }
    const auto& interior = domain.interior();
    for (std::size_t k = 0; k < interior.size(); ++k) {
      filled_[interior[k]] = interior_filled[k] ? 1 : 0;
      determined_[interior[k]] = 1;
    }
    counted_mask_.assign(lattice_.vertex_count(), 0);
    for (int v : domain.counted_vertices()) counted_mask_[v] = 1;
    init_caches();
  }

  const HexTorus& lattice() const { return lattice_; }
  const HexDomain* domain() const { return domain_; }

  bool determined(int f) const { return determined_[f] != 0; }

  bool filled(int f) const {
    if (!determined_[f]) {
      throw ValidationError("face " + std::to_string(f) + " is undetermined");
    }
    return filled_[f] != 0;
  }

  bool free_face(int f) const {
    return domain_ ? domain_->is_interior(f) : (f >= 0 && f < lattice_.face_count());
  }

  // Faces that may be flipped: all faces on a torus, the interior on a domain.
  std::vector<int> free_faces() const {
    if (domain_) return domain_->interior();
    std::vector<int> all(lattice_.face_count());
    for (int f = 0; f < lattice_.face_count(); ++f) all[f] = f;
    return all;
  }

  void set(int f, bool value) {
    if (f < 0 || f >= lattice_.face_count() || !free_face(f)) {
      throw ValidationError("face " + std::to_string(f) + " is not flippable (boundary or exterior)");
    }
    if ((filled_[f] != 0) == value) return;
    flip_unchecked(f);
  }

  void flip(int f) {
    if (f < 0 || f >= lattice_.face_count() || !free_face(f)) {
      throw ValidationError("face " + std::to_string(f) + " is not flippable (boundary or exterior)");
    }
    flip_unchecked(f);
  }

  // Filled faces among determined ones.
  std::int64_t filled_count() const { return filled_count_; }
  // Filled faces among free ones; this is what "filled density" refers to.
  std::int64_t free_filled_count() const { return free_filled_count_; }
  std::int64_t free_face_count() const {
    return domain_ ? static_cast<std::int64_t>(domain_->interior().size())
                   : lattice_.face_count();
  }
  std::int64_t counted_vertex_count() const {
    return domain_ ? static_cast<std::int64_t>(domain_->counted_vertices().size())
                   : lattice_.vertex_count();
  }

  // Counts of counted vertices by state, indexed by VertexState.
  const std::array<std::int64_t, 4>& state_counts() const { return counts_; }

  int vertex_fill(int v) const {
    if (vfill_[v] == kUndetermined) {
      throw ValidationError("vertex " + std::to_string(v) +
                            " touches an undetermined face");
    }
    return vfill_[v];
  }

  VertexState vertex_state(int v) const {
    return static_cast<VertexState>(vertex_fill(v));
  }

  bool vertex_counted(int v) const {
    return domain_ ? counted_mask_[v] != 0 : true;
  }

  // Complement of a torus configuration. State counts reverse:
  // (n_E, n_C, n_H, n_F) -> (n_F, n_H, n_C, n_E).
  Configuration complemented() const {
    if (domain_) {
      throw ValidationError("complement is defined for torus configurations");
    }
    std::vector<bool> flipped(lattice_.face_count());
    for (int f = 0; f < lattice_.face_count(); ++f) flipped[f] = filled_[f] == 0;
    return Configuration(lattice_, flipped);
  }

  // Free-face values packed into a word, bit k = free face k; needs <= 64 free faces.
  std::uint64_t free_bits() const {
    auto free = free_faces();
    if (free.size() > 64) {
      throw ValidationError("free_bits needs at most 64 free faces");
    }
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < free.size(); ++k) {
      if (filled_[free[k]]) bits |= std::uint64_t{1} << k;
    }
    return bits;
  }

  bool operator==(const Configuration& o) const {
    return lattice_ == o.lattice_ && filled_ == o.filled_ && determined_ == o.determined_;
  }
  bool operator!=(const Configuration& o) const { return !(*this == o); }

private:
  static constexpr std::uint8_t kUndetermined = 255;

  void init_torus(const std::vector<bool>& filled) {
    filled_.assign(lattice_.face_count(), 0);
    for (int f = 0; f < lattice_.face_count(); ++f) filled_[f] = filled[f] ? 1 : 0;
    determined_.assign(lattice_.face_count(), 1);
    init_caches();
  }

  void init_caches() {
    counts_sums();
    filled_count_ = 0;
    free_filled_count_ = 0;
    for (int f = 0; f < lattice_.face_count(); ++f) {
      if (determined_[f] && filled_[f]) {
        ++filled_count_;
        if (free_face(f)) ++free_filled_count_;
      }
    }
  }

  void counts_sums() {
    vfill_.assign(lattice_.vertex_count(), kUndetermined);
    counts_ = {0, 0, 0, 0};
    for (int v = 0; v < lattice_.vertex_count(); ++v) {
      auto faces = lattice_.vertex_faces(v);
      bool det = determined_[faces[0]] && determined_[faces[1]] && determined_[faces[2]];
      if (!det) continue;
      std::uint8_t k = 0;
      for (int f : faces) k += filled_[f];
      vfill_[v] = k;
      if (vertex_counted(v)) ++counts_[k];
    }
  }

  void flip_unchecked(int f) {
    const bool now_filled = filled_[f] == 0;
    const std::int8_t d = now_filled ? 1 : -1;
    filled_[f] = now_filled ? 1 : 0;
    filled_count_ += d;
    free_filled_count_ += d;
    for (int v : lattice_.face_vertices(f)) {
      // Every vertex of a free face is counted and determined.
      --counts_[vfill_[v]];
      vfill_[v] = static_cast<std::uint8_t>(vfill_[v] + d);
      ++counts_[vfill_[v]];
    }
  }

  HexTorus lattice_;
  const HexDomain* domain_;
  std::vector<std::uint8_t> filled_;
  std::vector<std::uint8_t> determined_;
  std::vector<std::uint8_t> counted_mask_;  // empty on torus
  std::vector<std::uint8_t> vfill_;
  std::array<std::int64_t, 4> counts_{};
  std::int64_t filled_count_ = 0;
  std::int64_t free_filled_count_ = 0;
};

}  // namespace hexmark
