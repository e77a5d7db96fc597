#pragma once

// The three isometry-invariant, strictly local valuations of a filled face
// set: area, perimeter and Euler characteristic, computed two independent
// ways. The direct route counts cells of the filled complex (faces, edges
// with a filled side, vertices with a filled incident face). The state-count
// route reads them off the vertex-state census:
//
//   area      = (n_C + 2 n_H + 3 n_F) / 6
//   perimeter =  n_C + n_H
//   euler     = (n_C - n_H) / 6
//
// Both are exact integers; disagreement anywhere is a bug, and the identity
// of the two routes on torus configurations is what the tests pin down.
//
// Energies: H = sum over counted vertices of e(state). With state counts
// cached on the configuration this is O(1); delta_energy inspects just the
// six vertices of the flipped face. When all of 6*e_C, 6*e_H, 6*e_F are
// integers the same sums run in exact integer "sextant" units.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"

namespace hexmark {

struct GeometricValues {
  std::int64_t area = 0;
  std::int64_t perimeter = 0;
  std::int64_t euler = 0;

  bool operator==(const GeometricValues& o) const {
    return area == o.area && perimeter == o.perimeter && euler == o.euler;
  }
};

// Cell-by-cell count over the host lattice. Undetermined faces count as
// empty, so on domains this is the filled complex of interior + ring.
inline GeometricValues geometric_values_direct(const Configuration& c) {
  const HexTorus& lat = c.lattice();
  auto filled = [&](int f) { return c.determined(f) && c.filled(f); };

  GeometricValues out;
  for (int f = 0; f < lat.face_count(); ++f) {
    if (filled(f)) ++out.area;
  }
  std::int64_t touched_edges = 0;
  for (int e = 0; e < lat.edge_count(); ++e) {
    auto [a, b] = lat.edge_faces(e);
    const bool fa = filled(a);
    const bool fb = filled(b);
    if (fa != fb) ++out.perimeter;
    if (fa || fb) ++touched_edges;
  }
  std::int64_t touched_vertices = 0;
  for (int v = 0; v < lat.vertex_count(); ++v) {
    for (int f : lat.vertex_faces(v)) {
      if (filled(f)) {
        ++touched_vertices;
        break;
      }
    }
  }
  out.euler = touched_vertices - touched_edges + out.area;
  return out;
}

// State-count route; counts must come from a torus configuration, where the
// division is exact. Anything non-divisible signals a corrupted cache.
inline GeometricValues geometric_values_from_states(const std::array<std::int64_t, 4>& n) {
  const std::int64_t area6 = n[1] + 2 * n[2] + 3 * n[3];
  const std::int64_t euler6 = n[1] - n[2];
  if (area6 % 6 != 0 || euler6 % 6 != 0) {
    throw ValidationError("state counts are not divisible by 6; corrupted cache or non-torus counts");
  }
  return {area6 / 6, n[1] + n[2], euler6 / 6};
}

inline GeometricValues geometric_values_from_states(const Configuration& c) {
  if (c.domain() != nullptr) {
    throw ValidationError("the state-count route needs a torus configuration");
  }
  return geometric_values_from_states(c.state_counts());
}

// From-scratch census of counted vertex states; for validating the cache.
inline std::array<std::int64_t, 4> recount_state_counts(const Configuration& c) {
  std::array<std::int64_t, 4> n{};
  const HexTorus& lat = c.lattice();
  for (int v = 0; v < lat.vertex_count(); ++v) {
    if (!c.vertex_counted(v)) continue;
    int k = 0;
    for (int f : lat.vertex_faces(v)) k += c.filled(f) ? 1 : 0;
    ++n[k];
  }
  return n;
}

inline double energy(const Configuration& c, const VertexEnergies& e) {
  const auto& n = c.state_counts();
  return static_cast<double>(n[1]) * e.c + static_cast<double>(n[2]) * e.h +
         static_cast<double>(n[3]) * e.f;
}

// Energy change of flipping one free face; reads the six vertex fill counts,
// updates nothing.
inline double delta_energy(const Configuration& c, int face, const VertexEnergies& e) {
  if (!c.free_face(face)) {
    throw ValidationError("delta_energy on face " + std::to_string(face) +
                          " which is not flippable");
  }
  const int d = c.filled(face) ? -1 : 1;
  double delta = 0;
  for (int v : c.lattice().face_vertices(face)) {
    const int k = c.vertex_fill(v);
    delta += e.of_fill(k + d) - e.of_fill(k);
  }
  return delta;
}

// Exact integer path: energies in units of 1/6 (one "sextant").
struct SextantEnergies {
  std::int64_t c = 0;
  std::int64_t h = 0;
  std::int64_t f = 0;

  std::int64_t of_fill(int k) const {
    switch (k) {
      case 0: return 0;
      case 1: return c;
      case 2: return h;
      default: return f;
    }
  }
  SextantEnergies swapped() const { return {h - f, c - f, -f}; }
  VertexEnergies to_doubles() const {
    return {static_cast<double>(c) / 6, static_cast<double>(h) / 6,
            static_cast<double>(f) / 6};
  }
};

// Succeeds when 6*e is integral to within tol; the returned units are exact.
inline std::optional<SextantEnergies> to_sextants(const VertexEnergies& e,
                                                  double tol = 1e-9) {
  SextantEnergies s;
  const std::array<double, 3> vals{e.c, e.h, e.f};
  std::array<std::int64_t*, 3> out{&s.c, &s.h, &s.f};
  for (int k = 0; k < 3; ++k) {
    const double scaled = vals[k] * 6;
    const double rounded = std::nearbyint(scaled);
    if (std::abs(scaled - rounded) > tol || std::abs(rounded) > 9e15) {
      return std::nullopt;
    }
    *out[k] = static_cast<std::int64_t>(rounded);
  }
  return s;
}

inline std::int64_t energy_sextants(const Configuration& c, const SextantEnergies& s) {
  const auto& n = c.state_counts();
  return n[1] * s.c + n[2] * s.h + n[3] * s.f;
}

inline std::int64_t delta_energy_sextants(const Configuration& c, int face,
                                          const SextantEnergies& s) {
  if (!c.free_face(face)) {
    throw ValidationError("delta_energy on face " + std::to_string(face) +
                          " which is not flippable");
  }
  const int d = c.filled(face) ? -1 : 1;
  std::int64_t delta = 0;
  for (int v : c.lattice().face_vertices(face)) {
    const int k = c.vertex_fill(v);
    delta += s.of_fill(k + d) - s.of_fill(k);
  }
  return delta;
}

inline double geometric_energy(const GeometricValues& g, const GeometricParams& p) {
  return p.x * static_cast<double>(g.euler) + p.p * static_cast<double>(g.perimeter) +
         p.a * static_cast<double>(g.area);
}

}  // namespace hexmark
