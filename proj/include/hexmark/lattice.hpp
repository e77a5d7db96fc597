#pragma once

// Hexagonal lattice on a torus, faces addressed by axial coordinates (i, j)
// with periodic wrap. Vertices are the triangles of the dual triangular
// lattice: each vertex touches exactly 3 mutually adjacent faces, each face
// has 6 vertices and 6 neighbors. All incidence relations are arithmetic;
// nothing is stored per cell.
//
// Conventions used throughout:
//   face index        f = j*width + i
//   vertex index      v = 2*f + t, t = 0 (up triangle) or 1 (down triangle)
//   up triangle(i,j)  faces {(i,j), (i+1,j), (i,j+1)}
//   down triangle(i,j) faces {(i+1,j), (i,j+1), (i+1,j+1)}
//   edge index        e = 3*f + d, d in {0,1,2} for the edges from (i,j)
//                     toward (i+1,j), (i,j+1), (i+1,j-1); every adjacent
//                     pair is covered exactly once.
// face_neighbors and face_vertices are listed in matching cyclic order:
// vertex k of a face is flanked by neighbors k and k+1 (mod 6). The
// single-site conditional in exact.hpp relies on that correspondence.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "hexmark/errors.hpp"

namespace hexmark {

enum class VertexState : std::uint8_t { E = 0, C = 1, H = 2, F = 3 };

inline char vertex_state_name(VertexState s) {
  return "ECHF"[static_cast<int>(s)];
}

class HexTorus {
public:
  HexTorus(int width, int height) : width_(width), height_(height) {
    if (width < 3 || height < 3) {
      throw ValidationError("torus dimensions must be at least 3x3, got " +
                            std::to_string(width) + "x" + std::to_string(height) +
                            " (smaller wraps make a face adjacent to itself or double an edge)");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int face_count() const { return width_ * height_; }
  int vertex_count() const { return 2 * width_ * height_; }
  int edge_count() const { return 3 * width_ * height_; }

  int face_index(int i, int j) const {
    return wrap(j, height_) * width_ + wrap(i, width_);
  }

  // (i, j) of a face id.
  std::pair<int, int> face_coords(int f) const {
    check_face(f);
    return {f % width_, f / width_};
  }

  // Cyclic neighbor ring: (i+1,j), (i,j+1), (i-1,j+1), (i-1,j), (i,j-1), (i+1,j-1).
  std::array<int, 6> face_neighbors(int f) const {
    auto [i, j] = face_coords(f);
    return {face_index(i + 1, j), face_index(i, j + 1), face_index(i - 1, j + 1),
            face_index(i - 1, j), face_index(i, j - 1), face_index(i + 1, j - 1)};
  }

  // Cyclic vertex ring of a face; vertex k sits between neighbors k and k+1.
  std::array<int, 6> face_vertices(int f) const {
    auto [i, j] = face_coords(f);
    return {vertex_index(i, j, 0),         vertex_index(i - 1, j, 1),
            vertex_index(i - 1, j, 0),     vertex_index(i - 1, j - 1, 1),
            vertex_index(i, j - 1, 0),     vertex_index(i, j - 1, 1)};
  }

  int vertex_index(int i, int j, int t) const {
    return 2 * face_index(i, j) + t;
  }

  // The 3 mutually adjacent faces of a vertex.
  std::array<int, 3> vertex_faces(int v) const {
    check_vertex(v);
    int f = v / 2;
    auto [i, j] = face_coords(f);
    if (v % 2 == 0) {
      return {face_index(i, j), face_index(i + 1, j), face_index(i, j + 1)};
    }
    return {face_index(i + 1, j), face_index(i, j + 1), face_index(i + 1, j + 1)};
  }

  // The two faces separated by an edge.
  std::array<int, 2> edge_faces(int e) const {
    check_edge(e);
    int f = e / 3;
    auto [i, j] = face_coords(f);
    switch (e % 3) {
      case 0: return {f, face_index(i + 1, j)};
      case 1: return {f, face_index(i, j + 1)};
      default: return {f, face_index(i + 1, j - 1)};
    }
  }

  // The two vertices flanking an edge.
  std::array<int, 2> edge_vertices(int e) const {
    check_edge(e);
    int f = e / 3;
    auto [i, j] = face_coords(f);
    switch (e % 3) {
      case 0: return {vertex_index(i, j, 0), vertex_index(i, j - 1, 1)};
      case 1: return {vertex_index(i, j, 0), vertex_index(i - 1, j, 1)};
      default: return {vertex_index(i, j - 1, 0), vertex_index(i, j - 1, 1)};
    }
  }

  // Three-coloring of faces such that adjacent faces always differ and every
  // vertex sees all three labels. Wraps consistently only when both
  // dimensions are multiples of 3.
  bool has_sublattices() const { return width_ % 3 == 0 && height_ % 3 == 0; }

  int sublattice(int f) const {
    if (!has_sublattices()) {
      throw ValidationError("sublattice labels need both torus dimensions divisible by 3, got " +
                            std::to_string(width_) + "x" + std::to_string(height_));
    }
    auto [i, j] = face_coords(f);
    return ((i - j) % 3 + 3) % 3;
  }

  bool operator==(const HexTorus& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

private:
  static int wrap(int x, int m) { return ((x % m) + m) % m; }

  void check_face(int f) const {
    if (f < 0 || f >= face_count()) {
      throw ValidationError("face id " + std::to_string(f) + " out of range [0, " +
                            std::to_string(face_count()) + ")");
    }
  }
  void check_vertex(int v) const {
    if (v < 0 || v >= vertex_count()) {
      throw ValidationError("vertex id " + std::to_string(v) + " out of range [0, " +
                            std::to_string(vertex_count()) + ")");
    }
  }
  void check_edge(int e) const {
    if (e < 0 || e >= edge_count()) {
      throw ValidationError("edge id " + std::to_string(e) + " out of range [0, " +
                            std::to_string(edge_count()) + ")");
    }
  }

  int width_;
  int height_;
};

// A finite patch hosted in a torus: a connected set of interior (free) faces
// with a fixed assignment on the surrounding ring. The ring is exactly the
// set of exterior faces sharing a vertex with the interior (on this lattice
// that equals the set of edge-neighbors of the interior). Counted vertices
// are the vertices incident to at least one interior face; energies and
// state counts on domain configurations run over counted vertices only.
class HexDomain {
public:
  HexDomain(const HexTorus& host, std::vector<int> interior,
            const std::map<int, bool>& boundary)
      : host_(host), interior_(std::move(interior)) {
    const int F = host_.face_count();
    if (interior_.empty()) {
      throw ValidationError("domain interior must be non-empty");
    }
    std::sort(interior_.begin(), interior_.end());
    interior_.erase(std::unique(interior_.begin(), interior_.end()), interior_.end());
    for (int f : interior_) {
      if (f < 0 || f >= F) {
        throw ValidationError("domain interior face id " + std::to_string(f) + " out of range");
      }
    }
    if (static_cast<int>(interior_.size()) == F) {
      throw ValidationError("domain interior must be a proper subset of the host torus");
    }

    std::vector<char> in_interior(F, 0);
    for (int f : interior_) in_interior[f] = 1;

    if (!connected(interior_, in_interior, /*inside=*/true)) {
      throw ValidationError("domain interior is disconnected");
    }
    std::vector<int> complement;
    for (int f = 0; f < F; ++f) {
      if (!in_interior[f]) complement.push_back(f);
    }
    if (!connected(complement, in_interior, /*inside=*/false)) {
      throw ValidationError("domain complement is disconnected inside the host torus");
    }

    // Boundary ring and counted vertices.
    std::vector<char> in_ring(F, 0);
    std::vector<char> counted(host_.vertex_count(), 0);
    for (int f : interior_) {
      for (int v : host_.face_vertices(f)) counted[v] = 1;
      for (int g : host_.face_neighbors(f)) {
        if (!in_interior[g]) in_ring[g] = 1;
      }
    }
    for (int f = 0; f < F; ++f) {
      if (in_ring[f]) ring_.push_back(f);
    }
    for (int v = 0; v < host_.vertex_count(); ++v) {
      if (counted[v]) counted_vertices_.push_back(v);
    }

    boundary_values_.assign(F, 0);
    std::vector<char> assigned(F, 0);
    for (const auto& [f, val] : boundary) {
      if (f < 0 || f >= F) {
        throw ValidationError("boundary face id " + std::to_string(f) + " out of range");
      }
      if (in_interior[f]) {
        throw ValidationError("boundary assignment on interior face " + std::to_string(f));
      }
      if (!in_ring[f]) {
        throw ValidationError("boundary assignment on face " + std::to_string(f) +
                              " outside the boundary ring");
      }
      boundary_values_[f] = val ? 1 : 0;
      assigned[f] = 1;
    }
    for (int f : ring_) {
      if (!assigned[f]) {
        throw ValidationError("incomplete boundary: face " + std::to_string(f) +
                              " of the boundary ring has no assigned value");
      }
    }

    in_interior_ = std::move(in_interior);
    in_ring_.assign(in_ring.begin(), in_ring.end());
  }

  const HexTorus& host() const { return host_; }
  const std::vector<int>& interior() const { return interior_; }
  const std::vector<int>& boundary_ring() const { return ring_; }
  const std::vector<int>& counted_vertices() const { return counted_vertices_; }

  bool is_interior(int f) const { return in_interior_[f] != 0; }
  bool on_ring(int f) const { return in_ring_[f] != 0; }
  bool boundary_value(int f) const {
    if (!on_ring(f)) {
      throw ValidationError("face " + std::to_string(f) + " is not on the boundary ring");
    }
    return boundary_values_[f] != 0;
  }

private:
  bool connected(const std::vector<int>& members, const std::vector<char>& in_interior,
                 bool inside) const {
    if (members.empty()) return true;
    std::vector<char> seen(host_.face_count(), 0);
    std::queue<int> queue;
    queue.push(members[0]);
    seen[members[0]] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      int f = queue.front();
      queue.pop();
      for (int g : host_.face_neighbors(f)) {
        bool member = inside ? in_interior[g] != 0 : in_interior[g] == 0;
        if (member && !seen[g]) {
          seen[g] = 1;
          ++reached;
          queue.push(g);
        }
      }
    }
    return reached == members.size();
  }

  HexTorus host_;
  std::vector<int> interior_;
  std::vector<int> ring_;
  std::vector<int> counted_vertices_;
  std::vector<char> in_interior_;
  std::vector<char> in_ring_;
  std::vector<char> boundary_values_;
};

// Rectangular block of faces, a convenient interior shape.
inline std::vector<int> face_block(const HexTorus& host, int i0, int j0, int bw, int bh) {
  if (bw <= 0 || bh <= 0 || bw > host.width() || bh > host.height()) {
    throw ValidationError("face block does not fit the host torus");
  }
  std::vector<int> faces;
  faces.reserve(static_cast<std::size_t>(bw) * bh);
  for (int dj = 0; dj < bh; ++dj) {
    for (int di = 0; di < bw; ++di) {
      faces.push_back(host.face_index(i0 + di, j0 + dj));
    }
  }
  return faces;
}

inline HexDomain domain_with_uniform_boundary(const HexTorus& host,
                                              std::vector<int> interior, bool fill) {
  std::vector<char> in_interior(host.face_count(), 0);
  for (int f : interior) {
    if (f < 0 || f >= host.face_count()) {
      throw ValidationError("domain interior face id out of range");
    }
    in_interior[f] = 1;
  }
  std::map<int, bool> boundary;
  for (int f : interior) {
    for (int g : host.face_neighbors(f)) {
      if (!in_interior[g]) boundary[g] = fill;
    }
  }
  return HexDomain(host, std::move(interior), boundary);
}

}  // namespace hexmark
