#pragma once

// Parameter space of the model family. A Hamiltonian is either given
// geometrically, H = x*euler + p*perimeter + a*area, or as canonical
// per-vertex energies (e_E = 0, e_C, e_H, e_F) indexed by how many of a
// vertex's three faces are filled. The two bases are equivalent:
//
//   e_C = x/6 + p + a/6      x = 3*(e_C - e_H) + e_F
//   e_H = -x/6 + p + a/3     p = (e_C + e_H - e_F) / 2
//   e_F = a/2                a = 2*e_F
//
// Boltzmann weight is exp(-H/T); ground configurations minimize H.
// Minimizing the per-vertex energy classifies the zero-temperature phase
// diagram into regions (one minimal state), transition lines (two), and
// multi-points. The Peierls condition fails exactly where the minimal set
// contains {H,F}, {E,C} or {H,C}: those pairs can border each other at zero
// cost, so excitations need not pay a boundary price.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/lattice.hpp"

namespace hexmark {

inline constexpr const char* kConventionTag = "exp(-H/T)";

struct GeometricParams {
  double x = 0;  // Euler characteristic coefficient
  double p = 0;  // perimeter coefficient
  double a = 0;  // area coefficient
};

struct VertexEnergies {
  double c = 0;  // energy of a C vertex (one face filled); E is pinned to 0
  double h = 0;  // energy of an H vertex (two faces filled)
  double f = 0;  // energy of an F vertex (all three filled)

  double of(VertexState s) const {
    switch (s) {
      case VertexState::E: return 0.0;
      case VertexState::C: return c;
      case VertexState::H: return h;
      default: return f;
    }
  }
  double of_fill(int k) const { return of(static_cast<VertexState>(k)); }

  // Energies of the complemented model: complementing a configuration and
  // swapping to these energies changes every energy by the constant
  // -f * (number of counted vertices).
  VertexEnergies swapped() const { return {h - f, c - f, -f}; }
};

struct Temperature {
  double t;
  explicit Temperature(double value) : t(value) {
    if (!(value > 0) || !std::isfinite(value)) {
      throw ValidationError("temperature must be positive and finite");
    }
  }
  static Temperature from_beta(double beta) { return Temperature(1.0 / beta); }
  double beta() const { return 1.0 / t; }
};

inline VertexEnergies to_vertex_energies(const GeometricParams& g) {
  return {g.x / 6 + g.p + g.a / 6, -g.x / 6 + g.p + g.a / 3, g.a / 2};
}

inline GeometricParams to_geometric_params(const VertexEnergies& e) {
  return {3 * (e.c - e.h) + e.f, (e.c + e.h - e.f) / 2, 2 * e.f};
}

// Zero-temperature label: which vertex states minimize the per-vertex energy.
struct RegionLabel {
  enum class Kind { region, line, multi };

  std::array<bool, 4> minimal{};  // indexed by VertexState
  Kind kind = Kind::region;
  bool peierls = true;

  bool contains(VertexState s) const { return minimal[static_cast<int>(s)]; }
  int count() const {
    int n = 0;
    for (bool b : minimal) n += b;
    return n;
  }
  std::string name() const {
    std::string out;
    for (int s = 0; s < 4; ++s) {
      if (!minimal[s]) continue;
      if (!out.empty()) out += '|';
      out += vertex_state_name(static_cast<VertexState>(s));
    }
    return out;
  }
  bool operator==(const RegionLabel& o) const {
    return minimal == o.minimal;
  }
};

// Ties use a relative tolerance scaled by the largest |e|, so the label is
// exactly invariant under positive rescaling of the energies.
inline RegionLabel classify(const VertexEnergies& e, double rel_tol = 1e-9) {
  const std::array<double, 4> values{0.0, e.c, e.h, e.f};
  double lo = values[0];
  double scale = 0;
  for (double v : values) {
    lo = std::min(lo, v);
    scale = std::max(scale, std::abs(v));
  }
  const double tol = rel_tol * scale;
  RegionLabel label;
  for (int s = 0; s < 4; ++s) label.minimal[s] = values[s] <= lo + tol;
  const int n = label.count();
  label.kind = n == 1 ? RegionLabel::Kind::region
                      : (n == 2 ? RegionLabel::Kind::line : RegionLabel::Kind::multi);
  const auto& m = label.minimal;
  const bool bad_pair = (m[2] && m[3]) || (m[0] && m[1]) || (m[2] && m[1]);
  label.peierls = !bad_pair;
  return label;
}

// A parameter point carried in both bases.
struct ModelPoint {
  GeometricParams geo;
  VertexEnergies energies;

  static ModelPoint from_geometric(const GeometricParams& g) {
    return {g, to_vertex_energies(g)};
  }
  static ModelPoint from_energies(const VertexEnergies& e) {
    return {to_geometric_params(e), e};
  }
};

// Named parameter points. "ising_field(h)" takes the field strength in the
// parentheses; the Ising model here is the lattice-gas form H = P + h*A.
// "triplet" is the three-spin product Hamiltonian, the midpoint of the C-F
// transition line, with per-vertex values (+-1) shifted to e_E = 0.
inline ModelPoint preset(const std::string& name) {
  if (name == "ising_ferro") return ModelPoint::from_geometric({0, 1, 0});
  if (name == "ising_antiferro") return ModelPoint::from_geometric({0, -1, 0});
  if (name == "pure_euler") return ModelPoint::from_geometric({1, 0, 0});
  if (name == "pure_perimeter") return ModelPoint::from_geometric({0, 1, 0});
  if (name == "pure_area") return ModelPoint::from_geometric({0, 0, 1});
  if (name == "triplet") return ModelPoint::from_energies({-2, 0, -2});
  const std::string prefix = "ising_field(";
  if (name.rfind(prefix, 0) == 0 && name.back() == ')') {
    const std::string arg = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    std::size_t used = 0;
    double h = 0;
    try {
      h = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad field value in preset '" + name + "'");
    }
    if (used != arg.size() || !std::isfinite(h)) {
      throw ValidationError("bad field value in preset '" + name + "'");
    }
    return ModelPoint::from_geometric({0, 1, h});
  }
  throw ValidationError("unknown preset '" + name + "'");
}

struct GroundConfiguration {
  std::string name;        // "empty", "full", "C0".."C2", "H0".."H2"
  VertexState state_class; // which pure vertex state the configuration realizes
  Configuration config;
};

// The finite set of minimal configurations for a Peierls label on a torus:
// E -> empty, F -> full, C -> one sublattice filled (3 ways), H -> one
// sublattice empty (3 ways); pair labels take the union. Non-Peierls labels
// have infinitely many minimizers in volume and are rejected.
inline std::vector<GroundConfiguration> ground_configurations(const RegionLabel& label,
                                                              const HexTorus& lattice) {
  if (!label.peierls) {
    throw ValidationError("label " + label.name() +
                          " fails the Peierls condition; its ground set is not a finite "
                          "list of uniform configurations");
  }
  const bool needs_sublattices =
      label.contains(VertexState::C) || label.contains(VertexState::H);
  if (needs_sublattices && !lattice.has_sublattices()) {
    throw ValidationError("C/H ground configurations need torus dimensions divisible by 3");
  }
  std::vector<GroundConfiguration> out;
  if (label.contains(VertexState::E)) {
    out.push_back({"empty", VertexState::E, Configuration(lattice, false)});
  }
  if (label.contains(VertexState::C)) {
    for (int s = 0; s < 3; ++s) {
      std::vector<bool> filled(lattice.face_count());
      for (int f = 0; f < lattice.face_count(); ++f) filled[f] = lattice.sublattice(f) == s;
      out.push_back({"C" + std::to_string(s), VertexState::C, Configuration(lattice, filled)});
    }
  }
  if (label.contains(VertexState::H)) {
    for (int s = 0; s < 3; ++s) {
      std::vector<bool> filled(lattice.face_count());
      for (int f = 0; f < lattice.face_count(); ++f) filled[f] = lattice.sublattice(f) != s;
      out.push_back({"H" + std::to_string(s), VertexState::H, Configuration(lattice, filled)});
    }
  }
  if (label.contains(VertexState::F)) {
    out.push_back({"full", VertexState::F, Configuration(lattice, true)});
  }
  return out;
}

}  // namespace hexmark
