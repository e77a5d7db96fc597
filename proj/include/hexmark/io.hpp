#pragma once

// Serialization helpers. Everything here is deterministic: floats print via
// std::to_chars (shortest round-trip form), JSON objects keep sorted keys,
// and no output embeds a timestamp, hostname, or thread count.

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hexmark/configuration.hpp"
#include "hexmark/errors.hpp"
#include "hexmark/lattice.hpp"
#include "hexmark/model.hpp"

namespace hexmark {

inline std::string fmt_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw ValidationError("number formatting failed");
  return std::string(buf.data(), ptr);
}

// FNV-1a over bytes; stable fingerprint for configs and parameter blocks.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = digits[v & 15];
    v >>= 4;
  }
  return out;
}

// Text format for a torus configuration:
//   hexconfig 1
//   dims <width> <height> wrap 1 1
//   <height rows of width 0/1 characters, row j = faces (0,j)..(width-1,j)>
inline std::string write_hexconfig(const Configuration& c) {
  if (c.domain() != nullptr) {
    throw ValidationError("hexconfig files hold full torus configurations");
  }
  const HexTorus& lat = c.lattice();
  std::string out = "hexconfig 1\n";
  out += "dims " + std::to_string(lat.width()) + " " + std::to_string(lat.height()) +
         " wrap 1 1\n";
  for (int j = 0; j < lat.height(); ++j) {
    for (int i = 0; i < lat.width(); ++i) {
      out += c.filled(lat.face_index(i, j)) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

// Parsed file contents; the caller builds the lattice (whose lifetime it
// controls) and then the configuration.
struct HexConfigData {
  int width = 0;
  int height = 0;
  std::vector<bool> filled;  // indexed by face_index of a (width x height) torus

  Configuration realize(const HexTorus& lattice) const {
    if (lattice.width() != width || lattice.height() != height) {
      throw ValidationError("lattice dims do not match the parsed file");
    }
    return Configuration(lattice, filled);
  }
};

inline HexConfigData read_hexconfig(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "hexconfig") {
    throw ValidationError("not a hexconfig file: missing 'hexconfig <version>' header");
  }
  if (version != 1) {
    throw ValidationError("unsupported hexconfig version " + std::to_string(version));
  }
  std::string key, wrap_key;
  int w = 0, h = 0, wrap_i = 0, wrap_j = 0;
  if (!(in >> key >> w >> h >> wrap_key >> wrap_i >> wrap_j) || key != "dims" ||
      wrap_key != "wrap") {
    throw ValidationError("hexconfig: expected 'dims <w> <h> wrap 1 1'");
  }
  if (wrap_i != 1 || wrap_j != 1) {
    throw ValidationError("hexconfig: only fully wrapped (torus) files are supported");
  }
  if (w < 3 || h < 3) {
    throw ValidationError("hexconfig: dims must be at least 3x3");
  }
  HexConfigData data;
  data.width = w;
  data.height = h;
  data.filled.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), false);
  std::string row;
  for (int j = 0; j < h; ++j) {
    if (!(in >> row) || static_cast<int>(row.size()) != w) {
      throw ValidationError("hexconfig: row " + std::to_string(j) + " must have " +
                            std::to_string(w) + " characters");
    }
    for (int i = 0; i < w; ++i) {
      if (row[i] != '0' && row[i] != '1') {
        throw ValidationError("hexconfig: rows must contain only 0 and 1");
      }
      data.filled[static_cast<std::size_t>(j) * w + i] = row[i] == '1';
    }
  }
  return data;
}

inline std::uint64_t config_hash(const Configuration& c) {
  std::string bytes;
  const HexTorus& lat = c.lattice();
  bytes += std::to_string(lat.width()) + "x" + std::to_string(lat.height()) + ":";
  for (int f = 0; f < lat.face_count(); ++f) {
    bytes += c.domain() != nullptr && !c.determined(f) ? '?' : (c.filled(f) ? '1' : '0');
  }
  return fnv1a(bytes);
}

// Common header fields every JSON artifact carries.
inline nlohmann::json json_header(const VertexEnergies& e, double temperature) {
  nlohmann::json j;
  j["convention"] = kConventionTag;
  j["energies"] = {{"e_C", e.c}, {"e_H", e.h}, {"e_F", e.f}};
  const GeometricParams g = to_geometric_params(e);
  j["parameters"] = {{"x", g.x}, {"p", g.p}, {"a", g.a}};
  j["temperature"] = temperature;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hexmark
