// hexmark: exact and Monte Carlo tools for binary fields on the hex lattice.
//
// Subcommands: enumerate | sample | phase-scan | uniqueness | render.
// Every run is driven by a JSON config (strict: unknown keys are rejected)
// plus a few overrides (--seed, --threads, --out). Outputs are deterministic
// for a fixed config and seed: floats print in shortest round-trip form,
// JSON keys are sorted, nothing embeds a timestamp or thread count, and the
// enumeration merge order is fixed. Exit codes: 0 ok, 2 invalid input,
// 3 resource cap exceeded.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hexmark/hexmark.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hexmark;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_dir = ".";
  std::string config_path;
};

// ---- strict config access ----

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
  if (!j.is_object()) {
    throw ValidationError("'" + ctx + "' must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ValidationError("unknown key '" + item.key() + "' in " + ctx);
    }
  }
}

double get_num(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ValidationError(ctx + " needs '" + key + "'");
  if (!j.at(key).is_number()) throw ValidationError(ctx + "." + key + " must be a number");
  return j.at(key).get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback,
                  const std::string& ctx) {
  return j.contains(key) ? get_num(j, key, ctx) : fallback;
}

std::int64_t get_int(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ValidationError(ctx + " needs '" + key + "'");
  if (!j.at(key).is_number_integer()) {
    throw ValidationError(ctx + "." + key + " must be an integer");
  }
  return j.at(key).get<std::int64_t>();
}

std::int64_t get_int_or(const json& j, const std::string& key, std::int64_t fallback,
                        const std::string& ctx) {
  return j.contains(key) ? get_int(j, key, ctx) : fallback;
}

bool get_bool_or(const json& j, const std::string& key, bool fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ValidationError(ctx + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

std::string get_str(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ValidationError(ctx + " needs '" + key + "'");
  if (!j.at(key).is_string()) throw ValidationError(ctx + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

std::string get_str_or(const json& j, const std::string& key, const std::string& fallback,
                       const std::string& ctx) {
  return j.contains(key) ? get_str(j, key, ctx) : fallback;
}

// ---- config sections ----

void validate_top_level(const json& cfg) {
  check_keys(cfg,
             {"format_version", "model", "temperature", "beta", "lattice", "domain", "seed",
              "enumerate", "sample", "phase_scan", "uniqueness", "render"},
             "config");
  if (!cfg.contains("format_version") || !cfg.at("format_version").is_number_integer() ||
      cfg.at("format_version").get<int>() != 1) {
    throw ValidationError("config needs \"format_version\": 1");
  }
  if (cfg.contains("model")) {
    const json& m = cfg.at("model");
    check_keys(m, {"preset", "energies", "parameters"}, "model");
    if (m.contains("energies")) check_keys(m.at("energies"), {"e_C", "e_H", "e_F"}, "model.energies");
    if (m.contains("parameters")) check_keys(m.at("parameters"), {"x", "p", "a"}, "model.parameters");
  }
  if (cfg.contains("lattice")) check_keys(cfg.at("lattice"), {"width", "height"}, "lattice");
  if (cfg.contains("domain")) {
    check_keys(cfg.at("domain"), {"origin", "width", "height", "boundary"}, "domain");
  }
  if (cfg.contains("enumerate")) {
    check_keys(cfg.at("enumerate"), {"cap", "marginals", "top_configs"}, "enumerate");
  }
  if (cfg.contains("sample")) {
    check_keys(cfg.at("sample"),
               {"sweeps", "burn_in", "thinning", "dynamics", "initial", "references"}, "sample");
  }
  if (cfg.contains("phase_scan")) {
    const json& s = cfg.at("phase_scan");
    check_keys(s,
               {"mode", "resolution", "beta", "method", "band", "kappa", "torus", "chain",
                "domination_threshold", "exact_cap"},
               "phase_scan");
    if (s.contains("torus")) check_keys(s.at("torus"), {"width", "height"}, "phase_scan.torus");
    if (s.contains("chain")) {
      check_keys(s.at("chain"), {"sweeps", "burn_in", "thinning", "dynamics"},
                 "phase_scan.chain");
    }
  }
  if (cfg.contains("uniqueness")) {
    const json& u = cfg.at("uniqueness");
    check_keys(u, {"betas", "delta", "domain", "cap"}, "uniqueness");
    if (u.contains("domain")) {
      check_keys(u.at("domain"), {"origin", "width", "height", "boundary"}, "uniqueness.domain");
    }
  }
  if (cfg.contains("render")) {
    check_keys(cfg.at("render"), {"input", "hex_size", "vertex_overlay"}, "render");
  }
}

ModelPoint parse_model(const json& cfg) {
  if (!cfg.contains("model")) throw ValidationError("config needs a 'model' section");
  const json& m = cfg.at("model");
  const int given = (m.contains("preset") ? 1 : 0) + (m.contains("energies") ? 1 : 0) +
                    (m.contains("parameters") ? 1 : 0);
  if (given != 1) {
    throw ValidationError("model takes exactly one of 'preset', 'energies', 'parameters'");
  }
  if (m.contains("preset")) return preset(get_str(m, "preset", "model"));
  if (m.contains("energies")) {
    const json& e = m.at("energies");
    return ModelPoint::from_energies({get_num(e, "e_C", "model.energies"),
                                      get_num(e, "e_H", "model.energies"),
                                      get_num(e, "e_F", "model.energies")});
  }
  const json& g = m.at("parameters");
  return ModelPoint::from_geometric({get_num(g, "x", "model.parameters"),
                                     get_num(g, "p", "model.parameters"),
                                     get_num(g, "a", "model.parameters")});
}

Temperature parse_temperature(const json& cfg) {
  const bool has_t = cfg.contains("temperature");
  const bool has_b = cfg.contains("beta");
  if (has_t == has_b) {
    throw ValidationError("config needs exactly one of 'temperature' or 'beta'");
  }
  return has_t ? Temperature(get_num(cfg, "temperature", "config"))
               : Temperature::from_beta(get_num(cfg, "beta", "config"));
}

HexTorus parse_lattice(const json& cfg) {
  if (!cfg.contains("lattice")) throw ValidationError("config needs a 'lattice' section");
  const json& l = cfg.at("lattice");
  return HexTorus(static_cast<int>(get_int(l, "width", "lattice")),
                  static_cast<int>(get_int(l, "height", "lattice")));
}

struct DomainSpec {
  int i0 = 0, j0 = 0, width = 0, height = 0;
  bool fill = false;

  HexDomain realize(const HexTorus& host) const {
    return domain_with_uniform_boundary(host, face_block(host, i0, j0, width, height), fill);
  }
};

DomainSpec parse_domain(const json& d, const std::string& ctx) {
  DomainSpec spec;
  if (!d.contains("origin") || !d.at("origin").is_array() || d.at("origin").size() != 2 ||
      !d.at("origin")[0].is_number_integer() || !d.at("origin")[1].is_number_integer()) {
    throw ValidationError(ctx + ".origin must be [i, j]");
  }
  spec.i0 = d.at("origin")[0].get<int>();
  spec.j0 = d.at("origin")[1].get<int>();
  spec.width = static_cast<int>(get_int(d, "width", ctx));
  spec.height = static_cast<int>(get_int(d, "height", ctx));
  const std::string boundary = get_str_or(d, "boundary", "empty", ctx);
  if (boundary != "empty" && boundary != "full") {
    throw ValidationError(ctx + ".boundary must be \"empty\" or \"full\"");
  }
  spec.fill = boundary == "full";
  return spec;
}

// ---- output helpers ----

std::string csv_preamble(const std::string& hash) {
  return "# config_hash " + hash + "\n# convention " + std::string(kConventionTag) + "\n";
}

std::string num_or_empty(double v) { return std::isnan(v) ? std::string() : fmt_double(v); }

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path.string(), j.dump(2) + "\n");
}

std::string effective_hash(const json& cfg, const std::string& command, std::uint64_t seed,
                           bool seeded) {
  std::string bytes = cfg.dump();
  bytes += "|command=" + command;
  if (seeded) bytes += "|seed=" + std::to_string(seed);
  return hex64(fnv1a(bytes));
}

// ---- commands ----

int run_enumerate(const json& cfg, const Overrides& ov) {
  const ModelPoint mp = parse_model(cfg);
  const Temperature T = parse_temperature(cfg);
  const HexTorus lat = parse_lattice(cfg);
  const json sec = cfg.contains("enumerate") ? cfg.at("enumerate") : json::object();

  EnumerateOptions opts;
  opts.cap = static_cast<int>(get_int_or(sec, "cap", opts.cap, "enumerate"));
  opts.marginals = get_bool_or(sec, "marginals", true, "enumerate");
  opts.top_configs = static_cast<int>(get_int_or(sec, "top_configs", 8, "enumerate"));
  opts.threads = ov.threads;

  std::optional<HexDomain> domain;
  if (cfg.contains("domain")) {
    domain.emplace(parse_domain(cfg.at("domain"), "domain").realize(lat));
  }
  const ExactSummary sum = domain ? enumerate(*domain, mp.energies, T, opts)
                                  : enumerate(lat, mp.energies, T, opts);

  const std::string hash = effective_hash(cfg, "enumerate", 0, false);

  json out = json_header(mp.energies, T.t);
  out["format_version"] = 1;
  out["command"] = "enumerate";
  out["config_hash"] = hash;
  out["lattice"] = {{"width", lat.width()}, {"height", lat.height()}};
  if (cfg.contains("domain")) out["domain"] = cfg.at("domain");
  out["beta"] = sum.beta;
  out["log_Z"] = sum.log_Z;
  out["min_energy"] = sum.min_energy;
  out["n_free_faces"] = sum.n_free_faces;
  out["n_counted_vertices"] = sum.n_counted_vertices;
  out["expectations"] = sum.expectations;
  if (!sum.top.empty()) {
    json tops = json::array();
    for (const auto& t : sum.top) {
      json faces = json::array();
      for (std::size_t k = 0; k < sum.free_face_ids.size(); ++k) {
        if ((t.mask >> k) & 1) faces.push_back(sum.free_face_ids[k]);
      }
      tops.push_back({{"energy", t.energy}, {"probability", t.probability},
                      {"filled_faces", faces}});
    }
    out["lowest_energy_configs"] = tops;
  }
  write_json_file(fs::path(ov.out_dir) / "summary.json", out);

  std::string csv = csv_preamble(hash) + "face,i,j,p_fill\n";
  if (!sum.marginals.empty()) {
    for (std::size_t k = 0; k < sum.free_face_ids.size(); ++k) {
      const auto [i, j] = lat.face_coords(sum.free_face_ids[k]);
      csv += std::to_string(sum.free_face_ids[k]) + "," + std::to_string(i) + "," +
             std::to_string(j) + "," + fmt_double(sum.marginals[k]) + "\n";
    }
  }
  write_text_file((fs::path(ov.out_dir) / "marginals.csv").string(), csv);
  return 0;
}

int run_sample(const json& cfg, const Overrides& ov) {
  const ModelPoint mp = parse_model(cfg);
  const Temperature T = parse_temperature(cfg);
  const HexTorus lat = parse_lattice(cfg);
  const json sec = cfg.contains("sample") ? cfg.at("sample") : json::object();

  ChainSettings st;
  st.seed = ov.seed ? *ov.seed
                    : static_cast<std::uint64_t>(get_int_or(cfg, "seed", 1, "config"));
  st.sweeps = get_int_or(sec, "sweeps", 2000, "sample");
  st.burn_in = get_int_or(sec, "burn_in", 200, "sample");
  st.thinning = get_int_or(sec, "thinning", 1, "sample");
  const std::string dyn = get_str_or(sec, "dynamics", "metropolis", "sample");
  if (dyn == "metropolis") {
    st.dynamics = Dynamics::metropolis;
  } else if (dyn == "glauber") {
    st.dynamics = Dynamics::glauber;
  } else {
    throw ValidationError("sample.dynamics must be \"metropolis\" or \"glauber\"");
  }
  st.validate();

  const std::string initial_kind = get_str_or(sec, "initial", "empty", "sample");
  std::optional<Configuration> initial;
  if (initial_kind == "empty") {
    initial.emplace(lat);
  } else if (initial_kind == "full") {
    initial.emplace(lat, true);
  } else if (initial_kind == "random") {
    SplitMix64 rng(st.seed, st.stream + (std::uint64_t{1} << 32));
    std::vector<bool> filled(static_cast<std::size_t>(lat.face_count()));
    for (auto&& b : filled) b = rng.next_bool();
    initial.emplace(lat, filled);
  } else {
    std::ifstream in(initial_kind, std::ios::binary);
    if (!in) throw ValidationError("cannot open initial configuration: " + initial_kind);
    initial.emplace(read_hexconfig(in).realize(lat));
  }

  std::vector<GroundConfiguration> refs;
  if (get_bool_or(sec, "references", true, "sample")) {
    try {
      refs = ground_configurations(classify(mp.energies), lat);
    } catch (const ValidationError&) {
      // No finite reference set for this label/lattice; agreement columns are skipped.
    }
  }

  Chain chain(*initial, mp.energies, T, st.dynamics, st.seed, st.stream);
  std::vector<Observables> records;
  for (std::int64_t s = 1; s <= st.sweeps; ++s) {
    chain.sweep();
    if (s > st.burn_in && (s - st.burn_in) % st.thinning == 0) {
      records.push_back(measure(chain.config(), mp.energies, refs, s));
    }
  }

  const std::string hash = effective_hash(cfg, "sample", st.seed, true);

  std::string csv = csv_preamble(hash);
  csv += "sweep,energy_density,frac_E,frac_C,frac_H,frac_F";
  const bool subl = lat.has_sublattices();
  if (subl) csv += ",subl_density_0,subl_density_1,subl_density_2";
  for (const auto& r : refs) csv += ",agree_" + r.name;
  csv += "\n";
  for (const auto& obs : records) {
    csv += std::to_string(obs.sweep) + "," + fmt_double(obs.energy_density);
    for (int s = 0; s < 4; ++s) csv += "," + fmt_double(obs.state_frac[s]);
    if (subl) {
      for (int s = 0; s < 3; ++s) csv += "," + num_or_empty(obs.sublattice_density[s]);
    }
    for (double a : obs.agreement) csv += "," + fmt_double(a);
    csv += "\n";
  }
  write_text_file((fs::path(ov.out_dir) / "observables.csv").string(), csv);

  json out = json_header(mp.energies, T.t);
  out["format_version"] = 1;
  out["command"] = "sample";
  out["config_hash"] = hash;
  out["lattice"] = {{"width", lat.width()}, {"height", lat.height()}};
  out["dynamics"] = dynamics_name(st.dynamics);
  out["seed"] = st.seed;
  out["stream"] = st.stream;
  out["sweeps"] = st.sweeps;
  out["burn_in"] = st.burn_in;
  out["thinning"] = st.thinning;
  out["initial"] = initial_kind;
  out["records"] = static_cast<std::int64_t>(records.size());
  out["acceptance_rate"] =
      chain.steps() > 0
          ? static_cast<double>(chain.accepted()) / static_cast<double>(chain.steps())
          : 0.0;
  out["label"] = classify(mp.energies).name();
  if (!refs.empty()) {
    const auto verdict = domination_test(records, refs);
    json names = json::array();
    for (const auto& r : refs) names.push_back(r.name);
    out["references"] = names;
    out["domination"] = {{"dominated", verdict.dominated},
                         {"reference", verdict.reference},
                         {"state_class", verdict.state_class},
                         {"max_agreement", verdict.max_agreement},
                         {"threshold", verdict.threshold}};
  }
  write_json_file(fs::path(ov.out_dir) / "settings.json", out);

  write_text_file((fs::path(ov.out_dir) / "final.hexconfig").string(),
                  write_hexconfig(chain.config()));
  return 0;
}

int run_phase_scan(const json& cfg, const Overrides& ov) {
  if (!cfg.contains("phase_scan")) throw ValidationError("config needs a 'phase_scan' section");
  const json& sec = cfg.at("phase_scan");
  const std::string mode = get_str_or(sec, "mode", "zero", "phase_scan");
  const int resolution = static_cast<int>(get_int_or(sec, "resolution", 24, "phase_scan"));

  json out;
  out["format_version"] = 1;
  out["command"] = "phase-scan";
  out["convention"] = kConventionTag;
  out["mode"] = mode;
  out["resolution"] = resolution;

  std::string csv, svg;
  std::uint64_t seed = ov.seed ? *ov.seed
                               : static_cast<std::uint64_t>(get_int_or(cfg, "seed", 1, "config"));
  std::string hash;

  if (mode == "zero") {
    hash = effective_hash(cfg, "phase-scan", 0, false);
    const ZeroTempScan scan = zero_temp_scan(resolution);
    csv = csv_preamble(hash) + "kind,e_C,e_H,e_F,label,peierls\n";
    for (const auto& p : scan.points) {
      csv += std::string(scan_point_kind_name(p.kind)) + "," + fmt_double(p.e[0]) + "," +
             fmt_double(p.e[1]) + "," + fmt_double(p.e[2]) + "," + p.label.name() + "," +
             (p.label.peierls ? "1" : "0") + "\n";
    }
    out["config_hash"] = hash;
    out["points"] = static_cast<std::int64_t>(scan.points.size());
    out["label_histogram"] = scan.label_histogram();
    svg = render_phase_diagram_svg(scan);
  } else if (mode == "low") {
    const double beta = get_num(sec, "beta", "phase_scan");
    LowTempScanOptions opts;
    opts.band = get_num_or(sec, "band", -1, "phase_scan");
    opts.kappa = get_num_or(sec, "kappa", 1.0, "phase_scan");
    const std::string method = get_str_or(sec, "method", "slawny", "phase_scan");
    if (method == "slawny") {
      opts.method = ScanMethod::slawny;
    } else if (method == "mcmc") {
      opts.method = ScanMethod::mcmc;
    } else if (method == "exact") {
      opts.method = ScanMethod::exact;
    } else {
      throw ValidationError("phase_scan.method must be \"slawny\", \"mcmc\" or \"exact\"");
    }
    if (sec.contains("torus")) {
      opts.torus_width = static_cast<int>(get_int(sec.at("torus"), "width", "phase_scan.torus"));
      opts.torus_height =
          static_cast<int>(get_int(sec.at("torus"), "height", "phase_scan.torus"));
    } else if (opts.method == ScanMethod::exact) {
      opts.torus_width = 3;  // keep the default exact measurement tractable
      opts.torus_height = 3;
    }
    if (sec.contains("chain")) {
      const json& ch = sec.at("chain");
      opts.chain.sweeps = get_int_or(ch, "sweeps", opts.chain.sweeps, "phase_scan.chain");
      opts.chain.burn_in = get_int_or(ch, "burn_in", opts.chain.burn_in, "phase_scan.chain");
      opts.chain.thinning = get_int_or(ch, "thinning", opts.chain.thinning, "phase_scan.chain");
      const std::string dyn = get_str_or(ch, "dynamics", "metropolis", "phase_scan.chain");
      if (dyn == "metropolis") {
        opts.chain.dynamics = Dynamics::metropolis;
      } else if (dyn == "glauber") {
        opts.chain.dynamics = Dynamics::glauber;
      } else {
        throw ValidationError("phase_scan.chain.dynamics must be \"metropolis\" or \"glauber\"");
      }
    }
    opts.chain.seed = seed;
    opts.domination_threshold =
        get_num_or(sec, "domination_threshold", opts.domination_threshold, "phase_scan");
    opts.exact_cap = static_cast<int>(get_int_or(sec, "exact_cap", opts.exact_cap, "phase_scan"));

    const bool seeded = opts.method == ScanMethod::mcmc;
    hash = effective_hash(cfg, "phase-scan", seed, seeded);
    const LowTempScan scan = low_temp_scan(beta, resolution, opts);

    csv = csv_preamble(hash) +
          "kind,e_C,e_H,e_F,zero_t_label,predicted,annotation,offset,measured,"
          "measured_agreement\n";
    std::map<std::string, std::int64_t> histogram;
    for (const auto& p : scan.points) {
      ++histogram[p.predicted];
      csv += std::string(scan_point_kind_name(p.kind)) + "," + fmt_double(p.e[0]) + "," +
             fmt_double(p.e[1]) + "," + fmt_double(p.e[2]) + "," + p.zero_t_label.name() + "," +
             p.predicted + "," + p.annotation + "," + num_or_empty(p.offset) + "," +
             p.measured + "," + num_or_empty(p.measured_agreement) + "\n";
    }
    out["config_hash"] = hash;
    out["beta"] = beta;
    out["band"] = scan.band;
    out["method"] = scan_method_name(scan.method);
    out["points"] = static_cast<std::int64_t>(scan.points.size());
    out["predicted_histogram"] = histogram;
    svg = render_phase_diagram_svg(scan);
  } else {
    throw ValidationError("phase_scan.mode must be \"zero\" or \"low\"");
  }

  write_text_file((fs::path(ov.out_dir) / "diagram.csv").string(), csv);
  write_text_file((fs::path(ov.out_dir) / "diagram.svg").string(),
                  "<!-- config_hash " + hash + " convention " + std::string(kConventionTag) +
                      " -->\n" + svg);
  write_json_file(fs::path(ov.out_dir) / "summary.json", out);
  return 0;
}

int run_uniqueness(const json& cfg, const Overrides& ov) {
  const ModelPoint mp = parse_model(cfg);
  const Temperature T = parse_temperature(cfg);
  const HexTorus lat = parse_lattice(cfg);
  const json sec = cfg.contains("uniqueness") ? cfg.at("uniqueness") : json::object();

  std::vector<double> betas{1, 2, 4, 8};
  if (sec.contains("betas")) {
    if (!sec.at("betas").is_array() || sec.at("betas").empty()) {
      throw ValidationError("uniqueness.betas must be a non-empty array of numbers");
    }
    betas.clear();
    for (const auto& b : sec.at("betas")) {
      if (!b.is_number()) throw ValidationError("uniqueness.betas must hold numbers");
      betas.push_back(b.get<double>());
    }
  }
  const double delta = get_num_or(sec, "delta", 0.05, "uniqueness");
  EnumerateOptions eopts;
  eopts.cap = static_cast<int>(get_int_or(sec, "cap", 20, "uniqueness"));
  eopts.threads = ov.threads;
  eopts.marginals = false;

  const std::string hash = effective_hash(cfg, "uniqueness", 0, false);
  const VertexEnergies e = mp.energies;
  const RegionLabel label = classify(e);

  // Certificate and the full conditional table, valid at any parameter point.
  const UniquenessCertificate cert = disagreement_certificate(e, T);
  {
    std::string csv = csv_preamble(hash) +
                      "ring,canonical,dihedral_class,fill_count,energy_empty,energy_fill,"
                      "p_fill\n";
    for (int r = 0; r < NeighborBoundary::kCount; ++r) {
      const NeighborBoundary b{static_cast<std::uint8_t>(r)};
      const auto w = single_site_conditional(b, e, T);
      csv += std::to_string(r) + "," + std::to_string(b.canonical()) + "," +
             std::to_string(b.dihedral_class()) + "," + std::to_string(b.fill_count()) + "," +
             fmt_double(w.energy_empty) + "," + fmt_double(w.energy_fill) + "," +
             fmt_double(w.p_fill) + "\n";
    }
    write_text_file((fs::path(ov.out_dir) / "conditional_table.csv").string(), csv);
  }

  json out = json_header(e, T.t);
  out["format_version"] = 1;
  out["command"] = "uniqueness";
  out["config_hash"] = hash;
  out["label"] = label.name();
  out["certificate"] = {{"p_i", cert.p_i},
                        {"p_c", cert.p_c},
                        {"unique", cert.unique},
                        {"p_high", cert.p_high},
                        {"p_low", cert.p_low},
                        {"witness_high_ring", cert.witness_high.ring},
                        {"witness_low_ring", cert.witness_low.ring}};

  // The reflection bound, density window and hard-hexagon convergence live
  // on the E-C transition line with e_F >= e_H.
  RegionLabel ec;
  ec.minimal = {true, true, false, false};
  const bool applicable = label == ec && e.f >= e.h;
  out["ec_line_analysis"] = applicable;

  const std::string na = "# not applicable: needs the E-C transition line with e_F >= e_H "
                         "(label here: " + label.name() + ")\n";

  if (applicable) {
    const DecayReport decay = chessboard_decay_report(e, lat, betas, eopts);
    std::string csv = csv_preamble(hash) +
                      "beta,vertex_HF_prob,bound,respected,literal_bound,literal_respected\n";
    for (std::size_t k = 0; k < decay.betas.size(); ++k) {
      csv += fmt_double(decay.betas[k]) + "," + fmt_double(decay.measured[k]) + "," +
             fmt_double(decay.bound[k]) + "," + (decay.respected[k] ? "1" : "0") + "," +
             fmt_double(decay.literal_bound[k]) + "," +
             (decay.literal_respected[k] ? "1" : "0") + "\n";
    }
    write_text_file((fs::path(ov.out_dir) / "decay.csv").string(), csv);
    out["decay_fitted_rate"] = decay.fitted_rate;

    const DensityReport density = no_domination_check(e, lat, betas, delta, eopts);
    csv = csv_preamble(hash) + "beta,filled_density,inside_window\n";
    for (std::size_t k = 0; k < density.betas.size(); ++k) {
      csv += fmt_double(density.betas[k]) + "," + fmt_double(density.filled_density[k]) + "," +
             (density.inside[k] ? "1" : "0") + "\n";
    }
    write_text_file((fs::path(ov.out_dir) / "no_domination.csv").string(), csv);
    out["no_domination_all_inside"] = density.all_inside;
    out["no_domination_delta"] = density.delta;

    DomainSpec dspec;
    dspec.i0 = 1;
    dspec.j0 = 1;
    dspec.width = 3;
    dspec.height = 3;
    if (sec.contains("domain")) dspec = parse_domain(sec.at("domain"), "uniqueness.domain");
    const HexDomain domain = dspec.realize(lat);
    const ConvergenceReport conv =
        hard_hexagon_convergence(domain, e, betas, nullptr, eopts);
    csv = csv_preamble(hash) + "beta,tv_distance\n";
    for (std::size_t k = 0; k < conv.betas.size(); ++k) {
      csv += fmt_double(conv.betas[k]) + "," + fmt_double(conv.tv_distance[k]) + "\n";
    }
    write_text_file((fs::path(ov.out_dir) / "convergence.csv").string(), csv);
    out["convergence_final_tv"] = conv.tv_distance.back();
  } else {
    const std::string stub_decay =
        na + "beta,vertex_HF_prob,bound,respected,literal_bound,literal_respected\n";
    write_text_file((fs::path(ov.out_dir) / "decay.csv").string(), stub_decay);
    write_text_file((fs::path(ov.out_dir) / "no_domination.csv").string(),
                    na + "beta,filled_density,inside_window\n");
    write_text_file((fs::path(ov.out_dir) / "convergence.csv").string(),
                    na + "beta,tv_distance\n");
  }

  write_json_file(fs::path(ov.out_dir) / "certificate.json", out);
  return 0;
}

int run_render(const json& cfg, const Overrides& ov) {
  if (!cfg.contains("render")) throw ValidationError("config needs a 'render' section");
  const json& sec = cfg.at("render");
  const std::string input = get_str(sec, "input", "render");

  std::ifstream in(input, std::ios::binary);
  if (!in) throw ValidationError("cannot open input configuration: " + input);
  const HexConfigData data = read_hexconfig(in);
  const HexTorus lat(data.width, data.height);
  const Configuration config = data.realize(lat);

  RenderOptions opts;
  opts.hex_size = get_num_or(sec, "hex_size", opts.hex_size, "render");
  opts.vertex_overlay = get_bool_or(sec, "vertex_overlay", true, "render");

  const std::string hash =
      hex64(fnv1a(cfg.dump() + "|command=render|input=" + write_hexconfig(config)));
  write_text_file((fs::path(ov.out_dir) / "render.svg").string(),
                  "<!-- config_hash " + hash + " convention " + std::string(kConventionTag) +
                      " -->\n" + render_configuration_svg(config, opts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hexmark: exact and Monte Carlo tools for isometry-invariant binary fields on "
               "the hexagonal lattice"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  std::int64_t threads = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--seed", seed, "override the RNG seed");
    cmd->add_option("--threads", threads, "worker threads (0 = all hardware threads)");
    cmd->add_option("--out", out_dir, "output directory (must exist)");
  };

  add_common(app.add_subcommand(
      "enumerate", "exact partition function, expectations and marginals on a small system"));
  add_common(app.add_subcommand("sample", "single-flip Metropolis or Glauber chain"));
  add_common(app.add_subcommand(
      "phase-scan", "label the energy sphere at zero or low temperature"));
  add_common(app.add_subcommand(
      "uniqueness", "disagreement certificate, reflection bound and hard-hexagon limit"));
  add_common(app.add_subcommand("render", "draw a stored configuration as SVG"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? 0 : 2;
  }

  try {
    if (seed < -1) throw ValidationError("--seed must be non-negative");
    if (threads < -1) throw ValidationError("--threads must be non-negative");

    Overrides ov;
    if (seed >= 0) ov.seed = static_cast<std::uint64_t>(seed);
    ov.threads = threads >= 0 ? static_cast<int>(threads) : 0;
    ov.out_dir = out_dir;
    ov.config_path = config_path;
    if (threads > 0) {
      setenv(kThreadsEnvVar, std::to_string(threads).c_str(), 1);
    }

    if (!fs::exists(ov.out_dir) || !fs::is_directory(ov.out_dir)) {
      throw ValidationError("output directory does not exist: " + ov.out_dir);
    }

    json cfg;
    {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw ValidationError("cannot open config: " + config_path);
      try {
        cfg = json::parse(in);
      } catch (const json::exception& ex) {
        throw ValidationError(std::string("config is not valid JSON: ") + ex.what());
      }
    }
    validate_top_level(cfg);

    if (app.got_subcommand("enumerate")) return run_enumerate(cfg, ov);
    if (app.got_subcommand("sample")) return run_sample(cfg, ov);
    if (app.got_subcommand("phase-scan")) return run_phase_scan(cfg, ov);
    if (app.got_subcommand("uniqueness")) return run_uniqueness(cfg, ov);
    return run_render(cfg, ov);
  } catch (const ResourceCapError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  } catch (const ValidationError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
