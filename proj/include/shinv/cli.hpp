#pragma once

// Command-line driver: verify, scan and spectrum subcommands.
// Exit codes: 0 every verdict passes, 1 some verdict fails, 2 input or config error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shinv/shinv.hpp"

namespace shinv::cli {

using json = nlohmann::ordered_json;

class ConfigError : public Error {
public:
  using Error::Error;
};

enum class Command { verify, scan, spectrum };

inline const std::vector<std::string> &known_checks() {
  static const std::vector<std::string> v{"translation", "compatibility", "infeld_hull",
                                          "algebra",     "equivalence",   "remainder",
                                          "spectrum"};
  return v;
}

inline const std::vector<std::string> &default_checks() {
  static const std::vector<std::string> v{"translation", "compatibility", "infeld_hull",
                                          "algebra", "equivalence"};
  return v;
}

struct Tolerances {
  double translation = 1e-12;
  double identity = 1e-9;
  double spectrum = 1e-4;
};

struct RunConfig {
  Command command = Command::verify;
  std::vector<FamilyTag> families;
  bool all_families = true;
  std::optional<ParamPoint> params;
  std::optional<int> sample_count;
  std::uint64_t seed = 1;
  std::vector<double> m_offsets{0.0, -1.0, -2.0};
  GridSpec grid;
  int spectral_points = 4000;
  int levels = 5;
  std::vector<std::string> checks = default_checks();
  Tolerances tol;
  std::string format = "json";
  std::string out;
  int jobs = 1;
  bool timestamp = true;
  std::optional<Perturbation> perturbation;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? "" : item.substr(a, b - a + 1));
  }
  return out;
}

inline double parse_number(const std::string &s, const std::string &what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw ConfigError("cannot read " + what + " from '" + s + "'");
  return v;
}

inline std::vector<FamilyTag> parse_families(const std::string &s, bool &all) {
  all = s == "all";
  if (all)
    return {all_family_tags.begin(), all_family_tags.end()};
  std::vector<FamilyTag> out;
  for (const auto &t : split(s, ','))
    out.push_back(parse_family_tag(t));
  return out;
}

inline ParamPoint params_from_json(const json &j) {
  if (!j.is_object())
    throw ConfigError("params must be an object of numbers");
  ParamPoint p;
  bool has_m = false;
  for (const auto &[k, v] : j.items()) {
    if (!v.is_number())
      throw ConfigError("parameter '" + k + "' is not a number");
    if (k == "m") {
      p.m = v.get<double>();
      has_m = true;
    } else {
      p.constants[k] = v.get<double>();
    }
  }
  if (!has_m)
    throw ConfigError("params need a value for m");
  return p;
}

inline json read_json_file(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception &e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline ParamPoint parse_params(const std::string &s) {
  if (s.find('=') == std::string::npos)
    return params_from_json(read_json_file(s));
  json j = json::object();
  for (const auto &kv : split(s, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected name=value in '" + kv + "'");
    const std::string name = kv.substr(0, eq);
    j[name] = parse_number(kv.substr(eq + 1), "parameter '" + name + "'");
  }
  return params_from_json(j);
}

inline std::vector<std::string> parse_checks(const std::string &s) {
  if (s == "all")
    return known_checks();
  return split(s, ',');
}

inline void parse_tolerances(const std::string &s, Command cmd, Tolerances &tol) {
  if (s.find('=') == std::string::npos) {
    const double v = parse_number(s, "tolerance");
    (cmd == Command::spectrum ? tol.spectrum : tol.identity) = v;
    return;
  }
  for (const auto &kv : split(s, ',')) {
    const auto eq = kv.find('=');
    const std::string name = kv.substr(0, eq);
    if (eq == std::string::npos)
      throw ConfigError("expected name=value in '" + kv + "'");
    const double v = parse_number(kv.substr(eq + 1), "tolerance '" + name + "'");
    if (name == "translation")
      tol.translation = v;
    else if (name == "identity")
      tol.identity = v;
    else if (name == "spectrum")
      tol.spectrum = v;
    else
      throw ConfigError("unknown tolerance '" + name + "'");
  }
}

template <class T> T get_as(const json &j, const std::string &key) {
  try {
    return j.get<T>();
  } catch (const json::exception &) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

inline void apply_config(RunConfig &cfg, const json &j) {
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  for (const auto &[key, v] : j.items()) {
    if (key == "family") {
      if (v.is_array()) {
        cfg.families.clear();
        cfg.all_families = false;
        for (const auto &t : v)
          cfg.families.push_back(parse_family_tag(get_as<std::string>(t, key)));
      } else {
        cfg.families = parse_families(get_as<std::string>(v, key), cfg.all_families);
      }
    } else if (key == "params") {
      cfg.params = params_from_json(v);
    } else if (key == "sample") {
      for (const auto &[sk, sv] : v.items()) {
        if (sk == "count")
          cfg.sample_count = get_as<int>(sv, "sample.count");
        else if (sk == "seed")
          cfg.seed = get_as<std::uint64_t>(sv, "sample.seed");
        else
          throw ConfigError("unknown config field 'sample." + sk + "'");
      }
    } else if (key == "m_list") {
      cfg.m_offsets = get_as<std::vector<double>>(v, key);
    } else if (key == "grid") {
      for (const auto &[gk, gv] : v.items()) {
        if (gk == "n_points")
          cfg.grid.n_points = get_as<int>(gv, "grid.n_points");
        else if (gk == "boundary_margin")
          cfg.grid.boundary_margin = get_as<double>(gv, "grid.boundary_margin");
        else if (gk == "pole_exclusion_radius")
          cfg.grid.pole_exclusion_radius = get_as<double>(gv, "grid.pole_exclusion_radius");
        else if (gk == "spectral_points")
          cfg.spectral_points = get_as<int>(gv, "grid.spectral_points");
        else
          throw ConfigError("unknown config field 'grid." + gk + "'");
      }
    } else if (key == "checks") {
      cfg.checks = get_as<std::vector<std::string>>(v, key);
    } else if (key == "tolerances") {
      for (const auto &[tk, tv] : v.items()) {
        const double t = get_as<double>(tv, "tolerances." + tk);
        if (tk == "translation")
          cfg.tol.translation = t;
        else if (tk == "identity")
          cfg.tol.identity = t;
        else if (tk == "spectrum")
          cfg.tol.spectrum = t;
        else
          throw ConfigError("unknown config field 'tolerances." + tk + "'");
      }
    } else if (key == "levels") {
      cfg.levels = get_as<int>(v, key);
    } else if (key == "format") {
      cfg.format = get_as<std::string>(v, key);
    } else if (key == "out") {
      cfg.out = get_as<std::string>(v, key);
    } else if (key == "jobs") {
      cfg.jobs = get_as<int>(v, key);
    } else if (key == "timestamp") {
      cfg.timestamp = get_as<bool>(v, key);
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
}

inline void validate(const RunConfig &cfg) {
  if (cfg.families.empty())
    throw ConfigError("no family selected");
  if (cfg.command == Command::verify) {
    if (cfg.checks.empty())
      throw ConfigError("at least one check must be selected");
    std::set<std::string> seen;
    for (const auto &c : cfg.checks) {
      if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
        throw ConfigError("unknown check '" + c + "'");
      if (!seen.insert(c).second)
        throw ConfigError("check '" + c + "' listed twice");
    }
  }
  if (!(cfg.tol.translation > 0) || !(cfg.tol.identity > 0) || !(cfg.tol.spectrum > 0))
    throw ConfigError("tolerances must be positive");
  if (cfg.m_offsets.empty())
    throw ConfigError("m_list must not be empty");
  if (cfg.params && cfg.families.size() != 1)
    throw ConfigError("explicit params need exactly one family");
  if (cfg.params && cfg.sample_count)
    throw ConfigError("give either params or a sample count, not both");
  if (cfg.sample_count && *cfg.sample_count < 1)
    throw ConfigError("sample count must be >= 1");
  if (cfg.levels < 1)
    throw ConfigError("levels must be >= 1 (got " + std::to_string(cfg.levels) + ")");
  if (cfg.jobs < 1)
    throw ConfigError("jobs must be >= 1");
  if (cfg.spectral_points < 64)
    throw ConfigError("spectral grid needs at least 64 points");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json or csv");
  cfg.grid.validate();
}

struct Point {
  int index;
  FamilyTag tag;
  ParamPoint params;
};

inline std::vector<Point> collect_points(const RunConfig &cfg) {
  std::vector<Point> out;
  for (auto tag : cfg.families) {
    if (cfg.params) {
      out.push_back({static_cast<int>(out.size()), tag, *cfg.params});
      continue;
    }
    const int n = cfg.sample_count.value_or(cfg.command == Command::scan ? 1 : 5);
    for (const auto &p : sample_valid_params(tag, n, cfg.seed))
      out.push_back({static_cast<int>(out.size()), tag, p});
  }
  return out;
}

inline json params_json(const ParamPoint &p) {
  json j = json::object();
  for (const auto &[k, v] : p.constants)
    j[k] = v;
  j["m"] = p.m;
  return j;
}

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline SuperpotentialFamily build(const RunConfig &cfg, const CatalogEntry &entry) {
  return cfg.perturbation ? perturb(entry.family, *cfg.perturbation) : entry.family;
}

inline std::vector<double> absolute_ms(const RunConfig &cfg, double m) {
  std::vector<double> ms;
  for (double o : cfg.m_offsets)
    ms.push_back(m + o);
  return ms;
}

// Grid valid at every m in the list and at m-1, which the chain also visits.
inline std::vector<double> identity_grid(const RunConfig &cfg, const CatalogEntry &entry,
                                         const std::vector<double> &ms) {
  std::vector<double> all = ms;
  all.push_back(entry.params.m);
  all.push_back(entry.params.m - 1);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return make_grid(entry.family, std::span<const double>(all), cfg.grid);
}

struct PointResult {
  json report;
  std::vector<json> csv_rows;
  int failures = 0;
};

inline json verdict(double residual, double tol, int &failures) {
  const bool pass = residual < tol;
  failures += pass ? 0 : 1;
  return json{{"residual", residual}, {"tolerance", tol}, {"pass", pass}};
}

inline json spectrum_json(const SpectrumResult &s) {
  return json{{"eigenvalues", s.eigenvalues}, {"error_estimate", s.error_estimate}};
}

inline PointResult run_verify_point(const RunConfig &cfg, const Point &pt) {
  const auto entry = get_family(pt.tag, pt.params);
  const auto family = build(cfg, entry);
  const double m = pt.params.m;
  const auto ms = absolute_ms(cfg, m);
  const auto grid = identity_grid(cfg, entry, ms);

  PointResult r;
  json checks = json::object();
  for (const auto &name : cfg.checks) {
    if (name == "translation") {
      checks[name] = verdict(check_translation(family, m, grid), cfg.tol.translation, r.failures);
    } else if (name == "compatibility") {
      checks[name] = verdict(check_compatibility(family, ms, grid).residual, cfg.tol.identity,
                             r.failures);
    } else if (name == "infeld_hull") {
      const auto ih = check_infeld_hull(family, grid);
      const double da = std::abs(ih.a_mean - entry.expected_a);
      const double db = std::abs(ih.b_mean - entry.expected_b);
      json j = verdict(std::max({ih.residual, da, db}), cfg.tol.identity, r.failures);
      j["constancy_residual"] = ih.residual;
      j["a"] = cplx_json(ih.a_mean);
      j["b"] = cplx_json(ih.b_mean);
      j["expected_a"] = entry.expected_a;
      j["expected_b"] = entry.expected_b;
      checks[name] = j;
    } else if (name == "algebra") {
      checks[name] = verdict(check_algebra_condition(family, m, grid), cfg.tol.identity,
                             r.failures);
    } else if (name == "equivalence") {
      const auto ch = check_equivalence_chain(family, m, grid);
      json j = verdict(ch.max(), cfg.tol.identity, r.failures);
      j["residual_12_vs_14"] = ch.r12_vs_14;
      j["residual_14_vs_15"] = ch.r14_vs_15;
      j["residual_15_vs_0"] = ch.r15_vs_0;
      checks[name] = j;
    } else if (!family.real_valued()) {
      checks[name] = json{{"skipped", "complex family unsupported for spectra"}};
    } else if (name == "remainder") {
      const auto rem = remainder(family, m, grid);
      json j = verdict(rem.flatness_residual, cfg.tol.identity, r.failures);
      j["R"] = rem.R;
      checks[name] = j;
    } else if (name == "spectrum") {
      SpectralOptions opt;
      opt.n_points = cfg.spectral_points;
      const auto iso = check_isospectrality(family, m, cfg.levels, opt);
      json j = verdict(iso.mismatch, cfg.tol.spectrum, r.failures);
      j["R"] = iso.R;
      j["levels"] = cfg.levels;
      checks[name] = j;
    }
    if (checks[name].contains("residual")) {
      const auto &c = checks[name];
      r.csv_rows.push_back(json::array({pt.index, to_string(pt.tag), m, name,
                                        c["residual"], c["tolerance"], c["pass"]}));
    }
  }
  r.report = json{{"index", pt.index},
                  {"family", to_string(pt.tag)},
                  {"params", params_json(pt.params)},
                  {"m_list", ms},
                  {"grid_points", grid.size()},
                  {"checks", checks},
                  {"pass", r.failures == 0}};
  return r;
}

inline PointResult run_spectrum_point(const RunConfig &cfg, const Point &pt) {
  const auto entry = get_family(pt.tag, pt.params);
  const auto family = build(cfg, entry);
  const double m = pt.params.m;
  // same validity gate as the identity checks
  identity_grid(cfg, entry, {m});
  SpectralOptions opt;
  opt.n_points = cfg.spectral_points;
  const auto iso = check_isospectrality(family, m, cfg.levels, opt);
  PointResult r;
  json j = verdict(iso.mismatch, cfg.tol.spectrum, r.failures);
  r.report = json{{"index", pt.index},
                  {"family", to_string(pt.tag)},
                  {"params", params_json(pt.params)},
                  {"levels", cfg.levels},
                  {"grid_points", iso.plus.grid_size},
                  {"x_lo", iso.x_lo},
                  {"x_hi", iso.x_hi},
                  {"R", iso.R},
                  {"flatness_residual", iso.flatness_residual},
                  {"mismatch", iso.mismatch},
                  {"tolerance", cfg.tol.spectrum},
                  {"pass", j["pass"]},
                  {"plus", spectrum_json(iso.plus)},
                  {"minus_shifted", spectrum_json(iso.minus_shifted)}};
  for (int i = 0; i < cfg.levels; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double lp = iso.plus.eigenvalues[k], lm = iso.minus_shifted.eigenvalues[k];
    r.csv_rows.push_back(json::array({pt.index, to_string(pt.tag), m, i, lp, lm, lm + iso.R,
                                      iso.plus.error_estimate[k],
                                      iso.minus_shifted.error_estimate[k], iso.mismatch}));
  }
  return r;
}

// Points run concurrently; results land in their own slot, so order is stable.
template <class F>
std::vector<PointResult> run_points(const std::vector<Point> &pts, int jobs, F &&fn) {
  std::vector<PointResult> results(pts.size());
  std::vector<std::exception_ptr> errors(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        results[i] = fn(pts[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), pts.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return results;
}

inline std::string csv_cell(const json &v) {
  if (v.is_number_float())
    return fmt17(v.get<double>());
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_boolean())
    return v.get<bool>() ? "true" : "false";
  return v.dump();
}

inline std::string csv(const std::vector<std::string> &header,
                       const std::vector<json> &rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i)
    s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      s += (i ? "," : "") + csv_cell(row[i]);
    s += "\n";
  }
  return s;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string command_name(Command c) {
  switch (c) {
  case Command::verify:
    return "verify";
  case Command::scan:
    return "scan";
  case Command::spectrum:
    return "spectrum";
  }
  return "";
}

inline json header_json(const RunConfig &cfg) {
  json h{{"tool", "shinv"}, {"command", command_name(cfg.command)}};
  if (cfg.timestamp)
    h["timestamp"] = utc_now();
  json c = json::object();
  json fams = json::array();
  for (auto t : cfg.families)
    fams.push_back(to_string(t));
  c["families"] = fams;
  if (cfg.params)
    c["params"] = params_json(*cfg.params);
  else
    c["sample"] = {{"count", cfg.sample_count.value_or(cfg.command == Command::scan ? 1 : 5)},
                   {"seed", cfg.seed}};
  c["m_list"] = cfg.m_offsets;
  c["grid"] = {{"n_points", cfg.grid.n_points},
               {"boundary_margin", cfg.grid.boundary_margin},
               {"pole_exclusion_radius", cfg.grid.pole_exclusion_radius},
               {"spectral_points", cfg.spectral_points}};
  if (cfg.command == Command::verify)
    c["checks"] = cfg.checks;
  if (cfg.command != Command::scan)
    c["levels"] = cfg.levels;
  c["tolerances"] = {{"translation", cfg.tol.translation},
                     {"identity", cfg.tol.identity},
                     {"spectrum", cfg.tol.spectrum}};
  if (cfg.perturbation)
    c["perturbation"] = {{"kind", to_string(cfg.perturbation->kind)},
                         {"size", cfg.perturbation->size}};
  h["config"] = c;
  return h;
}

struct Output {
  std::string text;
  int exit_code = 0;
};

inline Output cmd_verify(const RunConfig &cfg) {
  const auto pts = collect_points(cfg);
  const auto results =
      run_points(pts, cfg.jobs, [&](const Point &p) { return run_verify_point(cfg, p); });
  int failures = 0;
  json points = json::array();
  std::vector<json> rows;
  for (const auto &r : results) {
    failures += r.failures;
    points.push_back(r.report);
    rows.insert(rows.end(), r.csv_rows.begin(), r.csv_rows.end());
  }
  Output o;
  o.exit_code = failures ? 1 : 0;
  if (cfg.format == "csv") {
    o.text = csv({"index", "family", "m", "check", "residual", "tolerance", "pass"}, rows);
  } else {
    json doc = header_json(cfg);
    doc["points"] = points;
    doc["summary"] = {{"points", pts.size()}, {"failed_checks", failures},
                      {"pass", failures == 0}};
    o.text = doc.dump(2) + "\n";
  }
  return o;
}

inline Output cmd_spectrum(RunConfig cfg) {
  if (cfg.all_families)
    std::erase_if(cfg.families, [](FamilyTag t) { return !is_real_family(t); });
  for (auto t : cfg.families)
    if (!is_real_family(t))
      throw UnsupportedError("complex family unsupported for spectra: " +
                             std::string(to_string(t)));
  const auto pts = collect_points(cfg);
  const auto results =
      run_points(pts, cfg.jobs, [&](const Point &p) { return run_spectrum_point(cfg, p); });
  int failures = 0;
  json points = json::array();
  std::vector<json> rows;
  for (const auto &r : results) {
    failures += r.failures;
    points.push_back(r.report);
    rows.insert(rows.end(), r.csv_rows.begin(), r.csv_rows.end());
  }
  Output o;
  o.exit_code = failures ? 1 : 0;
  if (cfg.format == "csv") {
    o.text = csv({"index", "family", "m", "level", "lambda_plus", "lambda_minus",
                  "lambda_minus_plus_R", "error_plus", "error_minus", "mismatch"},
                 rows);
  } else {
    json doc = header_json(cfg);
    doc["points"] = points;
    doc["summary"] = {{"points", pts.size()}, {"failed", failures}, {"pass", failures == 0}};
    o.text = doc.dump(2) + "\n";
  }
  return o;
}

inline Output cmd_scan(const RunConfig &cfg) {
  const auto pts = collect_points(cfg);
  if (pts.size() != 1)
    throw ConfigError("scan needs a single parameter point (got " +
                      std::to_string(pts.size()) + ")");
  const auto &pt = pts.front();
  const auto entry = get_family(pt.tag, pt.params);
  const auto family = build(cfg, entry);
  const double m = pt.params.m;
  const auto ms = absolute_ms(cfg, m);
  const auto grid = identity_grid(cfg, entry, ms);

  std::vector<std::string> header{"x"};
  for (double mm : ms) {
    header.push_back("eps_re[m=" + fmt17(mm) + "]");
    header.push_back("eps_im[m=" + fmt17(mm) + "]");
  }
  const bool real = family.real_valued();
  if (real) {
    header.insert(header.end(), {"V_minus", "V_plus"});
  } else {
    header.insert(header.end(), {"V_minus_re", "V_minus_im", "V_plus_re", "V_plus_im"});
  }
  std::vector<json> rows;
  for (double x : grid) {
    json row = json::array({x});
    for (double mm : ms) {
      const cplx e = compatibility_lhs(family, mm, x);
      row.push_back(e.real());
      row.push_back(e.imag());
    }
    const cplx w = eval_W(family, m, x), dw = eval_W_deriv(family, m, x);
    const cplx vm = w * w - dw, vp = w * w + dw;
    if (real) {
      row.push_back(vm.real());
      row.push_back(vp.real());
    } else {
      row.insert(row.end(), {vm.real(), vm.imag(), vp.real(), vp.imag()});
    }
    rows.push_back(std::move(row));
  }
  Output o;
  if (cfg.format == "csv") {
    o.text = csv(header, rows);
  } else {
    json doc = header_json(cfg);
    doc["point"] = {{"family", to_string(pt.tag)}, {"params", params_json(pt.params)},
                    {"m_list", ms}};
    doc["columns"] = header;
    doc["rows"] = rows;
    o.text = doc.dump(2) + "\n";
  }
  return o;
}

} // namespace detail

/// Parse arguments, run the subcommand and write the report. Returns the exit code.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  CLI::App app{"Shape-invariance identity and spectrum checks for rationally extended "
               "superpotentials",
               "shinv"};
  app.require_subcommand(1, 1);

  struct Raw {
    std::string config, family, params, m_list, checks, tol, format, out, perturb_kind;
    int sample = 0, grid_points = 0, jobs = 0, levels = 0;
    std::uint64_t seed = 0;
    double perturb = 0.0;
    bool no_timestamp = false;
  } raw;

  std::vector<std::pair<CLI::App *, Command>> subs;
  std::map<std::string, CLI::Option *> opt;
  auto add = [&](const char *name, const char *help, Command c) {
    auto *s = app.add_subcommand(name, help);
    subs.emplace_back(s, c);
    return s;
  };
  auto *verify = add("verify", "run identity checks on parameter points", Command::verify);
  auto *scan = add("scan", "emit eps(x) and partner potentials on a grid", Command::scan);
  auto *spectrum = add("spectrum", "compare partner spectra", Command::spectrum);
  for (auto [s, c] : subs) {
    s->add_option("--config", raw.config, "JSON run configuration");
    s->add_option("--family", raw.family, "family tag, comma list, or 'all'");
    s->add_option("--params", raw.params, "name=value,... including m, or a JSON file");
    s->add_option("--sample", raw.sample, "number of sampled parameter points per family");
    s->add_option("--seed", raw.seed, "sampler seed");
    s->add_option("--m-list", raw.m_list, "offsets added to m, default 0,-1,-2");
    s->add_option("--grid-points", raw.grid_points,
                  c == Command::spectrum ? "eigensolver grid size" : "identity grid size");
    s->add_option("--tol", raw.tol, "tolerance, or name=value,... for translation/identity/spectrum");
    s->add_option("--format", raw.format, "json or csv");
    s->add_option("--out", raw.out, "output file (default stdout)");
    s->add_option("--jobs", raw.jobs, "parameter points processed concurrently");
    s->add_flag("--no-timestamp", raw.no_timestamp, "omit the timestamp from reports");
    s->add_option("--perturb", raw.perturb)->group("");
    s->add_option("--perturb-kind", raw.perturb_kind)->group("");
    if (c == Command::verify)
      s->add_option("--checks", raw.checks, "comma list of checks, or 'all'");
    if (c != Command::scan)
      s->add_option("-k,--levels", raw.levels, "number of levels compared");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App *used = nullptr;
  Command cmd = Command::verify;
  for (auto [s, c] : subs)
    if (s->parsed()) {
      used = s;
      cmd = c;
    }
  auto given = [&](const char *name) { return used->get_option(name)->count() > 0; };

  try {
    RunConfig cfg;
    cfg.command = cmd;
    if (cmd == Command::spectrum)
      cfg.checks = {"spectrum"};
    cfg.families = detail::parse_families("all", cfg.all_families);
    if (given("--config"))
      detail::apply_config(cfg, detail::read_json_file(raw.config));
    if (given("--family"))
      cfg.families = detail::parse_families(raw.family, cfg.all_families);
    if (given("--params"))
      cfg.params = detail::parse_params(raw.params);
    if (given("--sample"))
      cfg.sample_count = raw.sample;
    if (given("--seed"))
      cfg.seed = raw.seed;
    if (given("--m-list")) {
      cfg.m_offsets.clear();
      for (const auto &s : detail::split(raw.m_list, ','))
        cfg.m_offsets.push_back(detail::parse_number(s, "m-list entry"));
    }
    if (cmd == Command::verify && given("--checks"))
      cfg.checks = detail::parse_checks(raw.checks);
    if (given("--grid-points"))
      (cmd == Command::spectrum ? cfg.spectral_points : cfg.grid.n_points) = raw.grid_points;
    if (given("--tol"))
      detail::parse_tolerances(raw.tol, cmd, cfg.tol);
    if (given("--format"))
      cfg.format = raw.format;
    if (given("--out"))
      cfg.out = raw.out;
    if (given("--jobs"))
      cfg.jobs = raw.jobs;
    if (raw.no_timestamp)
      cfg.timestamp = false;
    if (cmd != Command::scan && given("--levels"))
      cfg.levels = raw.levels;
    if (given("--perturb") || given("--perturb-kind")) {
      Perturbation p;
      if (given("--perturb"))
        p.size = raw.perturb;
      if (given("--perturb-kind"))
        p.kind = parse_perturbation_kind(raw.perturb_kind);
      cfg.perturbation = p;
    }
    detail::validate(cfg);

    detail::Output o;
    switch (cmd) {
    case Command::verify:
      o = detail::cmd_verify(cfg);
      break;
    case Command::scan:
      o = detail::cmd_scan(cfg);
      break;
    case Command::spectrum:
      o = detail::cmd_spectrum(cfg);
      break;
    }
    if (cfg.out.empty()) {
      out << o.text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      f << o.text;
      f.close();
      if (!f)
        throw ConfigError("cannot write '" + cfg.out + "'");
    }
    return o.exit_code;
  } catch (const Error &e) {
    err << "shinv: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "shinv: error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace shinv::cli
