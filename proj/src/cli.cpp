#include "qes/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qes/errors.hpp"
#include "qes/wavefunction.hpp"

namespace qes::cli {

namespace {

constexpr double kBetheTolerance = 1e-10;
constexpr double kFactorizationTolerance = 1e-8;
constexpr double kQuantizationTolerance = 1e-3;

// Errors that carry a usage meaning; everything else is a solver failure.
int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams:
    case ErrorKind::ScanConfig:
    case ErrorKind::FormulaDomain:
      return kExitUsage;
    default:
      return kExitNonConvergence;
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_cell(const Json& value) {
  std::string text;
  if (value.is_null()) return text;
  if (value.is_boolean()) {
    text = value.get<bool>() ? "true" : "false";
  } else if (value.is_number_integer()) {
    text = std::to_string(value.get<long long>());
  } else if (value.is_number()) {
    text = format_number(value.get<double>());
  } else if (value.is_string()) {
    text = value.get<std::string>();
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) text += ';';
      text += csv_cell(value[i]);
    }
  }
  if (text.find_first_of(",\"\r\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : text) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
  return text;
}

Json residuals(double termination, double field_relation, double ode_matching) {
  return Json{{"termination_residual", termination},
              {"field_relation_residual", field_relation},
              {"ode_matching_residual", ode_matching}};
}

ShootingConfig shooting_for(double field_param, const Defaults& d) {
  ShootingConfig cfg = ShootingConfig::for_field(field_param);
  cfg.rel_tol = d.shooting_rel_tol;
  cfg.abs_tol = d.shooting_abs_tol;
  return cfg;
}

// The quantization mismatch |I / pi - n_r| / max(1, n_r) where Q has two
// turning points, else 0 (check not applicable).
double quantization_mismatch(const CoulombField& field, const SemiclassicalLevel& level) {
  if (level.regime == Regime::NonRelativistic) return 0.0;
  try {
    const double integral =
        quantization_integral(field, level.l, level.energy, level.field_param);
    return std::abs(integral / std::numbers::pi - level.n_r) / std::max(1, level.n_r);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FormulaDomain) return 0.0;
    throw;
  }
}

bool bethe_passes(const BetheSolution& s, double factorization) {
  return s.bethe_residual <= kBetheTolerance && s.b_identity_residual <= kBetheTolerance &&
         factorization <= kFactorizationTolerance;
}

struct Common {
  std::string format;
  std::string out;
  std::string config;
  double m = 1.0;
  std::uint64_t seed = 0;
  CLI::Option* format_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* sub) {
    format_opt = sub->add_option("--format", format, "Output format: json or csv")
                     ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out, "Write output to PATH instead of stdout");
    m_opt = sub->add_option("--m", m, "Electron mass (default 1)");
    seed_opt = sub->add_option("--seed", seed, "Seed for the Newton multistart (default 0)");
    sub->add_option("--config", config, "JSON config file; falls back to $QES_CONFIG");
  }

  // Flags beat the config file, which beats the built-in defaults.
  Defaults resolve() {
    std::string path = config;
    if (path.empty()) {
      if (const char* env = std::getenv("QES_CONFIG")) path = env;
    }
    Defaults d = path.empty() ? Defaults{} : load_defaults(path);
    if (format_opt->count()) d.format = format;
    if (m_opt->count()) d.m = m;
    if (seed_opt->count()) d.seed = seed;
    if (!(d.m > 0.0) || !std::isfinite(d.m)) {
      throw Error(ErrorKind::InvalidParams, "mass must be positive and finite");
    }
    return d;
  }
};

struct Document {
  Json meta = Json::object();
  Json records = Json::array();
};

int emit(const Common& c, const Defaults& d, const Document& doc, std::ostream& out,
         std::ostream& err) {
  std::string text;
  if (d.format == "csv") {
    text = to_csv(doc.records);
  } else {
    Json top{{"meta", doc.meta}, {"records", doc.records}};
    text = top.dump(2) + "\n";
  }
  if (c.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << c.out << " for writing\n";
    return kExitUsage;
  }
  file << text;
  return file ? kExitOk : kExitUsage;
}

Json make_meta(std::string_view command, const std::vector<std::string>& args,
               const Defaults& d) {
  return Json{{"version", std::string(kVersion)},
              {"command", std::string(command)},
              {"args", args},
              {"seed", d.seed}};
}

// lo:hi:points, inclusive of both ends.
std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto bad = [&] {
    return Error(ErrorKind::ScanConfig,
                 "malformed range '" + text + "', expected lo:hi:points with lo <= hi");
  };
  if (parts.size() != 3) throw bad();
  double lo, hi;
  long points;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw bad();
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw bad();
    points = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (!(lo <= hi) || points < 1 || points > 100000) {
    throw bad();
  }
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (long i = 0; i < points; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  v.back() = hi;
  return v;
}

std::vector<int> parse_int_range(const std::string& text) {
  const auto colon = text.find(':');
  auto bad = [&] {
    return Error(ErrorKind::ScanConfig, "malformed l range '" + text + "', expected lo:hi");
  };
  if (colon == std::string::npos) throw bad();
  int lo, hi;
  try {
    std::size_t used = 0;
    lo = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw bad();
    hi = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (lo > hi || hi - lo > 1000) throw bad();
  std::vector<int> v;
  for (int l = lo; l <= hi; ++l) v.push_back(l);
  return v;
}

VerificationReport verify_level(const QesLevel& level, const Defaults& d) {
  if (!(level.field_param > 0.0)) {
    // A zero-field endpoint has no Gaussian tail to shoot for.
    return {level.n, level.params, level.energy, level.field_param, 1.0, 0.0, 1.0, 0, false};
  }
  return verify(level, shooting_for(level.field_param, d));
}

bool record_passed(const Json& r) { return r.at("passed").get<bool>(); }

// ---- subcommands ---------------------------------------------------------

struct SolveArgs {
  int n = 0;
  int l = 0;
  double z_alpha = 0.0;
};

int cmd_solve(const SolveArgs& a, Common& c, const std::vector<std::string>& args,
              std::ostream& out, std::ostream& err) {
  const Defaults d = c.resolve();
  const Params params(a.z_alpha, a.l, d.m);
  std::vector<QesLevel> levels = solve(a.n, params, d.scan);
  std::sort(levels.begin(), levels.end(),
            [](const QesLevel& x, const QesLevel& y) { return x.energy < y.energy; });
  Document doc;
  doc.meta = make_meta("solve", args, d);
  bool all_pass = true;
  for (const QesLevel& level : levels) {
    Json r = level_record(level, verify_level(level, d));
    all_pass = all_pass && record_passed(r);
    doc.records.push_back(std::move(r));
  }
  if (levels.empty()) {
    err << "notice: no QES level for n = " << a.n << ", l = " << a.l
        << ", Z alpha = " << Json(a.z_alpha).dump() << " ("
        << (a.n == 1 && a.l >= 0 ? "n = 1 terminates only for l < 0"
                                 : "no root of the termination conditions with |E| >= m")
        << ")\n";
  }
  const int code = emit(c, d, doc, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerification;
}

struct ScanArgs {
  int n = 0;
  int l = 0;
  std::string l_range;
  std::string z_range;
  std::string branch = "both";
  CLI::Option* l_opt = nullptr;
};

int cmd_scan(const ScanArgs& a, Common& c, const std::vector<std::string>& args,
             std::ostream& out, std::ostream& err) {
  const Defaults d = c.resolve();
  const std::vector<double> zs = parse_range(a.z_range);
  for (double z : zs) {
    if (!(z > 0.0 && z < 0.5)) {
      throw Error(ErrorKind::InvalidParams,
                  "Z alpha must satisfy 0 < Z alpha < 1/2 across the scan range");
    }
  }
  if (!a.l_range.empty() && a.l_opt->count()) {
    throw Error(ErrorKind::ScanConfig, "give either --l or --l-range, not both");
  }
  const std::vector<int> ls = a.l_range.empty() ? std::vector<int>{a.l} : parse_int_range(a.l_range);

  Document doc;
  doc.meta = make_meta("scan", args, d);
  Json gaps = Json::array();
  Json critical = Json::array();
  if (a.n == 2) {
    for (int l : ls) {
      if (l < 0) continue;
      try {
        critical.push_back(Json{{"l", l}, {"z_alpha", critical_zalpha_n2(l)}});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoCritical) throw;
      }
    }
  }
  bool all_pass = true;
  for (int l : ls) {
    for (double z : zs) {
      const Params params(z, l, d.m);
      std::vector<QesLevel> levels;
      try {
        levels = solve(a.n, params, d.scan);
      } catch (const CriticalCouplingError&) {
        gaps.push_back(Json{{"z_alpha", z}, {"l", l}, {"reason", "critical_coupling"}});
        continue;
      }
      std::erase_if(levels, [&](const QesLevel& lv) {
        if (a.branch == "positive") return lv.branch != Branch::PositiveEnergy;
        if (a.branch == "negative") return lv.branch != Branch::NegativeEnergy;
        return false;
      });
      if (levels.empty()) {
        gaps.push_back(Json{{"z_alpha", z}, {"l", l}, {"reason", "no_level"}});
        continue;
      }
      std::sort(levels.begin(), levels.end(),
                [](const QesLevel& x, const QesLevel& y) { return x.energy < y.energy; });
      for (const QesLevel& level : levels) {
        Json r = level_record(level, verify_level(level, d));
        all_pass = all_pass && record_passed(r);
        doc.records.push_back(std::move(r));
      }
    }
  }
  doc.meta["branch"] = a.branch;
  doc.meta["gaps"] = gaps;
  if (a.n == 2) doc.meta["critical_couplings"] = critical;
  const int code = emit(c, d, doc, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerification;
}

struct BetheArgs {
  int s = 0;
  int l = 0;
  std::string sign;
  double z_alpha = 0.0;
  int starts = 0;
  CLI::Option* z_opt = nullptr;
  CLI::Option* starts_opt = nullptr;
};

int cmd_bethe(const BetheArgs& a, Common& c, const std::vector<std::string>& args,
              std::ostream& out, std::ostream& err) {
  const Defaults d = c.resolve();
  const BetheProblem problem{a.l, a.s, a.sign == "attract" ? Coulomb::Attractive : Coulomb::Repulsive,
                             a.z_opt->count() ? a.z_alpha : d.bethe_zalpha, d.m};
  problem.validate();
  BetheOptions options;
  options.seed = d.seed;
  options.starts = a.starts_opt->count() ? a.starts : d.bethe_starts;
  const BetheSearch search = solve_bethe(problem, options);

  Document doc;
  doc.meta = make_meta("bethe", args, d);
  Json newton{{"starts", options.starts},
              {"converged", search.converged},
              {"failed", search.failed},
              {"wrong_sign", search.wrong_sign},
              {"duplicates", search.duplicates},
              {"solutions", search.solutions.size()}};

  auto diagnostics = [&] {
    err << "error: Newton search for s = " << problem.s << ", l = " << problem.l << " ("
        << to_string(problem.sign) << ") found no solution: " << search.converged
        << " of " << options.starts << " starts converged, " << search.wrong_sign
        << " had the wrong sign of sum x_k\n";
  };

  if (problem.s <= 2) {
    const BetheSolution exact = closed_form(problem);
    double best = std::numeric_limits<double>::infinity();
    for (const BetheSolution& sol : search.solutions) {
      double diff = 0.0;
      for (std::size_t i = 0; i < sol.zeros.size(); ++i) {
        diff = std::max(diff, std::abs(sol.zeros[i] - exact.zeros[i]));
      }
      best = std::min(best, diff);
    }
    if (!(best <= kBetheTolerance)) {
      diagnostics();
      err << "error: Newton did not reproduce the closed-form zeros\n";
      return kExitNonConvergence;
    }
    newton["max_zero_difference"] = best;
    doc.records.push_back(bethe_record(exact, "closed_form"));
  } else {
    if (search.solutions.empty()) {
      diagnostics();
      return kExitNonConvergence;
    }
    for (const BetheSolution& sol : search.solutions) {
      doc.records.push_back(bethe_record(sol, "newton"));
    }
  }
  doc.meta["newton"] = newton;
  bool all_pass = true;
  for (const Json& r : doc.records) all_pass = all_pass && record_passed(r);
  const int code = emit(c, d, doc, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerification;
}

struct SemiclassicalArgs {
  int n_r = 0;
  int l = 0;
  double z_alpha = 0.0;
  double field_param = 0.0;
  std::string regime = "all";
};

int cmd_semiclassical(const SemiclassicalArgs& a, Common& c, const std::vector<std::string>& args,
                      std::ostream& out, std::ostream& err) {
  const Defaults d = c.resolve();
  const CoulombField field(a.z_alpha, d.m);
  check_range_rule(a.n_r, a.l);
  if (!(a.field_param >= 0.0)) throw Error(ErrorKind::InvalidParams, "--a must be >= 0");

  std::vector<Regime> regimes;
  if (a.regime == "zero" || a.regime == "all") regimes.push_back(Regime::ZeroField);
  if (a.regime == "weak" || (a.regime == "all" && a.l != 0)) regimes.push_back(Regime::WeakField);
  if (a.regime == "nonrel" || a.regime == "all") regimes.push_back(Regime::NonRelativistic);

  if (a.field_param > 0.0 && !weak_field_valid(field, a.field_param)) {
    err << "warning: a = " << format_number(a.field_param)
        << " is not small against a_cr = " << format_number(field.critical_field_param())
        << "; weak-field formulas are outside their regime\n";
  }
  Document doc;
  doc.meta = make_meta("semiclassical", args, d);
  for (Regime regime : regimes) {
    const SemiclassicalLevel level =
        make_semiclassical_level(field, a.n_r, a.l, a.field_param, regime);
    doc.records.push_back(semiclassical_record(field, level));
  }
  bool all_pass = true;
  for (const Json& r : doc.records) all_pass = all_pass && record_passed(r);
  const int code = emit(c, d, doc, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerification;
}

// Re-checks one previously emitted record; returns the refreshed record.
Json reverify(const Json& in, const Defaults& d) {
  const std::string module = in.at("module").get<std::string>();
  if (module == "qes-solver") {
    const int n = in.at("n").get<int>();
    const Params params(in.at("z_alpha").get<double>(), in.at("l").get<int>(),
                        in.at("m").get<double>());
    const double energy = in.at("energy").get<double>();
    const double field_param = in.at("field_param").get<double>();
    if (!(field_param > 0.0)) {
      throw Error(ErrorKind::InvalidParams, "record has a non-positive field parameter");
    }
    const Gamma gamma = compute_gamma(params);
    const QesLevel level{n,
                         params,
                         gamma,
                         energy,
                         field_param,
                         build_table(params, energy, field_param, n + 3),
                         energy > 0 ? Branch::PositiveEnergy : Branch::NegativeEnergy,
                         false,
                         SolverVariant::GeneralScan};
    const VerificationReport report =
        verify_candidate(params, energy, field_param, shooting_for(field_param, d), n);
    Json r = level_record(level, report);
    r["variant"] = "verify";
    r["passed"] = report.passed && level.terminates();
    return r;
  }
  if (module == "nonrel-bethe") {
    const std::string sign = in.at("sign").get<std::string>();
    if (sign != "attractive" && sign != "repulsive") {
      throw Error(ErrorKind::InvalidParams, "unknown sign '" + sign + "'");
    }
    const BetheProblem problem{in.at("l").get<int>(), in.at("s").get<int>(),
                               sign == "attractive" ? Coulomb::Attractive : Coulomb::Repulsive,
                               in.at("z_alpha").get<double>(), in.at("m").get<double>()};
    const BetheSolution sol = make_solution(problem, in.at("zeros").get<std::vector<double>>());
    Json r = bethe_record(sol, "verify");
    const double e_in = in.at("energy").get<double>();
    const double b_in = in.at("b").get<double>();
    const bool consistent = std::abs(e_in - sol.energy) <= 1e-12 * std::abs(sol.energy) &&
                            std::abs(b_in - sol.b) <= 1e-12 * std::abs(sol.b);
    r["passed"] = r["passed"].get<bool>() && consistent;
    return r;
  }
  if (module == "semiclassical") {
    const CoulombField field(in.at("z_alpha").get<double>(), in.at("m").get<double>());
    const std::string regime = in.at("regime").get<std::string>();
    Regime tag;
    if (regime == "zero_field") tag = Regime::ZeroField;
    else if (regime == "weak_field") tag = Regime::WeakField;
    else if (regime == "nonrelativistic") tag = Regime::NonRelativistic;
    else throw Error(ErrorKind::InvalidParams, "unknown regime '" + regime + "'");
    const SemiclassicalLevel level = make_semiclassical_level(
        field, in.at("n_r").get<int>(), in.at("l").get<int>(), in.at("field_param").get<double>(),
        tag);
    Json r = semiclassical_record(field, level);
    const double e_in = in.at("energy").get<double>();
    r["variant"] = "verify";
    r["passed"] = r["passed"].get<bool>() &&
                  std::abs(e_in - level.energy) <= 1e-12 * std::abs(level.energy);
    return r;
  }
  throw Error(ErrorKind::InvalidParams, "unknown record module '" + module + "'");
}

int cmd_verify(const std::string& input, Common& c, const std::vector<std::string>& args,
               std::ostream& out, std::ostream& err) {
  const Defaults d = c.resolve();
  std::ifstream file(input, std::ios::binary);
  if (!file) {
    err << "error: cannot read " << input << "\n";
    return kExitUsage;
  }
  Json in;
  try {
    in = Json::parse(file);
  } catch (const Json::parse_error& e) {
    err << "error: " << input << " is not valid JSON: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!in.is_object() || !in.contains("records") || !in["records"].is_array()) {
    err << "error: " << input << " has no records array\n";
    return kExitUsage;
  }
  Document doc;
  doc.meta = make_meta("verify", args, d);
  for (const Json& record : in["records"]) {
    try {
      doc.records.push_back(reverify(record, d));
    } catch (const Json::exception& e) {
      err << "error: ill-formed record: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (doc.records.empty()) err << "warning: no records to verify\n";

  bool all_pass = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-13s %4s %4s %10s %24s %12s %12s %6s\n", "module", "n|s",
                "l", "z_alpha", "energy", "termination", "ode_match", "pass");
  err << line;
  for (const Json& r : doc.records) {
    const bool pass = record_passed(r);
    all_pass = all_pass && pass;
    const Json& res = r["residuals"];
    const int index = r.contains("n") ? r["n"].get<int>() : r.contains("s") ? r["s"].get<int>()
                                                                            : r["n_r"].get<int>();
    std::snprintf(line, sizeof line, "%-13s %4d %4d %10.6g %24.17g %12.3e %12.3e %6s\n",
                  r["module"].get<std::string>().c_str(), index, r["l"].get<int>(),
                  r["z_alpha"].get<double>(), r["energy"].get<double>(),
                  res["termination_residual"].get<double>(),
                  res["ode_matching_residual"].get<double>(), pass ? "yes" : "no");
    err << line;
  }
  const int code = emit(c, d, doc, out, err);
  if (code != kExitOk) return code;
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace

// ---- public helpers --------------------------------------------------------

Defaults load_defaults(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidParams, "cannot read config file " + path);
  Defaults d;
  try {
    const nlohmann::json j = nlohmann::json::parse(file);
    if (!j.is_object()) throw Error(ErrorKind::InvalidParams, "config must be a JSON object");
    auto unknown = [&](const std::string& key) {
      return Error(ErrorKind::InvalidParams, "unknown config key '" + key + "' in " + path);
    };
    for (const auto& [key, value] : j.items()) {
      if (key == "m") d.m = value.get<double>();
      else if (key == "seed") d.seed = value.get<std::uint64_t>();
      else if (key == "format") d.format = value.get<std::string>();
      else if (key == "scan") {
        for (const auto& [k, v] : value.items()) {
          if (k == "e_max") d.scan.e_max = v.get<double>();
          else if (k == "samples") d.scan.samples = v.get<int>();
          else throw unknown("scan." + k);
        }
      } else if (key == "bethe") {
        for (const auto& [k, v] : value.items()) {
          if (k == "zalpha") d.bethe_zalpha = v.get<double>();
          else if (k == "starts") d.bethe_starts = v.get<int>();
          else throw unknown("bethe." + k);
        }
      } else if (key == "shooting") {
        for (const auto& [k, v] : value.items()) {
          if (k == "rel_tol") d.shooting_rel_tol = v.get<double>();
          else if (k == "abs_tol") d.shooting_abs_tol = v.get<double>();
          else throw unknown("shooting." + k);
        }
      } else {
        throw unknown(key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidParams, "bad config file " + path + ": " + e.what());
  }
  if (d.format != "json" && d.format != "csv") {
    throw Error(ErrorKind::InvalidParams, "config format must be json or csv");
  }
  return d;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "module",        "variant",   "z_alpha",     "l",
      "m",             "n",         "s",           "n_r",
      "sign",          "branch",    "regime",      "energy",
      "field_param",   "b",         "omega_l",     "zeros",
      "nodes",         "tail_relative_error",      "termination_residual",
      "field_relation_residual",  "ode_matching_residual",    "passed"};
  return columns;
}

Json level_record(const QesLevel& level, const VerificationReport& report) {
  return Json{{"module", "qes-solver"},
              {"variant", std::string(to_string(level.variant))},
              {"z_alpha", level.params.z_alpha()},
              {"l", level.params.l()},
              {"m", level.params.m()},
              {"n", level.n},
              {"branch", std::string(to_string(level.branch))},
              {"energy", level.energy},
              {"field_param", level.field_param},
              {"nodes", report.nodes_f},
              {"tail_relative_error", report.tail_relative_error},
              {"residuals", residuals(level.termination_residual(), level.field_relation_residual(),
                                      report.matching_residual)},
              {"passed", report.passed && level.terminates()}};
}

Json bethe_record(const BetheSolution& solution, std::string_view variant) {
  const double factorization = factorization_residual(solution);
  return Json{{"module", "nonrel-bethe"},
              {"variant", std::string(variant)},
              {"z_alpha", solution.problem.z_alpha},
              {"l", solution.problem.l},
              {"m", solution.problem.m},
              {"s", solution.problem.s},
              {"sign", std::string(to_string(solution.problem.sign))},
              {"energy", solution.energy},
              {"b", solution.b},
              {"omega_l", solution.omega_l},
              {"zeros", solution.zeros},
              {"nodes", assemble_wavefunction(solution).nodes()},
              {"residuals", residuals(solution.bethe_residual, solution.b_identity_residual,
                                      factorization)},
              {"passed", bethe_passes(solution, factorization)}};
}

Json semiclassical_record(const CoulombField& field, const SemiclassicalLevel& level) {
  const double mismatch = quantization_mismatch(field, level);
  return Json{{"module", "semiclassical"},
              {"variant", std::string(to_string(level.regime))},
              {"z_alpha", field.z_alpha()},
              {"l", level.l},
              {"m", field.m()},
              {"n_r", level.n_r},
              {"regime", std::string(to_string(level.regime))},
              {"energy", level.energy},
              {"field_param", level.field_param},
              {"residuals", residuals(mismatch, 0.0, 0.0)},
              {"passed", mismatch <= kQuantizationTolerance}};
}

std::string to_csv(const Json& records) {
  const auto& columns = csv_columns();
  std::string text;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text += ',';
    text += columns[i];
  }
  text += "\r\n";
  for (const Json& r : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) text += ',';
      const std::string& col = columns[i];
      if (r.contains(col)) {
        text += csv_cell(r[col]);
      } else if (r.contains("residuals") && r["residuals"].contains(col)) {
        text += csv_cell(r["residuals"][col]);
      }
    }
    text += "\r\n";
  }
  return text;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);

  CLI::App app{"Quasi-exact levels of a planar Dirac electron in Coulomb + magnetic fields", "qes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::map<std::string, std::unique_ptr<Common>> commons;
  auto common_for = [&](CLI::App* sub) {
    auto& c = commons[sub->get_name()];
    c = std::make_unique<Common>();
    c->attach(sub);
    return c.get();
  };

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve for the QES levels at one (n, l, Z alpha)");
  solve_cmd->add_option("--n", solve_args.n, "Termination index n >= 1")->required();
  solve_cmd->add_option("--l", solve_args.l, "Angular integer l")->required();
  solve_cmd->add_option("--zalpha", solve_args.z_alpha, "Coupling, 0 < Z alpha < 1/2")->required();
  Common* solve_common = common_for(solve_cmd);

  ScanArgs scan_args;
  CLI::App* scan_cmd = app.add_subcommand("scan", "Sweep Z alpha (and optionally l)");
  scan_cmd->add_option("--n", scan_args.n, "Termination index n >= 1")->required();
  scan_args.l_opt = scan_cmd->add_option("--l", scan_args.l, "Angular integer l (default 0)");
  scan_cmd->add_option("--l-range", scan_args.l_range, "Inclusive integer range lo:hi");
  scan_cmd->add_option("--zalpha-range", scan_args.z_range, "Grid lo:hi:points")->required();
  scan_cmd->add_option("--branch", scan_args.branch, "positive, negative or both")
      ->check(CLI::IsMember({"positive", "negative", "both"}));
  Common* scan_common = common_for(scan_cmd);

  BetheArgs bethe_args;
  CLI::App* bethe_cmd = app.add_subcommand("bethe", "Nonrelativistic Bethe-ansatz solutions");
  bethe_cmd->add_option("--s", bethe_args.s, "Polynomial degree s >= 1")->required();
  bethe_cmd->add_option("--l", bethe_args.l, "Angular integer l")->required();
  bethe_cmd->add_option("--sign", bethe_args.sign, "attract or repulse")
      ->required()
      ->check(CLI::IsMember({"attract", "repulse"}));
  bethe_args.z_opt = bethe_cmd->add_option("--zalpha", bethe_args.z_alpha,
                                           "|Z| alpha, scales omega_L and E (default 0.1)");
  bethe_args.starts_opt =
      bethe_cmd->add_option("--starts", bethe_args.starts, "Newton starts (default 50)");
  Common* bethe_common = common_for(bethe_cmd);

  SemiclassicalArgs semi_args;
  CLI::App* semi_cmd =
      app.add_subcommand("semiclassical", "Zero-field, weak-field and nonrelativistic energies");
  semi_cmd->add_option("--n-r", semi_args.n_r, "Radial quantum number")->required();
  semi_cmd->add_option("--l", semi_args.l, "Angular integer l")->required();
  semi_cmd->add_option("--zalpha", semi_args.z_alpha, "Coupling, 0 < Z alpha <= 1/2")->required();
  semi_cmd->add_option("--a", semi_args.field_param, "Field parameter a = eB/2 (default 0)");
  semi_cmd->add_option("--regime", semi_args.regime, "zero, weak, nonrel or all")
      ->check(CLI::IsMember({"zero", "weak", "nonrel", "all"}));
  Common* semi_common = common_for(semi_cmd);

  std::string verify_input;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Re-check records from a JSON output file");
  verify_cmd->add_option("input", verify_input, "JSON file written by another subcommand")
      ->required();
  Common* verify_common = common_for(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, *solve_common, args, out, err);
    if (scan_cmd->parsed()) return cmd_scan(scan_args, *scan_common, args, out, err);
    if (bethe_cmd->parsed()) return cmd_bethe(bethe_args, *bethe_common, args, out, err);
    if (semi_cmd->parsed()) return cmd_semiclassical(semi_args, *semi_common, args, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify_input, *verify_common, args, out, err);
  } catch (const CriticalCouplingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace qes::cli
