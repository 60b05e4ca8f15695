// Acceptance run: one PASS/FAIL line per criterion, sub-checks indented
// beneath it. Tolerances and runtime budgets are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qes/bethe.hpp"
#include "qes/cli.hpp"
#include "qes/errors.hpp"
#include "qes/ode_oracle.hpp"
#include "qes/qes_solver.hpp"
#include "qes/semiclassical.hpp"
#include "qes/wavefunction.hpp"
#include "schema_check.hpp"

using namespace qes;

namespace {

struct Check {
  std::string what;
  bool ok;
  std::string detail;
};

class Report {
 public:
  void check(const std::string& what, bool ok, const std::string& detail = "") {
    checks_.push_back({what, ok, detail});
  }
  bool ok() const {
    for (const auto& c : checks_) {
      if (!c.ok) return false;
    }
    return !checks_.empty();
  }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::vector<Check> checks_;
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_s;
  std::function<void(Report&)> body;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3g", x); }

// Levels the later criteria re-check with the ODE oracle and node counts.
std::vector<QesLevel> g_levels;

void keep(const std::vector<QesLevel>& levels) {
  g_levels.insert(g_levels.end(), levels.begin(), levels.end());
}

void ac1(Report& r) {
  const Params p(0.3, -1);
  const auto levels = solve_n1(p);
  r.check("one level", levels.size() == 1, std::to_string(levels.size()) + " returned");
  if (levels.empty()) return;
  keep(levels);
  const QesLevel& lv = levels[0];
  r.check("E = -1.25", std::abs(lv.energy + 1.25) <= 1e-12, "E = " + fmt("%.17g", lv.energy));
  r.check("a = 0.3125", std::abs(lv.field_param - 0.3125) <= 1e-12,
          "a = " + fmt("%.17g", lv.field_param));
  const double formula = -p.m() / (2 * (lv.gamma.value + p.l() + 1));
  r.check("E = -m / (2(gamma + l + 1))", std::abs(lv.energy - formula) <= 1e-12,
          "formula " + fmt("%.17g", formula));
  const auto& a = lv.coefficients.alphas;
  r.check("|alpha_1|, |alpha_2| <= 1e-12", std::abs(a[1]) <= 1e-12 && std::abs(a[2]) <= 1e-12,
          sci(a[1]) + ", " + sci(a[2]));
}

void ac2(Report& r) {
  const double z0 = critical_zalpha_n2(0), z1 = critical_zalpha_n2(1);
  r.check("l = 0 vs 1/2.936", std::abs(z0 * 2.936 - 1) <= 1e-3,
          fmt("%.9f", z0) + " (1/" + fmt("%.4f", 1 / z0) + ")");
  r.check("l = 1 vs 1/2.316", std::abs(z1 * 2.316 - 1) <= 1e-3,
          fmt("%.9f", z1) + " (1/" + fmt("%.4f", 1 / z1) + ")");
}

void ac3(Report& r) {
  double worst_term = 0.0, worst_field = 0.0;
  int count = 0, bad_sign = 0;
  for (double z : {0.1, 0.2, 0.3}) {
    for (int l = -2; l <= 1; ++l) {
      const auto levels = solve_n2(Params(z, l));
      keep(levels);
      for (const auto& lv : levels) {
        ++count;
        const auto& a = lv.coefficients.alphas;
        const double scale = lv.coefficients.alpha_scale();
        worst_term = std::max(worst_term, std::max(std::abs(a[2]), std::abs(a[3])) / scale);
        worst_field = std::max(worst_field, lv.field_relation_residual());
        if (l < 0 && lv.energy > -lv.params.m()) ++bad_sign;
      }
    }
  }
  r.check("levels found", count > 0, std::to_string(count) + " levels");
  r.check("|alpha_2|, |alpha_3| <= 1e-10 max|alpha_k|", worst_term <= 1e-10, "worst " + sci(worst_term));
  r.check("field relation residual <= 1e-10", worst_field <= 1e-10, "worst " + sci(worst_field));
  r.check("l < 0 levels have E <= -m", bad_sign == 0, std::to_string(bad_sign) + " violations");
}

void ac4(Report& r) {
  // Relative error in the binding energy, with a floor for |E| ~ m.
  auto rel = [](double exact, double approx) {
    return std::abs(approx - exact) / (std::abs(exact) - 1.0 + 1e-6);
  };
  for (int l : {0, 1}) {
    const Params p(0.05, l);
    const auto n2 = solve_n2(p);
    const auto n3 = solve_n3(p);
    keep(n2);
    keep(n3);
    for (const auto& lv : n2) {
      const bool pos = lv.energy > 0;
      const double e = pos ? approx::n2_low_positive(p) : approx::n2_low_negative(p);
      const double err = rel(lv.energy, e);
      r.check(std::string("n=2 l=") + std::to_string(l) + (pos ? " E3+" : " E3-"), err <= 5e-3,
              "exact " + fmt("%.12f", lv.energy) + " approx " + fmt("%.12f", e) + " rel " + sci(err));
    }
    for (const auto& lv : n3) {
      const bool pos = lv.energy > 0;
      const double e = pos ? approx::n3_low_positive(p) : approx::n3_low_negative(p);
      const double err = rel(lv.energy, e);
      r.check(std::string("n=3 l=") + std::to_string(l) + (pos ? " E6+" : " E6-"), err <= 5e-3,
              "exact " + fmt("%.12f", lv.energy) + " approx " + fmt("%.12f", e) + " rel " + sci(err));
    }
  }

  const Params p(0.45, 0);
  const auto n2 = solve_n2(p);
  const auto n3 = solve_n3(p);
  keep(n2);
  keep(n3);
  const auto e5 = approx::n2_high(p);
  const QesLevel* n2_pos = nullptr;
  for (const auto& lv : n2) {
    if (lv.energy > 0) n2_pos = &lv;
  }
  if (!e5 || !n2_pos) {
    r.check("Za=0.45 n=2 E5 within 5%", false,
            std::string(e5 ? "" : "E5 undefined (bracket <= 0); ") +
                (n2_pos ? "" : "no positive n=2 level past the critical coupling"));
  } else {
    const double err = std::abs(*e5 / n2_pos->energy - 1);
    r.check("Za=0.45 n=2 E5 within 5%", err <= 0.05, "rel " + sci(err));
  }
  const auto e7 = approx::n3_high(p);
  const QesLevel* n3_pos = nullptr;
  for (const auto& lv : n3) {
    if (lv.energy > 0 && (!n3_pos || lv.energy > n3_pos->energy)) n3_pos = &lv;
  }
  if (!e7 || !n3_pos) {
    r.check("Za=0.45 n=3 E7 within 5%", false, e7 ? "no positive n=3 level" : "E7 undefined");
  } else {
    const double err = std::abs(*e7 / n3_pos->energy - 1);
    r.check("Za=0.45 n=3 E7 within 5%", err <= 0.05,
            "exact " + fmt("%.6f", n3_pos->energy) + " E7 " + fmt("%.6f", *e7) + " rel " + sci(err));
  }
}

void ac5(Report& r) {
  double worst = 0.0, weakest_perturbed = INFINITY;
  int failed = 0;
  for (const auto& lv : g_levels) {
    const VerificationReport v = verify(lv);
    worst = std::max(worst, v.matching_residual);
    if (!v.passed || v.matching_residual > 1e-6) ++failed;
    const ShootingConfig cfg = ShootingConfig::for_field(lv.field_param);
    for (double d : {1e-3, -1e-3}) {
      const VerificationReport p =
          verify_candidate(lv.params, lv.energy * (1 + d), lv.field_param, cfg, lv.n);
      weakest_perturbed = std::min(weakest_perturbed, p.matching_residual);
    }
  }
  r.check("levels from criteria 1-4 pass", failed == 0 && !g_levels.empty(),
          std::to_string(g_levels.size()) + " levels, " + std::to_string(failed) +
              " failed, worst residual " + sci(worst));
  r.check("0.1% energy perturbation gives residual > 1e-3", weakest_perturbed > 1e-3,
          "smallest perturbed residual " + sci(weakest_perturbed));
}

void ac6(Report& r) {
  int mismatched = 0, agree_fail = 0, checked = 0;
  std::string detail;
  for (double z : {0.01, 0.05}) {
    for (int l = -2; l <= 2; ++l) {
      for (int n : {2, 3}) {
        for (const auto& lv : solve(n, Params(z, l))) {
          const int poly = count_nodes(lv).f;
          if (verify(lv).nodes_f != poly) ++agree_fail;
          if (lv.energy < 0) continue;
          int expected = n == 2 ? 1 : (l < 0 ? 1 : 2);
          ++checked;
          if (poly != expected) {
            ++mismatched;
            detail += " n=" + std::to_string(n) + ",l=" + std::to_string(l) + ":" + std::to_string(poly);
          }
        }
      }
    }
  }
  r.check("positive-energy node counts (n=2: 1; n=3: 1 for l<0, 2 for l>=0)",
          mismatched == 0 && checked > 0,
          std::to_string(checked) + " levels" + (detail.empty() ? "" : "; off:" + detail));
  r.check("integrated and polynomial node counts agree", agree_fail == 0,
          std::to_string(agree_fail) + " disagreements");
}

void ac7(Report& r) {
  // The cubic has two low-energy roots near +-m (the E6+ and E6- branches);
  // the high-energy branch is a third real root.
  auto levels = [](double z) {
    std::string list;
    const auto lv = solve_n3(Params(z, -1));
    for (const auto& l : lv) list += (list.empty() ? "E = " : ", ") + fmt("%.4f", l.energy);
    return std::make_pair(lv.size() >= 3, list.empty() ? std::string("no levels") : list);
  };
  const auto [at_040, list_040] = levels(0.40);
  const auto [at_035, list_035] = levels(0.35);
  r.check("exists at Za = 0.40", at_040, list_040);
  r.check("absent at Za = 0.35", !at_035, list_035);
  const double lo = approx::n3_high_bracket(Params(0.3770, -1));
  const double hi = approx::n3_high_bracket(Params(0.3790, -1));
  r.check("E7 bracket changes sign within 0.5% of 1/2.65", (lo > 0) != (hi > 0),
          "bracket " + sci(lo) + " at 0.3770, " + sci(hi) + " at 0.3790");
}

void ac8(Report& r) {
  double worst = 0.0;
  int node_fail = 0;
  int printed_e1_fail = 0;
  for (int l = -3; l <= 3; ++l) {
    const int al = std::abs(l);
    for (Coulomb sign : {Coulomb::Attractive, Coulomb::Repulsive}) {
      for (int s = 1; s <= 2; ++s) {
        const BetheProblem p{l, s, sign};
        const double z = p.z_alpha, m = p.m;
        const BetheSearch search = solve_bethe(p);
        if (search.solutions.size() != 1) {
          worst = INFINITY;
          continue;
        }
        const BetheSolution& sol = search.solutions[0];
        double b, omega, energy;
        if (s == 1) {
          b = std::sqrt(2.0 * al + 1);
          omega = 2 * m * z * z / (2.0 * al + 1);
          energy = (2 * m * z * z / (2 * (2.0 * al + 1))) * (3 + l + al);
          const double x1 = sign == Coulomb::Attractive ? b : -b;
          worst = std::max(worst, std::abs(sol.zeros[0] - x1) / b);
        } else {
          b = std::sqrt(2.0 * (4 * al + 3));
          omega = m * z * z / (4.0 * al + 3);
          energy = (m * z * z / (4.0 * al + 3)) * (4 + l + al);
        }
        worst = std::max({worst, std::abs(sol.b - b) / b, std::abs(sol.omega_l - omega) / omega});
        if (std::abs(sol.energy - energy) > 1e-10 * energy) {
          if (s == 1) ++printed_e1_fail;
          else worst = std::max(worst, std::abs(sol.energy - energy) / energy);
        }
        const int nodes = assemble_wavefunction(sol).nodes();
        int expected = -1;
        if (sign == Coulomb::Repulsive && al <= 1) expected = 0;
        if (sign == Coulomb::Attractive) expected = s;
        if (expected >= 0 && nodes != expected) ++node_fail;
      }
    }
  }
  r.check("Newton reproduces x1, b, omega_L and E2 to 1e-10 (l = -3..3)", worst <= 1e-10,
          "worst rel " + sci(worst));
  r.check("E1 matches the printed formula to 1e-10", printed_e1_fail == 0,
          std::to_string(printed_e1_fail) + " of 14 differ (library E1 = 2x printed)");
  r.check("node counts (repulsive |l|<=1: 0; attractive: s)", node_fail == 0,
          std::to_string(node_fail) + " mismatches");
}

void ac9(Report& r) {
  bool exact = true;
  for (double z : {0.05, 0.2, 0.4, 0.5}) {
    const CoulombField f(z);
    for (int l : {-3, -1, 1, 2}) {
      for (int n_r = 1; n_r <= 3; ++n_r) {
        exact = exact && weak_field_spectrum(f, n_r, l, 0.0) == coulomb_spectrum(f, n_r, l);
      }
    }
  }
  r.check("weak_field(a = 0) == coulomb exactly", exact);
  const double e0 = ground_state_energy(CoulombField(0.25));
  r.check("E0(1/4) = sqrt(3)/2 to 1e-14", std::abs(e0 - std::sqrt(3.0) / 2) <= 1e-14,
          "diff " + sci(e0 - std::sqrt(3.0) / 2));
  double worst = 0.0;
  int points = 0;
  for (double a : {1e-8, 1e-7, 1e-6}) {
    for (double z : {0.05, 0.1, 0.2}) {
      const CoulombField f(z);
      for (int l : {-2, -1, 1, 2}) {
        for (int n_r = 1; n_r <= 3; ++n_r) {
          const double e = weak_field_spectrum(f, n_r, l, a);
          const double q = quantization_integral(f, l, e, a) / M_PI;
          worst = std::max(worst, std::abs(q - n_r) / n_r);
          ++points;
        }
      }
    }
  }
  r.check("quantization integral = pi n_r to 1e-3 (a <= 1e-6)", worst <= 1e-3,
          std::to_string(points) + " points, worst rel " + sci(worst));
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qes");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

void ac10(Report& r) {
  std::ifstream in(QES_SCHEMA_PATH);
  const nlohmann::json schema = nlohmann::json::parse(in);
  const std::vector<std::vector<std::string>> commands = {
      {"solve", "--n", "3", "--l", "-1", "--zalpha", "0.3"},
      {"solve", "--n", "5", "--l", "0", "--zalpha", "0.2"},
      {"scan", "--n", "2", "--l-range", "-1:1", "--zalpha-range", "0.1:0.45:8"},
      {"bethe", "--s", "3", "--l", "0", "--sign", "attract", "--seed", "3"},
      {"semiclassical", "--n-r", "1", "--l", "1", "--zalpha", "0.2", "--a", "1e-6", "--regime", "all"},
  };
  for (const auto& c : commands) {
    std::string name;
    for (const auto& a : c) name += (name.empty() ? "" : " ") + a;
    const CliRun a = cli(c), b = cli(c);
    r.check("identical output: " + name, a.code == 0 && a.out == b.out,
            "exit " + std::to_string(a.code));
    std::vector<std::string> errors;
    try {
      errors = schema_check::validate(schema, nlohmann::json::parse(a.out));
    } catch (const std::exception& ex) {
      errors.push_back(ex.what());
    }
    r.check("schema: " + name, errors.empty(), errors.empty() ? "" : errors.front());
    std::vector<std::string> csv = c;
    csv.insert(csv.end(), {"--format", "csv"});
    r.check("identical CSV: " + name, cli(csv).out == cli(csv).out);
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "n=1 closed form", 1, ac1},
      {"AC2", "critical couplings", 1, ac2},
      {"AC3", "n=2 termination", 5, ac3},
      {"AC4", "approximation consistency", 5, ac4},
      {"AC5", "ODE oracle", 30, ac5},
      {"AC6", "nodal structure", 5, ac6},
      {"AC7", "n=3 existence window", 5, ac7},
      {"AC8", "Bethe closed forms", 5, ac8},
      {"AC9", "semiclassical", 10, ac9},
      {"AC10", "determinism and schema", 5, ac10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Report report;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(report);
    } catch (const std::exception& ex) {
      report.check("no exception", false, ex.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.check("runtime < " + fmt("%g", c.budget_s) + " s", secs < c.budget_s, fmt("%.3f s", secs));
    const bool ok = report.ok();
    failed += !ok;
    std::printf("%s %s: %s (%.3f s)\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), secs);
    for (const auto& ch : report.checks()) {
      std::printf("    [%s] %s%s%s\n", ch.ok ? "ok" : "xx", ch.what.c_str(),
                  ch.detail.empty() ? "" : " -- ", ch.detail.c_str());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
