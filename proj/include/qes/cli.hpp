#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qes/bethe.hpp"
#include "qes/ode_oracle.hpp"
#include "qes/qes_solver.hpp"
#include "qes/semiclassical.hpp"

namespace qes::cli {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

using Json = nlohmann::ordered_json;

/// Defaults shared by every subcommand. Built-in values are overridden by a
/// JSON config file (--config or QES_CONFIG), which is overridden by flags.
struct Defaults {
  double m = 1.0;
  std::uint64_t seed = 0;
  std::string format = "json";
  ScanConfig scan{};
  double bethe_zalpha = 0.1;
  int bethe_starts = 50;
  double shooting_rel_tol = 1e-10;
  double shooting_abs_tol = 1e-12;
};

/// Reads a config file on top of the built-in defaults. Unknown keys and
/// wrongly typed values throw Error(InvalidParams).
Defaults load_defaults(const std::string& path);

/// Fixed CSV column order. JSON records use the same names, with the three
/// residual columns nested under "residuals".
const std::vector<std::string>& csv_columns();

Json level_record(const QesLevel& level, const VerificationReport& report);
Json bethe_record(const BetheSolution& solution, std::string_view variant);
Json semiclassical_record(const CoulombField& field, const SemiclassicalLevel& level);

/// One header line plus one line per record, numbers at 17 significant digits.
std::string to_csv(const Json& records);

/// Entry point behind the qes binary. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qes::cli
