#pragma once

// Command implementations behind the `casimir` executable. Each command
// writes its primary output to `out`, diagnostics to `err`, and returns a
// process exit code.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "casimir/analysis.hpp"
#include "casimir/config.hpp"

namespace casimir::cli {

inline constexpr const char* kToolName = "casimir";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kRecordSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,        ///< config/flag parse failure or invalid parameters
  kConvergenceWarning = 3,  ///< results written, but some quadrature missed its tolerance
  kInternalError = 4,
};

enum class Format { Text, Csv, Json };

struct Options {
  std::optional<Format> format;        ///< per-command default when unset
  std::optional<double> rel_tol;       ///< overrides run.rel_tol
  int jobs = 1;
  std::optional<std::string> record;   ///< also write the JSON run record here
  std::optional<std::string> timestamp;  ///< fixed timestamp (tests); current UTC time otherwise
};

/// Column headers of the emitted CSV files.
inline constexpr const char* kSweepHeader = "gap_c_over_w0,gap_lambda0,F,F_TE,F_TM,F_r,err,status";
inline constexpr const char* kGridHeader = "x,y,F_r,status";
inline constexpr const char* kDispersionHeader = "axis,frequency,eps_re,eps_im,mu_re,mu_im,Z";
inline constexpr const char* kForceHeader = kSweepHeader;

/// 9 significant digits, '.' decimal separator regardless of locale.
std::string csv_number(double v);

int cmd_force(const config::SceneConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const config::SceneConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_grid(const config::SceneConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_dispersion(const config::SceneConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);

/// Runs a command by name ("force", "sweep", "grid", "dispersion"),
/// translating exceptions into exit codes and diagnostics on `err`.
int dispatch(const std::string& command, const config::SceneConfig& cfg, const Options& opt, std::ostream& out,
             std::ostream& err);

/// Parses the config echo of a run record back into a SceneConfig.
config::SceneConfig config_from_record(const nlohmann::json& record);

nlohmann::json to_json(const ForceResult& r, double gap);

}  // namespace casimir::cli
