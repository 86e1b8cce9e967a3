#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pplnhom/config.hpp"

namespace pplnhom::cli {

enum ExitCode : int { kOk = 0, kModelError = 1, kUsageError = 2 };

/// Bad invocation: maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson };

struct Context {
  RunConfig config;
  Format format = Format::kCsv;
  std::ostream* log = nullptr;  // progress and result lines
};

struct TuningRequest {
  enum class Mode { kTemperature, kPoling } mode = Mode::kTemperature;
  std::optional<double> from;  // C or um
  std::optional<double> to;
  std::optional<double> step;
  std::vector<double> values;  // explicit list, same units
  std::optional<double> at_temperature_c;
};

struct SpectrumRequest {
  std::vector<double> poling_periods_um;
  std::vector<double> temperatures_c;
  int points = 801;
  double half_width_fwhm = 6.0;
};

struct HomRequest {
  std::vector<double> temperatures_c;
  std::optional<double> half_range_mm;
  std::optional<double> step_um;
  std::optional<double> mode_overlap;
  bool dump_state = false;
};

struct RatesRequest {
  enum class Mode { kAnalytic, kMonteCarlo } mode = Mode::kAnalytic;
  std::optional<double> duration_s;
  bool dump_events = false;
};

struct CalibrateRequest {
  std::optional<std::filesystem::path> in_place;  // config file to overwrite
};

/// Each command writes its files under config.output_dir and returns their paths.
std::vector<std::filesystem::path> cmd_tuning_curve(const Context& ctx, const TuningRequest& req);
std::vector<std::filesystem::path> cmd_spectrum(const Context& ctx, const SpectrumRequest& req);
std::vector<std::filesystem::path> cmd_hom_scan(const Context& ctx, const HomRequest& req);
/// Throws DomainError after writing the report when the estimator is undefined.
std::vector<std::filesystem::path> cmd_rates(const Context& ctx, const RatesRequest& req);
/// Throws DomainError (after logging the residual) when the target is unreachable.
std::vector<std::filesystem::path> cmd_calibrate(const Context& ctx, const CalibrateRequest& req);

/// Parse argv, dispatch, and map exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pplnhom::cli
