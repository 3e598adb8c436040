#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdecay/analysis.hpp"
#include "qdecay/presets.hpp"

namespace qdecay::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsageError = 2, kNumericalAbort = 3 };

/// Analysis of one trace, as reported in summary.txt / summary.csv.
struct ScenarioSummary {
    std::string name;
    BarrierSpec barrier;
    double probe_a = 4.0;
    std::optional<FitResult> exponential;
    std::optional<FitResult> gaussian;
    std::optional<double> gamma_pole;
    std::optional<Peak> peak;
    std::vector<TimeWindow> positive_g;
    PhaseSegmentation phases;
    double final_P = 0.0;
    double t_end = 0.0;
    std::vector<std::string> notes;  // analyses that could not be done
};

ScenarioSummary summarize(const std::string& name, const ScenarioConfig& cfg, const DecayTrace& trace);

struct ScenarioOutput {
    Scenario scenario;
    std::filesystem::path csv;     // relative to the output directory
    std::filesystem::path config;  // config echo, loadable with --config
    ScenarioSummary summary;
    DecayTrace trace;
};

struct RunManifest {
    std::string command;
    std::optional<std::string> preset;
    std::optional<Quantity> quantity;
    std::filesystem::path out_dir;
    std::vector<ScenarioOutput> scenarios;
    std::filesystem::path summary_text = "summary.txt";
    std::filesystem::path summary_csv = "summary.csv";
    std::filesystem::path manifest = "manifest.json";
};

/// Validates every scenario first (ConfigError listing all violations, no run
/// started), then runs them on up to `workers` threads. Each worker writes its
/// own CSV and config echo; summaries and the manifest are written after all
/// workers join. The first NumericalAbort (in scenario order) is rethrown.
RunManifest run_scenarios(std::vector<Scenario> scenarios, const std::filesystem::path& out_dir,
                          unsigned workers, std::string command, std::optional<std::string> preset = {},
                          std::optional<Quantity> quantity = {});

/// Cross-scenario report for a preset (gamma ordering, peaks vs no barrier,
/// crossings), empty when nothing applies.
std::string comparison_report(const RunManifest& manifest);

std::string format_summary(const ScenarioSummary& s);

inline constexpr const char* kSummaryHeader =
    "scenario,h,w,gamma_fit,gamma_pole,t_peak,g_peak,positive_g,tau_fit,gaussian_end,exponential_start";
std::string summary_csv_row(const ScenarioSummary& s);

/// Cartesian product of heights and widths on top of `base`, in row-major
/// (height outer) order.
std::vector<Scenario> sweep_scenarios(const std::vector<double>& heights, const std::vector<double>& widths,
                                      const ScenarioConfig& base);

/// Entry point of the tunneldecay executable; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdecay::cli
