#include "qdecay/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdecay/checks.hpp"
#include "qdecay/config_file.hpp"
#include "qdecay/oracles.hpp"
#include "qdecay/propagator.hpp"
#include "qdecay/trace_io.hpp"

namespace qdecay::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string opt_num(const std::optional<double>& v, int digits = 10)
{
    return v ? num(*v, digits) : std::string();
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw FileError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw FileError("write failed for " + path.string());
    }
}

std::string interval_list(const std::vector<TimeWindow>& intervals)
{
    if (intervals.empty()) {
        return "none";
    }
    std::string s;
    for (const auto& w : intervals) {
        s += (s.empty() ? "[" : ", [") + num(w.lo, 4) + ", " + num(w.hi, 4) + "]";
    }
    return s;
}

const ScenarioOutput* find_no_barrier(const RunManifest& m)
{
    for (const auto& s : m.scenarios) {
        if (s.scenario.cfg.barrier.height == 0.0) {
            return &s;
        }
    }
    return nullptr;
}

// "strictly decreasing" report for gamma_fit along the scenario order.
void ordering_report(std::ostringstream& os, const RunManifest& m, const char* parameter)
{
    os << "gamma_fit ordering in " << parameter << ":";
    bool ok = true;
    std::optional<double> previous;
    for (const auto& s : m.scenarios) {
        const auto& e = s.summary.exponential;
        os << ' ' << s.scenario.name << '=' << (e ? num(e->gamma()) : "n/a");
        if (!e || (previous && !(e->gamma() < *previous))) {
            ok = false;
        }
        if (e) {
            previous = e->gamma();
        }
    }
    os << "\n  strictly decreasing: " << (ok ? "yes" : "no") << '\n';
}

}  // namespace

ScenarioSummary summarize(const std::string& name, const ScenarioConfig& cfg, const DecayTrace& trace)
{
    ScenarioSummary s;
    s.name = name;
    s.barrier = cfg.barrier;
    s.probe_a = cfg.probe_a;
    if (trace.size() > 0) {
        s.final_P = trace.P.back();
        s.t_end = trace.t.back();
    }
    try {
        s.exponential = fit_exponential(trace);
    } catch (const AnalysisError& e) {
        s.notes.push_back(std::string("exponential fit: ") + e.what());
    }
    try {
        s.gaussian = fit_gaussian(trace);
    } catch (const AnalysisError& e) {
        s.notes.push_back(std::string("gaussian fit: ") + e.what());
    }
    if (cfg.barrier.height > std::numbers::pi * std::numbers::pi) {
        try {
            s.gamma_pole = oracles::resonance_gamma(cfg.barrier.height, cfg.barrier.width).gamma;
        } catch (const oracles::OracleError& e) {
            s.notes.push_back(std::string("resonance pole: ") + e.what());
        }
    }
    try {
        s.peak = transition_peak(trace);
    } catch (const AnalysisError& e) {
        s.notes.push_back(std::string("peak: ") + e.what());
    }
    s.positive_g = positive_g_intervals(trace, kPositiveGMinLength, kPositiveGMinPeak);
    s.phases = segment_phases(trace);
    return s;
}

std::string format_summary(const ScenarioSummary& s)
{
    std::ostringstream os;
    os << "scenario " << s.name << " (h=" << num(s.barrier.height) << ", w=" << num(s.barrier.width)
       << ", a=" << num(s.probe_a) << ")\n";
    if (s.exponential) {
        os << "  exponential fit [" << num(s.exponential->window.lo) << ", " << num(s.exponential->window.hi)
           << "]: gamma=" << num(s.exponential->gamma()) << " (rms " << num(s.exponential->residual, 3) << ")\n";
    }
    if (s.gamma_pole) {
        os << "  resonance pole: gamma=" << num(*s.gamma_pole) << '\n';
    }
    if (s.gaussian) {
        os << "  gaussian fit [" << num(s.gaussian->window.lo) << ", " << num(s.gaussian->window.hi)
           << "]: tau=" << num(s.gaussian->tau()) << " (rms " << num(s.gaussian->residual, 3)
           << (s.gaussian->poor ? ", poor" : "") << ")\n";
    }
    if (s.peak) {
        os << "  peak |g|: t=" << num(s.peak->t) << " g=" << num(s.peak->g) << '\n';
    }
    os << "  positive g: " << interval_list(s.positive_g) << '\n';
    os << "  stages: gaussian until "
       << (s.phases.gaussian_end ? "t=" + num(*s.phases.gaussian_end, 4) : std::string("n/a"))
       << ", exponential from "
       << (s.phases.exponential_start ? "t=" + num(*s.phases.exponential_start, 4) : std::string("n/a")) << '\n';
    os << "  P(a, " << num(s.t_end) << ")=" << num(s.final_P) << '\n';
    for (const auto& n : s.notes) {
        os << "  note: " << n << '\n';
    }
    return os.str();
}

std::string summary_csv_row(const ScenarioSummary& s)
{
    std::ostringstream os;
    os << s.name << ',' << num(s.barrier.height, 10) << ',' << num(s.barrier.width, 10) << ','
       << (s.exponential ? num(s.exponential->gamma(), 10) : "") << ',' << opt_num(s.gamma_pole) << ','
       << (s.peak ? num(s.peak->t, 10) : "") << ',' << (s.peak ? num(s.peak->g, 10) : "") << ','
       << (s.positive_g.empty() ? 0 : 1) << ',' << (s.gaussian ? num(s.gaussian->tau(), 10) : "") << ','
       << opt_num(s.phases.gaussian_end) << ',' << opt_num(s.phases.exponential_start);
    return os.str();
}

std::string comparison_report(const RunManifest& m)
{
    std::ostringstream os;
    const std::string preset = m.preset.value_or("");
    if (preset == "fig2") {
        ordering_report(os, m, "h (w=0.6)");
    } else if (preset == "fig3") {
        ordering_report(os, m, "w (h=15)");
    } else if (preset == "fig1") {
        const auto& s = m.scenarios.front().summary;
        if (s.exponential) {
            const double sup_early = max_abs_g(m.scenarios.front().trace, {0.0, 0.3});
            os << "sup|g| on [0, 0.3]=" << num(sup_early) << " vs gamma_fit=" << num(s.exponential->gamma())
               << '\n';
        }
    }
    if (preset == "fig4" || preset == "fig6") {
        const ScenarioOutput* ref = find_no_barrier(m);
        if (ref && ref->summary.peak) {
            const double ref_peak = std::abs(ref->summary.peak->g);
            os << "no barrier: max|g|=" << num(ref_peak) << " at t=" << num(ref->summary.peak->t) << '\n';
            for (const auto& s : m.scenarios) {
                if (&s == ref || !s.summary.peak) {
                    continue;
                }
                const double p = std::abs(s.summary.peak->g);
                os << s.scenario.name << ": max|g|=" << num(p) << " at t=" << num(s.summary.peak->t)
                   << (p > ref_peak ? " (exceeds no barrier)" : " (below no barrier)") << '\n';
            }
        }
    }
    if (preset == "fig5") {
        const ScenarioOutput* ref = find_no_barrier(m);
        for (const auto& s : m.scenarios) {
            if (ref == nullptr || &s == ref) {
                continue;
            }
            const auto c = crossing_time(ref->trace, s.trace);
            os << "P crossing " << ref->scenario.name << " / " << s.scenario.name << ": "
               << (c ? "t=" + num(c->t) + " P=" + num(c->P) : std::string("none")) << '\n';
        }
    }
    return os.str();
}

std::vector<Scenario> sweep_scenarios(const std::vector<double>& heights, const std::vector<double>& widths,
                                      const ScenarioConfig& base)
{
    static const char* styles[] = {"solid", "dashed", "dot-dashed", "dotted"};
    std::vector<Scenario> out;
    for (double h : heights) {
        for (double w : widths) {
            ScenarioConfig cfg = base;
            cfg.barrier = BarrierSpec{h, w};
            out.push_back(Scenario{"h" + num(h) + "_w" + num(w), styles[out.size() % 4], cfg});
        }
    }
    return out;
}

RunManifest run_scenarios(std::vector<Scenario> scenarios, const fs::path& out_dir, unsigned workers,
                          std::string command, std::optional<std::string> preset, std::optional<Quantity> quantity)
{
    std::vector<std::string> violations;
    std::set<std::string> names;
    if (scenarios.empty()) {
        violations.push_back("no scenarios to run");
    }
    for (const auto& s : scenarios) {
        if (!names.insert(s.name).second) {
            violations.push_back(s.name + ": duplicate scenario");
        }
        for (const auto& v : validate_config(s.cfg)) {
            violations.push_back(s.name + ": " + v);
        }
    }
    if (!violations.empty()) {
        throw ConfigError(std::move(violations));
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw FileError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }

    RunManifest m;
    m.command = std::move(command);
    m.preset = std::move(preset);
    m.quantity = quantity;
    m.out_dir = out_dir;
    m.scenarios.resize(scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        auto& o = m.scenarios[i];
        o.scenario = std::move(scenarios[i]);
        o.csv = o.scenario.name + ".csv";
        o.config = o.scenario.name + ".cfg";
    }

    std::vector<std::exception_ptr> errors(m.scenarios.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < m.scenarios.size();) {
            auto& o = m.scenarios[i];
            try {
                write_text(out_dir / o.config, format_config(o.scenario.cfg));
                o.trace = run(o.scenario.cfg);
                write_trace_csv(out_dir / o.csv, o.trace);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(m.scenarios.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < n; ++k) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::string text, csv = std::string(kSummaryHeader) + '\n';
    for (auto& o : m.scenarios) {
        o.summary = summarize(o.scenario.name, o.scenario.cfg, o.trace);
        text += format_summary(o.summary);
        csv += summary_csv_row(o.summary) + '\n';
    }
    if (const auto report = comparison_report(m); !report.empty()) {
        text += "\n" + report;
    }
    write_text(out_dir / m.summary_text, text);
    write_text(out_dir / m.summary_csv, csv);

    nlohmann::json j;
    j["command"] = m.command;
    j["preset"] = m.preset ? nlohmann::json(*m.preset) : nlohmann::json(nullptr);
    j["quantity"] = m.quantity ? nlohmann::json(quantity_name(*m.quantity)) : nlohmann::json(nullptr);
    j["summary_text"] = m.summary_text.string();
    j["summary_csv"] = m.summary_csv.string();
    j["csv_header"] = kTraceHeader;
    auto& list = j["scenarios"] = nlohmann::json::array();
    for (const auto& o : m.scenarios) {
        list.push_back({{"name", o.scenario.name},
                        {"style", o.scenario.style},
                        {"csv", o.csv.string()},
                        {"config", o.config.string()},
                        {"barrier_height", o.scenario.cfg.barrier.height},
                        {"barrier_width", o.scenario.cfg.barrier.width},
                        {"probe_a", o.scenario.cfg.probe_a}});
    }
    write_text(out_dir / m.manifest, j.dump(2) + '\n');
    return m;
}

namespace {

struct CommonOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = "out";
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

ScenarioConfig resolve_config(const CommonOptions& o)
{
    ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
    std::vector<std::string> errors;
    for (const auto& s : o.overrides) {
        try {
            apply_override(cfg, s);
        } catch (const ConfigError& e) {
            errors.insert(errors.end(), e.violations().begin(), e.violations().end());
        }
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return cfg;
}

void add_config_options(CLI::App* app, CommonOptions& o)
{
    app->add_option("--config", o.config, "Scenario config file (key = value lines)");
    app->add_option("--set", o.overrides, "Override a config key, key=value (repeatable)")->allow_extra_args(false);
}

void add_output_options(CLI::App* app, CommonOptions& o)
{
    app->add_option("--out", o.out, "Output directory")->capture_default_str();
    app->add_option("--workers", o.workers, "Concurrent scenarios")->check(CLI::PositiveNumber);
}

void report_outputs(std::ostream& out, const RunManifest& m)
{
    std::ifstream summary(m.out_dir / m.summary_text);
    out << summary.rdbuf();
    out << "manifest: " << (m.out_dir / m.manifest).string() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Decay of a particle tunneling out of a square-barrier well"};
    app.name("tunneldecay");
    app.require_subcommand(1);

    CommonOptions run_opt, preset_opt, sweep_opt, check_opt, fit_opt;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario");
    add_config_options(run_cmd, run_opt);
    add_output_options(run_cmd, run_opt);

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "Run the scenarios of a figure preset");
    auto* preset_pos = preset_cmd->add_option("name", preset_name, "Preset name");
    auto* preset_flag = preset_cmd->add_option("--preset", preset_name, "Preset name");
    preset_pos->excludes(preset_flag);
    preset_cmd->callback([&] {
        if (preset_name.empty()) {
            throw CLI::RequiredError("preset name");
        }
    });
    add_config_options(preset_cmd, preset_opt);
    add_output_options(preset_cmd, preset_opt);

    std::vector<double> heights, widths;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run every (height, width) combination");
    sweep_cmd->add_option("--heights", heights, "Barrier heights, comma separated")->required()->delimiter(',');
    sweep_cmd->add_option("--widths", widths, "Barrier widths, comma separated")->required()->delimiter(',');
    add_config_options(sweep_cmd, sweep_opt);
    add_output_options(sweep_cmd, sweep_opt);

    auto* check_cmd = app.add_subcommand("check", "Run the oracle checks on a configuration");
    add_config_options(check_cmd, check_opt);

    std::string fit_csv;
    auto* fit_cmd = app.add_subcommand("fit", "Re-analyze a trace CSV");
    fit_cmd->add_option("csv", fit_csv, "Trace CSV")->required();
    add_config_options(fit_cmd, fit_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*run_cmd) {
            const ScenarioConfig cfg = resolve_config(run_opt);
            Scenario s{scenario_name(cfg.barrier), "solid", cfg};
            report_outputs(out, run_scenarios({s}, run_opt.out, 1, "run"));
        } else if (*preset_cmd) {
            const Preset p = expand_preset(preset_name, resolve_config(preset_opt));
            report_outputs(out, run_scenarios(p.scenarios, preset_opt.out, preset_opt.workers, "preset", p.name,
                                              p.quantity));
        } else if (*sweep_cmd) {
            auto list = sweep_scenarios(heights, widths, resolve_config(sweep_opt));
            report_outputs(out, run_scenarios(std::move(list), sweep_opt.out, sweep_opt.workers, "sweep"));
        } else if (*check_cmd) {
            const ScenarioConfig cfg = resolve_config(check_opt);
            require_valid(cfg);
            const auto results = run_check_suite(cfg);
            print_check_table(out, results);
            const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
            out << (ok ? "all checks passed\n" : "some checks FAILED\n");
            return ok ? kOk : kCheckFailed;
        } else if (*fit_cmd) {
            // The config echo written next to a CSV supplies the barrier.
            fs::path echo = fs::path(fit_csv).replace_extension(".cfg");
            if (fit_opt.config.empty() && fs::exists(echo)) {
                fit_opt.config = echo.string();
            }
            const ScenarioConfig cfg = resolve_config(fit_opt);
            DecayTrace trace = read_trace_csv(fs::path(fit_csv));
            trace.cfg = cfg;
            const auto s = summarize(fs::path(fit_csv).stem().string(), cfg, trace);
            out << format_summary(s);
            return s.exponential ? kOk : kCheckFailed;
        }
    } catch (const ConfigError& e) {
        err << "configuration error:\n";
        for (const auto& v : e.violations()) {
            err << "  " << v << '\n';
        }
        return kUsageError;
    } catch (const FileError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NumericalAbort& e) {
        err << "numerical abort at step " << e.step() << ": " << e.what() << '\n';
        return kNumericalAbort;
    } catch (const AnalysisError& e) {
        err << "analysis error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kOk;
}

}  // namespace qdecay::cli
