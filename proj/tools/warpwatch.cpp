// warpwatch: search-interest network metrics vs. case curves, aligned with
// banded dynamic time warping.
//
// Exit codes: 0 success, 2 input or usage error, 3 infeasible computation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warpwatch/cases.hpp"
#include "warpwatch/dtw.hpp"
#include "warpwatch/errors.hpp"
#include "warpwatch/format.hpp"
#include "warpwatch/network.hpp"
#include "warpwatch/report.hpp"
#include "warpwatch/sweep.hpp"
#include "warpwatch/testkit.hpp"
#include "warpwatch/timeseries.hpp"
#include "warpwatch/trends.hpp"

namespace fs = std::filesystem;
using namespace warpwatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string series_csv(const DateIndexedSeries& s) {
    std::ostringstream out;
    write_series_csv(out, s);
    return out.str();
}

/// Every `*.csv` in a directory, by file name. Keyword = file stem.
std::map<std::string, std::string> panel_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw UsageError("panel directory '" + dir + "' does not exist");
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.emplace(entry.path().stem().string(), entry.path().string());
        }
    }
    if (files.empty()) throw UsageError("panel directory '" + dir + "' holds no .csv files");
    return files;
}

network::KeywordPanel load_panel(const std::string& dir, report::RunManifest& manifest) {
    std::map<std::string, DateIndexedSeries> by_keyword;
    for (const auto& [kw, path] : panel_files(dir)) {
        by_keyword.emplace(kw, read_series_csv(path));
        manifest.input(path);
    }
    return network::KeywordPanel::from_map(by_keyword);
}

unsigned sweep_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WARPWATCH_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v < 1) throw UsageError("WARPWATCH_THREADS must be a positive integer");
            n = static_cast<unsigned>(v);
        } catch (const std::logic_error&) {
            throw UsageError(std::string("WARPWATCH_THREADS is not an integer: '") + env + "'");
        }
    }
    return n;
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string segments;
    std::string weekly;
    std::string method;
    std::string out;
};

int cmd_preprocess(const PreprocessArgs& a) {
    const bool rescale = a.method == "rescale";
    if (rescale && a.weekly.empty()) throw UsageError("--method rescale requires --weekly");
    report::RunManifest manifest("preprocess");
    manifest.parameter("method", a.method);
    manifest.input(a.segments);

    auto segments = trends::load_segments(a.segments);
    std::optional<std::map<std::string, trends::WeeklySeries>> weekly;
    if (rescale) {
        manifest.input(a.weekly);
        weekly = trends::load_weekly(a.weekly);
    }
    const auto panel = trends::reconstruct_panel(std::move(segments), weekly ? &*weekly : nullptr,
                                                 rescale ? trends::Method::RescalingDaily : trends::Method::Msv);
    ensure_dir(a.out);
    for (const auto& [kw, series] : panel) report::write_text(join(a.out, kw + ".csv"), series_csv(series));
    report::write_json(join(a.out, "manifest.json"), manifest.to_json());
    return kExitOk;
}

struct MetricsArgs {
    std::string panel;
    std::string metric;
    double threshold = 0.5;
    std::size_t window = 15;
    std::string out;
};

int cmd_metrics(const MetricsArgs& a) {
    if (!(a.threshold > 0.0 && a.threshold <= 1.0)) {
        throw UsageError("--threshold must lie in (0,1], got " + format_number(a.threshold));
    }
    if (a.window < 2) throw UsageError("--window must be at least 2");
    report::RunManifest manifest("metrics");
    manifest.parameter("metric", a.metric);
    manifest.parameter("threshold", format_number(a.threshold));
    manifest.parameter("window", std::to_string(a.window));
    const auto panel = load_panel(a.panel, manifest);
    const auto kind = a.metric == "density" ? network::MetricKind::Density : network::MetricKind::Clustering;
    const auto series = network::metric_series(panel, kind, a.threshold, a.window);
    report::write_text(a.out, series_csv(series));
    report::write_json(a.out + ".manifest.json", manifest.to_json());
    return kExitOk;
}

struct CasesArgs {
    std::string linelist;
    std::string region = "NCR";
    std::string province = "NCR";
    std::string start;
    std::string end;
    std::string out;
};

int cmd_cases(const CasesArgs& a) {
    report::RunManifest manifest("cases");
    manifest.parameter("region", a.region);
    manifest.parameter("province", a.province);
    manifest.parameter("start", a.start);
    manifest.parameter("end", a.end);
    manifest.input(a.linelist);

    const cases::DateRange range(Date::parse(a.start), Date::parse(a.end));
    const auto records = cases::load_linelist(a.linelist, a.region, a.province);
    const auto confirmed = cases::daily_confirmed(records, range);
    const auto removed = cases::daily_removed(records, range);
    const auto active = cases::active_cases(confirmed, removed);

    ensure_dir(a.out);
    report::write_text(join(a.out, "confirmed.csv"), series_csv(confirmed.series));
    report::write_text(join(a.out, "removed.csv"), series_csv(removed.series));
    report::write_text(join(a.out, "active.csv"), series_csv(active.active.series));
    std::ostringstream log;
    log << "date,raw_active\n";
    for (const auto& ev : active.clamp_log) {
        log << ev.date.iso() << ',' << format_number(ev.raw_value) << '\n';
        std::cerr << "warning: active cases clamped to 0 on " << ev.date.iso() << " (raw "
                  << format_number(ev.raw_value) << ")\n";
    }
    report::write_text(join(a.out, "clamp_log.csv"), log.str());
    report::write_json(join(a.out, "manifest.json"), manifest.to_json());
    return kExitOk;
}

struct DtwArgs {
    std::string case_csv;
    std::string metric_csv;
    std::string radius;
    bool no_normalize = false;
    std::string out;
};

int cmd_dtw(const DtwArgs& a) {
    BandSpec band = BandSpec::unconstrained();
    if (a.radius != "none") {
        try {
            std::size_t pos = 0;
            const long r = std::stol(a.radius, &pos);
            if (pos != a.radius.size() || r < 0) throw std::invalid_argument("radius");
            band = BandSpec::sakoe_chiba(static_cast<std::size_t>(r));
        } catch (const std::logic_error&) {
            throw UsageError("--radius must be a nonnegative integer or 'none', got '" + a.radius + "'");
        }
    }
    report::RunManifest manifest("dtw");
    manifest.parameter("radius", a.radius);
    manifest.parameter("normalize", a.no_normalize ? "false" : "true");
    manifest.input(a.case_csv);
    manifest.input(a.metric_csv);

    const auto case_series = read_series_csv(a.case_csv);
    const auto metric_series = read_series_csv(a.metric_csv);
    // Normalize over the whole case series, then trim, as the sweep does.
    const auto case_used = a.no_normalize ? case_series : minmax_normalize(case_series);
    const auto [x, y] = align_ranges(case_used, metric_series);
    const auto result = dtw(x.values(), y.values(), band, false);

    ensure_dir(a.out);
    std::ostringstream align;
    align << "case_index,metric_index,case_date,metric_date,normalized_case,metric_value\n";
    for (const auto& p : result.path) {
        align << p.i << ',' << p.j << ',' << x.date_at(p.i - 1).iso() << ',' << y.date_at(p.j - 1).iso() << ','
              << format_number(x[p.i - 1]) << ',' << format_number(y[p.j - 1]) << '\n';
    }
    report::write_text(join(a.out, "alignment.csv"), align.str());

    report::Json j;
    j["distance"] = report::number(result.distance);
    if (band.radius) j["radius"] = *band.radius;
    else j["radius"] = nullptr;
    j["band"] = band.describe();
    j["path_length"] = result.path.size();
    j["case_length"] = x.size();
    j["metric_length"] = y.size();
    j["start_date"] = x.start().iso();
    j["end_date"] = x.last().iso();
    j["normalized"] = !a.no_normalize;
    j["manifest"] = manifest.to_json();
    report::write_json(join(a.out, "result.json"), j);
    std::cout << format_number(result.distance) << '\n';
    return kExitOk;
}

struct SweepArgs {
    std::string config;
    std::string rescale_panel;
    std::string msv_panel;
    std::string confirmed;
    std::string active;
    std::string out;
};

int cmd_sweep(const SweepArgs& a) {
    report::RunManifest manifest("sweep");
    sweep::SweepDomains domains;
    if (!a.config.empty()) {
        manifest.input(a.config);
        report::Json cfg;
        try {
            cfg = report::Json::parse(report::read_bytes(a.config));
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError("sweep config '" + a.config + "' is not valid JSON: " + e.what());
        }
        domains = report::domains_from_json(cfg);
    }
    domains.validate_and_canonicalize();

    sweep::SweepInputs inputs;
    auto need = [](const std::string& path, const char* flag) {
        if (path.empty()) throw UsageError(std::string("sweep needs ") + flag + " for the configured domains");
    };
    for (auto p : domains.preprocesses) {
        const bool rescale = p == sweep::Preprocess::RescalingDaily;
        const auto& dir = rescale ? a.rescale_panel : a.msv_panel;
        need(dir, rescale ? "--rescale-panel" : "--msv-panel");
        inputs.panels.emplace(p, load_panel(dir, manifest));
    }
    for (auto c : domains.case_types) {
        const bool conf = c == sweep::CaseType::Confirmed;
        const auto& path = conf ? a.confirmed : a.active;
        need(path, conf ? "--confirmed" : "--active");
        manifest.input(path);
        inputs.cases.emplace(c, read_series_csv(path));
    }

    const auto configs = sweep::enumerate_configs(domains);
    const auto results = sweep::run_sweep(inputs, configs, sweep_threads());

    std::vector<sweep::ParameterReport> reports;
    for (auto p : sweep::all_parameters()) reports.push_back(sweep::summarize_parameter(results, p));
    const auto optimal = sweep::optimal_configs(results);

    ensure_dir(a.out);
    report::write_text(join(a.out, "sweep.csv"), report::sweep_csv(results));
    report::write_json(join(a.out, "report.json"), report::parameter_report_json(reports, manifest));
    report::write_text(join(a.out, "optimal.csv"), report::optimal_csv(optimal));
    report::write_json(join(a.out, "manifest.json"), manifest.to_json());

    std::size_t ok = 0;
    for (const auto& r : results) {
        if (r.ok()) ++ok;
        else std::cerr << "config failed (" << sweep::label(r.status) << "): " << r.message << '\n';
    }
    std::cerr << ok << " of " << results.size() << " configurations scored\n";
    if (ok == 0) throw InfeasibleError("no configuration could be scored");
    return kExitOk;
}

struct SynthArgs {
    testkit::SyntheticScenario scenario;
    std::size_t keywords = 15;
    bool pipeline_inputs = false;
    std::string out;
};

int cmd_synth(const SynthArgs& a) {
    a.scenario.validate();
    report::RunManifest manifest("synth");
    manifest.parameter("length", std::to_string(a.scenario.length));
    manifest.parameter("lag", std::to_string(a.scenario.lag));
    manifest.parameter("noise", format_number(a.scenario.noise_amplitude));
    manifest.parameter("seed", std::to_string(a.scenario.seed));

    const auto pair = testkit::synth_pair(a.scenario);
    ensure_dir(a.out);
    report::write_text(join(a.out, "case.csv"), series_csv(pair.case_like));
    report::write_text(join(a.out, "metric.csv"), series_csv(pair.metric_like));

    if (a.pipeline_inputs) {
        manifest.parameter("keywords", std::to_string(a.keywords));
        const auto in = testkit::synth_inputs(a.scenario, a.keywords);
        std::ostringstream seg;
        seg << "keyword,segment_start,date,value\n";
        for (const auto& r : in.segments) {
            seg << r.keyword << ',' << r.segment_start.iso() << ',' << r.date.iso() << ',' << format_number(r.value)
                << '\n';
        }
        report::write_text(join(a.out, "segments.csv"), seg.str());
        std::ostringstream wk;
        wk << "keyword,week_start,value\n";
        for (const auto& r : in.weekly) {
            wk << r.keyword << ',' << r.week_start.iso() << ',' << format_number(r.value) << '\n';
        }
        report::write_text(join(a.out, "weekly.csv"), wk.str());
        std::ostringstream ll;
        ll << "CaseCode,RegionRes,ProvinceRes,DateRepConf,DateRepRem\n";
        std::size_t id = 0;
        for (const auto& r : in.linelist) {
            ll << "C" << ++id << ",NCR,NCR," << r.confirmed.iso() << ',' << (r.removed ? r.removed->iso() : "")
               << '\n';
        }
        report::write_text(join(a.out, "linelist.csv"), ll.str());
    }
    report::write_json(join(a.out, "manifest.json"), manifest.to_json());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"warpwatch: network metrics of search interest aligned to case curves with banded DTW"};
    app.require_subcommand(1);

    PreprocessArgs pre;
    auto* p = app.add_subcommand("preprocess", "Reconstruct daily keyword series from 30-day segments");
    p->add_option("--segments", pre.segments, "Segment CSV (keyword,segment_start,date,value)")
        ->required()
        ->check(CLI::ExistingFile);
    p->add_option("--weekly", pre.weekly, "Weekly reference CSV (keyword,week_start,value); needed by rescale")
        ->check(CLI::ExistingFile);
    p->add_option("--method", pre.method, "rescale | msv")->required()->check(CLI::IsMember({"rescale", "msv"}));
    p->add_option("--out", pre.out, "Output directory (one <keyword>.csv each)")->required();

    MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "Rolling distance-correlation network metric series");
    m->add_option("--panel", met.panel, "Directory of <keyword>.csv daily series")->required();
    m->add_option("--metric", met.metric, "density | clustering")
        ->required()
        ->check(CLI::IsMember({"density", "clustering"}));
    m->add_option("--threshold", met.threshold, "Edge threshold in (0,1]")->required();
    m->add_option("--window", met.window, "Correlation window in days")->required();
    m->add_option("--out", met.out, "Output CSV (date,value)")->required();

    CasesArgs cas;
    auto* c = app.add_subcommand("cases", "Daily confirmed and active cases from a line list");
    c->add_option("--linelist", cas.linelist, "Line-list CSV")->required()->check(CLI::ExistingFile);
    c->add_option("--region", cas.region, "RegionRes filter")->capture_default_str();
    c->add_option("--province", cas.province, "ProvinceRes filter")->capture_default_str();
    c->add_option("--start", cas.start, "First day, YYYY-MM-DD")->required();
    c->add_option("--end", cas.end, "Last day, YYYY-MM-DD")->required();
    c->add_option("--out", cas.out, "Output directory")->required();

    DtwArgs dt;
    auto* d = app.add_subcommand("dtw", "Banded DTW between a case series and a metric series");
    d->add_option("--case", dt.case_csv, "Case CSV (date,value)")->required()->check(CLI::ExistingFile);
    d->add_option("--metric", dt.metric_csv, "Metric CSV (date,value)")->required()->check(CLI::ExistingFile);
    d->add_option("--radius", dt.radius, "Sakoe-Chiba radius in days, or 'none'")->required();
    d->add_flag("--no-normalize", dt.no_normalize, "Use the case series as-is instead of min-max scaling it");
    d->add_option("--out", dt.out, "Output directory (result.json, alignment.csv)")->required();

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Full parameter sweep with Kruskal-Wallis report");
    s->add_option("--config", sw.config, "JSON parameter domains (default: full lattice)")
        ->check(CLI::ExistingFile);
    s->add_option("--rescale-panel", sw.rescale_panel, "Panel directory built with --method rescale");
    s->add_option("--msv-panel", sw.msv_panel, "Panel directory built with --method msv");
    s->add_option("--confirmed", sw.confirmed, "Daily confirmed CSV")->check(CLI::ExistingFile);
    s->add_option("--active", sw.active, "Daily active CSV")->check(CLI::ExistingFile);
    s->add_option("--out", sw.out, "Output directory (sweep.csv, report.json, optimal.csv)")->required();

    SynthArgs sy;
    auto* y = app.add_subcommand("synth", "Deterministic synthetic case/metric pair (and pipeline inputs)");
    y->add_option("--length", sy.scenario.length, "Days")->capture_default_str();
    y->add_option("--lag", sy.scenario.lag, "Days the metric trails the cases")->capture_default_str();
    y->add_option("--noise", sy.scenario.noise_amplitude, "Uniform noise amplitude")->capture_default_str();
    y->add_option("--seed", sy.scenario.seed, "64-bit seed")->capture_default_str();
    y->add_flag("--pipeline-inputs", sy.pipeline_inputs, "Also write segments.csv, weekly.csv, linelist.csv");
    y->add_option("--keywords", sy.keywords, "Keyword count for --pipeline-inputs")->capture_default_str();
    y->add_option("--out", sy.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*p) return cmd_preprocess(pre);
        if (*m) return cmd_metrics(met);
        if (*c) return cmd_cases(cas);
        if (*d) return cmd_dtw(dt);
        if (*s) return cmd_sweep(sw);
        if (*y) return cmd_synth(sy);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
