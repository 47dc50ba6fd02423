#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "warpwatch/errors.hpp"
#include "warpwatch/format.hpp"
#include "warpwatch/sweep.hpp"

namespace warpwatch::report {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// A double that serializes with at most 9 significant digits.
inline Json number(double v) { return std::stod(format_number(v)); }

/// FNV-1a 64-bit digest, hex encoded.
inline std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Provenance attached to every output: what ran, with which parameters, on
/// which input bytes.
class RunManifest {
public:
    explicit RunManifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    void parameter(const std::string& name, const std::string& value) { params_.emplace_back(name, value); }

    /// Hashes one input file; a directory input is hashed file by file by the
    /// caller under distinct names.
    void input(const std::string& path) { inputs_.emplace_back(path, fnv1a64(read_bytes(path))); }
    void input(const std::string& name, const std::string& digest) { inputs_.emplace_back(name, digest); }

    /// `manifest_hash` covers every other field of the manifest.
    Json to_json() const {
        Json j;
        j["artifact"] = "warpwatch";
        j["version"] = kVersion;
        j["subcommand"] = subcommand_;
        Json p = Json::object();
        for (const auto& [k, v] : params_) p[k] = v;
        j["parameters"] = std::move(p);
        Json in = Json::array();
        for (const auto& [path, digest] : inputs_) in.push_back({{"path", path}, {"fnv1a64", digest}});
        j["inputs"] = std::move(in);
        j["manifest_hash"] = fnv1a64(j.dump());
        return j;
    }

private:
    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<std::pair<std::string, std::string>> inputs_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Sweep config file

/// Flat JSON object of parameter arrays; absent keys keep the full default
/// domain. Unknown keys and unknown level labels are usage errors.
inline sweep::SweepDomains domains_from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("sweep config must be a JSON object");
    sweep::SweepDomains d;
    auto array = [&](const std::string& key) -> const Json& {
        const Json& a = j.at(key);
        if (!a.is_array()) throw UsageError("sweep config key '" + key + "' must be an array");
        return a;
    };
    for (const auto& [key, value] : j.items()) {
        (void)value;
        try {
            if (key == "metric") {
                d.metrics.clear();
                for (const auto& v : array(key)) {
                    const auto s = v.get<std::string>();
                    if (s == "density") d.metrics.push_back(sweep::MetricKind::Density);
                    else if (s == "clustering") d.metrics.push_back(sweep::MetricKind::Clustering);
                    else throw UsageError("unknown metric '" + s + "'");
                }
            } else if (key == "preprocess") {
                d.preprocesses.clear();
                for (const auto& v : array(key)) {
                    const auto s = v.get<std::string>();
                    if (s == "rescale") d.preprocesses.push_back(sweep::Preprocess::RescalingDaily);
                    else if (s == "msv") d.preprocesses.push_back(sweep::Preprocess::Msv);
                    else throw UsageError("unknown preprocess '" + s + "'");
                }
            } else if (key == "threshold") {
                d.thresholds.clear();
                for (const auto& v : array(key)) d.thresholds.push_back(v.get<double>());
            } else if (key == "window") {
                d.windows.clear();
                for (const auto& v : array(key)) d.windows.push_back(v.get<std::size_t>());
            } else if (key == "case_type") {
                d.case_types.clear();
                for (const auto& v : array(key)) {
                    const auto s = v.get<std::string>();
                    if (s == "confirmed") d.case_types.push_back(sweep::CaseType::Confirmed);
                    else if (s == "active") d.case_types.push_back(sweep::CaseType::Active);
                    else throw UsageError("unknown case_type '" + s + "'");
                }
            } else if (key == "radius") {
                d.radii.clear();
                for (const auto& v : array(key)) d.radii.push_back(v.get<std::size_t>());
            } else {
                throw UsageError("unknown sweep config key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("sweep config key '" + key + "': " + e.what());
        }
    }
    d.validate_and_canonicalize();
    return d;
}

// ---------------------------------------------------------------------------
// Sweep artifacts

/// `metric,preprocess,threshold,window,case_type,radius,dtw_score,status,path_length`;
/// score and path length are blank for failed configs.
inline std::string sweep_csv(const std::vector<sweep::SweepResult>& results) {
    std::ostringstream out;
    out << "metric,preprocess,threshold,window,case_type,radius,dtw_score,status,path_length\n";
    for (const auto& r : results) {
        const auto& c = r.config;
        out << sweep::label(c.metric) << ',' << sweep::label(c.preprocess) << ',' << format_number(c.threshold)
            << ',' << c.window << ',' << sweep::label(c.case_type) << ',' << c.radius << ',';
        if (r.ok()) out << format_number(r.dtw_score);
        out << ',' << sweep::label(r.status) << ',';
        if (r.ok()) out << r.path_length;
        out << '\n';
    }
    return out.str();
}

/// One entry per parameter: per-level means, H, p and significance at 0.05.
inline Json parameter_report_json(const std::vector<sweep::ParameterReport>& reports, const RunManifest& manifest) {
    Json j;
    Json params = Json::object();
    for (const auto& rep : reports) {
        Json e;
        Json means = Json::object();
        Json counts = Json::object();
        for (const auto& l : rep.levels) {
            means[l.level] = number(l.mean_dtw);
            counts[l.level] = l.count;
        }
        e["level_means"] = std::move(means);
        e["level_counts"] = std::move(counts);
        if (rep.test) {
            e["H"] = number(rep.test->h);
            e["p"] = number(rep.test->p);
            e["dof"] = rep.test->dof;
        } else {
            e["H"] = nullptr;
            e["p"] = nullptr;
            e["dof"] = nullptr;
        }
        e["significant"] = rep.significant();
        params[sweep::label(rep.parameter)] = std::move(e);
    }
    j["alpha"] = sweep::kAlpha;
    j["parameters"] = std::move(params);
    j["manifest"] = manifest.to_json();
    return j;
}

/// `metric,case_type,preprocess,threshold,window,radius,dtw_score`; the
/// config columns are blank when a group has no successful result.
inline std::string optimal_csv(const std::vector<sweep::OptimalRow>& rows) {
    std::ostringstream out;
    out << "metric,case_type,preprocess,threshold,window,radius,dtw_score\n";
    for (const auto& row : rows) {
        out << sweep::label(row.metric) << ',' << sweep::label(row.case_type) << ',';
        if (row.best) {
            const auto& c = row.best->config;
            out << sweep::label(c.preprocess) << ',' << format_number(c.threshold) << ',' << c.window << ','
                << c.radius << ',' << format_number(row.best->dtw_score);
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace warpwatch::report
