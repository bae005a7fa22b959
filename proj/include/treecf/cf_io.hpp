#ifndef TREECF_CF_IO_HPP
#define TREECF_CF_IO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "treecf/cf_search.hpp"
#include "treecf/errors.hpp"
#include "treecf/eval.hpp"
#include "treecf/feature_tweak.hpp"

namespace treecf {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string json_digest(const nlohmann::json& j) { return hex64(fnv1a64(j.dump())); }

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a64(buf.str()));
}

// The config fingerprint embedded in every CF record. Focus-only fields are
// absent for feature-tweaking runs and vice versa.
struct CfFileConfig {
    std::string method;  // "focus" | "feature-tweaking"
    std::string distance;
    double smooth_eps = 0.0;
    std::uint64_t seed = 0;
    // focus
    std::optional<double> sigma, tau, beta, alpha;
    std::optional<int> iterations;
    std::optional<bool> clamp;
    // feature-tweaking
    std::optional<double> epsilon;

    static CfFileConfig from_focus(const FocusConfig& cfg) {
        CfFileConfig c;
        c.method = "focus";
        c.distance = to_string(cfg.distance.kind);
        c.smooth_eps = cfg.distance.smooth_eps;
        c.seed = cfg.seed;
        c.sigma = cfg.soft.sigma;
        c.tau = cfg.soft.tau;
        c.beta = cfg.beta;
        c.alpha = cfg.alpha;
        c.iterations = cfg.iterations;
        c.clamp = cfg.clamp_to_unit_box;
        return c;
    }

    static CfFileConfig from_ft(const FtConfig& cfg, std::uint64_t seed) {
        CfFileConfig c;
        c.method = "feature-tweaking";
        c.distance = to_string(cfg.distance.kind);
        c.smooth_eps = cfg.distance.smooth_eps;
        c.seed = seed;
        c.epsilon = cfg.epsilon;
        return c;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"method", method},
                         {"distance", distance},
                         {"smooth_eps", smooth_eps},
                         {"seed", seed}};
        if (sigma) j["sigma"] = *sigma;
        if (tau) j["tau"] = *tau;
        if (beta) j["beta"] = *beta;
        if (alpha) j["alpha"] = *alpha;
        if (iterations) j["iterations"] = *iterations;
        if (clamp) j["clamp"] = *clamp;
        if (epsilon) j["epsilon"] = *epsilon;
        return j;
    }

    std::string fingerprint() const { return json_digest(to_json()); }
};

struct CfFile {
    CfFileConfig config;
    std::string manifest_digest;
    std::vector<std::size_t> indices;  // instance_index per record
    std::vector<CfResult> results;
};

inline nlohmann::json cf_records_json(const std::vector<CfResult>& results,
                                      const std::vector<std::size_t>& indices,
                                      const CfFileConfig& config,
                                      const std::string& manifest_digest) {
    if (results.size() != indices.size())
        throw ConfigError("cf_records_json: indices and results length mismatch");
    nlohmann::json cfg = config.to_json();
    cfg["fingerprint"] = config.fingerprint();
    if (!manifest_digest.empty()) cfg["manifest_digest"] = manifest_digest;

    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const CfResult& r = results[i];
        nlohmann::json rec{{"instance_index", indices[i]},
                           {"original", r.original},
                           {"original_label", r.original_label},
                           {"config", cfg}};
        rec["counterfactual"] =
            r.found() ? nlohmann::json(*r.counterfactual) : nlohmann::json(nullptr);
        rec["cf_label"] = r.cf_label ? nlohmann::json(*r.cf_label) : nlohmann::json(nullptr);
        rec["distance"] = r.distance ? nlohmann::json(*r.distance) : nlohmann::json(nullptr);
        rec["found_at_iteration"] = r.found_at_iteration
                                        ? nlohmann::json(*r.found_at_iteration)
                                        : nlohmann::json(nullptr);
        if (r.error) rec["error"] = *r.error;
        arr.push_back(std::move(rec));
    }
    return arr;
}

inline void write_cf_file(const std::string& path, const std::vector<CfResult>& results,
                          const std::vector<std::size_t>& indices, const CfFileConfig& config,
                          const std::string& manifest_digest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << cf_records_json(results, indices, config, manifest_digest).dump(1) << '\n';
}

namespace detail {

template <typename T>
T require_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("cf record missing field: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("cf record field has wrong type: ") + key);
    }
}

}  // namespace detail

inline CfFile read_cf_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("malformed JSON in " + path + ": " + e.what());
    }
    if (!arr.is_array()) throw SchemaError("cf file must be a JSON array: " + path);

    CfFile file;
    for (const nlohmann::json& rec : arr) {
        if (!rec.is_object()) throw SchemaError("cf record must be an object");
        file.indices.push_back(detail::require_field<std::size_t>(rec, "instance_index"));
        CfResult r;
        r.original = detail::require_field<std::vector<double>>(rec, "original");
        r.original_label = detail::require_field<int>(rec, "original_label");
        const nlohmann::json& cf = rec.at("counterfactual");
        if (!cf.is_null()) {
            try {
                r.counterfactual = cf.get<std::vector<double>>();
                r.cf_label = rec.at("cf_label").get<int>();
                r.distance = rec.at("distance").get<double>();
            } catch (const nlohmann::json::exception&) {
                throw SchemaError("cf record has malformed counterfactual fields");
            }
            if (rec.contains("found_at_iteration") && !rec.at("found_at_iteration").is_null())
                r.found_at_iteration = rec.at("found_at_iteration").get<int>();
        }
        if (rec.contains("error") && !rec.at("error").is_null())
            r.error = rec.at("error").get<std::string>();
        file.results.push_back(std::move(r));

        if (file.results.size() == 1 && rec.contains("config")) {
            const nlohmann::json& cfg = rec.at("config");
            CfFileConfig& c = file.config;
            c.method = detail::require_field<std::string>(cfg, "method");
            c.distance = detail::require_field<std::string>(cfg, "distance");
            c.smooth_eps = detail::require_field<double>(cfg, "smooth_eps");
            c.seed = detail::require_field<std::uint64_t>(cfg, "seed");
            if (cfg.contains("sigma")) c.sigma = cfg.at("sigma").get<double>();
            if (cfg.contains("tau")) c.tau = cfg.at("tau").get<double>();
            if (cfg.contains("beta")) c.beta = cfg.at("beta").get<double>();
            if (cfg.contains("alpha")) c.alpha = cfg.at("alpha").get<double>();
            if (cfg.contains("iterations")) c.iterations = cfg.at("iterations").get<int>();
            if (cfg.contains("clamp")) c.clamp = cfg.at("clamp").get<bool>();
            if (cfg.contains("epsilon")) c.epsilon = cfg.at("epsilon").get<double>();
            if (cfg.contains("manifest_digest"))
                file.manifest_digest = cfg.at("manifest_digest").get<std::string>();
        }
    }
    return file;
}

inline nlohmann::json report_to_json(const EvalReport& rep, const std::string& manifest_digest) {
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j{{"distance", rep.distance},
                     {"d_mean", opt(rep.d_mean_ours)},
                     {"coverage", rep.coverage_ours},
                     {"n_instances", rep.n_ours},
                     {"d_mean_baseline", opt(rep.d_mean_baseline)},
                     {"coverage_baseline", opt(rep.coverage_baseline)},
                     {"n_instances_baseline", rep.n_baseline},
                     {"d_rmean", opt(rep.d_rmean_value)},
                     {"pct_closer", opt(rep.pct_closer_value)},
                     {"p_value", opt(rep.p_value)},
                     {"n_compared", rep.n_compared},
                     {"n_zero_baseline_excluded", rep.n_zero_excluded},
                     {"paired", rep.paired},
                     {"method", rep.method_ours},
                     {"method_baseline", rep.method_baseline}};
    if (!manifest_digest.empty()) j["manifest_digest"] = manifest_digest;
    return j;
}

// Flat one-row CSV mirroring the report, for spreadsheet diffing.
inline std::string report_to_csv(const EvalReport& rep) {
    auto num = [](double v) { return nlohmann::json(v).dump(); };
    auto opt = [&num](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    std::ostringstream out;
    out << "distance,method,baseline,d_mean,d_mean_baseline,d_rmean,pct_closer,"
           "coverage,coverage_baseline,n_compared,n_zero_baseline_excluded,p_value\n";
    out << rep.distance << ',' << rep.method_ours << ',' << rep.method_baseline << ','
        << opt(rep.d_mean_ours) << ',' << opt(rep.d_mean_baseline) << ','
        << opt(rep.d_rmean_value) << ',' << opt(rep.pct_closer_value) << ','
        << num(rep.coverage_ours) << ',' << opt(rep.coverage_baseline) << ','
        << rep.n_compared << ',' << rep.n_zero_excluded << ',' << opt(rep.p_value) << '\n';
    return out.str();
}

inline void write_report_files(const std::string& json_path, const std::string& csv_path,
                               const EvalReport& rep, const std::string& manifest_digest) {
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + json_path);
        out << report_to_json(rep, manifest_digest).dump(1) << '\n';
    }
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + csv_path);
        out << report_to_csv(rep);
    }
}

}  // namespace treecf

#endif  // TREECF_CF_IO_HPP
