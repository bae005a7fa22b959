#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "treecf/treecf.hpp"

namespace {

using nlohmann::json;
using namespace treecf;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Input files keyed by role; the digest scope uses content digests only, so
// the same data at a different path still reproduces identical outputs.
struct Inputs {
    std::map<std::string, std::pair<std::string, std::string>> entries;  // role -> (path, digest)

    void add(const std::string& role, const std::string& path) {
        entries[role] = {path, file_digest(path)};
    }
    json content_digests() const {
        json j = json::object();
        for (const auto& [role, pd] : entries) j[role] = pd.second;
        return j;
    }
    json with_paths() const {
        json j = json::object();
        for (const auto& [role, pd] : entries)
            j[role] = json{{"path", pd.first}, {"digest", pd.second}};
        return j;
    }
};

// Digest covers only what determines output bytes: subcommand, semantic
// parameters, input content digests, seed. Paths, artifacts, and execution
// details (jobs, timing) are recorded in the manifest but stay outside the
// digest, so reruns in another directory or with a different --jobs still
// reproduce outputs byte-for-byte.
std::string manifest_digest_of(const std::string& subcommand, const json& parameters,
                               const Inputs& inputs, std::uint64_t seed) {
    const json core{{"subcommand", subcommand},
                    {"parameters", parameters},
                    {"inputs", inputs.content_digests()},
                    {"seed", seed}};
    return json_digest(core);
}

void write_manifest(const std::string& path, const std::string& subcommand,
                    const json& parameters, const Inputs& inputs, std::uint64_t seed,
                    const std::vector<std::string>& artifacts, int jobs, double wall_ms) {
    json full{{"subcommand", subcommand},
              {"parameters", parameters},
              {"inputs", inputs.with_paths()},
              {"seed", seed},
              {"artifacts", artifacts}};
    full["digest"] = manifest_digest_of(subcommand, parameters, inputs, seed);
    full["execution"] = json{{"jobs", jobs}, {"wall_ms", wall_ms}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << full.dump(1) << '\n';
}

// Reorder/restrict dataset columns to exactly the model's feature list.
Dataset project_onto(const Dataset& ds, const std::vector<std::string>& names) {
    std::vector<std::size_t> pos;
    pos.reserve(names.size());
    for (const auto& name : names) {
        const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
        if (it == ds.feature_names.end())
            throw SchemaError("data file lacks the model feature: " + name);
        pos.push_back(static_cast<std::size_t>(it - ds.feature_names.begin()));
    }
    Dataset out;
    out.feature_names = names;
    out.labels = ds.labels;
    out.n_classes = ds.n_classes;
    out.label_names = ds.label_names;
    out.notes = ds.notes;
    out.rows.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        std::vector<double> r(pos.size());
        for (std::size_t k = 0; k < pos.size(); ++k) r[k] = row[pos[k]];
        out.rows.push_back(std::move(r));
    }
    return out;
}

struct DataArgs {
    std::string data;
    std::string label;
    std::optional<double> label_geq;
    std::uint64_t seed = 0;
    bool stratified = false;
};

Dataset load_raw(const DataArgs& a) {
    LoadOptions opts;
    opts.label_geq = a.label_geq;
    return load_csv(a.data, a.label, opts);
}

// Raw CSV rows projected onto the model's features and scaled with the
// model's stored min/max (explain and gridsearch both start here).
struct ScaledData {
    Dataset ds;  // rows already scaled
    SplitIndices split;
};

ScaledData load_for_model(const TreeEnsemble& ens, const DataArgs& a) {
    ScaledData out;
    out.ds = project_onto(load_raw(a), ens.feature_names);
    for (auto& row : out.ds.rows) row = apply_scaling(row, ens.scale_min, ens.scale_max);
    out.ds.scale_min = ens.scale_min;
    out.ds.scale_max = ens.scale_max;
    out.split = split_indices_70_30(out.ds.labels, out.ds.n_classes, a.seed, a.stratified);
    return out;
}

std::vector<std::size_t> select_split(const ScaledData& sd, const std::string& which,
                                      std::size_t limit) {
    std::vector<std::size_t> idx;
    if (which == "train") {
        idx = sd.split.train;
    } else if (which == "test") {
        idx = sd.split.test;
    } else if (which == "all") {
        idx.resize(sd.ds.n_rows());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    } else {
        throw ConfigError("--split must be one of: train, test, all");
    }
    if (limit > 0 && idx.size() > limit) idx.resize(limit);
    return idx;
}

DistanceSpec build_distance(const std::string& kind_name, double smooth_eps,
                            const TreeEnsemble& ens, const std::string& train_data,
                            double ridge, const DataArgs& base_args) {
    DistanceSpec spec;
    spec.kind = distance_kind_from_string(kind_name);
    spec.smooth_eps = smooth_eps;
    if (spec.kind == DistanceKind::Mahalanobis) {
        if (train_data.empty())
            throw SchemaError(
                "mahalanobis needs a covariance source; pass --train-data <csv> "
                "(its train split is used)");
        DataArgs a = base_args;
        a.data = train_data;
        ScaledData sd = load_for_model(ens, a);
        Dataset train_side = Dataset{};
        train_side.feature_names = sd.ds.feature_names;
        train_side.n_classes = sd.ds.n_classes;
        for (std::size_t i : sd.split.train) {
            train_side.rows.push_back(sd.ds.rows[i]);
            train_side.labels.push_back(sd.ds.labels[i]);
        }
        spec.covariance = covariance(train_side, ridge);
    }
    return spec;
}

int cmd_train(const DataArgs& data_args, const std::string& kind, int num_trees, int max_depth,
              int min_leaf, const std::string& out_path) {
    const auto t0 = Clock::now();
    Dataset raw = load_raw(data_args);
    Dataset scaled = minmax_scale(raw);
    auto [train_ds, test_ds] = split_70_30(scaled, data_args.seed, data_args.stratified);

    TreeEnsemble ens;
    if (kind == "dt") {
        ens = single_tree_ensemble(train_ds, max_depth, min_leaf);
    } else if (kind == "rf") {
        ens = train_random_forest(train_ds, num_trees, max_depth, data_args.seed, min_leaf);
    } else if (kind == "ab") {
        ens = train_adaboost(train_ds, num_trees, max_depth, data_args.seed, min_leaf);
    } else {
        throw ConfigError("--kind must be one of: dt, rf, ab");
    }
    save_model(ens, out_path);

    const double train_acc = accuracy(ens, train_ds.rows, train_ds.labels);
    const double test_acc = accuracy(ens, test_ds.rows, test_ds.labels);

    json params{{"label", data_args.label},          {"kind", kind},
                {"num_trees", num_trees},            {"max_depth", max_depth},
                {"min_leaf", min_leaf},              {"stratified", data_args.stratified}};
    if (data_args.label_geq) params["label_geq"] = *data_args.label_geq;
    Inputs inputs;
    inputs.add("data", data_args.data);
    write_manifest(out_path + ".manifest.json", "train", params, inputs, data_args.seed,
                   {out_path}, 1, ms_since(t0));

    std::cout << "trained " << kind << ": " << ens.trees.size() << " tree(s), "
              << train_ds.n_rows() << " train rows, " << test_ds.n_rows() << " test rows\n"
              << "train accuracy: " << train_acc << "\n"
              << "test accuracy: " << test_acc << "\n"
              << "model: " << out_path << "\n";
    for (const auto& note : scaled.notes) std::cout << "note: " << note << "\n";
    return 0;
}

int cmd_explain(const DataArgs& data_args, const std::string& model_path,
                const std::string& split_name, std::size_t limit, const std::string& method,
                const std::string& distance_name, double smooth_eps, double sigma, double tau,
                double beta, double alpha, int iters, bool clamp, double epsilon,
                const std::string& train_data, double ridge, int jobs,
                const std::string& out_path) {
    const auto t0 = Clock::now();
    TreeEnsemble ens = load_model(model_path);
    ScaledData sd = load_for_model(ens, data_args);
    const std::vector<std::size_t> indices = select_split(sd, split_name, limit);

    std::vector<std::vector<double>> rows;
    rows.reserve(indices.size());
    for (std::size_t i : indices) rows.push_back(sd.ds.rows[i]);

    std::vector<CfResult> results;
    CfFileConfig file_cfg;
    if (method == "focus") {
        FocusConfig cfg;
        cfg.soft.sigma = sigma;
        cfg.soft.tau = tau;
        cfg.beta = beta;
        cfg.alpha = alpha;
        cfg.iterations = iters;
        cfg.clamp_to_unit_box = clamp;
        cfg.seed = data_args.seed;
        cfg.distance =
            build_distance(distance_name, smooth_eps, ens, train_data, ridge, data_args);
        results = batch_generate(ens, rows, cfg, jobs);
        file_cfg = CfFileConfig::from_focus(cfg);
    } else if (method == "ft") {
        FtConfig cfg;
        cfg.epsilon = epsilon;
        // FT needs no gradients, so candidates are ranked with exact distances.
        cfg.distance = build_distance(distance_name, 0.0, ens, train_data, ridge, data_args);
        results = batch_ft(ens, rows, cfg, jobs);
        file_cfg = CfFileConfig::from_ft(cfg, data_args.seed);
    } else {
        throw ConfigError("--method must be one of: focus, ft");
    }

    json params{{"label", data_args.label},    {"split", split_name},
                {"limit", limit},              {"method", method},
                {"distance", distance_name},   {"smooth_eps", smooth_eps},
                {"stratified", data_args.stratified}, {"ridge", ridge}};
    if (data_args.label_geq) params["label_geq"] = *data_args.label_geq;
    if (method == "focus") {
        params["sigma"] = sigma;
        params["tau"] = tau;
        params["beta"] = beta;
        params["alpha"] = alpha;
        params["iterations"] = iters;
        params["clamp"] = clamp;
    } else {
        params["epsilon"] = epsilon;
    }
    Inputs inputs;
    inputs.add("model", model_path);
    inputs.add("data", data_args.data);
    if (!train_data.empty()) inputs.add("train_data", train_data);
    const std::string digest = manifest_digest_of("explain", params, inputs, data_args.seed);

    write_cf_file(out_path, results, indices, file_cfg, digest);
    write_manifest(out_path + ".manifest.json", "explain", params, inputs, data_args.seed,
                   {out_path}, jobs, ms_since(t0));

    std::size_t found = 0;
    for (const auto& r : results)
        if (r.found()) ++found;
    std::cout << "explained " << results.size() << " instance(s), method " << method << "\n"
              << "coverage: "
              << (results.empty() ? 0.0
                                  : static_cast<double>(found) /
                                        static_cast<double>(results.size()))
              << "\n"
              << "counterfactuals: " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& cf_path, const std::string& baseline_path,
                 const std::string& distance_name, const std::string& model_path,
                 const std::string& train_data, double ridge, const DataArgs& cov_args,
                 bool paired, const std::string& out_prefix) {
    const auto t0 = Clock::now();
    CfFile ours = read_cf_file(cf_path);
    if (ours.results.empty()) throw DataError("cf file has no records: " + cf_path);

    std::optional<TreeEnsemble> ens;
    if (!model_path.empty()) ens = load_model(model_path);

    const std::string dist_name = distance_name.empty() ? ours.config.distance : distance_name;
    DistanceSpec spec;
    if (distance_kind_from_string(dist_name) == DistanceKind::Mahalanobis) {
        if (!ens)
            throw SchemaError("mahalanobis evaluation needs --model for the scaling context");
        spec = build_distance(dist_name, 0.0, *ens, train_data, ridge, cov_args);
    } else {
        spec.kind = distance_kind_from_string(dist_name);
        spec.smooth_eps = 0.0;
    }

    EvalReport rep;
    if (!baseline_path.empty()) {
        CfFile base = read_cf_file(baseline_path);
        // Align the two files on their common instance indices.
        std::map<std::size_t, std::size_t> base_pos;
        for (std::size_t i = 0; i < base.indices.size(); ++i) base_pos[base.indices[i]] = i;
        std::vector<CfResult> ours_sub, base_sub;
        for (std::size_t i = 0; i < ours.indices.size(); ++i) {
            const auto it = base_pos.find(ours.indices[i]);
            if (it == base_pos.end()) continue;
            if (ours.results[i].original != base.results[it->second].original)
                throw SchemaError("instance " + std::to_string(ours.indices[i]) +
                                  " has different original vectors in the two cf files");
            ours_sub.push_back(ours.results[i]);
            base_sub.push_back(base.results[it->second]);
        }
        if (ours_sub.empty())
            throw SchemaError("empty overlap: the two cf files share no instance indices");
        rep = make_report(ours_sub, &base_sub, spec, ens ? &*ens : nullptr, paired);
        rep.method_baseline = base.config.method + ":" + base.config.fingerprint();
    } else {
        rep = make_report(ours.results, nullptr, spec, ens ? &*ens : nullptr, paired);
    }
    rep.method_ours = ours.config.method + ":" + ours.config.fingerprint();

    json params{{"distance", dist_name}, {"ridge", ridge}, {"paired", paired}};
    Inputs inputs;
    inputs.add("cf", cf_path);
    if (!baseline_path.empty()) inputs.add("baseline", baseline_path);
    if (!model_path.empty()) inputs.add("model", model_path);
    if (!train_data.empty()) inputs.add("train_data", train_data);
    const std::vector<std::string> artifacts{out_prefix + ".json", out_prefix + ".csv"};
    const std::string digest = manifest_digest_of("evaluate", params, inputs, cov_args.seed);

    write_report_files(out_prefix + ".json", out_prefix + ".csv", rep, digest);
    write_manifest(out_prefix + ".manifest.json", "evaluate", params, inputs, cov_args.seed,
                   artifacts, 1, ms_since(t0));

    std::cout << "report: " << out_prefix << ".json\n";
    if (rep.d_mean_ours) std::cout << "d_mean: " << *rep.d_mean_ours << "\n";
    std::cout << "coverage: " << rep.coverage_ours << "\n";
    if (rep.d_rmean_value) std::cout << "d_rmean: " << *rep.d_rmean_value << "\n";
    if (rep.pct_closer_value) std::cout << "pct_closer: " << *rep.pct_closer_value << "\n";
    if (rep.p_value) std::cout << "p_value: " << *rep.p_value << "\n";
    return 0;
}

int cmd_gridsearch(const DataArgs& data_args, const std::string& model_path,
                   const std::string& split_name, std::size_t limit,
                   const std::string& distance_name, double smooth_eps,
                   std::vector<double> sigma_grid, std::vector<double> tau_grid,
                   std::vector<double> beta_grid, std::vector<double> alpha_grid, int iters,
                   bool clamp, const std::string& train_data, double ridge, int jobs,
                   const std::string& out_path) {
    const auto t0 = Clock::now();
    TreeEnsemble ens = load_model(model_path);
    ScaledData sd = load_for_model(ens, data_args);
    const std::vector<std::size_t> indices = select_split(sd, split_name, limit);
    std::vector<std::vector<double>> rows;
    rows.reserve(indices.size());
    for (std::size_t i : indices) rows.push_back(sd.ds.rows[i]);

    if (sigma_grid.empty()) sigma_grid = default_sigma_grid();
    if (tau_grid.empty()) tau_grid = default_tau_grid();
    if (beta_grid.empty()) beta_grid = default_beta_grid();
    if (alpha_grid.empty()) alpha_grid = default_alpha_grid();

    FocusConfig base;
    base.iterations = iters;
    base.clamp_to_unit_box = clamp;
    base.seed = data_args.seed;
    base.distance = build_distance(distance_name, smooth_eps, ens, train_data, ridge, data_args);

    const GridSearchResult gs =
        grid_search(ens, rows, base, sigma_grid, tau_grid, beta_grid, alpha_grid, jobs);

    json table = json::array();
    for (const GridCell& c : gs.table) {
        json cell{{"sigma", c.sigma},       {"tau", c.tau},
                  {"beta", c.beta},         {"alpha", c.alpha},
                  {"coverage", c.coverage}};
        cell["d_mean"] = std::isfinite(c.d_mean) ? json(c.d_mean) : json(nullptr);
        table.push_back(std::move(cell));
    }
    json best{{"sigma", gs.best_cell.sigma},
              {"tau", gs.best_cell.tau},
              {"beta", gs.best_cell.beta},
              {"alpha", gs.best_cell.alpha},
              {"coverage", gs.best_cell.coverage}};
    best["d_mean"] =
        std::isfinite(gs.best_cell.d_mean) ? json(gs.best_cell.d_mean) : json(nullptr);

    json params{{"label", data_args.label},       {"split", split_name},
                {"limit", limit},                 {"distance", distance_name},
                {"smooth_eps", smooth_eps},       {"sigma_grid", sigma_grid},
                {"tau_grid", tau_grid},           {"beta_grid", beta_grid},
                {"alpha_grid", alpha_grid},       {"iterations", iters},
                {"clamp", clamp},                 {"stratified", data_args.stratified},
                {"ridge", ridge}};
    if (data_args.label_geq) params["label_geq"] = *data_args.label_geq;
    Inputs inputs;
    inputs.add("model", model_path);
    inputs.add("data", data_args.data);
    if (!train_data.empty()) inputs.add("train_data", train_data);
    const std::string digest = manifest_digest_of("gridsearch", params, inputs, data_args.seed);

    json out{{"best", best}, {"table", table}, {"n_instances", rows.size()},
             {"manifest_digest", digest}};
    {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw DataError("cannot write file: " + out_path);
        f << out.dump(1) << '\n';
    }
    write_manifest(out_path + ".manifest.json", "gridsearch", params, inputs, data_args.seed,
                   {out_path}, jobs, ms_since(t0));

    std::cout << "swept " << gs.table.size() << " cell(s) over " << rows.size()
              << " instance(s)\n"
              << "best: sigma=" << gs.best_cell.sigma << " tau=" << gs.best_cell.tau
              << " beta=" << gs.best_cell.beta << " alpha=" << gs.best_cell.alpha
              << " coverage=" << gs.best_cell.coverage;
    if (std::isfinite(gs.best_cell.d_mean)) std::cout << " d_mean=" << gs.best_cell.d_mean;
    std::cout << "\nsweep table: " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual explanations for tree ensembles"};
    app.require_subcommand(1);

    DataArgs data_args;
    double label_geq_value = 0.0;

    // train
    auto* train = app.add_subcommand("train", "train a model on a CSV and save it as JSON");
    std::string train_kind = "dt", train_out;
    int num_trees = 100, max_depth = 4, min_leaf = 1;
    train->add_option("--data", data_args.data, "training CSV")->required();
    train->add_option("--label", data_args.label, "label column (name or index)")->required();
    auto* train_geq = train->add_option("--label-geq", label_geq_value,
                                        "binarize: label >= threshold becomes class 1");
    train->add_option("--kind", train_kind, "dt | rf | ab");
    train->add_option("--num-trees", num_trees, "ensemble size (rf, ab)");
    train->add_option("--max-depth", max_depth, "tree depth cap");
    train->add_option("--min-leaf", min_leaf, "minimum samples per leaf");
    train->add_option("--seed", data_args.seed, "seed for split and training");
    train->add_flag("--stratified", data_args.stratified, "stratify the 70/30 split by class");
    train->add_option("--out", train_out, "output model path")->required();

    // shared explain/gridsearch knobs
    std::string model_path, split_name = "test", method = "focus";
    std::string distance_name = "euclidean", train_data, out_path;
    double smooth_eps = 1e-10, sigma = 1.0, tau = 1.0, beta = 0.01, alpha = 0.001;
    double epsilon = 0.01, ridge = 1e-6;
    int iters = 1000, jobs = 1;
    bool clamp = false;
    std::size_t limit = 0;

    auto* explain = app.add_subcommand("explain", "generate counterfactuals for a model");
    explain->add_option("--model", model_path, "model JSON from train")->required();
    explain->add_option("--data", data_args.data, "CSV in original units")->required();
    explain->add_option("--label", data_args.label, "label column (name or index)")->required();
    auto* explain_geq = explain->add_option("--label-geq", label_geq_value,
                                            "binarize: label >= threshold becomes class 1");
    explain->add_option("--split", split_name, "which rows to explain: test | train | all");
    explain->add_option("--limit", limit, "explain at most this many rows (0 = all)");
    explain->add_option("--seed", data_args.seed, "seed; must match training to reproduce the split");
    explain->add_flag("--stratified", data_args.stratified, "stratify the 70/30 split by class");
    explain->add_option("--method", method, "focus | ft");
    explain->add_option("--distance", distance_name,
                        "euclidean | manhattan | cosine | mahalanobis");
    explain->add_option("--smooth-eps", smooth_eps, "distance smoothing inside optimization");
    explain->add_option("--sigma", sigma, "sigmoid steepness (focus)");
    explain->add_option("--tau", tau, "softmax temperature (focus)");
    explain->add_option("--beta", beta, "distance weight in the loss (focus)");
    explain->add_option("--alpha", alpha, "Adam learning rate (focus)");
    explain->add_option("--iters", iters, "optimization iterations (focus)");
    explain->add_flag("--clamp", clamp, "clamp iterates to the unit box (focus)");
    explain->add_option("--epsilon", epsilon, "threshold offset (ft)");
    explain->add_option("--train-data", train_data, "CSV whose train split feeds the covariance");
    explain->add_option("--ridge", ridge, "covariance ridge (mahalanobis)");
    explain->add_option("--jobs", jobs, "worker threads");
    explain->add_option("--out", out_path, "output counterfactual file")->required();

    auto* evaluate = app.add_subcommand("evaluate", "score one or two counterfactual files");
    std::string cf_path, baseline_path, eval_distance, out_prefix;
    bool paired = false;
    evaluate->add_option("--cf", cf_path, "counterfactual file to score")->required();
    evaluate->add_option("--baseline", baseline_path, "baseline counterfactual file to compare");
    evaluate->add_option("--distance", eval_distance,
                         "metric distance (default: the cf file's own)");
    evaluate->add_option("--model", model_path, "model JSON (coverage re-check, mahalanobis)");
    evaluate->add_option("--train-data", train_data, "CSV whose train split feeds the covariance");
    evaluate->add_option("--ridge", ridge, "covariance ridge (mahalanobis)");
    evaluate->add_option("--label", data_args.label, "label column of --train-data");
    auto* eval_geq = evaluate->add_option("--label-geq", label_geq_value,
                                          "binarize: label >= threshold becomes class 1");
    evaluate->add_option("--seed", data_args.seed, "seed used when the model was trained");
    evaluate->add_flag("--stratified", data_args.stratified, "stratify the 70/30 split by class");
    evaluate->add_flag("--paired", paired, "paired t-test instead of Welch");
    evaluate->add_option("--out", out_prefix, "report path prefix (.json/.csv added)")
        ->required();

    auto* gridsearch = app.add_subcommand("gridsearch", "sweep focus hyperparameters");
    std::vector<double> sigma_grid, tau_grid, beta_grid, alpha_grid;
    gridsearch->add_option("--model", model_path, "model JSON from train")->required();
    gridsearch->add_option("--data", data_args.data, "CSV in original units")->required();
    gridsearch->add_option("--label", data_args.label, "label column (name or index)")
        ->required();
    auto* gs_geq = gridsearch->add_option("--label-geq", label_geq_value,
                                          "binarize: label >= threshold becomes class 1");
    gridsearch->add_option("--split", split_name, "rows to sweep over: test | train | all");
    gridsearch->add_option("--limit", limit, "use at most this many rows (0 = all)");
    gridsearch->add_option("--seed", data_args.seed, "seed; must match training");
    gridsearch->add_flag("--stratified", data_args.stratified, "stratify the split");
    gridsearch->add_option("--distance", distance_name,
                           "euclidean | manhattan | cosine | mahalanobis");
    gridsearch->add_option("--smooth-eps", smooth_eps, "distance smoothing inside optimization");
    gridsearch->add_option("--sigma", sigma_grid, "sigma grid values");
    gridsearch->add_option("--tau", tau_grid, "tau grid values");
    gridsearch->add_option("--beta", beta_grid, "beta grid values");
    gridsearch->add_option("--alpha", alpha_grid, "alpha grid values");
    gridsearch->add_option("--iters", iters, "optimization iterations per cell");
    gridsearch->add_flag("--clamp", clamp, "clamp iterates to the unit box");
    gridsearch->add_option("--train-data", train_data,
                           "CSV whose train split feeds the covariance");
    gridsearch->add_option("--ridge", ridge, "covariance ridge (mahalanobis)");
    gridsearch->add_option("--jobs", jobs, "worker threads");
    gridsearch->add_option("--out", out_path, "sweep table output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) {
            if (train_geq->count()) data_args.label_geq = label_geq_value;
            return cmd_train(data_args, train_kind, num_trees, max_depth, min_leaf, train_out);
        }
        if (explain->parsed()) {
            if (explain_geq->count()) data_args.label_geq = label_geq_value;
            return cmd_explain(data_args, model_path, split_name, limit, method, distance_name,
                               smooth_eps, sigma, tau, beta, alpha, iters, clamp, epsilon,
                               train_data, ridge, jobs, out_path);
        }
        if (evaluate->parsed()) {
            if (eval_geq->count()) data_args.label_geq = label_geq_value;
            return cmd_evaluate(cf_path, baseline_path, eval_distance, model_path, train_data,
                                ridge, data_args, paired, out_prefix);
        }
        if (gridsearch->parsed()) {
            if (gs_geq->count()) data_args.label_geq = label_geq_value;
            return cmd_gridsearch(data_args, model_path, split_name, limit, distance_name,
                                  smooth_eps, sigma_grid, tau_grid, beta_grid, alpha_grid,
                                  iters, clamp, train_data, ridge, jobs, out_path);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
