#ifndef TREECF_MODEL_IO_HPP
#define TREECF_MODEL_IO_HPP

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"

namespace treecf {

// Model file format, version 1. A JSON object:
//   { "format_version": 1, "kind": "...", "n_features": d, "n_classes": k,
//     "feature_names": [...], "scaling": {"min": [...], "max": [...]},
//     "weights": [...], "trees": [ {"nodes": [...]} ...] }
// Each tree is a flat node array, root at index 0, children referenced by
// index and always stored after their parent. Internal nodes are
// {"feature": f, "threshold": t, "left": i, "right": j}; leaves are
// {"distribution": [...]}. The left child is the x > threshold side; importers
// from a "left means <=" convention must mirror children when exporting.
inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline void validate_tree(const DecisionTree& tree, int n_features, int n_classes,
                          std::size_t tree_index) {
    const auto where = [&](std::size_t node) {
        return "tree " + std::to_string(tree_index) + ", node " + std::to_string(node);
    };
    if (tree.nodes.empty()) throw SchemaError("tree " + std::to_string(tree_index) + " is empty");
    const std::size_t n = tree.nodes.size();
    std::vector<int> referenced(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.is_leaf()) {
            if (node.distribution.size() != static_cast<std::size_t>(n_classes))
                throw SchemaError(where(i) + ": leaf distribution has wrong length");
            double sum = 0.0;
            for (double p : node.distribution) {
                if (!(p >= 0.0) || !std::isfinite(p))
                    throw SchemaError(where(i) + ": leaf distribution entry out of range");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw SchemaError(where(i) + ": leaf distribution not normalized");
        } else {
            if (node.feature >= n_features)
                throw SchemaError(where(i) + ": feature index " + std::to_string(node.feature) +
                                  " out of bounds for " + std::to_string(n_features) + " features");
            if (!std::isfinite(node.threshold) || node.threshold < -1e-12 ||
                node.threshold > 1.0 + 1e-12)
                throw SchemaError(where(i) + ": threshold outside [0,1]");
            for (std::int32_t child : {node.left, node.right}) {
                if (child <= static_cast<std::int32_t>(i) || child >= static_cast<std::int32_t>(n))
                    throw SchemaError(where(i) + ": child index must follow its parent");
                ++referenced[child];
            }
        }
    }
    if (referenced[0] != 0) throw SchemaError(where(0) + ": root must not be a child");
    for (std::size_t i = 1; i < n; ++i)
        if (referenced[i] != 1) throw SchemaError(where(i) + ": node must have exactly one parent");
}

}  // namespace detail

/// Check every structural invariant the file format promises.
inline void validate_model(const TreeEnsemble& ens) {
    if (ens.trees.empty()) throw SchemaError("model has no trees");
    if (ens.trees.size() != ens.weights.size())
        throw SchemaError("weights length does not match tree count");
    if (ens.n_classes < 2) throw SchemaError("model must have at least 2 classes");
    if (ens.n_features < 1) throw SchemaError("model must have at least 1 feature");
    if (ens.feature_names.size() != static_cast<std::size_t>(ens.n_features))
        throw SchemaError("feature_names length does not match n_features");
    if (ens.scale_min.size() != static_cast<std::size_t>(ens.n_features) ||
        ens.scale_max.size() != static_cast<std::size_t>(ens.n_features))
        throw SchemaError("scaling metadata length does not match n_features");
    for (std::size_t i = 0; i < ens.scale_min.size(); ++i)
        if (!(ens.scale_min[i] < ens.scale_max[i]))
            throw SchemaError("scaling must satisfy min < max per feature");
    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        if (ens.trees[m].n_features != ens.n_features || ens.trees[m].n_classes != ens.n_classes)
            throw SchemaError("tree " + std::to_string(m) + " disagrees on dimensions");
        detail::validate_tree(ens.trees[m], ens.n_features, ens.n_classes, m);
    }
}

inline nlohmann::json tree_to_json(const DecisionTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes) {
        if (node.is_leaf()) {
            nodes.push_back({{"distribution", node.distribution}});
        } else {
            nodes.push_back({{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right}});
        }
    }
    return nlohmann::json{{"nodes", std::move(nodes)}};
}

inline DecisionTree tree_from_json(const nlohmann::json& j, int n_features, int n_classes) {
    DecisionTree tree;
    tree.n_features = n_features;
    tree.n_classes = n_classes;
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw SchemaError("tree entry lacks a nodes array");
    for (const auto& jn : j["nodes"]) {
        TreeNode node;
        if (jn.contains("distribution")) {
            node.distribution = jn.at("distribution").get<std::vector<double>>();
        } else {
            node.feature = jn.at("feature").get<std::int32_t>();
            if (node.feature < 0) throw SchemaError("internal node has negative feature index");
            node.threshold = jn.at("threshold").get<double>();
            node.left = jn.at("left").get<std::int32_t>();
            node.right = jn.at("right").get<std::int32_t>();
        }
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

inline nlohmann::json model_to_json(const TreeEnsemble& ens) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = to_string(ens.kind);
    j["n_features"] = ens.n_features;
    j["n_classes"] = ens.n_classes;
    j["feature_names"] = ens.feature_names;
    j["scaling"] = {{"min", ens.scale_min}, {"max", ens.scale_max}};
    j["weights"] = ens.weights;
    nlohmann::json trees = nlohmann::json::array();
    for (const DecisionTree& t : ens.trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    return j;
}

inline TreeEnsemble model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("model file is not a JSON object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        throw SchemaError("model file lacks format_version");
    const int version = j["format_version"].get<int>();
    if (version != kModelFormatVersion)
        throw SchemaError("unsupported model format_version " + std::to_string(version) +
                          " (supported: " + std::to_string(kModelFormatVersion) + ")");
    TreeEnsemble ens;
    try {
        ens.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
        ens.n_features = j.at("n_features").get<int>();
        ens.n_classes = j.at("n_classes").get<int>();
        ens.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        ens.scale_min = j.at("scaling").at("min").get<std::vector<double>>();
        ens.scale_max = j.at("scaling").at("max").get<std::vector<double>>();
        ens.weights = j.at("weights").get<std::vector<double>>();
        for (const auto& jt : j.at("trees"))
            ens.trees.push_back(tree_from_json(jt, ens.n_features, ens.n_classes));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed model file: ") + e.what());
    }
    validate_model(ens);
    return ens;
}

inline void save_model(const TreeEnsemble& ens, const std::string& path) {
    validate_model(ens);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model_to_json(ens).dump(1) << '\n';
    if (!out) throw DataError("failed writing model file: " + path);
}

inline TreeEnsemble load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace treecf

#endif  // TREECF_MODEL_IO_HPP
