#ifndef TREECF_ENSEMBLE_HPP
#define TREECF_ENSEMBLE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "treecf/errors.hpp"
#include "treecf/tree.hpp"

namespace treecf {

enum class EnsembleKind { SingleTree, RandomForest, AdaptiveBoosting };

inline const char* to_string(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::SingleTree: return "single-tree";
        case EnsembleKind::RandomForest: return "random-forest";
        case EnsembleKind::AdaptiveBoosting: return "adaptive-boosting";
    }
    return "unknown";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
    if (s == "single-tree") return EnsembleKind::SingleTree;
    if (s == "random-forest") return EnsembleKind::RandomForest;
    if (s == "adaptive-boosting") return EnsembleKind::AdaptiveBoosting;
    throw SchemaError("unknown ensemble kind: " + s);
}

// Weighted forest of binary decision trees. Class scores are
// sum_m weights[m] * T_m(y | x) where T_m reads the activated leaf.
struct TreeEnsemble {
    std::vector<DecisionTree> trees;
    std::vector<double> weights;
    EnsembleKind kind = EnsembleKind::SingleTree;
    int n_features = 0;
    int n_classes = 0;
    std::vector<std::string> feature_names;
    std::vector<double> scale_min;  // feature scaling the model was trained with
    std::vector<double> scale_max;

    std::size_t size() const { return trees.size(); }
};

struct HardPrediction {
    int label = 0;
    std::vector<double> scores;
};

inline int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = static_cast<int>(i);
    return best;
}

/// Weighted leaf-distribution sum over all trees; argmax label with
/// lowest-index tie-break.
inline HardPrediction predict_hard(const TreeEnsemble& ens, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(ens.n_features))
        throw DataError("input has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(ens.n_features));
    HardPrediction p;
    p.scores.assign(ens.n_classes, 0.0);
    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        const std::int32_t leaf = activated_leaf_index(ens.trees[m], x);
        const std::vector<double>& d = ens.trees[m].nodes[leaf].distribution;
        for (int y = 0; y < ens.n_classes; ++y) p.scores[y] += ens.weights[m] * d[y];
    }
    p.label = argmax_lowest(p.scores);
    return p;
}

/// Label only; avoids allocating when scores are not needed.
inline int predict_label(const TreeEnsemble& ens, const std::vector<double>& x) {
    double best_score = 0.0;
    int best = 0;
    std::vector<double> scores(ens.n_classes, 0.0);
    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        const std::int32_t leaf = activated_leaf_index(ens.trees[m], x);
        const std::vector<double>& d = ens.trees[m].nodes[leaf].distribution;
        for (int y = 0; y < ens.n_classes; ++y) scores[y] += ens.weights[m] * d[y];
    }
    best_score = scores[0];
    for (int y = 1; y < ens.n_classes; ++y)
        if (scores[y] > best_score) {
            best_score = scores[y];
            best = y;
        }
    return best;
}

/// Fraction of rows whose hard prediction matches the label.
inline double accuracy(const TreeEnsemble& ens, const std::vector<std::vector<double>>& rows,
                       const std::vector<int>& labels) {
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (predict_label(ens, rows[i]) == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace treecf

#endif  // TREECF_ENSEMBLE_HPP
