#ifndef TREECF_TRAIN_HPP
#define TREECF_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "treecf/dataset.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"
#include "treecf/rng.hpp"
#include "treecf/tree.hpp"

namespace treecf {

namespace detail {

struct GrowParams {
    int max_depth = 4;
    int min_leaf = 1;
    int feature_subsample = 0;  // 0 = use all features at every split
};

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // weighted child impurity
};

inline double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) {
        const double p = c / total;
        s += p * p;
    }
    return 1.0 - s;
}

class TreeGrower {
public:
    TreeGrower(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
               int n_classes, const std::vector<double>& row_weights, const GrowParams& params,
               Rng* rng)
        : rows_(rows),
          labels_(labels),
          n_classes_(n_classes),
          row_weights_(row_weights),
          params_(params),
          rng_(rng) {}

    DecisionTree grow(const std::vector<std::uint32_t>& samples) {
        tree_.nodes.clear();
        tree_.n_features = static_cast<int>(rows_.empty() ? 0 : rows_[0].size());
        tree_.n_classes = n_classes_;
        build(samples, 0);
        return std::move(tree_);
    }

private:
    // Appends the subtree for `samples` and returns its root index.
    std::int32_t build(const std::vector<std::uint32_t>& samples, int depth) {
        std::vector<double> counts(n_classes_, 0.0);
        double total = 0.0;
        for (std::uint32_t s : samples) {
            counts[labels_[s]] += row_weights_[s];
            total += row_weights_[s];
        }

        const double impurity = gini(counts, total);
        SplitChoice split;
        if (depth < params_.max_depth && samples.size() >= 2 * static_cast<std::size_t>(params_.min_leaf) &&
            impurity > 1e-12) {
            split = best_split(samples, impurity, total);
        }
        if (!split.found) return make_leaf(counts, total);

        const std::int32_t self = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[self].feature = split.feature;
        tree_.nodes[self].threshold = split.threshold;

        std::vector<std::uint32_t> left, right;
        left.reserve(samples.size());
        right.reserve(samples.size());
        for (std::uint32_t s : samples)
            (rows_[s][split.feature] > split.threshold ? left : right).push_back(s);

        const std::int32_t l = build(left, depth + 1);
        tree_.nodes[self].left = l;
        const std::int32_t r = build(right, depth + 1);
        tree_.nodes[self].right = r;
        return self;
    }

    std::int32_t make_leaf(const std::vector<double>& counts, double total) {
        const std::int32_t self = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        TreeNode& leaf = tree_.nodes[self];
        leaf.distribution.assign(n_classes_, 0.0);
        if (total > 0.0)
            for (int y = 0; y < n_classes_; ++y) leaf.distribution[y] = counts[y] / total;
        else
            leaf.distribution.assign(n_classes_, 1.0 / n_classes_);
        return self;
    }

    std::vector<int> candidate_features(int d) {
        std::vector<int> feats(d);
        std::iota(feats.begin(), feats.end(), 0);
        if (params_.feature_subsample > 0 && params_.feature_subsample < d && rng_) {
            // partial Fisher-Yates, then ascending order for a deterministic sweep
            for (int i = 0; i < params_.feature_subsample; ++i) {
                const int j = i + static_cast<int>(rng_->below(d - i));
                std::swap(feats[i], feats[j]);
            }
            feats.resize(params_.feature_subsample);
            std::sort(feats.begin(), feats.end());
        }
        return feats;
    }

    SplitChoice best_split(const std::vector<std::uint32_t>& samples, double parent_impurity,
                           double total_weight) {
        SplitChoice best;
        const int d = tree_.n_features;
        std::vector<std::pair<double, std::uint32_t>> order(samples.size());

        for (int f : candidate_features(d)) {
            for (std::size_t i = 0; i < samples.size(); ++i)
                order[i] = {rows_[samples[i]][f], samples[i]};
            std::sort(order.begin(), order.end());

            // Sweep ascending; prefix = right child (x <= threshold).
            std::vector<double> right_counts(n_classes_, 0.0);
            double right_weight = 0.0;
            std::vector<double> all_counts(n_classes_, 0.0);
            for (const auto& [v, s] : order) all_counts[labels_[s]] += row_weights_[s];

            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const auto& [v, s] = order[i];
                right_counts[labels_[s]] += row_weights_[s];
                right_weight += row_weights_[s];
                if (order[i + 1].first <= v) continue;  // split only between distinct values

                const std::size_t n_right = i + 1;
                const std::size_t n_left = order.size() - n_right;
                if (n_right < static_cast<std::size_t>(params_.min_leaf) ||
                    n_left < static_cast<std::size_t>(params_.min_leaf))
                    continue;

                std::vector<double> left_counts(n_classes_);
                for (int y = 0; y < n_classes_; ++y) left_counts[y] = all_counts[y] - right_counts[y];
                const double left_weight = total_weight - right_weight;
                const double score = (right_weight * gini(right_counts, right_weight) +
                                      left_weight * gini(left_counts, left_weight)) /
                                     total_weight;
                if (!best.found || score < best.score - 1e-15) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = 0.5 * (v + order[i + 1].first);
                    best.score = score;
                }
            }
        }
        if (best.found && best.score >= parent_impurity - 1e-12) best.found = false;
        return best;
    }

    const std::vector<std::vector<double>>& rows_;
    const std::vector<int>& labels_;
    int n_classes_;
    const std::vector<double>& row_weights_;
    GrowParams params_;
    Rng* rng_;
    DecisionTree tree_;
};

inline std::vector<std::uint32_t> all_indices(std::size_t n) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    return idx;
}

inline TreeEnsemble ensemble_shell(const Dataset& train, EnsembleKind kind) {
    TreeEnsemble ens;
    ens.kind = kind;
    ens.n_features = static_cast<int>(train.n_features());
    ens.n_classes = train.n_classes;
    ens.feature_names = train.feature_names;
    ens.scale_min = train.scale_min;
    ens.scale_max = train.scale_max;
    return ens;
}

}  // namespace detail

/// Greedy Gini CART; thresholds are midpoints between consecutive distinct
/// sorted values, leaves store empirical class frequencies.
inline DecisionTree train_cart(const Dataset& train, int max_depth, int min_leaf = 1,
                               std::uint64_t seed = 0) {
    if (train.rows.empty()) throw DataError("cannot train on an empty dataset");
    (void)seed;  // plain CART is deterministic; seed kept for interface symmetry
    std::vector<double> w(train.n_rows(), 1.0);
    detail::GrowParams params{max_depth, min_leaf, 0};
    detail::TreeGrower grower(train.rows, train.labels, train.n_classes, w, params, nullptr);
    return grower.grow(detail::all_indices(train.n_rows()));
}

inline TreeEnsemble single_tree_ensemble(const Dataset& train, int max_depth, int min_leaf = 1) {
    TreeEnsemble ens = detail::ensemble_shell(train, EnsembleKind::SingleTree);
    ens.trees.push_back(train_cart(train, max_depth, min_leaf));
    ens.weights.push_back(1.0);
    return ens;
}

/// Bagged forest: bootstrap samples, sqrt(d) feature subsampling per split,
/// tree weights 1/num_trees. Per-tree seeds derive from (seed, tree index).
inline TreeEnsemble train_random_forest(const Dataset& train, int num_trees, int max_depth,
                                        std::uint64_t seed, int min_leaf = 1) {
    if (train.rows.empty()) throw DataError("cannot train on an empty dataset");
    if (num_trees < 1) throw ConfigError("num_trees must be >= 1");
    const std::size_t n = train.n_rows();
    const int d = static_cast<int>(train.n_features());
    const int k = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
    std::vector<double> w(n, 1.0);

    TreeEnsemble ens = detail::ensemble_shell(train, EnsembleKind::RandomForest);
    ens.trees.resize(num_trees);
    ens.weights.assign(num_trees, 1.0 / num_trees);
    for (int m = 0; m < num_trees; ++m) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
        std::vector<std::uint32_t> bag(n);
        for (auto& b : bag) b = static_cast<std::uint32_t>(rng.below(n));
        detail::GrowParams params{max_depth, min_leaf, k};
        detail::TreeGrower grower(train.rows, train.labels, train.n_classes, w, params, &rng);
        ens.trees[m] = grower.grow(bag);
    }
    return ens;
}

/// SAMME boosting with CART base learners. Tree weights are
/// log((1-err)/err) + log(n_classes-1); sample weights are re-scaled on the
/// misclassified rows each round. Stops early on err = 0 or err >= 1 - 1/K.
inline TreeEnsemble train_adaboost(const Dataset& train, int num_trees, int max_depth,
                                   std::uint64_t seed, int min_leaf = 1) {
    if (train.rows.empty()) throw DataError("cannot train on an empty dataset");
    if (num_trees < 1) throw ConfigError("num_trees must be >= 1");
    (void)seed;  // base learner is deterministic; seed kept for interface symmetry
    const std::size_t n = train.n_rows();
    const int n_classes = train.n_classes;
    const double chance = 1.0 - 1.0 / n_classes;

    TreeEnsemble ens = detail::ensemble_shell(train, EnsembleKind::AdaptiveBoosting);
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    const std::vector<std::uint32_t> idx = detail::all_indices(n);

    for (int m = 0; m < num_trees; ++m) {
        detail::GrowParams params{max_depth, min_leaf, 0};
        detail::TreeGrower grower(train.rows, train.labels, n_classes, w, params, nullptr);
        DecisionTree tree = grower.grow(idx);

        // weighted error with hard (argmax) leaf predictions
        double err = 0.0;
        std::vector<bool> wrong(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int32_t leaf = activated_leaf_index(tree, train.rows[i]);
            const int pred = argmax_lowest(tree.nodes[leaf].distribution);
            if (pred != train.labels[i]) {
                wrong[i] = true;
                err += w[i];
            }
        }

        if (err >= chance) {
            if (m == 0)
                throw DataError("adaptive boosting: first learner is no better than chance");
            break;  // keep the rounds that worked
        }

        const double floored = std::max(err, 1e-12);
        const double alpha = std::log((1.0 - floored) / floored) + std::log(n_classes - 1.0);
        ens.trees.push_back(std::move(tree));
        ens.weights.push_back(alpha);

        if (err <= 0.0) break;  // perfect learner, nothing left to reweight

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (wrong[i]) w[i] *= std::exp(alpha);
            sum += w[i];
        }
        for (auto& wi : w) wi /= sum;
    }
    return ens;
}

}  // namespace treecf

#endif  // TREECF_TRAIN_HPP
