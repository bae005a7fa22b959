#ifndef TREECF_FEATURE_TWEAK_HPP
#define TREECF_FEATURE_TWEAK_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "treecf/cf_search.hpp"
#include "treecf/distance.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"
#include "treecf/parallel.hpp"

namespace treecf {

struct FtConfig {
    double epsilon = 0.01;
    DistanceSpec distance;

    void validate() const {
        distance.validate();
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw ConfigError("epsilon must be positive and finite");
    }
};

// Leaves whose argmax label (lowest index wins ties) differs from y_x,
// ascending by node index.
inline std::vector<int> counter_leaves(const DecisionTree& tree, int y_x) {
    if (y_x < 0 || y_x >= tree.n_classes)
        throw ConfigError("counter_leaves: class index out of range");
    std::vector<int> out;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.is_leaf() && argmax_lowest(node.distribution) != y_x)
            out.push_back(static_cast<int>(i));
    }
    return out;
}

struct FtCandidate {
    std::vector<double> values;
    bool lands = false;  // whether the hard tree routes the candidate to the target leaf
};

inline FtCandidate ft_candidate(const DecisionTree& tree, int leaf, const std::vector<double>& x,
                                double epsilon) {
    if (leaf < 0 || leaf >= static_cast<int>(tree.nodes.size()) ||
        !tree.nodes[static_cast<std::size_t>(leaf)].is_leaf())
        throw ConfigError("ft_candidate: target is not a leaf of this tree");
    if (x.size() != static_cast<std::size_t>(tree.n_features))
        throw ConfigError("ft_candidate: instance dimension mismatch");

    // Recover the root path by walking parents, then rewalk root-to-leaf so a
    // later node on the same feature overwrites an earlier one.
    std::vector<int> parent(tree.nodes.size(), -1);
    std::vector<bool> via_left(tree.nodes.size(), false);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.is_leaf()) continue;
        parent[static_cast<std::size_t>(node.left)] = static_cast<int>(i);
        via_left[static_cast<std::size_t>(node.left)] = true;
        parent[static_cast<std::size_t>(node.right)] = static_cast<int>(i);
    }
    FtCandidate cand;
    cand.values = x;
    std::vector<int> chain;  // leaf-to-root node sequence
    chain.push_back(leaf);
    for (int n = leaf; parent[static_cast<std::size_t>(n)] >= 0;
         n = parent[static_cast<std::size_t>(n)])
        chain.push_back(parent[static_cast<std::size_t>(n)]);
    for (auto it = chain.rbegin(); it + 1 != chain.rend(); ++it) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(*it)];
        const int child = *(it + 1);
        const std::size_t f = static_cast<std::size_t>(node.feature);
        // LEFT requires x > θ, RIGHT requires x ≤ θ.
        cand.values[f] = (child == node.left) ? node.threshold + epsilon
                                              : node.threshold - epsilon;
    }
    cand.lands = activated_leaf_index(tree, cand.values) == leaf;
    return cand;
}

// Builds a candidate per counter-leaf of every tree, keeps those flipping the
// full ensemble, and returns the closest under cfg.distance (first hit wins
// exact ties, so the tree-order/leaf-order sweep is deterministic).
inline CfResult ft_explain(const TreeEnsemble& ens, const std::vector<double>& x,
                           const FtConfig& cfg) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(ens.n_features))
        throw ConfigError("ft_explain: instance dimension mismatch");

    CfResult result;
    result.original = x;
    result.original_label = predict_label(ens, x);

    const DistanceSpec exact = cfg.distance.exact();
    double best_rank = std::numeric_limits<double>::infinity();
    for (const DecisionTree& tree : ens.trees) {
        for (int leaf : counter_leaves(tree, result.original_label)) {
            FtCandidate cand = ft_candidate(tree, leaf, x, cfg.epsilon);
            const int label = predict_label(ens, cand.values);
            if (label == result.original_label) continue;
            const double rank = dist(cfg.distance, x, cand.values);
            if (rank < best_rank) {
                best_rank = rank;
                result.counterfactual = std::move(cand.values);
                result.cf_label = label;
                result.distance = dist(exact, x, *result.counterfactual);
            }
        }
    }
    return result;
}

inline std::vector<CfResult> batch_ft(const TreeEnsemble& ens,
                                      const std::vector<std::vector<double>>& rows,
                                      const FtConfig& cfg, int jobs = 1) {
    cfg.validate();
    std::vector<CfResult> results(rows.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        try {
            results[i] = ft_explain(ens, rows[i], cfg);
        } catch (const Error& e) {
            results[i].original = rows[i];
            results[i].error = e.what();
        }
    });
    return results;
}

inline const std::vector<double>& default_ft_epsilon_grid() {
    static const std::vector<double> g{0.001, 0.005, 0.01, 0.1};
    return g;
}

struct FtSweepCell {
    double epsilon = 0.0;
    double coverage = 0.0;
    double d_mean = std::numeric_limits<double>::infinity();
};

struct FtSweepResult {
    double best_epsilon = 0.0;
    FtSweepCell best_cell;
    std::vector<FtSweepCell> table;
    std::vector<CfResult> best_results;
};

// Same coverage-then-distance selection rule as the FOCUS grid search.
inline FtSweepResult ft_epsilon_sweep(const TreeEnsemble& ens,
                                      const std::vector<std::vector<double>>& rows,
                                      const FtConfig& base,
                                      const std::vector<double>& epsilon_grid, int jobs = 1) {
    if (rows.empty()) throw ConfigError("ft_epsilon_sweep: instance set is empty");
    if (epsilon_grid.empty()) throw ConfigError("ft_epsilon_sweep: epsilon grid is empty");

    FtSweepResult out;
    bool have_best = false;
    for (double eps : epsilon_grid) {
        FtConfig cfg = base;
        cfg.epsilon = eps;
        std::vector<CfResult> results = batch_ft(ens, rows, cfg, jobs);

        FtSweepCell cell{eps, 0.0, std::numeric_limits<double>::infinity()};
        std::size_t found = 0;
        double dist_sum = 0.0;
        for (const CfResult& r : results)
            if (r.found()) {
                ++found;
                dist_sum += *r.distance;
            }
        cell.coverage = static_cast<double>(found) / static_cast<double>(results.size());
        if (found > 0) cell.d_mean = dist_sum / static_cast<double>(found);
        out.table.push_back(cell);

        const bool better = !have_best || cell.coverage > out.best_cell.coverage ||
                            (cell.coverage == out.best_cell.coverage &&
                             cell.d_mean < out.best_cell.d_mean);
        if (better) {
            have_best = true;
            out.best_cell = cell;
            out.best_epsilon = eps;
            out.best_results = std::move(results);
        }
    }
    return out;
}

}  // namespace treecf

#endif  // TREECF_FEATURE_TWEAK_HPP
