#ifndef TREECF_SOFT_MODEL_HPP
#define TREECF_SOFT_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"
#include "treecf/tree.hpp"

namespace treecf {

// Relaxation parameters: sigma is the sigmoid steepness on split indicators,
// tau the softmax temperature on the class scores. Both -> infinity recovers
// the hard model.
struct SoftConfig {
    double sigma = 1.0;
    double tau = 1.0;

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
        if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
    }
};

/// sig(z) = (1 + exp(sigma * z))^{-1}, evaluated on the non-overflowing branch.
/// Decreasing in z; sig(0) = 0.5; sig(z) + sig(-z) = 1.
inline double sig(double z, double sigma) {
    const double u = sigma * z;
    if (u >= 0.0) {
        const double e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(u));
}

/// log(sig(z)) = -softplus(sigma * z), stable for any magnitude.
inline double log_sig(double z, double sigma) {
    const double u = sigma * z;
    return -(std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))));
}

struct SoftOutput {
    std::vector<double> probs;                          // per class, sums to 1
    std::vector<std::vector<double>> per_tree;          // optional: M x n_classes
    std::vector<std::vector<double>> leaf_activations;  // optional: per tree, per leaf
};

// Gradient of the soft class probabilities with respect to the input:
// values[y * n_features + i] = d probs[y] / d x[i].
struct InputGradient {
    int n_classes = 0;
    int n_features = 0;
    std::vector<double> values;

    double at(int y, int i) const { return values[static_cast<std::size_t>(y) * n_features + i]; }
};

namespace detail {

// Activations below exp(-700) are flushed to zero; the log-space path above
// keeps long products at large sigma from underflowing pairwise.
inline constexpr double kLogActFloor = -700.0;

struct PathEdge {
    int feature;
    double coef;  // d log(activation) / d x[feature] contribution of this edge
};

// Walk all leaves of `tree`, calling visit(leaf_index, activation, edges) with
// the soft activation and the accumulated per-edge derivative coefficients.
template <typename Visit>
inline void walk_soft(const DecisionTree& tree, const std::vector<double>& x, double sigma,
                      Visit&& visit) {
    std::vector<PathEdge> edges;
    edges.reserve(32);

    auto recurse = [&](auto&& self, std::int32_t node, double log_act) -> void {
        const TreeNode& n = tree.nodes[node];
        if (n.is_leaf()) {
            const double act = log_act < kLogActFloor ? 0.0 : std::exp(log_act);
            visit(node, act, edges);
            return;
        }
        const double z = n.threshold - x[n.feature];
        const double log_left = log_sig(z, sigma);    // sig(theta - x_f)
        const double log_right = log_sig(-z, sigma);  // sig(x_f - theta)

        // 1 - sig(z) = sig(-z), so each edge's d log(act)/d x_f is
        // +sigma*sig(x-theta) on the left branch, -sigma*sig(theta-x) on the right.
        edges.push_back({n.feature, sigma * std::exp(log_right)});
        self(self, n.left, log_act + log_left);
        edges.pop_back();

        edges.push_back({n.feature, -sigma * std::exp(log_left)});
        self(self, n.right, log_act + log_right);
        edges.pop_back();
    };
    recurse(recurse, 0, 0.0);
}

inline void check_dims(const TreeEnsemble& ens, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(ens.n_features))
        throw DataError("input has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(ens.n_features));
}

inline void softmax_inplace(std::vector<double>& z) {
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (auto& v : z) v /= sum;
}

}  // namespace detail

/// Soft activation per leaf, ordered like DecisionTree::leaf_indices().
/// Root contributes factor 1; each left edge multiplies by sig(theta - x_f),
/// each right edge by sig(x_f - theta). The values sum to 1 over leaves.
inline std::vector<double> soft_activations(const DecisionTree& tree, const std::vector<double>& x,
                                            const SoftConfig& cfg) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(tree.n_features))
        throw DataError("input dimension mismatch in soft_activations");
    std::vector<double> out;
    detail::walk_soft(tree, x, cfg.sigma,
                      [&](std::int32_t, double act, const std::vector<detail::PathEdge>&) {
                          out.push_back(act);
                      });
    return out;
}

/// Activation-weighted sum of leaf distributions; sums to 1 over classes.
inline std::vector<double> soft_tree_output(const DecisionTree& tree, const std::vector<double>& x,
                                            const SoftConfig& cfg) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(tree.n_features))
        throw DataError("input dimension mismatch in soft_tree_output");
    std::vector<double> out(tree.n_classes, 0.0);
    detail::walk_soft(tree, x, cfg.sigma,
                      [&](std::int32_t leaf, double act, const std::vector<detail::PathEdge>&) {
                          const auto& d = tree.nodes[leaf].distribution;
                          for (int y = 0; y < tree.n_classes; ++y) out[y] += act * d[y];
                      });
    return out;
}

/// Class probabilities of the relaxed ensemble:
/// softmax_y( tau * sum_m weights[m] * soft_tree_output_m(y) ).
inline std::vector<double> soft_probs(const TreeEnsemble& ens, const std::vector<double>& x,
                                      const SoftConfig& cfg) {
    cfg.validate();
    detail::check_dims(ens, x);
    std::vector<double> logits(ens.n_classes, 0.0);
    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        const std::vector<double> t = soft_tree_output(ens.trees[m], x, cfg);
        for (int y = 0; y < ens.n_classes; ++y) logits[y] += ens.weights[m] * t[y];
    }
    for (auto& v : logits) v *= cfg.tau;
    detail::softmax_inplace(logits);
    return logits;
}

/// Full soft evaluation; per-tree outputs and leaf activations are computed
/// only when requested.
inline SoftOutput soft_ensemble_output(const TreeEnsemble& ens, const std::vector<double>& x,
                                       const SoftConfig& cfg, bool with_per_tree = false,
                                       bool with_leaf_activations = false) {
    cfg.validate();
    detail::check_dims(ens, x);
    SoftOutput out;
    std::vector<double> logits(ens.n_classes, 0.0);
    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        std::vector<double> t = soft_tree_output(ens.trees[m], x, cfg);
        for (int y = 0; y < ens.n_classes; ++y) logits[y] += ens.weights[m] * t[y];
        if (with_per_tree) out.per_tree.push_back(std::move(t));
        if (with_leaf_activations)
            out.leaf_activations.push_back(soft_activations(ens.trees[m], x, cfg));
    }
    for (auto& v : logits) v *= cfg.tau;
    detail::softmax_inplace(logits);
    out.probs = std::move(logits);
    return out;
}

// Scratch space for the analytic gradient; reuse across calls inside hot loops.
struct SoftGradWorkspace {
    std::vector<double> dz;      // n_classes x n_features, d logits / d x
    std::vector<double> probs;   // n_classes
    std::vector<double> mix;     // n_features
};

/// Probabilities and the full Jacobian d probs / d x in one pass.
inline std::vector<double> soft_probs_and_jacobian(const TreeEnsemble& ens,
                                                   const std::vector<double>& x,
                                                   const SoftConfig& cfg, InputGradient& grad,
                                                   SoftGradWorkspace& ws) {
    cfg.validate();
    detail::check_dims(ens, x);
    const int C = ens.n_classes;
    const int D = ens.n_features;

    ws.dz.assign(static_cast<std::size_t>(C) * D, 0.0);
    ws.probs.assign(C, 0.0);

    for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        const double w = ens.weights[m];
        const DecisionTree& tree = ens.trees[m];
        detail::walk_soft(tree, x, cfg.sigma,
                          [&](std::int32_t leaf, double act, const std::vector<detail::PathEdge>& edges) {
                              if (act == 0.0) return;
                              const auto& d = tree.nodes[leaf].distribution;
                              for (int y = 0; y < C; ++y) {
                                  const double contrib = w * act * d[y];
                                  if (contrib == 0.0) continue;
                                  ws.probs[y] += contrib;
                                  double* row = ws.dz.data() + static_cast<std::size_t>(y) * D;
                                  for (const auto& e : edges) row[e.feature] += contrib * e.coef;
                              }
                          });
    }
    // ws.probs currently holds sum_m w_m T~_m(y); scale into logits.
    for (auto& v : ws.probs) v *= cfg.tau;
    for (auto& v : ws.dz) v *= cfg.tau;
    detail::softmax_inplace(ws.probs);

    // softmax Jacobian: dp_y = p_y (dz_y - sum_y' p_y' dz_y')
    ws.mix.assign(D, 0.0);
    for (int y = 0; y < C; ++y) {
        const double* row = ws.dz.data() + static_cast<std::size_t>(y) * D;
        for (int i = 0; i < D; ++i) ws.mix[i] += ws.probs[y] * row[i];
    }
    grad.n_classes = C;
    grad.n_features = D;
    grad.values.assign(static_cast<std::size_t>(C) * D, 0.0);
    for (int y = 0; y < C; ++y) {
        const double* row = ws.dz.data() + static_cast<std::size_t>(y) * D;
        double* out = grad.values.data() + static_cast<std::size_t>(y) * D;
        for (int i = 0; i < D; ++i) out[i] = ws.probs[y] * (row[i] - ws.mix[i]);
    }
    return ws.probs;
}

/// Gradient of every class probability with respect to the input.
inline InputGradient input_gradient(const TreeEnsemble& ens, const std::vector<double>& x,
                                    const SoftConfig& cfg) {
    InputGradient grad;
    SoftGradWorkspace ws;
    soft_probs_and_jacobian(ens, x, cfg, grad, ws);
    return grad;
}

/// Gradient of one class probability; returns a single row.
inline std::vector<double> input_gradient_for_class(const TreeEnsemble& ens,
                                                    const std::vector<double>& x,
                                                    const SoftConfig& cfg, int class_index) {
    if (class_index < 0 || class_index >= ens.n_classes)
        throw ConfigError("class index out of range");
    InputGradient grad;
    SoftGradWorkspace ws;
    soft_probs_and_jacobian(ens, x, cfg, grad, ws);
    const double* row = grad.values.data() + static_cast<std::size_t>(class_index) * ens.n_features;
    return std::vector<double>(row, row + ens.n_features);
}

}  // namespace treecf

#endif  // TREECF_SOFT_MODEL_HPP
