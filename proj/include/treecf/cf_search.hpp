#ifndef TREECF_CF_SEARCH_HPP
#define TREECF_CF_SEARCH_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treecf/adam.hpp"
#include "treecf/distance.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"
#include "treecf/parallel.hpp"
#include "treecf/rng.hpp"
#include "treecf/soft_model.hpp"

namespace treecf {

struct FocusConfig {
    SoftConfig soft;
    double beta = 0.01;
    double alpha = 0.001;
    int iterations = 1000;
    DistanceSpec distance;
    AdamParams adam;
    bool clamp_to_unit_box = false;
    std::uint64_t seed = 0;
    bool keep_trace = false;

    void validate() const {
        soft.validate();
        distance.validate();
        adam.validate();
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw ConfigError("beta must be positive and finite");
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw ConfigError("alpha must be positive and finite");
        if (iterations < 1)
            throw ConfigError("iterations must be at least 1");
        // The search starts at x̄ = x, where every distance except cosine has a
        // kink; an unsmoothed gradient is undefined there.
        if (distance.kind != DistanceKind::Cosine && !(distance.smooth_eps > 0.0))
            throw ConfigError("distance is singular at the starting point; set smooth_eps > 0");
    }
};

struct TracePoint {
    double loss = 0.0;      // total loss at the pre-update iterate
    double distance = 0.0;  // exact distance of the post-update iterate
    bool valid = false;     // hard validity of the post-update iterate
};

struct CfResult {
    std::vector<double> original;
    int original_label = 0;
    std::optional<std::vector<double>> counterfactual;
    std::optional<int> cf_label;
    std::optional<double> distance;  // exact (smooth_eps = 0)
    std::optional<int> found_at_iteration;
    std::vector<TracePoint> trace;
    std::optional<std::string> error;

    bool found() const { return counterfactual.has_value(); }
};

// Carries the counterfactual explicitly so original + delta reconstructs it
// without floating-point drift.
struct ExplanationDelta {
    std::vector<double> original;
    std::vector<double> counterfactual;
    std::vector<double> scaled;          // counterfactual - original, unit box
    std::vector<double> original_units;  // scaled * (max - min) per feature

    const std::vector<double>& reconstruct() const { return counterfactual; }
};

inline ExplanationDelta explanation_delta(const TreeEnsemble& ens, const CfResult& result) {
    if (!result.found()) throw ConfigError("explanation_delta: result has no counterfactual");
    ExplanationDelta d;
    d.original = result.original;
    d.counterfactual = *result.counterfactual;
    const std::size_t n = d.original.size();
    d.scaled.resize(n);
    d.original_units.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.scaled[i] = d.counterfactual[i] - d.original[i];
        const double span = (i < ens.scale_min.size() && i < ens.scale_max.size())
                                ? ens.scale_max[i] - ens.scale_min[i]
                                : 1.0;
        d.original_units[i] = d.scaled[i] * span;
    }
    return d;
}

struct LossEval {
    double value = 0.0;
    std::vector<double> gradient;
};

namespace detail {

// Hinge prediction loss: active only while the hard model still assigns the
// factual label y_x; then it equals the soft probability of y_x.
inline LossEval pred_loss_at(const TreeEnsemble& ens, const SoftConfig& cfg, int y_x,
                             const std::vector<double>& xbar, SoftGradWorkspace& ws,
                             InputGradient& grad) {
    LossEval out;
    out.gradient.assign(xbar.size(), 0.0);
    const int label_bar = predict_label(ens, xbar);
    if (label_bar != y_x) return out;  // flipped: hinge is zero and flat
    const std::vector<double> probs = soft_probs_and_jacobian(ens, xbar, cfg, grad, ws);
    out.value = probs[static_cast<std::size_t>(y_x)];
    for (std::size_t i = 0; i < xbar.size(); ++i)
        out.gradient[i] = grad.at(y_x, static_cast<int>(i));
    return out;
}

}  // namespace detail

inline LossEval pred_loss(const TreeEnsemble& ens, const SoftConfig& cfg,
                          const std::vector<double>& x, const std::vector<double>& xbar) {
    cfg.validate();
    SoftGradWorkspace ws;
    InputGradient grad;
    return detail::pred_loss_at(ens, cfg, predict_label(ens, x), xbar, ws, grad);
}

inline LossEval total_loss(const TreeEnsemble& ens, const FocusConfig& cfg,
                           const std::vector<double>& x, const std::vector<double>& xbar) {
    cfg.validate();
    SoftGradWorkspace ws;
    InputGradient grad;
    LossEval out = detail::pred_loss_at(ens, cfg.soft, predict_label(ens, x), xbar, ws, grad);
    out.value += cfg.beta * dist(cfg.distance, x, xbar);
    const std::vector<double> dg = dist_gradient(cfg.distance, x, xbar);
    for (std::size_t i = 0; i < dg.size(); ++i) out.gradient[i] += cfg.beta * dg[i];
    return out;
}

inline CfResult generate_cf(const TreeEnsemble& ens, const std::vector<double>& x,
                            const FocusConfig& cfg) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(ens.n_features))
        throw ConfigError("generate_cf: instance has " + std::to_string(x.size()) +
                          " features, model expects " + std::to_string(ens.n_features));

    CfResult result;
    result.original = x;
    result.original_label = predict_label(ens, x);
    const int y_x = result.original_label;

    DistanceSpec exact = cfg.distance.exact();
    std::vector<double> xbar = x;
    AdamState adam(x.size());
    SoftGradWorkspace ws;
    InputGradient jac;
    std::vector<double> grad(x.size());
    double best_dist = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= cfg.iterations; ++it) {
        LossEval pred = detail::pred_loss_at(ens, cfg.soft, y_x, xbar, ws, jac);
        double loss = pred.value + cfg.beta * dist(cfg.distance, x, xbar);
        const std::vector<double> dg = dist_gradient(cfg.distance, x, xbar);
        for (std::size_t i = 0; i < x.size(); ++i)
            grad[i] = pred.gradient[i] + cfg.beta * dg[i];

        bool finite = std::isfinite(loss);
        for (std::size_t i = 0; finite && i < grad.size(); ++i) finite = std::isfinite(grad[i]);
        if (!finite) {
            result.error = "non-finite loss or gradient at iteration " + std::to_string(it);
            return result;
        }

        const std::vector<double> delta = adam.step(grad, cfg.alpha);
        for (std::size_t i = 0; i < xbar.size(); ++i) {
            xbar[i] += delta[i];
            if (cfg.clamp_to_unit_box) xbar[i] = std::min(1.0, std::max(0.0, xbar[i]));
        }

        const int label_bar = predict_label(ens, xbar);
        const bool valid = label_bar != y_x;
        double d_exact = std::numeric_limits<double>::quiet_NaN();
        if (valid || cfg.keep_trace) d_exact = dist(exact, x, xbar);
        if (valid && d_exact < best_dist) {
            best_dist = d_exact;
            result.counterfactual = xbar;
            result.cf_label = label_bar;
            result.distance = d_exact;
            result.found_at_iteration = it;
        }
        if (cfg.keep_trace) result.trace.push_back({loss, d_exact, valid});
    }
    return result;
}

inline std::vector<CfResult> batch_generate(const TreeEnsemble& ens,
                                            const std::vector<std::vector<double>>& rows,
                                            const FocusConfig& cfg, int jobs = 1) {
    cfg.validate();
    std::vector<CfResult> results(rows.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        FocusConfig local = cfg;
        local.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        try {
            results[i] = generate_cf(ens, rows[i], local);
        } catch (const Error& e) {
            results[i].original = rows[i];
            results[i].error = e.what();
        }
    });
    return results;
}

struct GridCell {
    double sigma = 0.0;
    double tau = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    double coverage = 0.0;
    double d_mean = std::numeric_limits<double>::infinity();  // over found CFs; inf if none
};

struct GridSearchResult {
    FocusConfig best;
    GridCell best_cell;
    std::vector<GridCell> table;  // full sweep, deterministic order
};

inline const std::vector<double>& default_sigma_grid() {
    static const std::vector<double> g{1.0, 2.0, 4.0, 5.0, 6.0, 7.0, 10.0};
    return g;
}
inline const std::vector<double>& default_tau_grid() {
    static const std::vector<double> g{1.0, 2.0, 3.0, 5.0, 6.0, 10.0};
    return g;
}
inline const std::vector<double>& default_beta_grid() {
    static const std::vector<double> g{0.005, 0.01, 0.05};
    return g;
}
inline const std::vector<double>& default_alpha_grid() {
    static const std::vector<double> g{0.001, 0.005};
    return g;
}

// Ranks cells by coverage (higher wins), then mean exact distance over found
// CFs (lower wins); earlier cells win exact ties, so the sweep order below is
// part of the contract.
inline GridSearchResult grid_search(const TreeEnsemble& ens,
                                    const std::vector<std::vector<double>>& validation,
                                    const FocusConfig& base,
                                    const std::vector<double>& sigma_grid,
                                    const std::vector<double>& tau_grid,
                                    const std::vector<double>& beta_grid,
                                    const std::vector<double>& alpha_grid, int jobs = 1) {
    if (validation.empty()) throw ConfigError("grid_search: validation set is empty");
    if (sigma_grid.empty() || tau_grid.empty() || beta_grid.empty() || alpha_grid.empty())
        throw ConfigError("grid_search: all hyperparameter grids must be non-empty");

    GridSearchResult out;
    bool have_best = false;
    for (double sigma : sigma_grid)
        for (double tau : tau_grid)
            for (double beta : beta_grid)
                for (double alpha : alpha_grid) {
                    FocusConfig cfg = base;
                    cfg.soft.sigma = sigma;
                    cfg.soft.tau = tau;
                    cfg.beta = beta;
                    cfg.alpha = alpha;
                    cfg.keep_trace = false;
                    const std::vector<CfResult> results =
                        batch_generate(ens, validation, cfg, jobs);

                    GridCell cell{sigma, tau, beta, alpha, 0.0,
                                  std::numeric_limits<double>::infinity()};
                    std::size_t found = 0;
                    double dist_sum = 0.0;
                    for (const CfResult& r : results)
                        if (r.found()) {
                            ++found;
                            dist_sum += *r.distance;
                        }
                    cell.coverage = static_cast<double>(found) /
                                    static_cast<double>(results.size());
                    if (found > 0) cell.d_mean = dist_sum / static_cast<double>(found);
                    out.table.push_back(cell);

                    const bool better =
                        !have_best || cell.coverage > out.best_cell.coverage ||
                        (cell.coverage == out.best_cell.coverage &&
                         cell.d_mean < out.best_cell.d_mean);
                    if (better) {
                        have_best = true;
                        out.best_cell = cell;
                        out.best = cfg;
                    }
                }
    return out;
}

}  // namespace treecf

#endif  // TREECF_CF_SEARCH_HPP
