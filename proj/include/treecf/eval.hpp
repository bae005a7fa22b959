#ifndef TREECF_EVAL_HPP
#define TREECF_EVAL_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treecf/cf_search.hpp"
#include "treecf/distance.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"

namespace treecf {

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

constexpr double kVarianceFloor = 1e-12;

inline std::pair<double, double> mean_and_variance(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= n - 1.0;
    return {mean, std::max(var, kVarianceFloor)};
}

inline double student_t_two_tailed(double t, double df) {
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
}

}  // namespace detail

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

inline TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DataError("t-test requires at least 2 samples per side");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const auto [ma, va] = detail::mean_and_variance(a);
    const auto [mb, vb] = detail::mean_and_variance(b);
    const double sa = va / na;
    const double sb = vb / nb;
    TTestResult r;
    r.t = (ma - mb) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p = detail::student_t_two_tailed(r.t, r.df);
    return r;
}

inline TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DataError("paired t-test requires equal-length samples");
    if (a.size() < 2) throw DataError("t-test requires at least 2 samples per side");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const auto [mean, var] = detail::mean_and_variance(diff);
    const double n = static_cast<double>(diff.size());
    TTestResult r;
    r.t = mean / std::sqrt(var / n);
    r.df = n - 1.0;
    r.p = detail::student_t_two_tailed(r.t, r.df);
    return r;
}

// Distances in all metrics below are recomputed exactly (smooth_eps = 0) from
// the raw vectors; cached optimization distances are never trusted.
inline double d_mean(const std::vector<CfResult>& results, const DistanceSpec& spec) {
    if (results.empty()) throw DataError("d_mean: empty result set");
    const DistanceSpec exact = spec.exact();
    double sum = 0.0;
    std::size_t n = 0;
    for (const CfResult& r : results)
        if (r.found()) {
            sum += dist(exact, r.original, *r.counterfactual);
            ++n;
        }
    if (n == 0) throw DataError("d_mean: no counterfactuals present");
    return sum / static_cast<double>(n);
}

namespace detail {

inline std::vector<std::size_t> overlap_indices(const std::vector<CfResult>& ours,
                                                const std::vector<CfResult>& baseline) {
    if (ours.size() != baseline.size())
        throw DataError("result sets are not aligned: sizes differ");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ours.size(); ++i) {
        if (ours[i].original != baseline[i].original)
            throw DataError("result sets are not aligned: originals differ at position " +
                            std::to_string(i));
        if (ours[i].found() && baseline[i].found()) idx.push_back(i);
    }
    return idx;
}

}  // namespace detail

struct RatioStat {
    double value = 0.0;
    std::size_t n_used = 0;
    std::size_t n_zero_excluded = 0;
};

// Mean of per-instance ratios over the overlap (not ratio of means).
inline RatioStat d_rmean(const std::vector<CfResult>& ours, const std::vector<CfResult>& baseline,
                         const DistanceSpec& spec) {
    const std::vector<std::size_t> idx = detail::overlap_indices(ours, baseline);
    if (idx.empty()) throw DataError("d_rmean: empty overlap");
    const DistanceSpec exact = spec.exact();
    RatioStat stat;
    double sum = 0.0;
    for (std::size_t i : idx) {
        const double d_b = dist(exact, baseline[i].original, *baseline[i].counterfactual);
        if (d_b == 0.0) {
            ++stat.n_zero_excluded;
            continue;
        }
        sum += dist(exact, ours[i].original, *ours[i].counterfactual) / d_b;
        ++stat.n_used;
    }
    if (stat.n_used == 0) throw DataError("d_rmean: every baseline distance is zero");
    stat.value = sum / static_cast<double>(stat.n_used);
    return stat;
}

inline double pct_closer(const std::vector<CfResult>& ours, const std::vector<CfResult>& baseline,
                         const DistanceSpec& spec) {
    const std::vector<std::size_t> idx = detail::overlap_indices(ours, baseline);
    if (idx.empty()) throw DataError("pct_closer: empty overlap");
    const DistanceSpec exact = spec.exact();
    std::size_t closer = 0;
    for (std::size_t i : idx) {
        const double d_o = dist(exact, ours[i].original, *ours[i].counterfactual);
        const double d_b = dist(exact, baseline[i].original, *baseline[i].counterfactual);
        if (d_o < d_b) ++closer;  // strict; ties do not count
    }
    return static_cast<double>(closer) / static_cast<double>(idx.size());
}

inline double coverage(const std::vector<CfResult>& results) {
    if (results.empty()) throw DataError("coverage: empty result set");
    std::size_t found = 0;
    for (const CfResult& r : results)
        if (r.found()) ++found;
    return static_cast<double>(found) / static_cast<double>(results.size());
}

// Re-asserts validity under the hard model rather than trusting stored labels.
inline double coverage(const std::vector<CfResult>& results, const TreeEnsemble& ens) {
    if (results.empty()) throw DataError("coverage: empty result set");
    std::size_t found = 0;
    for (const CfResult& r : results)
        if (r.found() &&
            predict_label(ens, *r.counterfactual) != predict_label(ens, r.original))
            ++found;
    return static_cast<double>(found) / static_cast<double>(results.size());
}

struct EvalReport {
    std::optional<double> d_mean_ours;  // absent when the method found no CFs
    double coverage_ours = 0.0;
    std::size_t n_ours = 0;
    std::optional<double> d_mean_baseline;
    std::optional<double> coverage_baseline;
    std::size_t n_baseline = 0;
    std::optional<double> d_rmean_value;
    std::optional<double> pct_closer_value;
    std::optional<double> p_value;
    std::size_t n_compared = 0;
    std::size_t n_zero_excluded = 0;
    std::string distance;
    bool paired = false;
    std::string method_ours;      // config fingerprints, filled by the driver
    std::string method_baseline;
};

inline EvalReport make_report(const std::vector<CfResult>& ours,
                              const std::vector<CfResult>* baseline, const DistanceSpec& spec,
                              const TreeEnsemble* ens = nullptr, bool paired = false) {
    EvalReport rep;
    rep.distance = to_string(spec.kind);
    rep.paired = paired;
    rep.n_ours = ours.size();
    rep.coverage_ours = ens ? coverage(ours, *ens) : coverage(ours);
    if (rep.coverage_ours > 0.0) rep.d_mean_ours = d_mean(ours, spec);

    if (baseline) {
        rep.n_baseline = baseline->size();
        rep.coverage_baseline = ens ? coverage(*baseline, *ens) : coverage(*baseline);
        if (*rep.coverage_baseline > 0.0) rep.d_mean_baseline = d_mean(*baseline, spec);

        const std::vector<std::size_t> idx = detail::overlap_indices(ours, *baseline);
        rep.n_compared = idx.size();
        if (!idx.empty()) {
            const RatioStat rs = d_rmean(ours, *baseline, spec);
            rep.d_rmean_value = rs.value;
            rep.n_zero_excluded = rs.n_zero_excluded;
            rep.pct_closer_value = pct_closer(ours, *baseline, spec);
            if (idx.size() >= 2) {
                const DistanceSpec exact = spec.exact();
                std::vector<double> da, db;
                da.reserve(idx.size());
                db.reserve(idx.size());
                for (std::size_t i : idx) {
                    da.push_back(dist(exact, ours[i].original, *ours[i].counterfactual));
                    db.push_back(
                        dist(exact, (*baseline)[i].original, *(*baseline)[i].counterfactual));
                }
                rep.p_value = paired ? paired_t_test(da, db).p : welch_t_test(da, db).p;
            }
        }
    }
    return rep;
}

}  // namespace treecf

#endif  // TREECF_EVAL_HPP
