#ifndef TREECF_ADAM_HPP
#define TREECF_ADAM_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "treecf/errors.hpp"

namespace treecf {

struct AdamParams {
    double b1 = 0.9;
    double b2 = 0.999;
    double eps = 1e-8;

    void validate() const {
        if (!(b1 >= 0.0 && b1 < 1.0) || !(b2 >= 0.0 && b2 < 1.0))
            throw ConfigError("adam moment decay rates must lie in [0, 1)");
        if (!(eps > 0.0)) throw ConfigError("adam eps must be positive");
    }
};

// Adam with bias-corrected moments. step() returns the parameter delta
// -alpha * m_hat / (sqrt(v_hat) + eps); the caller applies it.
class AdamState {
public:
    explicit AdamState(std::size_t dim) : m_(dim, 0.0), v_(dim, 0.0) {}

    std::vector<double> step(const std::vector<double>& gradient, double alpha,
                             const AdamParams& p = {}) {
        if (gradient.size() != m_.size()) throw ConfigError("adam gradient dimension mismatch");
        ++t_;
        const double bc1 = 1.0 - std::pow(p.b1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(p.b2, static_cast<double>(t_));
        std::vector<double> delta(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) {
            m_[i] = p.b1 * m_[i] + (1.0 - p.b1) * gradient[i];
            v_[i] = p.b2 * v_[i] + (1.0 - p.b2) * gradient[i] * gradient[i];
            const double m_hat = m_[i] / bc1;
            const double v_hat = v_[i] / bc2;
            delta[i] = -alpha * m_hat / (std::sqrt(v_hat) + p.eps);
        }
        return delta;
    }

    long steps_taken() const { return t_; }

private:
    std::vector<double> m_, v_;
    long t_ = 0;
};

}  // namespace treecf

#endif  // TREECF_ADAM_HPP
