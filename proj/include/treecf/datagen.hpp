#ifndef TREECF_DATAGEN_HPP
#define TREECF_DATAGEN_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "treecf/errors.hpp"
#include "treecf/rng.hpp"

namespace treecf {

// Deterministic stand-in for the white-wine quality table: same shape
// (4898 rows, 11 physico-chemical features, integer quality 3..9 with ~22%
// at 7 or above) and similar correlation structure, driven by three shared
// latent factors so that quality is learnable from the features.
struct DatagenSpec {
    std::size_t rows = 4898;
    std::uint64_t seed = 20260821;
};

namespace detail {

struct FeatureGen {
    const char* name;
    double a, b, c, d;  // loadings on z1 (quality axis), z2, z3, own noise
    double mean, sd, lo, hi;
    int decimals;
};

inline const std::array<FeatureGen, 11>& wine_feature_table() {
    static const std::array<FeatureGen, 11> feats{{
        {"fixed_acidity", -0.10, 0.70, 0.10, 0.70, 6.85, 0.84, 3.8, 14.2, 1},
        {"volatile_acidity", -0.30, 0.60, 0.00, 0.74, 0.278, 0.100, 0.08, 1.10, 3},
        {"citric_acid", 0.10, 0.40, 0.10, 0.90, 0.334, 0.121, 0.00, 1.66, 2},
        {"residual_sugar", -0.45, 0.00, 0.75, 0.50, 6.39, 5.07, 0.6, 65.8, 1},
        {"chlorides", -0.35, 0.25, 0.20, 0.87, 0.0458, 0.0218, 0.009, 0.346, 3},
        {"free_sulfur_dioxide", 0.00, -0.10, 0.60, 0.79, 35.3, 17.0, 2.0, 289.0, 0},
        {"total_sulfur_dioxide", -0.30, 0.00, 0.75, 0.59, 138.4, 42.5, 9.0, 440.0, 0},
        {"density", -0.75, 0.10, 0.55, 0.36, 0.9940, 0.0030, 0.9871, 1.0390, 5},
        {"pH", 0.10, -0.50, -0.10, 0.85, 3.19, 0.151, 2.72, 3.82, 2},
        {"sulphates", 0.15, 0.20, 0.00, 0.97, 0.489, 0.114, 0.22, 1.08, 2},
        {"alcohol", 0.80, -0.10, -0.40, 0.44, 10.51, 1.23, 8.0, 14.2, 1},
    }};
    return feats;
}

inline std::string format_fixed(double v, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace detail

inline std::string wine_like_csv(const DatagenSpec& spec = {}) {
    if (spec.rows == 0) throw ConfigError("wine_like_csv: rows must be positive");
    const auto& feats = detail::wine_feature_table();

    std::string out;
    out.reserve(spec.rows * 90);
    for (const auto& f : feats) {
        out += f.name;
        out += ',';
    }
    out += "quality\n";

    Rng rng(spec.seed);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double z3 = rng.normal();
        for (const auto& f : feats) {
            const double noise = rng.normal();
            const double norm = std::sqrt(f.a * f.a + f.b * f.b + f.c * f.c + f.d * f.d);
            const double latent = (f.a * z1 + f.b * z2 + f.c * z3 + f.d * noise) / norm;
            double v = f.mean + f.sd * latent;
            v = std::min(f.hi, std::max(f.lo, v));
            out += detail::format_fixed(v, f.decimals);
            out += ',';
        }
        const double nq = rng.normal();
        const double qnorm = std::sqrt(0.9 * 0.9 + 0.35 * 0.35 + 0.15 * 0.15 + 0.35 * 0.35);
        const double s = (0.9 * z1 - 0.35 * z2 - 0.15 * z3 + 0.35 * nq) / qnorm;
        int q = static_cast<int>(std::lround(5.82 + 0.8855 * s));
        q = std::min(9, std::max(3, q));
        out += std::to_string(q);
        out += '\n';
    }
    return out;
}

inline void write_wine_like_csv(const std::string& path, const DatagenSpec& spec = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << wine_like_csv(spec);
}

}  // namespace treecf

#endif  // TREECF_DATAGEN_HPP
