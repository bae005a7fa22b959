#ifndef TREECF_DATASET_HPP
#define TREECF_DATASET_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "treecf/errors.hpp"
#include "treecf/rng.hpp"

namespace treecf {

// Tabular dataset with integer class labels. Feature values are raw until
// minmax_scale() has run; afterwards every value lies in [0, 1] and
// scale_min/scale_max record the affine map back to original units.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;   // n_rows x n_features
    std::vector<int> labels;                 // 0-based classes
    int n_classes = 0;
    std::vector<std::string> label_names;    // class index -> original label text
    std::vector<double> scale_min;           // empty until scaled
    std::vector<double> scale_max;
    std::vector<std::string> notes;          // dropped columns etc.

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_features() const { return feature_names.size(); }
    bool is_scaled() const { return !scale_min.empty(); }

    /// Map a scaled vector back to original units.
    std::vector<double> to_original_units(const std::vector<double>& x) const {
        if (!is_scaled()) return x;
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = scale_min[i] + x[i] * (scale_max[i] - scale_min[i]);
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// One CSV record; separators inside double quotes are kept, "" unescapes.
inline std::vector<std::string> split_csv_line(const std::string& line, char delim = ',') {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

struct LoadOptions {
    // Binarize a numeric label: value >= threshold becomes class 1.
    std::optional<double> label_geq;
};

/// Load a CSV with a header row. Non-numeric feature columns are dropped.
/// `label_column` is a header name, or a 0-based column index if it parses
/// as an integer and no header matches it.
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        const LoadOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    // Semicolon-separated variants (the UCI wine files) are auto-detected.
    const char delim = (line.find(';') != std::string::npos &&
                        line.find(',') == std::string::npos)
                           ? ';'
                           : ',';
    const std::vector<std::string> header = detail::split_csv_line(line, delim);
    const std::size_t n_cols = header.size();

    // Resolve the label column: exact header match first, then index.
    std::size_t label_idx = n_cols;
    for (std::size_t i = 0; i < n_cols; ++i)
        if (detail::trim(header[i]) == detail::trim(label_column)) {
            label_idx = i;
            break;
        }
    if (label_idx == n_cols) {
        double v;
        if (detail::parse_double(label_column, v) && v >= 0 && v < static_cast<double>(n_cols) &&
            v == std::floor(v)) {
            label_idx = static_cast<std::size_t>(v);
        } else {
            throw DataError("label column not found: " + label_column);
        }
    }

    std::vector<std::vector<std::string>> cells;  // row-major raw text
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line, delim);
        if (fields.size() != n_cols)
            throw DataError("ragged row at line " + std::to_string(line_no) + ": expected " +
                            std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()));
        cells.push_back(std::move(fields));
    }
    if (cells.empty()) throw DataError("no data rows in " + path);

    Dataset ds;

    // A feature column survives only if every value parses as a number.
    std::vector<std::size_t> numeric_cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c == label_idx) continue;
        bool numeric = true;
        double v;
        for (const auto& row : cells)
            if (!detail::parse_double(row[c], v)) {
                numeric = false;
                break;
            }
        if (numeric) {
            numeric_cols.push_back(c);
        } else {
            ds.notes.push_back("dropped categorical column: " + detail::trim(header[c]));
        }
    }
    if (numeric_cols.empty()) throw DataError("no numeric feature columns remain");

    for (std::size_t c : numeric_cols) ds.feature_names.push_back(detail::trim(header[c]));
    ds.rows.reserve(cells.size());
    for (const auto& row : cells) {
        std::vector<double> r(numeric_cols.size());
        for (std::size_t k = 0; k < numeric_cols.size(); ++k)
            detail::parse_double(row[numeric_cols[k]], r[k]);
        ds.rows.push_back(std::move(r));
    }

    // Labels: optional numeric binarization, else distinct values sorted
    // (numerically when possible) and mapped to 0..k-1.
    if (opts.label_geq) {
        for (const auto& row : cells) {
            double v;
            if (!detail::parse_double(row[label_idx], v))
                throw DataError("label value not numeric, cannot apply threshold: " +
                                row[label_idx]);
            ds.labels.push_back(v >= *opts.label_geq ? 1 : 0);
        }
        ds.n_classes = 2;
        ds.label_names = {"0", "1"};
    } else {
        std::vector<std::string> raw;
        raw.reserve(cells.size());
        for (const auto& row : cells) raw.push_back(detail::trim(row[label_idx]));
        std::vector<std::string> distinct = raw;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        bool all_numeric = true;
        for (const auto& s : distinct) {
            double v;
            if (!detail::parse_double(s, v)) {
                all_numeric = false;
                break;
            }
        }
        if (all_numeric) {
            std::sort(distinct.begin(), distinct.end(), [](const std::string& a, const std::string& b) {
                double va, vb;
                detail::parse_double(a, va);
                detail::parse_double(b, vb);
                return va < vb;
            });
        }
        std::map<std::string, int> to_class;
        for (const auto& s : distinct) to_class.emplace(s, static_cast<int>(to_class.size()));
        for (const auto& s : raw) ds.labels.push_back(to_class[s]);
        ds.n_classes = static_cast<int>(distinct.size());
        ds.label_names = distinct;
    }
    if (ds.n_classes < 2) throw DataError("fewer than 2 classes in label column");
    if (opts.label_geq) {
        // threshold labels can still collapse onto one side
        bool has0 = false, has1 = false;
        for (int y : ds.labels) (y ? has1 : has0) = true;
        if (!has0 || !has1) throw DataError("fewer than 2 classes in label column");
    }
    return ds;
}

/// Affinely map every feature column onto [0, 1]. Constant columns cannot be
/// scaled and are removed, with a note on the returned dataset.
inline Dataset minmax_scale(const Dataset& ds) {
    if (ds.is_scaled()) throw DataError("dataset is already scaled");
    if (ds.rows.empty()) throw DataError("cannot scale an empty dataset");

    const std::size_t d = ds.n_features();
    std::vector<double> mn(d, std::numeric_limits<double>::infinity());
    std::vector<double> mx(d, -std::numeric_limits<double>::infinity());
    for (const auto& row : ds.rows)
        for (std::size_t i = 0; i < d; ++i) {
            mn[i] = std::min(mn[i], row[i]);
            mx[i] = std::max(mx[i], row[i]);
        }

    std::vector<std::size_t> keep;
    Dataset out;
    out.labels = ds.labels;
    out.n_classes = ds.n_classes;
    out.label_names = ds.label_names;
    out.notes = ds.notes;
    for (std::size_t i = 0; i < d; ++i) {
        if (mn[i] < mx[i]) {
            keep.push_back(i);
            out.feature_names.push_back(ds.feature_names[i]);
            out.scale_min.push_back(mn[i]);
            out.scale_max.push_back(mx[i]);
        } else {
            out.notes.push_back("dropped constant column: " + ds.feature_names[i]);
        }
    }
    if (keep.empty()) throw DataError("no non-constant feature columns remain");

    out.rows.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        std::vector<double> r(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const std::size_t i = keep[k];
            r[k] = (row[i] - mn[i]) / (mx[i] - mn[i]);
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

/// Apply an existing scaling (e.g. the one stored in a model file) to raw rows.
inline std::vector<double> apply_scaling(const std::vector<double>& raw,
                                         const std::vector<double>& scale_min,
                                         const std::vector<double>& scale_max) {
    if (raw.size() != scale_min.size() || raw.size() != scale_max.size())
        throw DataError("scaling metadata dimension mismatch");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = (raw[i] - scale_min[i]) / (scale_max[i] - scale_min[i]);
    return out;
}

namespace detail {

inline Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.n_classes = ds.n_classes;
    out.label_names = ds.label_names;
    out.scale_min = ds.scale_min;
    out.scale_max = ds.scale_max;
    out.notes = ds.notes;
    out.rows.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        out.rows.push_back(ds.rows[i]);
        out.labels.push_back(ds.labels[i]);
    }
    return out;
}

}  // namespace detail

struct SplitIndices {
    std::vector<std::size_t> train, test;
};

/// Deterministic shuffled 70/30 index split (train size = floor(0.7 n)).
/// With `stratified`, the 70% cut is applied per class instead.
inline SplitIndices split_indices_70_30(const std::vector<int>& labels, int n_classes,
                                        std::uint64_t seed, bool stratified = false) {
    const std::size_t n = labels.size();
    if (n < 10) throw DataError("need at least 10 rows to split");

    SplitIndices out;
    Rng rng(derive_seed(seed, 0x5714u));
    if (!stratified) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        rng.shuffle(idx);
        const std::size_t n_train = (n * 7) / 10;
        out.train.assign(idx.begin(), idx.begin() + n_train);
        out.test.assign(idx.begin() + n_train, idx.end());
    } else {
        for (int c = 0; c < n_classes; ++c) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (labels[i] == c) idx.push_back(i);
            rng.shuffle(idx);
            const std::size_t n_train = (idx.size() * 7) / 10;
            out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train);
            out.test.insert(out.test.end(), idx.begin() + n_train, idx.end());
        }
        std::sort(out.train.begin(), out.train.end());
        std::sort(out.test.begin(), out.test.end());
    }
    return out;
}

inline std::pair<Dataset, Dataset> split_70_30(const Dataset& ds, std::uint64_t seed,
                                               bool stratified = false) {
    const SplitIndices idx = split_indices_70_30(ds.labels, ds.n_classes, seed, stratified);
    return {detail::take_rows(ds, idx.train), detail::take_rows(ds, idx.test)};
}

}  // namespace treecf

#endif  // TREECF_DATASET_HPP
