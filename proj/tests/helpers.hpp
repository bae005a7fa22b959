#ifndef TREECF_TESTS_HELPERS_HPP
#define TREECF_TESTS_HELPERS_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "treecf/dataset.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/tree.hpp"

namespace testutil {

inline treecf::TreeNode leaf(std::vector<double> distribution) {
    treecf::TreeNode n;
    n.feature = -1;
    n.distribution = std::move(distribution);
    return n;
}

inline treecf::TreeNode internal(int feature, double threshold, int left, int right) {
    treecf::TreeNode n;
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return n;
}

// Depth-1 tree: LEFT (x[f] > t) gets left_dist, RIGHT (x[f] <= t) right_dist.
inline treecf::DecisionTree stump(int n_features, int n_classes, int feature, double threshold,
                                  std::vector<double> left_dist,
                                  std::vector<double> right_dist) {
    treecf::DecisionTree t;
    t.n_features = n_features;
    t.n_classes = n_classes;
    t.nodes.push_back(internal(feature, threshold, 1, 2));
    t.nodes.push_back(leaf(std::move(left_dist)));
    t.nodes.push_back(leaf(std::move(right_dist)));
    return t;
}

inline treecf::TreeEnsemble wrap(std::vector<treecf::DecisionTree> trees,
                                 std::vector<double> weights,
                                 std::vector<std::string> feature_names = {}) {
    treecf::TreeEnsemble ens;
    ens.kind = trees.size() == 1 ? treecf::EnsembleKind::SingleTree
                                 : treecf::EnsembleKind::RandomForest;
    ens.n_features = trees.front().n_features;
    ens.n_classes = trees.front().n_classes;
    if (feature_names.empty())
        for (int i = 0; i < ens.n_features; ++i)
            feature_names.push_back("f" + std::to_string(i));
    ens.feature_names = std::move(feature_names);
    ens.scale_min.assign(ens.n_features, 0.0);
    ens.scale_max.assign(ens.n_features, 1.0);
    ens.trees = std::move(trees);
    ens.weights = std::move(weights);
    return ens;
}

// Central finite difference of a scalar function of a vector.
template <typename F>
std::vector<double> fd_gradient(F&& f, std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + h;
        const double up = f(x);
        x[i] = x0 - h;
        const double dn = f(x);
        x[i] = x0;
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

// Unique-ish temp path under the build dir; removed eagerly by callers.
inline std::string tmp_path(const std::string& stem) {
    static int counter = 0;
    return "treecf_test_" + stem + "_" + std::to_string(counter++) + ".tmp";
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& stem) : path(tmp_path(stem)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

// Tiny linearly separable dataset: class 1 iff x0 >= 5 (10 rows, 2 features).
inline treecf::Dataset toy_dataset() {
    treecf::Dataset ds;
    ds.feature_names = {"x0", "x1"};
    ds.n_classes = 2;
    ds.label_names = {"0", "1"};
    for (int i = 0; i < 10; ++i) {
        const double v = static_cast<double>(i);
        ds.rows.push_back({v, 9.0 - v});
        ds.labels.push_back(i >= 5 ? 1 : 0);
    }
    return ds;
}

}  // namespace testutil

#endif  // TREECF_TESTS_HELPERS_HPP
