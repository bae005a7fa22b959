#ifndef TREECF_TREE_HPP
#define TREECF_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "treecf/errors.hpp"

namespace treecf {

// One node of a binary decision tree, stored in a flat array. Internal nodes
// route LEFT when x[feature] > threshold and RIGHT when x[feature] <= threshold
// (equality goes right). Leaves carry a class distribution and have feature -1.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<double> distribution;  // leaves only

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // root at index 0, children after parents
    int n_features = 0;
    int n_classes = 0;

    const TreeNode& root() const { return nodes.front(); }

    std::vector<std::int32_t> leaf_indices() const {
        std::vector<std::int32_t> out;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].is_leaf()) out.push_back(static_cast<std::int32_t>(i));
        return out;
    }
};

struct LeafWalk {
    std::int32_t leaf = -1;
    std::vector<std::int32_t> path;  // internal nodes visited, root first
};

/// Walk the hard tree: returns the unique activated leaf and the internal
/// nodes on its path.
inline LeafWalk activated_leaf(const DecisionTree& tree, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(tree.n_features))
        throw DataError("input has " + std::to_string(x.size()) + " features, tree expects " +
                        std::to_string(tree.n_features));
    LeafWalk walk;
    std::int32_t node = 0;
    while (!tree.nodes[node].is_leaf()) {
        walk.path.push_back(node);
        const TreeNode& n = tree.nodes[node];
        node = (x[n.feature] > n.threshold) ? n.left : n.right;
    }
    walk.leaf = node;
    return walk;
}

/// Activated leaf only, without the path allocation.
inline std::int32_t activated_leaf_index(const DecisionTree& tree, const std::vector<double>& x) {
    std::int32_t node = 0;
    while (!tree.nodes[node].is_leaf()) {
        const TreeNode& n = tree.nodes[node];
        node = (x[n.feature] > n.threshold) ? n.left : n.right;
    }
    return node;
}

}  // namespace treecf

#endif  // TREECF_TREE_HPP
