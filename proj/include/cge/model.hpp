#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cge/errors.hpp"

namespace cge {

// Subset of the x-alphabet stored as a bitmask (bit i = i-th letter).
using SetMask = std::uint64_t;
inline constexpr int kMaxAlphabet = 64;

// Canonical set order: lexicographic over the ascending member-index list,
// e.g. {x1,x3} < {x2} because [0,2] < [1].
bool canonical_set_less(SetMask a, SetMask b);

struct Graph {
    std::vector<std::string> vertices;
    std::vector<std::pair<int, int>> edges; // normalized a < b, deduplicated

    static Graph from_edges(std::vector<std::string> vertices,
                            const std::vector<std::pair<std::string, std::string>>& edge_labels);
    int num_vertices() const { return static_cast<int>(vertices.size()); }
};

// All inclusion-maximal independent sets, each once, in canonical order.
std::vector<SetMask> enumerate_maximal_independent_sets(const Graph& g);

struct ProblemOptions {
    bool keep_dominated_sets = false;
};

// Immutable problem instance: joint distribution over X x Y plus a covering
// set system over X, with marginals and conditionals precomputed. Letters of
// zero marginal mass are deleted during construction (recorded in the
// construction log) and the joint is renormalized so that the marginals sum
// to one exactly.
class Problem {
public:
    static Problem from_graph(std::vector<std::string> x_alphabet,
                              std::vector<std::string> y_alphabet,
                              const std::vector<std::vector<double>>& joint,
                              const Graph& graph,
                              ProblemOptions options = {});

    static Problem from_sets(std::vector<std::string> x_alphabet,
                             std::vector<std::string> y_alphabet,
                             const std::vector<std::vector<double>>& joint,
                             std::vector<SetMask> sets,
                             ProblemOptions options = {});

    int num_x() const { return nx_; }
    int num_y() const { return ny_; }
    int num_sets() const { return static_cast<int>(sets_.size()); }
    int num_edges() const { return static_cast<int>(edge_x_.size()); }

    double joint(int x, int y) const { return pxy_[static_cast<std::size_t>(x) * ny_ + y]; }
    double px(int x) const { return px_[x]; }
    double py(int y) const { return py_[y]; }
    double px_given_y(int x, int y) const { return px_g_y_[static_cast<std::size_t>(x) * ny_ + y]; }
    double py_given_x(int y, int x) const { return py_g_x_[static_cast<std::size_t>(x) * ny_ + y]; }

    const std::vector<SetMask>& sets() const { return sets_; }
    bool contains(int j, int x) const { return (sets_[j] >> x) & 1u; }

    // Members of set j, ascending x.
    std::span<const int> members(int j) const {
        return {members_flat_.data() + member_offset_[j],
                static_cast<std::size_t>(member_offset_[j + 1] - member_offset_[j])};
    }
    // Edge indices matching members(j), i.e. the E positions of (x, j).
    std::span<const int> member_edges(int j) const {
        return {member_edge_flat_.data() + member_offset_[j],
                static_cast<std::size_t>(member_offset_[j + 1] - member_offset_[j])};
    }
    // Sets containing x, ascending j.
    std::span<const int> sets_containing(int x) const {
        return {containing_flat_.data() + edge_offset_[x],
                static_cast<std::size_t>(edge_offset_[x + 1] - edge_offset_[x])};
    }
    int degree(int x) const { return edge_offset_[x + 1] - edge_offset_[x]; }

    // Flat index of the k-th membership pair of x into the edge list E
    // (x-major, sets ascending within x). QPoint values use this layout.
    int edge_index(int x, int k) const { return edge_offset_[x] + k; }
    int edge_x(int e) const { return edge_x_[e]; }
    int edge_set(int e) const { return edge_j_[e]; }

    const std::vector<std::string>& x_labels() const { return x_labels_; }
    const std::vector<std::string>& y_labels() const { return y_labels_; }
    std::vector<std::string> set_labels(int j) const;

    const std::vector<std::string>& construction_log() const { return log_; }

private:
    Problem() = default;
    static Problem build(std::vector<std::string> x_alphabet,
                         std::vector<std::string> y_alphabet,
                         const std::vector<std::vector<double>>& joint,
                         const Graph* graph,
                         std::vector<SetMask> sets,
                         ProblemOptions options);

    int nx_ = 0;
    int ny_ = 0;
    std::vector<std::string> x_labels_;
    std::vector<std::string> y_labels_;
    std::vector<double> pxy_;    // nx * ny, row-major
    std::vector<double> px_;     // nx
    std::vector<double> py_;     // ny
    std::vector<double> px_g_y_; // nx * ny: p(x|y)
    std::vector<double> py_g_x_; // nx * ny: p(y|x)
    std::vector<SetMask> sets_;  // canonical order

    std::vector<int> member_offset_;   // per j into members_flat_
    std::vector<int> members_flat_;    // x's per set, ascending
    std::vector<int> member_edge_flat_; // edge index of (x, j), parallel to members_flat_
    std::vector<int> edge_offset_;     // per x into containing_flat_
    std::vector<int> containing_flat_; // j's per x, ascending
    std::vector<int> edge_x_;          // per edge e
    std::vector<int> edge_j_;          // per edge e

    std::vector<std::string> log_;
};

} // namespace cge
