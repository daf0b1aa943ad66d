#include "cge/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cge {

bool canonical_set_less(SetMask a, SetMask b) {
    while (a != 0 && b != 0) {
        const int ia = std::countr_zero(a);
        const int ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    // Shared prefix: the shorter list comes first.
    return a == 0 && b != 0;
}

Graph Graph::from_edges(std::vector<std::string> vertices,
                        const std::vector<std::pair<std::string, std::string>>& edge_labels) {
    Graph g;
    g.vertices = std::move(vertices);
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < g.num_vertices(); ++i) {
        if (!index.emplace(g.vertices[i], i).second)
            throw InvalidInput("duplicate vertex label: " + g.vertices[i]);
    }
    std::unordered_set<std::uint64_t> seen;
    for (const auto& [la, lb] : edge_labels) {
        auto ia = index.find(la);
        auto ib = index.find(lb);
        if (ia == index.end()) throw InvalidInput("edge references unknown vertex: " + la);
        if (ib == index.end()) throw InvalidInput("edge references unknown vertex: " + lb);
        int a = ia->second, b = ib->second;
        if (a == b) throw InvalidInput("loop edge on vertex: " + la);
        if (a > b) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (seen.insert(key).second) g.edges.emplace_back(a, b);
    }
    return g;
}

namespace {

// Bron-Kerbosch with pivoting on the complement graph: maximal independent
// sets of G are maximal cliques of the complement.
void expand(SetMask r, SetMask p, SetMask x, const std::vector<SetMask>& cnbr,
            std::vector<SetMask>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    // Pivot: vertex of P|X with the most complement-neighbours in P.
    SetMask px = p | x;
    int pivot = -1, best = -1;
    for (SetMask m = px; m != 0; m &= m - 1) {
        const int v = std::countr_zero(m);
        const int cnt = std::popcount(p & cnbr[v]);
        if (cnt > best) {
            best = cnt;
            pivot = v;
        }
    }
    SetMask cand = p & ~cnbr[pivot];
    while (cand != 0) {
        const int v = std::countr_zero(cand);
        const SetMask bit = SetMask{1} << v;
        expand(r | bit, p & cnbr[v], x & cnbr[v], cnbr, out);
        p &= ~bit;
        x |= bit;
        cand &= ~bit;
    }
}

std::vector<SetMask> masks_from_lists(const std::vector<std::vector<int>>& lists) {
    std::vector<SetMask> out;
    out.reserve(lists.size());
    for (const auto& l : lists) {
        SetMask m = 0;
        for (int v : l) m |= SetMask{1} << v;
        out.push_back(m);
    }
    return out;
}

} // namespace

std::vector<SetMask> enumerate_maximal_independent_sets(const Graph& g) {
    const int n = g.num_vertices();
    if (n > kMaxAlphabet) throw InvalidInput("graph larger than 64 vertices not supported");
    const SetMask full = (n == kMaxAlphabet) ? ~SetMask{0} : ((SetMask{1} << n) - 1);
    std::vector<SetMask> nbr(static_cast<std::size_t>(std::max(n, 1)), 0);
    for (const auto& [a, b] : g.edges) {
        if (a < 0 || b >= n) throw InvalidInput("edge references vertex out of range");
        nbr[a] |= SetMask{1} << b;
        nbr[b] |= SetMask{1} << a;
    }
    std::vector<SetMask> cnbr(nbr.size());
    for (int v = 0; v < n; ++v) cnbr[v] = full & ~nbr[v] & ~(SetMask{1} << v);

    std::vector<SetMask> out;
    expand(0, full, 0, cnbr, out);
    std::sort(out.begin(), out.end(), canonical_set_less);
    return out;
}

namespace {

constexpr double kMassTolerance = 1e-9;

std::string mask_to_string(SetMask m, const std::vector<std::string>& labels) {
    std::string s = "{";
    bool first = true;
    for (SetMask t = m; t != 0; t &= t - 1) {
        if (!first) s += ",";
        s += labels[static_cast<std::size_t>(std::countr_zero(t))];
        first = false;
    }
    return s + "}";
}

// Nudge v (which should already sum to ~1) so that its fixed-order fold is
// exactly 1.0, by absorbing the drift into the largest coordinate.
void force_exact_unit_sum(std::vector<double>& v) {
    for (int pass = 0; pass < 4; ++pass) {
        double s = 0.0;
        for (double t : v) s += t;
        if (s == 1.0) return;
        const std::size_t k = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        v[k] += 1.0 - s;
    }
}

} // namespace

Problem Problem::from_graph(std::vector<std::string> x_alphabet,
                            std::vector<std::string> y_alphabet,
                            const std::vector<std::vector<double>>& joint,
                            const Graph& graph,
                            ProblemOptions options) {
    if (graph.vertices != x_alphabet)
        throw InvalidInput("graph vertex list must match the x alphabet");
    return build(std::move(x_alphabet), std::move(y_alphabet), joint, &graph, {}, options);
}

Problem Problem::from_sets(std::vector<std::string> x_alphabet,
                           std::vector<std::string> y_alphabet,
                           const std::vector<std::vector<double>>& joint,
                           std::vector<SetMask> sets,
                           ProblemOptions options) {
    return build(std::move(x_alphabet), std::move(y_alphabet), joint, nullptr, std::move(sets),
                 options);
}

Problem Problem::build(std::vector<std::string> x_alphabet,
                       std::vector<std::string> y_alphabet,
                       const std::vector<std::vector<double>>& joint,
                       const Graph* graph,
                       std::vector<SetMask> sets,
                       ProblemOptions options) {
    const int nx0 = static_cast<int>(x_alphabet.size());
    const int ny0 = static_cast<int>(y_alphabet.size());
    if (nx0 == 0 || ny0 == 0) throw InvalidInput("empty alphabet");
    if (nx0 > kMaxAlphabet) throw InvalidInput("x alphabet larger than 64 letters not supported");
    if (static_cast<int>(joint.size()) != nx0)
        throw InvalidInput("joint matrix must have one row per x letter");

    std::vector<double> raw(static_cast<std::size_t>(nx0) * ny0);
    for (int x = 0; x < nx0; ++x) {
        if (static_cast<int>(joint[x].size()) != ny0)
            throw InvalidInput("joint matrix row has wrong length");
        for (int y = 0; y < ny0; ++y) {
            double v = joint[x][y];
            if (v < 0.0) {
                if (v < -1e-15) {
                    std::ostringstream os;
                    os << "negative probability p(" << x_alphabet[x] << "," << y_alphabet[y]
                       << ") = " << v;
                    throw InvalidInput(os.str());
                }
                v = 0.0;
            }
            raw[static_cast<std::size_t>(x) * ny0 + y] = v;
        }
    }
    double total = 0.0;
    for (double v : raw) total += v;
    if (std::abs(total - 1.0) > kMassTolerance) {
        std::ostringstream os;
        os << "joint probabilities sum to " << total << " (deviation "
           << (total - 1.0) << " exceeds tolerance " << kMassTolerance << ")";
        throw InvalidInput(os.str());
    }

    Problem p;

    // Delete zero-mass letters, keeping a log record.
    std::vector<int> keep_x, keep_y;
    for (int x = 0; x < nx0; ++x) {
        double s = 0.0;
        for (int y = 0; y < ny0; ++y) s += raw[static_cast<std::size_t>(x) * ny0 + y];
        if (s > 0.0)
            keep_x.push_back(x);
        else
            p.log_.push_back("deleted zero-mass x letter: " + x_alphabet[x]);
    }
    for (int y = 0; y < ny0; ++y) {
        double s = 0.0;
        for (int x = 0; x < nx0; ++x) s += raw[static_cast<std::size_t>(x) * ny0 + y];
        if (s > 0.0)
            keep_y.push_back(y);
        else
            p.log_.push_back("deleted zero-mass y letter: " + y_alphabet[y]);
    }
    if (keep_x.empty() || keep_y.empty()) throw InvalidInput("all probability mass is zero");

    p.nx_ = static_cast<int>(keep_x.size());
    p.ny_ = static_cast<int>(keep_y.size());
    for (int x : keep_x) p.x_labels_.push_back(x_alphabet[x]);
    for (int y : keep_y) p.y_labels_.push_back(y_alphabet[y]);

    p.pxy_.resize(static_cast<std::size_t>(p.nx_) * p.ny_);
    for (int xi = 0; xi < p.nx_; ++xi)
        for (int yi = 0; yi < p.ny_; ++yi)
            p.pxy_[static_cast<std::size_t>(xi) * p.ny_ + yi] =
                raw[static_cast<std::size_t>(keep_x[xi]) * ny0 + keep_y[yi]] / total;

    // Marginals, then exact renormalization as the last construction step.
    p.px_.assign(p.nx_, 0.0);
    p.py_.assign(p.ny_, 0.0);
    for (int x = 0; x < p.nx_; ++x)
        for (int y = 0; y < p.ny_; ++y) p.px_[x] += p.pxy_[static_cast<std::size_t>(x) * p.ny_ + y];
    for (int y = 0; y < p.ny_; ++y)
        for (int x = 0; x < p.nx_; ++x) p.py_[y] += p.pxy_[static_cast<std::size_t>(x) * p.ny_ + y];
    force_exact_unit_sum(p.px_);
    force_exact_unit_sum(p.py_);

    p.px_g_y_.resize(p.pxy_.size());
    p.py_g_x_.resize(p.pxy_.size());
    for (int x = 0; x < p.nx_; ++x) {
        for (int y = 0; y < p.ny_; ++y) {
            const std::size_t i = static_cast<std::size_t>(x) * p.ny_ + y;
            p.px_g_y_[i] = p.pxy_[i] / p.py_[y];
            p.py_g_x_[i] = p.pxy_[i] / p.px_[x];
        }
    }

    // Set system over the surviving letters.
    if (graph != nullptr) {
        Graph sub;
        std::vector<int> old_to_new(nx0, -1);
        for (int xi = 0; xi < p.nx_; ++xi) {
            old_to_new[keep_x[xi]] = xi;
            sub.vertices.push_back(x_alphabet[keep_x[xi]]);
        }
        for (const auto& [a, b] : graph->edges)
            if (old_to_new[a] >= 0 && old_to_new[b] >= 0)
                sub.edges.emplace_back(old_to_new[a], old_to_new[b]);
        p.sets_ = enumerate_maximal_independent_sets(sub);
    } else {
        // Restrict explicit sets to surviving letters.
        std::vector<SetMask> restricted;
        for (SetMask m : sets) {
            SetMask r = 0;
            for (int xi = 0; xi < p.nx_; ++xi)
                if ((m >> keep_x[xi]) & 1u) r |= SetMask{1} << xi;
            if (r != 0) restricted.push_back(r);
        }
        std::sort(restricted.begin(), restricted.end(), canonical_set_less);
        restricted.erase(std::unique(restricted.begin(), restricted.end()), restricted.end());
        if (!options.keep_dominated_sets) {
            std::vector<SetMask> maximal;
            for (SetMask m : restricted) {
                bool dominated = false;
                for (SetMask o : restricted)
                    if (o != m && (m & o) == m) {
                        dominated = true;
                        break;
                    }
                if (!dominated)
                    maximal.push_back(m);
                else
                    p.log_.push_back("removed dominated set " + mask_to_string(m, p.x_labels_));
            }
            p.sets_ = std::move(maximal);
        } else {
            p.sets_ = std::move(restricted);
        }
    }

    // Coverage.
    SetMask covered = 0;
    for (SetMask m : p.sets_) covered |= m;
    for (int x = 0; x < p.nx_; ++x)
        if (((covered >> x) & 1u) == 0)
            throw InvalidInput("letter " + p.x_labels_[x] + " is not covered by any set");

    // Membership layout.
    const int nj = p.num_sets();
    p.member_offset_.assign(nj + 1, 0);
    for (int j = 0; j < nj; ++j)
        p.member_offset_[j + 1] = p.member_offset_[j] + std::popcount(p.sets_[j]);
    p.members_flat_.resize(p.member_offset_[nj]);
    {
        std::vector<int> cursor(p.member_offset_.begin(), p.member_offset_.end() - 1);
        for (int j = 0; j < nj; ++j)
            for (SetMask t = p.sets_[j]; t != 0; t &= t - 1)
                p.members_flat_[cursor[j]++] = std::countr_zero(t);
    }
    p.edge_offset_.assign(p.nx_ + 1, 0);
    for (int x = 0; x < p.nx_; ++x) {
        int deg = 0;
        for (int j = 0; j < nj; ++j)
            if (p.contains(j, x)) ++deg;
        p.edge_offset_[x + 1] = p.edge_offset_[x] + deg;
    }
    const int ne = p.edge_offset_[p.nx_];
    p.containing_flat_.resize(ne);
    p.edge_x_.resize(ne);
    p.edge_j_.resize(ne);
    {
        int e = 0;
        for (int x = 0; x < p.nx_; ++x)
            for (int j = 0; j < nj; ++j)
                if (p.contains(j, x)) {
                    p.containing_flat_[e] = j;
                    p.edge_x_[e] = x;
                    p.edge_j_[e] = j;
                    ++e;
                }
    }
    p.member_edge_flat_.resize(p.members_flat_.size());
    {
        std::vector<int> cursor(p.edge_offset_.begin(), p.edge_offset_.end() - 1);
        for (int j = 0; j < nj; ++j) {
            const int base = p.member_offset_[j];
            for (int k = 0; k < p.member_offset_[j + 1] - base; ++k) {
                const int x = p.members_flat_[static_cast<std::size_t>(base + k)];
                p.member_edge_flat_[static_cast<std::size_t>(base + k)] = cursor[x]++;
            }
        }
    }
    return p;
}

std::vector<std::string> Problem::set_labels(int j) const {
    std::vector<std::string> out;
    for (int x : members(j)) out.push_back(x_labels_[x]);
    return out;
}

} // namespace cge
