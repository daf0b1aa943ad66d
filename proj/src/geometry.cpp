#include "cge/geometry.hpp"

#include <cmath>
#include <sstream>

namespace cge {

namespace {
constexpr double kSimplexTol = 1e-12;
constexpr double kClampTol = 1e-14;
} // namespace

QPoint uniform_interior_q(const Problem& p) {
    QPoint q;
    q.v.resize(static_cast<std::size_t>(p.num_edges()));
    for (int x = 0; x < p.num_x(); ++x) {
        const double w = 1.0 / p.degree(x);
        for (int k = 0; k < p.degree(x); ++k) q.v[static_cast<std::size_t>(p.edge_index(x, k))] = w;
    }
    return q;
}

QPoint perturbed_interior_q(const Problem& p, std::uint64_t seed) {
    // splitmix64 stream; avoids distribution objects so the factors are
    // identical on every platform.
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    QPoint q = uniform_interior_q(p);
    for (int x = 0; x < p.num_x(); ++x) {
        double sum = 0.0;
        for (int k = 0; k < p.degree(x); ++k) {
            const double u = static_cast<double>(next() >> 11) * 0x1.0p-53; // [0,1)
            const std::size_t e = static_cast<std::size_t>(p.edge_index(x, k));
            q.v[e] *= 0.9 + 0.2 * u;
            sum += q.v[e];
        }
        for (int k = 0; k < p.degree(x); ++k) q.v[static_cast<std::size_t>(p.edge_index(x, k))] /= sum;
    }
    return q;
}

RPoint uniform_r(const Problem& p) {
    RPoint r;
    r.v.assign(static_cast<std::size_t>(p.num_sets()) * p.num_y(), 1.0 / p.num_sets());
    r.active.assign(static_cast<std::size_t>(p.num_sets()), 1);
    return r;
}

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::NegativeCoordinate:
        os << "negative coordinate at " << index << " (" << -magnitude << ")"
           << (clampable ? " [clampable]" : "");
        break;
    case Kind::SimplexSum:
        os << "simplex " << index << " sums off by " << magnitude;
        break;
    case Kind::InactiveMass:
        os << "non-active set " << index << " carries mass " << magnitude;
        break;
    }
    return os.str();
}

ValidationReport validate_q(const Problem& p, const QPoint& q) {
    ValidationReport rep;
    if (q.v.size() != static_cast<std::size_t>(p.num_edges())) {
        rep.violations.push_back(
            {Violation::Kind::SimplexSum, -1, static_cast<double>(q.v.size()), false});
        return rep;
    }
    for (int e = 0; e < p.num_edges(); ++e)
        if (q.v[static_cast<std::size_t>(e)] < 0.0)
            rep.violations.push_back({Violation::Kind::NegativeCoordinate, e,
                                      -q.v[static_cast<std::size_t>(e)],
                                      q.v[static_cast<std::size_t>(e)] >= -kClampTol});
    for (int x = 0; x < p.num_x(); ++x) {
        double s = 0.0;
        for (int k = 0; k < p.degree(x); ++k) s += q.v[static_cast<std::size_t>(p.edge_index(x, k))];
        if (std::abs(s - 1.0) > kSimplexTol)
            rep.violations.push_back({Violation::Kind::SimplexSum, x, std::abs(s - 1.0), false});
    }
    return rep;
}

ValidationReport validate_r(const Problem& p, const RPoint& r) {
    ValidationReport rep;
    const int nj = p.num_sets(), ny = p.num_y();
    if (r.v.size() != static_cast<std::size_t>(nj) * ny) {
        rep.violations.push_back(
            {Violation::Kind::SimplexSum, -1, static_cast<double>(r.v.size()), false});
        return rep;
    }
    for (int j = 0; j < nj; ++j)
        for (int y = 0; y < ny; ++y) {
            const double v = r.at(j, y, ny);
            if (v < 0.0)
                rep.violations.push_back(
                    {Violation::Kind::NegativeCoordinate, j * ny + y, -v, v >= -kClampTol});
            if (!r.active.empty() && !r.active[static_cast<std::size_t>(j)] && v != 0.0)
                rep.violations.push_back({Violation::Kind::InactiveMass, j, std::abs(v), false});
        }
    for (int y = 0; y < ny; ++y) {
        double s = 0.0;
        for (int j = 0; j < nj; ++j) s += r.at(j, y, ny);
        if (std::abs(s - 1.0) > kSimplexTol)
            rep.violations.push_back({Violation::Kind::SimplexSum, y, std::abs(s - 1.0), false});
    }
    return rep;
}

QPoint clamped(const Problem& p, QPoint q) {
    for (int x = 0; x < p.num_x(); ++x) {
        double sum = 0.0;
        for (int k = 0; k < p.degree(x); ++k) {
            double& v = q.v[static_cast<std::size_t>(p.edge_index(x, k))];
            if (v < 0.0 && v >= -kClampTol) v = 0.0;
            sum += v;
        }
        if (sum > 0.0)
            for (int k = 0; k < p.degree(x); ++k)
                q.v[static_cast<std::size_t>(p.edge_index(x, k))] /= sum;
    }
    return q;
}

RPoint clamped(const Problem& p, RPoint r) {
    const int nj = p.num_sets(), ny = p.num_y();
    if (r.active.empty()) r.active.assign(static_cast<std::size_t>(nj), 1);
    for (int y = 0; y < ny; ++y) {
        double sum = 0.0;
        for (int j = 0; j < nj; ++j) {
            double& v = r.v[static_cast<std::size_t>(j) * ny + y];
            if (v < 0.0 && v >= -kClampTol) v = 0.0;
            sum += v;
        }
        if (sum > 0.0)
            for (int j = 0; j < nj; ++j) r.v[static_cast<std::size_t>(j) * ny + y] /= sum;
    }
    return r;
}

} // namespace cge
