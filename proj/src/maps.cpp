#include "cge/maps.hpp"

#include <cmath>

#include "cge/parallel.hpp"

// Reduction discipline: every sum is assembled from per-leading-index
// partials folded in ascending index order, so results do not depend on the
// thread count or on whether the parallel path runs at all.

namespace cge {

double f_kl(double u, double v) {
    if (u <= 0.0) return 0.0;
    if (v <= 0.0) return std::numeric_limits<double>::infinity();
    return u * (std::log(u) - std::log(v));
}

namespace {

// prod_y r_{j|y}^{p(y|x)} via exp of the weighted log sum. Zero base with a
// positive exponent short-circuits to 0; zero exponents are skipped (t^0=1).
inline double weight_product(const Problem& p, const RPoint& r, int j, int x) {
    const int ny = p.num_y();
    double s = 0.0;
    for (int y = 0; y < ny; ++y) {
        const double e = p.py_given_x(y, x);
        if (e == 0.0) continue;
        const double ry = r.at(j, y, ny);
        if (ry == 0.0) return 0.0;
        s += e * std::log(ry);
    }
    return std::exp(s);
}

inline ExtendedValue fold_partials(const std::vector<double>& partial) {
    double total = 0.0;
    for (double t : partial) {
        if (t == std::numeric_limits<double>::infinity()) return ExtendedValue::infinity();
        total += t;
    }
    return ExtendedValue::of(total);
}

} // namespace

RPoint map_R(const Problem& p, const QPoint& q) {
    const int nj = p.num_sets(), ny = p.num_y();
    RPoint out;
    out.v.assign(static_cast<std::size_t>(nj) * ny, 0.0);
    out.active.assign(static_cast<std::size_t>(nj), 0);
#pragma omp parallel for schedule(static) if (par::enabled() && nj * ny >= par::kGrain)
    for (int j = 0; j < nj; ++j) {
        const auto xs = p.members(j);
        const auto es = p.member_edges(j);
        bool any = false;
        for (int y = 0; y < ny; ++y) {
            double s = 0.0;
            for (std::size_t k = 0; k < xs.size(); ++k)
                s += p.px_given_y(xs[k], y) * q.v[static_cast<std::size_t>(es[k])];
            out.v[static_cast<std::size_t>(j) * ny + y] = s;
            if (s > 0.0) any = true;
        }
        out.active[static_cast<std::size_t>(j)] = any ? 1 : 0;
    }
    return out;
}

APoint map_A(const Problem& p, const RPoint& r) {
    const int nx = p.num_x();
    APoint a;
    a.v.assign(static_cast<std::size_t>(nx), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        double s = 0.0;
        for (int j : p.sets_containing(x)) s += weight_product(p, r, j, x);
        a.v[static_cast<std::size_t>(x)] = s;
    }
    return a;
}

std::optional<QPoint> map_Q(const Problem& p, const RPoint& r) {
    const int nx = p.num_x();
    QPoint q;
    q.v.assign(static_cast<std::size_t>(p.num_edges()), 0.0);
    bool outside = false;
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        const int deg = p.degree(x);
        double ax = 0.0;
        for (int k = 0; k < deg; ++k) {
            const int j = p.sets_containing(x)[static_cast<std::size_t>(k)];
            const double g = weight_product(p, r, j, x);
            q.v[static_cast<std::size_t>(p.edge_index(x, k))] = g;
            ax += g;
        }
        if (ax == 0.0) {
#pragma omp atomic write
            outside = true;
        } else {
            for (int k = 0; k < deg; ++k) q.v[static_cast<std::size_t>(p.edge_index(x, k))] /= ax;
        }
    }
    if (outside) return std::nullopt;
    return q;
}

ExtendedValue phi(const Problem& p, const QPoint& q, const RPoint& r) {
    const int nx = p.num_x(), ny = p.num_y();
    std::vector<double> partial(static_cast<std::size_t>(nx), 0.0);
#pragma omp parallel for schedule(static) \
    if (par::enabled() && p.num_edges() * ny >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        double s = 0.0;
        for (int k = 0; k < p.degree(x); ++k) {
            const int j = p.sets_containing(x)[static_cast<std::size_t>(k)];
            const double qv = q.v[static_cast<std::size_t>(p.edge_index(x, k))];
            for (int y = 0; y < ny; ++y) {
                const double w = p.joint(x, y);
                if (w == 0.0) continue; // 0 * inf = 0
                s += w * f_kl(qv, r.at(j, y, ny));
            }
        }
        partial[static_cast<std::size_t>(x)] = s;
    }
    return fold_partials(partial);
}

ExtendedValue delta(const Problem& p, const QPoint& q, const QPoint& q2) {
    const int nx = p.num_x();
    std::vector<double> partial(static_cast<std::size_t>(nx), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        double s = 0.0;
        const double w = p.px(x);
        for (int k = 0; k < p.degree(x); ++k) {
            const std::size_t e = static_cast<std::size_t>(p.edge_index(x, k));
            s += w * f_kl(q.v[e], q2.v[e]);
        }
        partial[static_cast<std::size_t>(x)] = s;
    }
    return fold_partials(partial);
}

ExtendedValue phi_q(const Problem& p, const QPoint& q) {
    const int nx = p.num_x(), ny = p.num_y(), nj = p.num_sets();
    const RPoint r = map_R(p, q);
    // sum_x p_x sum_j q log q  -  sum_y p^y sum_j R log R, with 0 log 0 = 0.
    std::vector<double> partial_x(static_cast<std::size_t>(nx), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        double s = 0.0;
        for (int k = 0; k < p.degree(x); ++k) {
            const double qv = q.v[static_cast<std::size_t>(p.edge_index(x, k))];
            if (qv > 0.0) s += qv * std::log(qv);
        }
        partial_x[static_cast<std::size_t>(x)] = p.px(x) * s;
    }
    std::vector<double> partial_y(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && nj * ny >= par::kGrain)
    for (int y = 0; y < ny; ++y) {
        double s = 0.0;
        for (int j = 0; j < nj; ++j) {
            const double rv = r.at(j, y, ny);
            if (rv > 0.0) s += rv * std::log(rv);
        }
        partial_y[static_cast<std::size_t>(y)] = p.py(y) * s;
    }
    double total = 0.0;
    for (double t : partial_x) total += t;
    for (double t : partial_y) total -= t;
    return ExtendedValue::of(total);
}

ExtendedValue phi_r(const Problem& p, const RPoint& r) {
    const APoint a = map_A(p, r);
    return phi_a(p, a);
}

ExtendedValue phi_a(const Problem& p, const APoint& a) {
    const int nx = p.num_x();
    std::vector<double> partial(static_cast<std::size_t>(nx), 0.0);
    for (int x = 0; x < nx; ++x) {
        const double ax = a.v[static_cast<std::size_t>(x)];
        if (ax <= 0.0) return ExtendedValue::infinity();
        partial[static_cast<std::size_t>(x)] = -p.px(x) * std::log(ax);
    }
    return fold_partials(partial);
}

std::vector<double> phi_r_gradient(const Problem& p, const RPoint& r) {
    const int nj = p.num_sets(), ny = p.num_y(), nx = p.num_x();
    const APoint a = map_A(p, r);
    // g_{j,x}/A_x for every membership pair, then combine per coordinate.
    std::vector<double> ratio(static_cast<std::size_t>(p.num_edges()), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int x = 0; x < nx; ++x) {
        const double ax = a.v[static_cast<std::size_t>(x)];
        for (int k = 0; k < p.degree(x); ++k) {
            const int j = p.sets_containing(x)[static_cast<std::size_t>(k)];
            ratio[static_cast<std::size_t>(p.edge_index(x, k))] =
                ax > 0.0 ? weight_product(p, r, j, x) / ax : 0.0;
        }
    }
    std::vector<double> grad(static_cast<std::size_t>(nj) * ny, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int k = 0; k < p.degree(x); ++k) {
            const int j = p.sets_containing(x)[static_cast<std::size_t>(k)];
            const double gr = ratio[static_cast<std::size_t>(p.edge_index(x, k))];
            for (int y = 0; y < ny; ++y) {
                const double ry = r.at(j, y, ny);
                if (ry > 0.0)
                    grad[static_cast<std::size_t>(j) * ny + y] -= p.joint(x, y) * gr / ry;
            }
        }
    return grad;
}

std::vector<double> d_multipliers(const Problem& p, const RPoint& r) {
    if (p.num_y() != 1) throw std::invalid_argument("d_multipliers requires |Y| = 1");
    const APoint a = map_A(p, r);
    const int nj = p.num_sets();
    std::vector<double> d(static_cast<std::size_t>(nj), 0.0);
#pragma omp parallel for schedule(static) if (par::enabled() && p.num_edges() >= par::kGrain)
    for (int j = 0; j < nj; ++j) {
        double s = 0.0;
        for (int x : p.members(j)) {
            const double ax = a.v[static_cast<std::size_t>(x)];
            s += ax > 0.0 ? p.px(x) / ax : std::numeric_limits<double>::infinity();
        }
        d[static_cast<std::size_t>(j)] = s;
    }
    return d;
}

double fixed_point_residual(const Problem& p, const RPoint& r) {
    const APoint a = map_A(p, r);
    for (double ax : a.v)
        if (ax <= 0.0) return std::numeric_limits<double>::infinity();
    const int nj = p.num_sets(), ny = p.num_y();
    if (ny == 1) {
        const std::vector<double> d = d_multipliers(p, r);
        double worst = 0.0;
        for (int j = 0; j < nj; ++j)
            if (r.at(j, 0, 1) > 0.0) worst = std::max(worst, std::abs(d[static_cast<std::size_t>(j)] - 1.0));
        return worst;
    }
    const std::vector<double> grad = phi_r_gradient(p, r);
    double worst = 0.0;
    for (int j = 0; j < nj; ++j)
        for (int y = 0; y < ny; ++y)
            if (r.at(j, y, ny) > 1e-8)
                worst = std::max(worst,
                                 std::abs(grad[static_cast<std::size_t>(j) * ny + y] + p.py(y)));
    return worst;
}

} // namespace cge
