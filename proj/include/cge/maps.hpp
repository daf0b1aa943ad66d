#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cge/geometry.hpp"
#include "cge/model.hpp"

namespace cge {

// Nonnegative real extended with +infinity, in nats. Arithmetic follows the
// conventions log 0 = -inf and 0 * inf = 0; a value is never NaN. Rounding
// noise down to -1e-9 is clamped to zero (weighted KL sums are nonnegative
// in exact arithmetic but individual terms are not).
class ExtendedValue {
public:
    static ExtendedValue infinity() {
        ExtendedValue e;
        e.v_ = std::numeric_limits<double>::infinity();
        return e;
    }
    static ExtendedValue of(double v) {
        if (std::isnan(v)) throw std::logic_error("ExtendedValue: NaN");
        if (v < 0.0) {
            if (v < -1e-9) throw std::logic_error("ExtendedValue: negative beyond rounding noise");
            v = 0.0;
        }
        ExtendedValue e;
        e.v_ = v;
        return e;
    }
    bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
    double nats() const { return v_; }
    double bits() const { return v_ / 0.6931471805599453; }

    friend ExtendedValue operator+(ExtendedValue a, ExtendedValue b) {
        if (!a.is_finite() || !b.is_finite()) return infinity();
        return of(a.v_ + b.v_);
    }
    friend bool operator==(ExtendedValue a, ExtendedValue b) { return a.v_ == b.v_; }

private:
    double v_ = 0.0;
};

// f(u,v) = u log u - u log v with f(0,v) = 0 and f(u,0) = +inf for u > 0.
double f_kl(double u, double v);

// R_{j|y}(q) = sum_{x in j} p(x|y) q_{j|x}. Linear; the push-forward of q
// through the chain Y - X - J.
RPoint map_R(const Problem& p, const QPoint& q);

// A_x(r) = sum_{j cont. x} prod_y r_{j|y}^{p(y|x)}, with t^0 = 1 even at t=0.
APoint map_A(const Problem& p, const RPoint& r);

// Q_{j|x}(r) = prod_y r_{j|y}^{p(y|x)} / A_x(r). Defined only where every
// A_x is positive; nullopt signals r outside K*_r (a value, not a failure).
std::optional<QPoint> map_Q(const Problem& p, const RPoint& r);

ExtendedValue phi(const Problem& p, const QPoint& q, const RPoint& r);
ExtendedValue delta(const Problem& p, const QPoint& q, const QPoint& q2);
ExtendedValue phi_q(const Problem& p, const QPoint& q);
ExtendedValue phi_r(const Problem& p, const RPoint& r);
ExtendedValue phi_a(const Problem& p, const APoint& a);

// Partial derivatives of phi_r in ambient coordinates:
//   d phi_r / d r_{j|y} = - sum_{x in j} p(x,y) g_{j,x} / (r_{j|y} A_x(r)).
// Entries with r_{j|y} = 0 are set to 0 and are not derivatives.
std::vector<double> phi_r_gradient(const Problem& p, const RPoint& r);

// Stationarity residual of the stepping map at r. For |Y| = 1 this is
// max_j |D_j(r) - 1| over active sets; in general it is
// max |d phi_r + p^y| over coordinates with r_{j|y} > 1e-8. Returns +inf
// if r lies outside K*_r.
double fixed_point_residual(const Problem& p, const RPoint& r);

// D_j(r) = sum_{x in j} p_x / A_x(r), the |Y| = 1 multiplier of the stepping
// map. Requires num_y() == 1.
std::vector<double> d_multipliers(const Problem& p, const RPoint& r);

} // namespace cge
