#pragma once

#include <optional>

#include "cge/geometry.hpp"
#include "cge/model.hpp"

// Plain serial evaluators written directly from the defining formulas,
// using pow-products instead of the exp-log kernels. They share no code
// with the maps module and back the brute-force oracles and the kernel
// comparison tests.
namespace cge::ref {

double a_x(const Problem& p, const RPoint& r, int x);
APoint map_A(const Problem& p, const RPoint& r);
RPoint map_R(const Problem& p, const QPoint& q);
std::optional<QPoint> map_Q(const Problem& p, const RPoint& r);

// Values as plain doubles; +infinity encodes the extended value.
double phi(const Problem& p, const QPoint& q, const RPoint& r);
double delta(const Problem& p, const QPoint& q, const QPoint& q2);
double phi_q(const Problem& p, const QPoint& q);
double phi_r(const Problem& p, const RPoint& r);

} // namespace cge::ref
