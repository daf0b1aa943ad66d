#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cge/model.hpp"

namespace cge {

// Point of K_q: conditional distributions q_{j|x} over the sets containing x,
// stored sparsely on the membership pairs E in the problem's edge layout.
struct QPoint {
    std::vector<double> v; // size problem.num_edges()
};

// Point of K_r: one distribution over all sets per y letter, stored j-major
// (v[j*ny + y]). `active[j]` is false once j has been pruned; a non-active j
// carries zero weight for every y.
struct RPoint {
    std::vector<double> v; // size num_sets * num_y
    std::vector<std::uint8_t> active;

    double at(int j, int y, int ny) const { return v[static_cast<std::size_t>(j) * ny + y]; }
};

// Image point under A: one value per x, each in [0,1].
struct APoint {
    std::vector<double> v; // size num_x
};

QPoint uniform_interior_q(const Problem& p);
QPoint perturbed_interior_q(const Problem& p, std::uint64_t seed);

// r_{j|y} = 1/|J| for every j,y.
RPoint uniform_r(const Problem& p);

struct Violation {
    enum class Kind { NegativeCoordinate, SimplexSum, InactiveMass };
    Kind kind;
    int index;        // edge index for q, j*ny+y for r coordinates, x or y for sums
    double magnitude; // |deficit| or |negative value|
    bool clampable;   // within clamping tolerance (1e-14)
    std::string describe() const;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_q(const Problem& p, const QPoint& q);
ValidationReport validate_r(const Problem& p, const RPoint& r);

// Clamps negative coordinates within 1e-14 of zero and renormalizes each
// simplex. Coordinates more negative than that are left for validate to flag.
QPoint clamped(const Problem& p, QPoint q);
RPoint clamped(const Problem& p, RPoint r);

} // namespace cge
