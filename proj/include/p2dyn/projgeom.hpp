#pragma once

#include "p2dyn/common.hpp"

namespace p2dyn {

// Point of the complex projective plane, stored max-normalized: the pivot
// coordinate is exactly 1 and every other coordinate has modulus <= 1.
// The pivot is the smallest index among coordinates of maximal modulus of
// the raw input.
struct ProjPoint {
    CxTriple c{Cx(1, 0), Cx(0, 0), Cx(0, 0)};
    int pivot = 0;

    const Cx& x() const { return c[0]; }
    const Cx& y() const { return c[1]; }
    const Cx& z() const { return c[2]; }
};

// Affine chart coordinates: chart k drops coordinate k (the two remaining
// coordinates, in index order, divided by coordinate k).
struct AffinePair {
    int chart = 0;
    Cx u{0, 0}, v{0, 0};
};

ProjPoint normalize(const CxTriple& raw);
ProjPoint make_point(Cx x, Cx y, Cx z);

// chordal metric ||p ^ q|| / (||p|| ||q||), in [0, 1]
double dist(const ProjPoint& p, const ProjPoint& q);

CxTriple cross(const CxTriple& p, const CxTriple& q);

// non-pivot indices of chart k, in increasing order
std::array<int, 2> chart_slots(int chart);

AffinePair to_chart(const ProjPoint& p, int chart);
ProjPoint from_chart(const AffinePair& a);
CxTriple embed_chart(int chart, Cx u, Cx v);

// |z^2 - xy| on the normalized representative; p is in U(delta) iff
// conic_defect(p) <= delta
double conic_defect(const ProjPoint& p);

inline double max_modulus(const CxTriple& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

}  // namespace p2dyn
