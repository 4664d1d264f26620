#include "p2dyn/projgeom.hpp"

#include <algorithm>

namespace p2dyn {

ProjPoint normalize(const CxTriple& raw) {
    double m0 = std::abs(raw[0]), m1 = std::abs(raw[1]), m2 = std::abs(raw[2]);
    double mx = std::max({m0, m1, m2});
    if (mx < 1e-300) throw ZeroVector();
    int pivot = (m0 == mx) ? 0 : (m1 == mx) ? 1 : 2;

    ProjPoint p;
    p.pivot = pivot;
    Cx piv = raw[pivot];
    for (int k = 0; k < 3; ++k) {
        if (k == pivot) { p.c[k] = Cx(1, 0); continue; }
        Cx w = raw[k] / piv;
        // division can overshoot modulus 1 by a few ulps on ties
        for (int it = 0; it < 2 && std::abs(w) > 1.0; ++it) w /= std::abs(w);
        if (std::abs(w) > 1.0) w *= (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
        p.c[k] = w;
    }
    return p;
}

ProjPoint make_point(Cx x, Cx y, Cx z) { return normalize({x, y, z}); }

CxTriple cross(const CxTriple& p, const CxTriple& q) {
    return {p[1] * q[2] - p[2] * q[1],
            p[2] * q[0] - p[0] * q[2],
            p[0] * q[1] - p[1] * q[0]};
}

static double norm2(const CxTriple& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

double dist(const ProjPoint& p, const ProjPoint& q) {
    CxTriple w = cross(p.c, q.c);
    double d = norm2(w) / (norm2(p.c) * norm2(q.c));
    return std::clamp(d, 0.0, 1.0);
}

std::array<int, 2> chart_slots(int chart) {
    switch (chart) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        default: return {0, 1};
    }
}

AffinePair to_chart(const ProjPoint& p, int chart) {
    Cx den = p.c[chart];
    if (std::abs(den) < 1e-6)
        throw NearChartBoundary("chart coordinate modulus below 1e-6");
    auto s = chart_slots(chart);
    return {chart, p.c[s[0]] / den, p.c[s[1]] / den};
}

CxTriple embed_chart(int chart, Cx u, Cx v) {
    CxTriple t{Cx(0, 0), Cx(0, 0), Cx(0, 0)};
    t[chart] = Cx(1, 0);
    auto s = chart_slots(chart);
    t[s[0]] = u;
    t[s[1]] = v;
    return t;
}

ProjPoint from_chart(const AffinePair& a) {
    return normalize(embed_chart(a.chart, a.u, a.v));
}

double conic_defect(const ProjPoint& p) {
    return std::abs(p.c[2] * p.c[2] - p.c[0] * p.c[1]);
}

}  // namespace p2dyn
