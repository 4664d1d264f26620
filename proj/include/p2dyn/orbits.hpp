#pragma once

#include "p2dyn/green.hpp"

namespace p2dyn {

using Vec2 = std::array<Cx, 2>;

// finite history p0, p-1, ..., p-n with eval(f, p_{-k-1}) = p_{-k}
struct BackwardOrbit {
    std::vector<ProjPoint> points;
    std::vector<int> branch_choices;
    std::uint64_t seed = 0;

    int depth() const { return int(points.size()) - 1; }
    const ProjPoint& at(int k) const { return points[size_t(k)]; }  // k steps back
    BackwardOrbit suffix(int j) const {
        BackwardOrbit o;
        o.points.assign(points.begin() + j, points.end());
        o.branch_choices.assign(branch_choices.begin() + j, branch_choices.end());
        o.seed = seed;
        return o;
    }
};

struct BackwardPolicy {
    enum Kind { uniform_in_region, nearest_to_conic } kind = nearest_to_conic;
    double delta = 0.05;  // region level for uniform_in_region
};

BackwardOrbit backward_orbit(const HomPolyMap& f, const ProjPoint& p0, int depth,
                             BackwardPolicy policy, std::uint64_t seed);

enum class ForwardPolicy {
    raw,   // iterate the map as-is
    snap,  // keep the base coordinate of a built-in family on its invariant
           // circle (angle doubling); the raw squaring of a unit-modulus
           // double drifts as |u|^(2^n) and collapses within ~55 steps
};

struct LyapunovEstimate {
    double chi1 = 0, chi2 = 0;
    long steps = 0;
    double stderr_chi1 = 0, stderr_chi2 = 0;
};

LyapunovEstimate lyapunov(const HomPolyMap& f, const ProjPoint& p0, long steps,
                          std::uint64_t seed, ForwardPolicy policy = ForwardPolicy::raw);

// (Eu, Es) at p0: most-expanded direction pushed along the history, and the
// most-contracted right singular direction of the forward m-step product
std::pair<Vec2, Vec2> oseledets_directions(const HomPolyMap& f, const BackwardOrbit& orbit,
                                           int growth_steps);

struct ChartFrame {
    ProjPoint center;
    int chart = 0;
    Vec2 Eu{Cx(1, 0), Cx(0, 0)}, Es{Cx(0, 0), Cx(1, 0)};
    double rho = 0.05;
    double gamma = 0.05, eps0 = 0.05;
    double chi_u = 0, chi_s = 0;
    bool hyperbolic_ok = true;

    Vec2 to_frame(const ProjPoint& p) const;
    ProjPoint from_frame(const Vec2& w) const;
};

ChartFrame make_frame(const HomPolyMap& f, const BackwardOrbit& orbit, double gamma,
                      double eps0);
// frame with externally supplied data (axis directions and exponents known)
ChartFrame make_frame_at(const HomPolyMap& f, const ProjPoint& center, const Vec2& Eu,
                         const Vec2& Es, double chi_u, double chi_s, double gamma,
                         double eps0, int search_samples = 200);

enum class GraphKind { horizontal, vertical };

// graph over one frame axis: horizontal is (s, phi(s)), vertical (phi(s), s),
// with |s| <= frame.rho
struct GraphDisk {
    ChartFrame frame;
    GraphKind kind = GraphKind::horizontal;
    std::vector<Cx> coeffs{Cx(0, 0)};
    double lipschitz_bound = 0;
    double fit_residual = 0;

    Cx graph_value(Cx s) const { return poly_eval(coeffs, s); }
    ProjPoint point_at(Cx s) const;
};

GraphDisk flat_graph(const ChartFrame& frame, GraphKind kind);

GraphDisk graph_transform(const HomPolyMap& f, const ChartFrame& src, const ChartFrame& dst,
                          const GraphDisk& graph, int fit_degree = 7);

// frames at p_{-k}, ..., p_0 (index j = steps back)
std::vector<ChartFrame> frame_chain(const HomPolyMap& f, const BackwardOrbit& orbit, int k,
                                    double gamma, double eps0);

GraphDisk local_unstable(const HomPolyMap& f, const BackwardOrbit& orbit,
                         const std::vector<ChartFrame>& frames, int k);

GraphDisk local_stable(const HomPolyMap& f, const ProjPoint& p0, const ChartFrame& frame,
                       int order, int newton_steps = 40);

struct HolonomyBin {
    double angle_lo = 0, angle_hi = 0;
    double mass_d = 0, mass_dprime = 0;  // renormalized over the spanned window
    double rel_disc = 0;
};

struct HolonomyReport {
    std::vector<HolonomyBin> bins;
    double max_rel_discrepancy = 0;
    int disks_used = 0;
    int skipped = 0;
    bool no_data = false;
};

// compares the slice measures of two transversals over holonomy-matched
// windows cut by the stable family
HolonomyReport holonomy_probe(const HomPolyMap& f, const DiskParam& d,
                              const DiskParam& dprime,
                              const std::vector<GraphDisk>& stable_family,
                              int green_depth);

// intersection of a graph disk with a parametrized disk by 2-D Newton;
// returns (s, tau) parameters
std::optional<std::pair<Cx, Cx>> intersect_graph_disk(const HomPolyMap& f,
                                                      const GraphDisk& graph,
                                                      const DiskParam& disk);

}  // namespace p2dyn
