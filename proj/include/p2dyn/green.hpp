#pragma once

#include "p2dyn/endo.hpp"
#include "p2dyn/measure_types.hpp"

namespace p2dyn {

struct GreenValue {
    double value = 0;
    int depth = 0;
    double error_bound = 0;
};

// holomorphic disk given by a polynomial lift t -> (x(t), y(t), z(t)),
// defined on the closed unit disk
struct DiskParam {
    std::array<std::vector<Cx>, 3> lift_coeffs;
    int n_grid = 64;
    std::string label;

    CxTriple lift(Cx t) const;
    ProjPoint at(Cx t) const;
    ProjPoint center() const { return at(Cx(0, 0)); }
    bool non_constant() const;
};

// arc chart of the conic {z^2 = xy}: w(t) = w_center (1 + i beta t) with
// beta = 2 sin(angular_len / 4); the curve |w(t)| = 1 inside |t| <= 1 covers
// w-angles of total length angular_len around arg(w_center)
DiskParam conic_arc_disk(Cx w_center, double angular_len, int n_grid = 64);
// same arc shifted off the conic: [w^2 : 1 : w + c w^2]
DiskParam conic_transversal_disk(Cx w_center, double angular_len, Cx shift, int n_grid = 64);
// line disk [1 : a + b t : 0]
DiskParam line_disk(Cx a, Cx b, int n_grid = 64);

// uniform telescoping bound: 1.5 * sup |log ||F(v)||_max| over 1e4 random
// max-normalized v (deterministic sample)
double green_constant(const HomPolyMap& f);

GreenValue green(const HomPolyMap& f, const ProjPoint& p, int depth);
GreenValue green(const HomPolyMap& f, const ProjPoint& p, int depth, double c_map);

// potential of the slice measure along the disk: Green value at the
// normalized point plus log of the max-norm of the polynomial lift
double disk_potential(const HomPolyMap& f, const DiskParam& disk, Cx t, int depth,
                      double c_map);

struct SliceMassDetail {
    double mass = 0;         // refined, clamped
    double coarse = 0;       // at n_grid
    double fine = 0;         // at 2 n_grid
    double clamp_slack = 0;  // negative mass clamped away
};

SliceMassDetail slice_mass_detail(const HomPolyMap& f, const DiskParam& disk, double r,
                                  int depth);
double slice_mass(const HomPolyMap& f, const DiskParam& disk, double r, int depth);

// per-cell discrete Laplacian masses of the potential over the grid
struct SliceGrid {
    std::vector<std::pair<Cx, double>> cells;  // (t, mass), positives only
    double total = 0;
    double clamped = 0;  // total negative mass clamped to zero
    double h = 0;
};

SliceGrid slice_grid(const HomPolyMap& f, const DiskParam& disk, int depth);

enum class SnapPolicy { automatic, none };

// N equal-weight atoms at grid cells drawn proportionally to cell mass;
// total weight equals the measured slice mass.  Under the automatic policy,
// atoms of a disk lying in the invariant conic (or the f0 line) are snapped
// to the unit-modulus circle of that curve, which the raw grid discretizes
// only to O(h) and which forward iteration would otherwise amplify away.
EmpiricalMeasure slice_sample(const HomPolyMap& f, const DiskParam& disk, int depth,
                              int atom_count, std::uint64_t seed,
                              SnapPolicy snap = SnapPolicy::automatic);

}  // namespace p2dyn
