#include "p2dyn/green.hpp"

#include <algorithm>

namespace p2dyn {

// ---- EmpiricalMeasure -----------------------------------------------------

static std::uint64_t atom_key(const ProjPoint& p) {
    std::uint64_t h = 0x811C9DC5ull;
    auto mix = [&h](double v) {
        std::int64_t q = llround(v * 8e12);
        h = splitmix64(h ^ std::uint64_t(q));
    };
    for (int k = 0; k < 3; ++k) {
        mix(p.c[k].real());
        mix(p.c[k].imag());
    }
    return h;
}

void EmpiricalMeasure::add(const ProjPoint& p, double w) {
    if (w < 0) throw std::invalid_argument("atom weight must be nonnegative");
    std::uint64_t key = atom_key(p);
    auto it = index_.find(key);
    if (it != index_.end() && dist(atoms[it->second].p, p) < 1e-12) {
        atoms[it->second].w += w;
        return;
    }
    index_[key] = atoms.size();
    atoms.push_back({p, w});
}

double EmpiricalMeasure::total_mass() const {
    double s = 0;
    for (auto& a : atoms) s += a.w;
    return s;
}

// ---- DiskParam ------------------------------------------------------------

CxTriple DiskParam::lift(Cx t) const {
    return {poly_eval(lift_coeffs[0], t), poly_eval(lift_coeffs[1], t),
            poly_eval(lift_coeffs[2], t)};
}

ProjPoint DiskParam::at(Cx t) const { return normalize(lift(t)); }

bool DiskParam::non_constant() const {
    for (int k = 0; k < 3; ++k)
        if (lift_coeffs[k].size() > 1) return true;
    return false;
}

static std::vector<Cx> poly_mul1(const std::vector<Cx>& a, const std::vector<Cx>& b) {
    std::vector<Cx> r(a.size() + b.size() - 1, Cx(0, 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

DiskParam conic_arc_disk(Cx w_center, double angular_len, int n_grid) {
    double beta = 2.0 * std::sin(angular_len / 4.0);
    std::vector<Cx> w{w_center, w_center * Cx(0, beta)};
    DiskParam d;
    d.lift_coeffs[0] = poly_mul1(w, w);
    d.lift_coeffs[1] = {Cx(1, 0)};
    d.lift_coeffs[2] = w;
    d.n_grid = n_grid;
    d.label = "conic_arc";
    return d;
}

DiskParam conic_transversal_disk(Cx w_center, double angular_len, Cx shift, int n_grid) {
    double beta = 2.0 * std::sin(angular_len / 4.0);
    std::vector<Cx> w{w_center, w_center * Cx(0, beta)};
    std::vector<Cx> w2 = poly_mul1(w, w);
    std::vector<Cx> z = w2;
    for (auto& c : z) c *= shift;
    z[0] += w[0];
    z[1] += w[1];
    DiskParam d;
    d.lift_coeffs[0] = w2;
    d.lift_coeffs[1] = {Cx(1, 0)};
    d.lift_coeffs[2] = z;
    d.n_grid = n_grid;
    d.label = "conic_transversal";
    return d;
}

DiskParam line_disk(Cx a, Cx b, int n_grid) {
    DiskParam d;
    d.lift_coeffs[0] = {Cx(1, 0)};
    d.lift_coeffs[1] = {a, b};
    d.lift_coeffs[2] = {Cx(0, 0)};
    d.n_grid = n_grid;
    d.label = "line";
    return d;
}

// ---- Green function ---------------------------------------------------------

double green_constant(const HomPolyMap& f) {
    Rng g(0x9E3779B97F4A7C15ull);
    double sup = 0;
    for (int s = 0; s < 10000; ++s) {
        CxTriple v{gaussian_cx(g), gaussian_cx(g), gaussian_cx(g)};
        double m = max_modulus(v);
        if (m < 1e-6) continue;
        ProjPoint p = normalize(v);
        double nrm = max_modulus(eval_lift(f, p.c));
        sup = std::max(sup, std::abs(std::log(nrm)));
    }
    return 1.5 * sup;
}

GreenValue green(const HomPolyMap& f, const ProjPoint& p, int depth, double c_map) {
    if (depth > 60) throw std::invalid_argument("green depth capped at 60");
    GreenValue gv;
    gv.depth = depth;
    double d = double(f.degree);
    double invd = 1.0;
    CxTriple v = p.c;
    for (int k = 0; k < depth; ++k) {
        CxTriple w = eval_lift(f, v);
        double m = max_modulus(w);
        invd /= d;
        gv.value += invd * std::log(m);
        Cx piv = w[std::abs(w[0]) == m ? 0 : (std::abs(w[1]) == m ? 1 : 2)];
        v = {w[0] / piv, w[1] / piv, w[2] / piv};
    }
    gv.error_bound = c_map / (d - 1.0) / std::pow(d, depth);
    return gv;
}

GreenValue green(const HomPolyMap& f, const ProjPoint& p, int depth) {
    return green(f, p, depth, green_constant(f));
}

double disk_potential(const HomPolyMap& f, const DiskParam& disk, Cx t, int depth,
                      double c_map) {
    CxTriple v = disk.lift(t);
    double m = max_modulus(v);
    if (m < 1e-300) throw ZeroVector();
    return green(f, normalize(v), depth, c_map).value + std::log(m);
}

// ---- slice measures ----------------------------------------------------------

static double contour_mass(const HomPolyMap& f, const DiskParam& disk, double r,
                           int depth, double c_map, int n_grid) {
    int M = 4 * n_grid;
    double hr = 1.0 / n_grid;
    double acc = 0;
    for (int j = 0; j < M; ++j) {
        double phi = 2 * kPi * (j + 0.5) / M;
        Cx dir = std::polar(1.0, phi);
        double up = disk_potential(f, disk, (r + hr) * dir, depth, c_map);
        double um = disk_potential(f, disk, (r - hr) * dir, depth, c_map);
        acc += (up - um) / (2 * hr);
    }
    return acc * r / M;
}

SliceMassDetail slice_mass_detail(const HomPolyMap& f, const DiskParam& disk, double r,
                                  int depth) {
    if (disk.n_grid < 64) throw std::invalid_argument("n_grid must be >= 64");
    if (!(r < 1.0)) throw std::invalid_argument("subdomain radius must be < 1");
    double c_map = green_constant(f);
    SliceMassDetail out;
    out.coarse = contour_mass(f, disk, r, depth, c_map, disk.n_grid);
    out.fine = contour_mass(f, disk, r, depth, c_map, 2 * disk.n_grid);
    double scale = std::max(std::abs(out.fine), std::abs(out.coarse));
    if (scale > 1e-9 && std::abs(out.fine - out.coarse) > 0.05 * scale)
        throw GridTooCoarse("slice mass changed by more than 5% under grid doubling");
    double m = out.fine;
    if (m < -1e-6) throw GridTooCoarse("slice mass significantly negative");
    if (m < 0) {
        out.clamp_slack = -m;
        m = 0;
    }
    out.mass = m;
    return out;
}

double slice_mass(const HomPolyMap& f, const DiskParam& disk, double r, int depth) {
    return slice_mass_detail(f, disk, r, depth).mass;
}

SliceGrid slice_grid(const HomPolyMap& f, const DiskParam& disk, int depth) {
    double c_map = green_constant(f);
    int n = disk.n_grid;
    double h = 2.0 / n;
    SliceGrid grid;
    grid.h = h;

    // potential on cell centers, padded by one ring for the stencil
    int N = n + 2;
    std::vector<double> u(size_t(N) * N, 0.0);
    std::vector<char> have(size_t(N) * N, 0);
    auto node = [&](int i, int j) {
        return Cx(-1 + (i - 0.5) * h, -1 + (j - 0.5) * h);
    };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Cx t = node(i, j);
            if (std::abs(t) > 1.0 + 2 * h) continue;
            u[size_t(i) * N + j] = disk_potential(f, disk, t, depth, c_map);
            have[size_t(i) * N + j] = 1;
        }

    double pos = 0, neg = 0;
    for (int i = 1; i + 1 < N; ++i)
        for (int j = 1; j + 1 < N; ++j) {
            Cx t = node(i, j);
            if (std::abs(t) > 1.0) continue;  // cells outside the disk ignored
            auto at = [&](int a, int b) { return u[size_t(a) * N + b]; };
            if (!have[size_t(i - 1) * N + j] || !have[size_t(i + 1) * N + j] ||
                !have[size_t(i) * N + j - 1] || !have[size_t(i) * N + j + 1])
                continue;
            double lap = at(i - 1, j) + at(i + 1, j) + at(i, j - 1) + at(i, j + 1) -
                         4.0 * at(i, j);
            double mass = lap / (2 * kPi);
            if (mass > 0) {
                grid.cells.push_back({t, mass});
                pos += mass;
            } else {
                neg += -mass;
            }
        }
    grid.total = pos;
    grid.clamped = neg;
    if (neg > 0.01 * std::max(pos, 1e-300) && pos > 1e-9)
        throw GridTooCoarse("clamped negative cell mass exceeds 1% of total");
    return grid;
}

// extract the 1-D parameter of an on-curve atom for snapping
static bool snap_atom(const HomPolyMap& f, const DiskParam& disk, Cx t, ProjPoint& out) {
    CxTriple v = disk.lift(t);
    if (f.family == Family::ftheta) {
        Cx w;
        if (std::abs(v[1]) > 1e-9 * max_modulus(v)) w = v[2] / v[1];
        else if (std::abs(v[2]) > 1e-9 * max_modulus(v)) w = v[0] / v[2];
        else return false;
        double m = std::abs(w);
        if (m < 1e-12) return false;
        w /= m;
        out = normalize({w * w, Cx(1, 0), w});
        return true;
    }
    if (f.family == Family::f0) {
        if (std::abs(v[0]) < 1e-9 * max_modulus(v)) return false;
        Cx w = v[1] / v[0];
        double m = std::abs(w);
        if (m < 1e-12) return false;
        out = normalize({Cx(1, 0), w / m, Cx(0, 0)});
        return true;
    }
    return false;
}

static bool disk_on_invariant_curve(const HomPolyMap& f, const DiskParam& disk) {
    for (int s = 0; s < 24; ++s) {
        Cx t = std::polar(0.95 * (s % 5 + 1) / 5.0, 2 * kPi * s / 24.0);
        ProjPoint p = disk.at(t);
        if (f.family == Family::ftheta) {
            if (conic_defect(p) > 1e-10) return false;
        } else if (f.family == Family::f0) {
            if (std::abs(p.c[2]) > 1e-10) return false;
        } else {
            return false;
        }
    }
    return true;
}

EmpiricalMeasure slice_sample(const HomPolyMap& f, const DiskParam& disk, int depth,
                              int atom_count, std::uint64_t seed, SnapPolicy snap) {
    SliceGrid grid = slice_grid(f, disk, depth);
    if (grid.total <= 1e-6) throw EmptySlice("slice mass below 1e-6");

    bool do_snap = (snap == SnapPolicy::automatic) && disk_on_invariant_curve(f, disk);

    std::vector<double> cdf(grid.cells.size());
    double acc = 0;
    for (size_t i = 0; i < grid.cells.size(); ++i) {
        acc += grid.cells[i].second;
        cdf[i] = acc;
    }

    EmpiricalMeasure mu;
    mu.label = "slice:" + disk.label;
    Rng g(seed);
    double w_atom = grid.total / atom_count;
    for (int a = 0; a < atom_count; ++a) {
        double x = uniform(g, 0.0, acc);
        size_t idx = std::lower_bound(cdf.begin(), cdf.end(), x) - cdf.begin();
        idx = std::min(idx, grid.cells.size() - 1);
        Cx t = grid.cells[idx].first;
        ProjPoint p;
        if (!do_snap || !snap_atom(f, disk, t, p)) p = disk.at(t);
        mu.add(p, w_atom);
    }
    return mu;
}

}  // namespace p2dyn
