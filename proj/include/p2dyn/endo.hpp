#pragma once

#include <map>
#include <optional>

#include "p2dyn/poly.hpp"
#include "p2dyn/projgeom.hpp"

namespace p2dyn {

enum class Family { generic, f0, ftheta };

// Endomorphism given by three homogeneous polynomials of common degree d
// with no common zero besides the origin.
struct HomPolyMap {
    int degree = 2;
    std::array<std::vector<Monomial>, 3> comp;
    std::string label;
    Family family = Family::generic;
    Cx theta{0, 0};  // ftheta parameter, when applicable

    // dense caches built at construction
    std::array<HPoly, 3> hp{HPoly::zero(0), HPoly::zero(0), HPoly::zero(0)};
    std::array<std::array<HPoly, 3>, 3> dp{};  // dp[component][variable]
};

HomPolyMap make_map(int degree, std::array<std::vector<Monomial>, 3> comps,
                    std::string label, Family fam = Family::generic,
                    Cx theta = Cx(0, 0), bool check_nondegenerate = true);

// [P : Q : z^d]
HomPolyMap family_f0(const std::vector<Monomial>& P, const std::vector<Monomial>& Q, int d);

// [x^2 : y^2 : xy + theta (z^2 - xy)]
HomPolyMap family_ftheta(Cx theta);

// [x^d : y^d : z^d]
HomPolyMap squaring_map(int d = 2);

CxTriple eval_lift(const HomPolyMap& f, const CxTriple& v);
ProjPoint eval(const HomPolyMap& f, const ProjPoint& p);

// 3x3 derivative of the lift at v; rows are gradients of the components
std::array<CxTriple, 3> lift_jacobian(const HomPolyMap& f, const CxTriple& v);
Cx lift_jacobian_det(const HomPolyMap& f, const CxTriple& v);

// derivative of the chart expression of f between the given charts, source
// point scaled so that its src_chart coordinate is 1
Mat2 chart_jacobian(const HomPolyMap& f, const ProjPoint& p, int src_chart, int dst_chart);

struct JacobianData {
    Cx lift_det;
    Mat2 chart_jac;
    Cx chart_det;
    int src_chart = 0, dst_chart = 0;
};

JacobianData jacobian(const HomPolyMap& f, const ProjPoint& p);

// |chart_det| between max-normalized representatives; the smallness predicate
// at level alpha reads sj_ratio < alpha
double sj_ratio(const HomPolyMap& f, const ProjPoint& p);

struct PreimageResult {
    std::vector<std::pair<ProjPoint, int>> points;  // with multiplicity
    bool complete = true;                           // all d^2 accounted for
    int total_multiplicity() const {
        int s = 0;
        for (auto& it : points) s += it.second;
        return s;
    }
};

PreimageResult preimages(const HomPolyMap& f, const ProjPoint& q);

// Newton refinement of f(p) = q in chart coordinates
std::optional<ProjPoint> newton_polish_preimage(const HomPolyMap& f, const ProjPoint& start,
                                                const ProjPoint& q, double tol = 1e-12,
                                                int max_steps = 50);

struct TopDegreeReport {
    int n = 1;
    double delta = 0;
    long dn = 0;
    int sample_count = 0;
    std::uint64_t seed = 0;
    int max_count = 0;
    std::map<int, int> histogram;  // fiber count in region -> frequency
    bool predicate_holds = true;   // max_count < d^n on the sample
    bool no_data = false;
    bool solver_complete = true;
};

TopDegreeReport small_topdegree_probe(const HomPolyMap& f, double delta, int n,
                                      int sample_count, std::uint64_t seed);

// random point with conic_defect <= delta (all charts reachable)
ProjPoint sample_in_region(double delta, Rng& rng);

}  // namespace p2dyn
