#pragma once

#include "p2dyn/common.hpp"

namespace p2dyn {

// ---- univariate --------------------------------------------------------

// coefficients low to high: p(t) = sum c[m] t^m
Cx poly_eval(const std::vector<Cx>& c, Cx t);
std::vector<Cx> poly_derivative(const std::vector<Cx>& c);

// all complex roots by Durand-Kerner; degree = c.size()-1 after trimming.
// Restarts once on stall.
std::vector<Cx> poly_roots(const std::vector<Cx>& c, int max_iters = 200);

// ---- dense homogeneous trivariate ---------------------------------------

struct Monomial {
    std::array<int, 3> e{0, 0, 0};
    Cx c{0, 0};
};

// homogeneous polynomial in (x, y, z) of fixed total degree
struct HPoly {
    int deg = 0;
    std::vector<Cx> coef;  // triangular index over (i, j), k = deg - i - j

    static int tri_size(int d) { return (d + 1) * (d + 2) / 2; }
    int idx(int i, int j) const { return i * (deg + 1) - i * (i - 1) / 2 + j; }

    static HPoly zero(int d) { return {d, std::vector<Cx>(tri_size(d), Cx(0, 0))}; }
    static HPoly from_monomials(int d, const std::vector<Monomial>& ms);

    Cx get(int i, int j, int k) const { (void)k; return coef[idx(i, j)]; }
    void add(int i, int j, Cx v) { coef[idx(i, j)] += v; }

    Cx eval(const CxTriple& v) const;
    HPoly mul(const HPoly& o) const;
    HPoly sub(const HPoly& o) const;
    HPoly scaled(Cx s) const;
    HPoly dx() const;  // partial derivatives (degree drops by 1)
    HPoly dy() const;
    HPoly dz() const;
    // substitute v -> L v (columns of L are images of basis vectors)
    HPoly compose_linear(const std::array<CxTriple, 3>& Lcols) const;
    // coefficients of z^m for fixed numeric (x0, y0), m = 0..deg
    std::vector<Cx> z_poly(Cx x0, Cx y0) const;
    std::vector<Monomial> monomials() const;
};

// resultant of two univariate polynomials via Sylvester determinant,
// with formal degrees given (coefficients low to high, padded)
Cx sylvester_resultant(const std::vector<Cx>& a, int dega,
                       const std::vector<Cx>& b, int degb);

}  // namespace p2dyn
