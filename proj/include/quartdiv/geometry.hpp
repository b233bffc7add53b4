#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quartdiv/forms.hpp"
#include "quartdiv/numeric.hpp"

namespace quartdiv {

using Point2 = std::array<Rational, 2>;

// Open bounded convex region with polygonal boundary, vertices in strictly
// convex counterclockwise order.
class ConvexPolygonRegion {
  public:
    explicit ConvexPolygonRegion(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return verts_; }
    Rational area() const;
    Rational r_inf() const;

    bool contains_closure(const Rational& x, const Rational& y) const;
    bool contains_interior(const Rational& x, const Rational& y) const;

    // axis-aligned bounding box {x_lo, x_hi, y_lo, y_hi}
    std::array<Rational, 4> bounding_box() const;

  private:
    std::vector<Point2> verts_;
};

ConvexPolygonRegion unit_square();
ConvexPolygonRegion rational_rectangle(const Rational& x0, const Rational& y0, const Rational& x1,
                                       const Rational& y1);

Rational region_volume(const ConvexPolygonRegion& R);
Rational r_inf(const ConvexPolygonRegion& R);

struct RegionMetrics {
    Rational vol;
    Rational r_inf;
    Rational r_prime_squared;  // r' = sqrt of this, exact
    double r_prime;
};

// r' = sup over the closure of max(|L1|, |L2|, sqrt|Q|); the square is exact.
RegionMetrics region_metrics(const ConvexPolygonRegion& R, const FormTriple& t);

struct H3Result {
    bool accepted = false;
    bool boundary_zero = false;  // min 0 attained on the boundary only
    std::optional<Point2> witness;
    std::string detail;
};

// positivity of L1, L2, Q on the open region (exact minimization on the closure)
H3Result validate_h3(const ConvexPolygonRegion& R, const FormTriple& t);

struct HalfSpace {
    std::vector<Rational> n;
    Rational c;  // n . t <= c
};

// subset of [0,1]^dim cut by half-spaces; the unit-box constraints are implicit
struct Polytope {
    int dim = 3;
    std::vector<HalfSpace> halfspaces;
};

Polytope unit_box(int dim = 3);
// {t in [0,1]^4 : t_i <= t_4 (i<=3), t_4 <= u}
Polytope v0_prime(const Rational& u);

bool polytope_contains(const Polytope& V, const std::vector<Rational>& t);
bool polytope_contains(const Polytope& V, const std::vector<double>& t, double eps = 0.0);

// exact volume, dim <= 4; infeasible systems give 0
Rational polytope_volume(const Polytope& V);

// Monte-Carlo evaluation of the archimedean density limit 2 vol(R) vol(V),
// with the finite-X truncation R'(X) = {x in R : L_i(x) >= 1/X, Q(x) >= 1/X^2}.
double archimedean_density(const ConvexPolygonRegion& R, const FormTriple& t, const Polytope& V,
                           double X, u64 samples = 2000000, u64 seed = 0x51ab5eed);

// measure of {x in R : |Q(x)| <= alpha}, adaptive quadrature (~1e-3 relative)
double region_deficit_volume(const ConvexPolygonRegion& R, const FormTriple& t,
                             const Rational& alpha);

}  // namespace quartdiv
