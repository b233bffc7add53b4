#include "quartdiv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace quartdiv {

namespace {

Rational eval_linear(const LinearForm& f, const Rational& x, const Rational& y) {
    return Rational(f.a) * x + Rational(f.b) * y;
}

Rational eval_quadratic(const QuadraticForm& f, const Rational& x, const Rational& y) {
    return Rational(f.a3) * x * x + Rational(f.b3) * y * y + Rational(f.c3) * x * y;
}

Rational cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace

ConvexPolygonRegion::ConvexPolygonRegion(std::vector<Point2> vertices)
    : verts_(std::move(vertices)) {
    size_t n = verts_.size();
    if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = verts_[i];
        const Point2& b = verts_[(i + 1) % n];
        const Point2& c = verts_[(i + 2) % n];
        if (cross(a, b, c).sign() <= 0)
            throw std::invalid_argument(
                "vertices must be in strictly convex counterclockwise order");
    }
}

Rational ConvexPolygonRegion::area() const {
    Rational s;
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = verts_[i];
        const Point2& b = verts_[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return s / Rational(2);
}

Rational ConvexPolygonRegion::r_inf() const {
    Rational m;
    for (const Point2& v : verts_) m = rat_max(m, rat_max(v[0].abs(), v[1].abs()));
    return m;
}

bool ConvexPolygonRegion::contains_closure(const Rational& x, const Rational& y) const {
    Point2 p{x, y};
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i)
        if (cross(verts_[i], verts_[(i + 1) % n], p).sign() < 0) return false;
    return true;
}

bool ConvexPolygonRegion::contains_interior(const Rational& x, const Rational& y) const {
    Point2 p{x, y};
    size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i)
        if (cross(verts_[i], verts_[(i + 1) % n], p).sign() <= 0) return false;
    return true;
}

std::array<Rational, 4> ConvexPolygonRegion::bounding_box() const {
    Rational xlo = verts_[0][0], xhi = xlo, ylo = verts_[0][1], yhi = ylo;
    for (const Point2& v : verts_) {
        xlo = rat_min(xlo, v[0]);
        xhi = rat_max(xhi, v[0]);
        ylo = rat_min(ylo, v[1]);
        yhi = rat_max(yhi, v[1]);
    }
    return {xlo, xhi, ylo, yhi};
}

ConvexPolygonRegion unit_square() {
    return rational_rectangle(Rational(0), Rational(0), Rational(1), Rational(1));
}

ConvexPolygonRegion rational_rectangle(const Rational& x0, const Rational& y0, const Rational& x1,
                                       const Rational& y1) {
    return ConvexPolygonRegion({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Rational region_volume(const ConvexPolygonRegion& R) { return R.area(); }
Rational r_inf(const ConvexPolygonRegion& R) { return R.r_inf(); }

namespace {

struct Candidate {
    Point2 p;
    Rational value;
};

// extrema candidates of Q on the closure: vertices, interior edge critical
// points, and the stationary point (the origin) when it lies in the closure
std::vector<Candidate> quadratic_candidates(const ConvexPolygonRegion& R, const QuadraticForm& Q) {
    std::vector<Candidate> out;
    const auto& vs = R.vertices();
    size_t n = vs.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& A = vs[i];
        const Point2& B = vs[(i + 1) % n];
        out.push_back({A, eval_quadratic(Q, A[0], A[1])});
        Point2 d{B[0] - A[0], B[1] - A[1]};
        // Q(A + s d) = Q(A) + s*bil + s^2*Q(d)
        Rational qd = eval_quadratic(Q, d[0], d[1]);
        if (!qd.is_zero()) {
            Point2 s1{A[0] + d[0], A[1] + d[1]};
            Rational bil = eval_quadratic(Q, s1[0], s1[1]) - eval_quadratic(Q, A[0], A[1]) - qd;
            Rational s = -bil / (Rational(2) * qd);
            if (s > Rational(0) && s < Rational(1)) {
                Point2 p{A[0] + s * d[0], A[1] + s * d[1]};
                out.push_back({p, eval_quadratic(Q, p[0], p[1])});
            }
        }
    }
    if (R.contains_closure(Rational(0), Rational(0)))
        out.push_back({{Rational(0), Rational(0)}, Rational(0)});
    return out;
}

}  // namespace

RegionMetrics region_metrics(const ConvexPolygonRegion& R, const FormTriple& t) {
    RegionMetrics m;
    m.vol = R.area();
    m.r_inf = R.r_inf();
    Rational best;
    for (const Point2& v : R.vertices()) {
        Rational l1 = eval_linear(t.L1, v[0], v[1]).abs();
        Rational l2 = eval_linear(t.L2, v[0], v[1]).abs();
        best = rat_max(best, rat_max(l1 * l1, l2 * l2));
    }
    for (const Candidate& c : quadratic_candidates(R, t.Q)) best = rat_max(best, c.value.abs());
    m.r_prime_squared = best;
    m.r_prime = std::sqrt(best.to_double());
    return m;
}

H3Result validate_h3(const ConvexPolygonRegion& R, const FormTriple& t) {
    H3Result res;
    Rational min_val = Rational(1);
    Point2 argmin{Rational(0), Rational(0)};
    bool found = false;
    auto consider = [&](const Point2& p, const Rational& v) {
        if (!found || v < min_val) {
            found = true;
            min_val = v;
            argmin = p;
        }
    };
    for (const Point2& v : R.vertices()) {
        consider(v, eval_linear(t.L1, v[0], v[1]));
        consider(v, eval_linear(t.L2, v[0], v[1]));
    }
    for (const Candidate& c : quadratic_candidates(R, t.Q)) consider(c.p, c.value);

    int s = min_val.sign();
    if (s < 0) {
        res.accepted = false;
        res.witness = argmin;
        res.detail = "a form is negative at (" + argmin[0].to_string() + ", " +
                     argmin[1].to_string() + ")";
        return res;
    }
    if (s == 0) {
        if (R.contains_interior(argmin[0], argmin[1])) {
            res.accepted = false;
            res.witness = argmin;
            res.detail = "a form vanishes at an interior point";
            return res;
        }
        res.accepted = true;
        res.boundary_zero = true;
        res.detail = "minimum 0 attained on the boundary only";
        return res;
    }
    res.accepted = true;
    res.detail = "all forms strictly positive on the closure";
    return res;
}

Polytope unit_box(int dim) { return Polytope{dim, {}}; }

Polytope v0_prime(const Rational& u) {
    if (u < Rational(0) || u > Rational(1)) throw std::invalid_argument("u must lie in [0,1]");
    Polytope V;
    V.dim = 4;
    for (int i = 0; i < 3; ++i) {
        HalfSpace h;
        h.n.assign(4, Rational(0));
        h.n[i] = Rational(1);
        h.n[3] = Rational(-1);
        h.c = Rational(0);
        V.halfspaces.push_back(h);
    }
    HalfSpace top;
    top.n.assign(4, Rational(0));
    top.n[3] = Rational(1);
    top.c = u;
    V.halfspaces.push_back(top);
    return V;
}

bool polytope_contains(const Polytope& V, const std::vector<Rational>& t) {
    if ((int)t.size() != V.dim) throw std::invalid_argument("dimension mismatch");
    for (const Rational& x : t)
        if (x < Rational(0) || x > Rational(1)) return false;
    for (const HalfSpace& h : V.halfspaces) {
        Rational s;
        for (int i = 0; i < V.dim; ++i) s += h.n[i] * t[i];
        if (s > h.c) return false;
    }
    return true;
}

bool polytope_contains(const Polytope& V, const std::vector<double>& t, double eps) {
    if ((int)t.size() != V.dim) throw std::invalid_argument("dimension mismatch");
    for (double x : t)
        if (x < -eps || x > 1 + eps) return false;
    for (const HalfSpace& h : V.halfspaces) {
        double s = 0;
        for (int i = 0; i < V.dim; ++i) s += h.n[i].to_double() * t[i];
        if (s > h.c.to_double() + eps) return false;
    }
    return true;
}

namespace {

// A x = b by Gaussian elimination; nullopt when singular
std::optional<std::vector<Rational>> solve_system(std::vector<std::vector<Rational>> A,
                                                  std::vector<Rational> b) {
    int k = (int)b.size();
    for (int col = 0; col < k; ++col) {
        int piv = -1;
        for (int r = col; r < k; ++r)
            if (!A[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < k; ++r) {
            if (A[r][col].is_zero()) continue;
            Rational f = A[r][col] / A[col][col];
            for (int c2 = col; c2 < k; ++c2) A[r][c2] -= f * A[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(k);
    for (int r = k - 1; r >= 0; --r) {
        Rational s = b[r];
        for (int c2 = r + 1; c2 < k; ++c2) s -= A[r][c2] * x[c2];
        x[r] = s / A[r][r];
    }
    return x;
}

struct Plane {
    std::vector<Rational> n;
    Rational c;  // n . t = c
};

// integral over [a,b] of the degree <= d polynomial through (nodes, vals)
Rational integrate_interpolant(const std::vector<Rational>& nodes, const std::vector<Rational>& vals,
                               const Rational& a, const Rational& b) {
    int k = (int)nodes.size();
    std::vector<Rational> coeffs(k);  // monomial coefficients of the interpolant
    for (int j = 0; j < k; ++j) {
        std::vector<Rational> basis{Rational(1)};
        Rational denom(1);
        for (int i = 0; i < k; ++i) {
            if (i == j) continue;
            // multiply basis by (t - nodes[i])
            std::vector<Rational> next(basis.size() + 1);
            for (size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] += basis[d];
                next[d] -= basis[d] * nodes[i];
            }
            basis = std::move(next);
            denom *= nodes[j] - nodes[i];
        }
        Rational scale = vals[j] / denom;
        for (size_t d = 0; d < basis.size(); ++d) coeffs[d] += basis[d] * scale;
    }
    Rational total;
    Rational pa(1), pb(1);
    for (int d = 0; d < k; ++d) {
        pa *= a;
        pb *= b;
        total += coeffs[d] * (pb - pa) / Rational(d + 1);
    }
    return total;
}

Rational volume_recursive(int k, const std::vector<HalfSpace>& hs) {
    std::vector<HalfSpace> act;
    for (const HalfSpace& h : hs) {
        bool allzero = true;
        for (int i = 0; i < k; ++i)
            if (!h.n[i].is_zero()) allzero = false;
        if (allzero) {
            if (h.c < Rational(0)) return Rational(0);
            continue;
        }
        act.push_back(h);
    }
    if (k == 1) {
        Rational lo(0), hi(1);
        for (const HalfSpace& h : act) {
            if (h.n[0].sign() > 0)
                hi = rat_min(hi, h.c / h.n[0]);
            else
                lo = rat_max(lo, h.c / h.n[0]);
        }
        return hi > lo ? hi - lo : Rational(0);
    }

    std::vector<Plane> planes;
    for (const HalfSpace& h : act) planes.push_back({std::vector<Rational>(h.n.begin(), h.n.begin() + k), h.c});
    for (int i = 0; i < k; ++i)
        for (int side = 0; side <= 1; ++side) {
            Plane p;
            p.n.assign(k, Rational(0));
            p.n[i] = Rational(1);
            p.c = Rational(side);
            planes.push_back(p);
        }

    std::vector<Rational> breaks{Rational(0), Rational(1)};
    int m = (int)planes.size();
    std::vector<int> idx(k);
    std::function<void(int, int)> subsets = [&](int start, int depth) {
        if (depth == k) {
            std::vector<std::vector<Rational>> A(k);
            std::vector<Rational> b(k);
            for (int r = 0; r < k; ++r) {
                A[r] = planes[idx[r]].n;
                b[r] = planes[idx[r]].c;
            }
            auto x = solve_system(std::move(A), std::move(b));
            if (x) {
                const Rational& tk = (*x)[k - 1];
                if (tk > Rational(0) && tk < Rational(1)) breaks.push_back(tk);
            }
            return;
        }
        for (int i = start; i < m; ++i) {
            idx[depth] = i;
            subsets(i + 1, depth + 1);
        }
    };
    subsets(0, 0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    Rational total;
    for (size_t bi = 0; bi + 1 < breaks.size(); ++bi) {
        const Rational& a = breaks[bi];
        const Rational& b = breaks[bi + 1];
        std::vector<Rational> nodes, vals;
        for (int j = 1; j <= k; ++j) {
            Rational s = a + (b - a) * Rational(j, k + 1);
            nodes.push_back(s);
            std::vector<HalfSpace> sub;
            for (const HalfSpace& h : act) {
                HalfSpace h2;
                h2.n.assign(h.n.begin(), h.n.begin() + (k - 1));
                h2.c = h.c - h.n[k - 1] * s;
                sub.push_back(h2);
            }
            vals.push_back(volume_recursive(k - 1, sub));
        }
        total += integrate_interpolant(nodes, vals, a, b);
    }
    return total;
}

}  // namespace

Rational polytope_volume(const Polytope& V) {
    if (V.dim < 1 || V.dim > 4) throw std::invalid_argument("polytope dimension must be 1..4");
    for (const HalfSpace& h : V.halfspaces)
        if ((int)h.n.size() != V.dim) throw std::invalid_argument("half-space dimension mismatch");
    return volume_recursive(V.dim, V.halfspaces);
}

double archimedean_density(const ConvexPolygonRegion& R, const FormTriple& t, const Polytope& V,
                           double X, u64 samples, u64 seed) {
    if (V.dim != 3) throw std::invalid_argument("density polytope must have dimension 3");
    if (X < 10) throw std::invalid_argument("X must be at least 10");
    auto bb = R.bounding_box();
    double x0 = bb[0].to_double(), x1 = bb[1].to_double();
    double y0 = bb[2].to_double(), y1 = bb[3].to_double();
    double bb_area = (x1 - x0) * (y1 - y0);

    std::vector<std::array<double, 2>> vs;
    for (const Point2& v : R.vertices()) vs.push_back({v[0].to_double(), v[1].to_double()});
    auto inside = [&](double px, double py) {
        size_t n = vs.size();
        for (size_t i = 0; i < n; ++i) {
            const auto& a = vs[i];
            const auto& b = vs[(i + 1) % n];
            if ((b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0]) <= 0) return false;
        }
        return true;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    u64 hits = 0;
    std::vector<double> u(3);
    for (u64 s = 0; s < samples; ++s) {
        double px = x0 + (x1 - x0) * U(rng);
        double py = y0 + (y1 - y0) * U(rng);
        u[0] = U(rng);
        u[1] = U(rng);
        u[2] = U(rng);
        if (!inside(px, py)) continue;
        double l1 = (double)t.L1.a * px + (double)t.L1.b * py;
        double l2 = (double)t.L2.a * px + (double)t.L2.b * py;
        double q = (double)t.Q.a3 * px * px + (double)t.Q.b3 * py * py + (double)t.Q.c3 * px * py;
        if (l1 < 1.0 / X || l2 < 1.0 / X || q < 1.0 / (X * X)) continue;
        if (polytope_contains(V, u)) ++hits;
    }
    return 2.0 * bb_area * (double)hits / (double)samples;
}

namespace {

struct Interval {
    double lo, hi;
};

Interval iv_square(Interval a) {
    double l = a.lo, h = a.hi;
    double m = std::max(l * l, h * h);
    double lo = (l <= 0 && h >= 0) ? 0.0 : std::min(l * l, h * h);
    return {lo, m};
}

Interval iv_mul(Interval a, Interval b) {
    double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

Interval iv_scale(Interval a, double s) {
    return s >= 0 ? Interval{a.lo * s, a.hi * s} : Interval{a.hi * s, a.lo * s};
}

}  // namespace

double region_deficit_volume(const ConvexPolygonRegion& R, const FormTriple& t,
                             const Rational& alpha) {
    if (alpha.sign() <= 0) return 0.0;
    double al = alpha.to_double();
    auto bb = R.bounding_box();
    double x0 = bb[0].to_double(), x1 = bb[1].to_double();
    double y0 = bb[2].to_double(), y1 = bb[3].to_double();

    std::vector<std::array<double, 2>> vs;
    for (const Point2& v : R.vertices()) vs.push_back({v[0].to_double(), v[1].to_double()});
    size_t n = vs.size();
    auto edge_val = [&](size_t i, double px, double py) {
        const auto& a = vs[i];
        const auto& b = vs[(i + 1) % n];
        return (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0]);
    };
    auto inside = [&](double px, double py) {
        for (size_t i = 0; i < n; ++i)
            if (edge_val(i, px, py) < 0) return false;
        return true;
    };

    double a3 = (double)t.Q.a3, b3 = (double)t.Q.b3, c3 = (double)t.Q.c3;
    int max_depth = 13;

    std::function<double(double, double, double, double, int)> cell =
        [&](double cx0, double cx1, double cy0, double cy1, int depth) -> double {
        double area = (cx1 - cx0) * (cy1 - cy0);
        // fully outside the polygon?
        double corners[4][2] = {{cx0, cy0}, {cx1, cy0}, {cx1, cy1}, {cx0, cy1}};
        bool all_in = true;
        for (size_t i = 0; i < n; ++i) {
            bool all_neg = true;
            for (auto& c : corners) {
                double v = edge_val(i, c[0], c[1]);
                if (v >= 0) all_neg = false;
                if (v < 0) all_in = false;
            }
            if (all_neg) return 0.0;
        }
        Interval qx = iv_square({cx0, cx1});
        Interval qy = iv_square({cy0, cy1});
        Interval qxy = iv_mul({cx0, cx1}, {cy0, cy1});
        Interval q = {iv_scale(qx, a3).lo + iv_scale(qy, b3).lo + iv_scale(qxy, c3).lo,
                      iv_scale(qx, a3).hi + iv_scale(qy, b3).hi + iv_scale(qxy, c3).hi};
        if (all_in) {
            if (q.hi <= al && q.lo >= -al) return area;
            if (q.lo > al || q.hi < -al) return 0.0;
        } else if (q.lo > al || q.hi < -al) {
            return 0.0;
        }
        if (depth >= max_depth) {
            double mx = 0.5 * (cx0 + cx1), my = 0.5 * (cy0 + cy1);
            double qv = a3 * mx * mx + b3 * my * my + c3 * mx * my;
            return (inside(mx, my) && std::fabs(qv) <= al) ? area : 0.0;
        }
        double mx = 0.5 * (cx0 + cx1), my = 0.5 * (cy0 + cy1);
        return cell(cx0, mx, cy0, my, depth + 1) + cell(mx, cx1, cy0, my, depth + 1) +
               cell(cx0, mx, my, cy1, depth + 1) + cell(mx, cx1, my, cy1, depth + 1);
    };
    return cell(x0, x1, y0, y1, 0);
}

}  // namespace quartdiv
