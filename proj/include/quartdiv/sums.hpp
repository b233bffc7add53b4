#pragma once

#include <array>
#include <utility>
#include <vector>

#include "quartdiv/arith.hpp"
#include "quartdiv/densities.hpp"
#include "quartdiv/forms.hpp"
#include "quartdiv/geometry.hpp"
#include "quartdiv/lattice.hpp"
#include "quartdiv/numeric.hpp"

namespace quartdiv {

// One enumeration/summation job. X is rational so that rescaled sums X/k can
// be evaluated exactly (Moebius consistency); Y only matters for the primed
// variant.
struct SumRequest {
    FormTriple triple;
    ConvexPolygonRegion region = unit_square();
    Rational X{1};
    u64 Y = 0;
    Polytope V = unit_box(3);
    TripleIndex d{}, D{};
    MultiplicativeFn h{};  // g = tau * h
    bool coprime_only = false;
    bool predict = true;  // skip the main-term Euler product when false
    int workers = 1;
    u64 prime_cutoff = 10000;
    int nu_max = 8;
};

struct SumReport {
    Rational exact_sum;  // valid when exact; weighted sums stay exact rationals
    bool exact = true;
    double value = 0.0;  // always the sum as a double
    u64 point_count = 0;
    double predicted_main = 0.0;
    double ratio = 0.0;  // value / predicted_main, 0 when the prediction is 0
    double wall_time_ms = 0.0;
};

// Integer points strictly inside X * region, one inclusive x1-interval per
// row, exact rational boundary arithmetic.
struct RowRange {
    i64 x2;
    i64 lo, hi;
};
std::vector<RowRange> interior_rows(const ConvexPolygonRegion& R, const Rational& X);

// #{(e1,e2,e3) : ei | ni, (log e1/log r'X, log e2/log r'X, log e3/(2 log r'X))
// in V}, closed membership. Fast path: V without cutting planes gives
// tau(n1) tau(n2) tau(n3).
u64 tau_V(const std::array<u64, 3>& n, double log_rprime_X, const Polytope& V);

SumReport sum_T(const SumRequest& req);
SumReport sum_S(const SumRequest& req);
SumReport sum_S_dD(const SumRequest& req);
SumReport sum_S_star(const SumRequest& req);
SumReport sum_Tg_star(const SumRequest& req);
SumReport sum_Tg_prime(const SumRequest& req);

enum class SumKind { T, S, S_dD, S_star, Tg_star, Tg_prime };

// plain plug-in of a main-term display from precomputed ingredients
double main_term(SumKind kind, double constant, double vol_R, double vol_V, double X,
                 double log_base);
// full prediction (computes the constants from the request)
double predicted_main(SumKind kind, const SumRequest& req);

// truncated triple sum  sum_{d1<=Y0, d2<=sqrt(X'), d3<=X'} rho(d)/(d1 d2 d3)^2
// restricted to V-membership of the log-normalized divisor vector, X' = r'X,
// Y0 = floor(sqrt(X')).
double m_x_v(const FormTriple& t, const ConvexPolygonRegion& R, const Rational& X,
             const Polytope& V, u64 budget = 2000000);

// sum over d <= (V1,V2,V3) componentwise of
// | #(Lambda(d) cap XR) - vol(R) X^2 rho(d)/(d1 d2 d3)^2 |
double lod_discrepancy(const FormTriple& t, const ConvexPolygonRegion& R, u64 X, u64 V1, u64 V2,
                       u64 V3);

}  // namespace quartdiv
