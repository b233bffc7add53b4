#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "quartdiv/sums.hpp"

using namespace quartdiv;

namespace {

SumRequest make_req(const FormTriple& t, i64 X) {
    SumRequest req{t};
    req.X = Rational(X);
    req.prime_cutoff = 50;  // predictions are not under test unless stated
    req.nu_max = 6;
    return req;
}

Polytope empty_V3() {
    Polytope V;
    V.dim = 3;
    V.halfspaces.push_back({{Rational(1), Rational(0), Rational(0)}, Rational(-1)});
    return V;
}

u64 count_points(const std::vector<RowRange>& rows) {
    u64 n = 0;
    for (auto& r : rows) n += (u64)(r.hi - r.lo + 1);
    return n;
}

}  // namespace

TEST_CASE("interior row enumeration") {
    auto rows1 = interior_rows(unit_square(), Rational(1));
    CHECK(rows1.empty());
    auto rows3 = interior_rows(unit_square(), Rational(3));
    REQUIRE(rows3.size() == 2);
    CHECK(rows3[0].x2 == 1);
    CHECK(rows3[0].lo == 1);
    CHECK(rows3[0].hi == 2);
    CHECK(rows3[1].x2 == 2);
    // triangle (0,0)-(1,0)-(0,1) scaled by 4: x1 >= 1, x2 >= 1, x1 + x2 <= 3
    ConvexPolygonRegion tri(
        {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
    auto rowst = interior_rows(tri, Rational(4));
    CHECK(count_points(rowst) == 3);
    // rational scales: 3/2 gives the single point (1,1), 5/2 the 2x2 block
    CHECK(count_points(interior_rows(unit_square(), Rational(3, 2))) == 1);
    CHECK(count_points(interior_rows(unit_square(), Rational(5, 2))) == 4);
}

TEST_CASE("tau_V") {
    double L = std::log(4.0);
    CHECK(tau_V({12, 5, 9}, L, unit_box(3)) == tau(12) * tau(5) * tau(9));
    CHECK(tau_V({2, 1, 1}, L, empty_V3()) == 0);
    Polytope half;
    half.dim = 3;
    half.halfspaces.push_back({{Rational(1), Rational(0), Rational(0)}, Rational(1, 2)});
    CHECK(tau_V({2, 1, 1}, L, half) == 2);  // log 2 / log 4 lies on the face
    CHECK(tau_V({4, 1, 1}, L, half) == 2);  // d1 = 4 falls outside
}

TEST_CASE("sum_T examples") {
    auto t = fixtures::gaussian();
    CHECK(sum_T(make_req(t, 1)).exact_sum == Rational(0));
    auto r2 = sum_T(make_req(t, 2));
    CHECK(r2.exact_sum == Rational(2));
    CHECK(r2.point_count == 1);
    auto r3 = sum_T(make_req(t, 3));
    CHECK(r3.exact_sum == Rational(16));
    CHECK(r3.point_count == 4);
    CHECK(r3.predicted_main > 0.0);
    CHECK(r3.ratio == doctest::Approx(r3.value / r3.predicted_main));

    // doubling X at least quadruples the point count
    for (i64 X : {5, 10, 20}) {
        auto a = sum_T(make_req(t, X));
        auto b = sum_T(make_req(t, 2 * X));
        CHECK(b.point_count >= 4 * a.point_count);
    }
}

TEST_CASE("sum_S and the definitional identity") {
    auto t = fixtures::gaussian();
    CHECK(sum_S(make_req(t, 2)).exact_sum == Rational(2));

    for (i64 X : {3, 7, 15, 40}) {
        auto rep = sum_S(make_req(t, X));
        u128 direct = 0;
        for (const RowRange& r : interior_rows(unit_square(), Rational(X)))
            for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
                u64 n1 = (u64)evaluate(t.L1, x1, r.x2);
                u64 n2 = (u64)evaluate(t.L2, x1, r.x2);
                u64 n3 = (u64)evaluate(t.Q, x1, r.x2);
                direct += tau(n1) * tau(n2) * tau(n3);
            }
        CHECK(rep.exact_sum == Rational((i128)direct));
    }

    auto reqv = make_req(t, 5);
    reqv.V = empty_V3();
    auto repv = sum_S(reqv);
    CHECK(repv.exact_sum == Rational(0));
    CHECK(repv.predicted_main == 0.0);
}

TEST_CASE("sum_S_dD examples") {
    auto t = fixtures::gaussian();
    auto req = make_req(t, 3);
    req.d = req.D = TripleIndex{2, 1, 1};
    auto rep = sum_S_dD(req);
    CHECK(rep.exact_sum == Rational(10));
    CHECK(rep.point_count == 2);

    req.d = TripleIndex{1, 1, 1};
    auto rep2 = sum_S_dD(req);
    CHECK(rep2.exact_sum == Rational(20));

    req.d = TripleIndex{2, 2, 1};  // does not divide D
    CHECK_THROWS(sum_S_dD(req));

    for (i64 X : {5, 11, 23}) {
        auto plain = make_req(t, X);
        auto viaS = sum_S(plain);
        auto via1 = sum_S_dD(plain);
        CHECK(viaS.exact_sum == via1.exact_sum);
    }
}

TEST_CASE("sum_S_star and the Moebius identity") {
    auto t = fixtures::gaussian();
    auto rep = sum_S_star(make_req(t, 3));
    CHECK(rep.exact_sum == Rational(10));
    CHECK(rep.point_count == 3);

    for (i64 X : {6, 10, 14}) {
        auto star = sum_S_star(make_req(t, X));
        Rational rhs;
        for (i64 k = 1; k <= X; ++k) {
            if (mu((u64)k) == 0) continue;
            auto scaled = make_form_triple({k * t.L1.a, k * t.L1.b}, {k * t.L2.a, k * t.L2.b},
                                           {k * k * t.Q.a3, k * k * t.Q.b3, k * k * t.Q.c3});
            SumRequest req{scaled};
            req.X = Rational(X, k);
            req.prime_cutoff = 10;
            req.nu_max = 4;
            Rational term = sum_S(req).exact_sum;
            rhs += mu((u64)k) == 1 ? term : -term;
        }
        CHECK(star.exact_sum == rhs);
    }
}

TEST_CASE("sum_Tg_star") {
    auto t = fixtures::gaussian();
    auto r2 = sum_Tg_star(make_req(t, 2));
    CHECK(r2.exact_sum == Rational(2));

    // g = tau with full box equals the coprime-restricted T sum
    for (i64 X : {5, 12, 25}) {
        auto rep = sum_Tg_star(make_req(t, X));
        u128 direct = 0;
        for (const RowRange& r : interior_rows(unit_square(), Rational(X)))
            for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
                if (std::gcd(x1, r.x2) != 1) continue;
                u64 n1 = (u64)evaluate(t.L1, x1, r.x2);
                u64 n2 = (u64)evaluate(t.L2, x1, r.x2);
                u64 n3 = (u64)evaluate(t.Q, x1, r.x2);
                direct += split_tau_triple(n1, n2, n3);
            }
        CHECK(rep.exact_sum == Rational((i128)direct));
        CHECK(rep.exact);
    }

    // a redundant cutting plane must not change the value (exercises the
    // divisor-DFS path against the fast path)
    auto reqc = make_req(t, 9);
    reqc.V.halfspaces.push_back(
        {{Rational(1), Rational(0), Rational(0)}, Rational(1)});
    auto slow = sum_Tg_star(reqc);
    auto fast = sum_Tg_star(make_req(t, 9));
    CHECK(slow.exact_sum == fast.exact_sum);

    // restricting t1 < 0 keeps only divisors coprime to L1
    auto reqr = make_req(t, 9);
    reqr.V.halfspaces.push_back(
        {{Rational(1), Rational(0), Rational(0)}, Rational(0)});
    auto restr = sum_Tg_star(reqr);
    CHECK(restr.exact_sum < fast.exact_sum);
    CHECK(restr.exact_sum > Rational(0));
}

TEST_CASE("sum_Tg_prime") {
    auto t = fixtures::gaussian();
    SumRequest req{t};
    req.X = Rational(2);
    req.Y = 4;
    req.V = unit_box(4);
    req.prime_cutoff = 50;
    req.nu_max = 6;
    auto rep = sum_Tg_prime(req);
    CHECK(rep.exact_sum == Rational(2));
    CHECK(rep.point_count == 1);
    CHECK(rep.exact);

    // capping the fourth coordinate at 0 keeps only max(|x1|,|x2|) = 1
    SumRequest req3{t};
    req3.X = Rational(3);
    req3.Y = 9;
    req3.V = unit_box(4);
    req3.V.halfspaces.push_back(
        {{Rational(0), Rational(0), Rational(0), Rational(1)}, Rational(0)});
    req3.prime_cutoff = 50;
    req3.nu_max = 6;
    auto rep3 = sum_Tg_prime(req3);
    CHECK(rep3.exact_sum == Rational(2));  // only (1,1), tau(2) = 2, weight 1

    // weights are exact: X=5, Y=25, full box
    SumRequest req5{t};
    req5.X = Rational(5);
    req5.Y = 25;
    req5.V = unit_box(4);
    req5.prime_cutoff = 50;
    req5.nu_max = 6;
    auto rep5 = sum_Tg_prime(req5);
    Rational direct;
    for (const RowRange& r : interior_rows(unit_square(), Rational(5)))
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
            if (std::gcd(x1, r.x2) != 1) continue;
            u64 n1 = (u64)evaluate(t.L1, x1, r.x2);
            u64 n2 = (u64)evaluate(t.L2, x1, r.x2);
            u64 n3 = (u64)evaluate(t.Q, x1, r.x2);
            i64 m = std::max(x1, r.x2);
            direct += Rational((i128)split_tau_triple(n1, n2, n3), (i128)m * m);
        }
    CHECK(rep5.exact_sum == direct);

    CHECK_THROWS(sum_Tg_prime(make_req(t, 3)));  // Y missing
}

TEST_CASE("parallel determinism") {
    auto t = fixtures::gaussian();
    for (int workers : {2, 3, 7}) {
        auto a = sum_T(make_req(t, 21));
        auto reqw = make_req(t, 21);
        reqw.workers = workers;
        auto b = sum_T(reqw);
        CHECK(a.exact_sum == b.exact_sum);
        CHECK(a.point_count == b.point_count);

        auto c = sum_S_star(make_req(t, 17));
        auto reqs = make_req(t, 17);
        reqs.workers = workers;
        auto d = sum_S_star(reqs);
        CHECK(c.exact_sum == d.exact_sum);
    }
}

TEST_CASE("main term plug-in") {
    double e = std::exp(1.0);
    CHECK(main_term(SumKind::T, 1.0, 1.0, 1.0, e, 1.0) == doctest::Approx(2 * e * e));
    CHECK(main_term(SumKind::S, 2.0, 1.0, 0.0, 10.0, 3.0) == 0.0);
    CHECK(main_term(SumKind::Tg_prime, 1.0, 1.0, 1.0, 99.0, 2.0) == doctest::Approx(64.0));
}

TEST_CASE("m_x_v") {
    auto t = fixtures::gaussian();
    auto R = unit_square();
    CHECK(m_x_v(t, R, Rational(1), unit_box(3)) == doctest::Approx(1.0));
    CHECK(m_x_v(t, R, Rational(3), empty_V3()) == 0.0);

    // oracle: direct triple loop over brute-force rho values
    double got = m_x_v(t, R, Rational(3), unit_box(3));
    double Xp = std::sqrt(2.0) * 3;
    u64 y0 = (u64)std::floor(std::sqrt(Xp));
    u64 d3max = (u64)std::floor(Xp);
    double want = 0.0;
    for (u64 d1 = 1; d1 <= y0; ++d1)
        for (u64 d2 = 1; d2 <= y0; ++d2)
            for (u64 d3 = 1; d3 <= d3max; ++d3)
                want += rho_bruteforce({d1, d2, d3}, t).normalized.to_double();
    CHECK(got == doctest::Approx(want).epsilon(1e-12));

    CHECK_THROWS(m_x_v(t, R, Rational(1000), unit_box(3), 100));  // budget
}

TEST_CASE("level-of-distribution discrepancy") {
    auto t = fixtures::gaussian();
    auto R = unit_square();
    // single class: |#(Z^2 cap XR) - vol X^2| = |81 - 100|
    CHECK(lod_discrepancy(t, R, 10, 1, 1, 1) == doctest::Approx(19.0));
    // Gauss-type envelope for the single-class case
    for (u64 X : {5ull, 10ull, 25ull})
        CHECK(lod_discrepancy(t, R, X, 1, 1, 1) <= 4.0 * (4.0 * X + 1.0));

    // per-class convex-region bound over a small divisor box
    u64 X = 20;
    double disc = lod_discrepancy(t, R, X, 2, 2, 2);
    double bound = 0.0;
    double r_inf_d = r_inf(R).to_double();
    LocalCounter counter(t);
    for (u64 d1 = 1; d1 <= 2; ++d1)
        for (u64 d2 = 1; d2 <= 2; ++d2)
            for (u64 d3 = 1; d3 <= 2; ++d3) {
                TripleIndex d{d1, d2, d3};
                auto rho = rho_multiplicative(d, counter);
                double rho_count = (double)(u64)rho.count;
                bound += rho_count * (8.0 * r_inf_d * (double)X / (double)d.modulus() + 8.0);
            }
    CHECK(disc <= bound);
}
