#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "quartdiv/arith.hpp"
#include "quartdiv/lattice.hpp"

using namespace quartdiv;

namespace {

u64 pow_u64(u64 p, int e) {
    u64 r = 1;
    while (e-- > 0) r *= p;
    return r;
}

int capped_val(i128 v, u64 p, int cap) {
    if (v == 0) return cap;
    v = abs128(v);
    int t = 0;
    while (t < cap && v % (i128)p == 0) {
        v /= (i128)p;
        ++t;
    }
    return t;
}

// direct exact-valuation count over [0, p^(sum+1))^2
Rational dagger_direct(u64 p, int v1, int v2, int v3, const FormTriple& t) {
    int m = v1 + v2 + v3 + 1;
    u64 B = pow_u64(p, m);
    u64 count = 0;
    for (u64 x1 = 0; x1 < B; ++x1)
        for (u64 x2 = 0; x2 < B; ++x2) {
            if (x1 % p == 0 && x2 % p == 0) continue;
            if (capped_val(evaluate(t.L1, (i64)x1, (i64)x2), p, m) != v1) continue;
            if (capped_val(evaluate(t.L2, (i64)x1, (i64)x2), p, m) != v2) continue;
            if (capped_val(evaluate(t.Q, (i64)x1, (i64)x2), p, m) != v3) continue;
            ++count;
        }
    return Rational((i128)count, mul128_checked((i128)B, (i128)B));
}

}  // namespace

TEST_CASE("lambda membership") {
    auto t = fixtures::gaussian();
    CHECK(in_lambda(4, 7, {2, 1, 1}, t));
    CHECK_FALSE(in_lambda(3, 7, {2, 1, 1}, t));
    CHECK(in_lambda(12345, -678, {1, 1, 1}, t));
}

TEST_CASE("brute force counts on small indices") {
    auto t = fixtures::gaussian();
    CHECK(rho_bruteforce({2, 1, 1}, t).count == 2);
    CHECK(rho_bruteforce({1, 1, 1}, t).count == 1);
    CHECK(rho_bruteforce({1, 1, 3}, t).count == 1);
    CHECK(rho_star_bruteforce({1, 1, 3}, t).count == 0);
    CHECK(rho_star_bruteforce({1, 1, 5}, t).count == 8);
    CHECK(rho_star_bruteforce({3, 1, 1}, t).count == 2);
}

TEST_CASE("brute force agrees with a plain double loop") {
    for (auto& [name, t] : fixtures::all()) {
        CAPTURE(name);
        for (TripleIndex d : {TripleIndex{2, 3, 1}, TripleIndex{4, 1, 3}, TripleIndex{2, 2, 5},
                              TripleIndex{1, 6, 4}, TripleIndex{3, 1, 8}}) {
            u64 P = d.d1 * d.d2 * d.d3;
            u64 rho = 0, star = 0;
            for (u64 x1 = 0; x1 < P; ++x1)
                for (u64 x2 = 0; x2 < P; ++x2) {
                    if (!in_lambda((i64)x1, (i64)x2, d, t)) continue;
                    ++rho;
                    u64 g = std::gcd(std::gcd(x1, x2), P);
                    if (g == 1) ++star;
                }
            auto [rv, sv] = rho_pair_bruteforce(d, t);
            CAPTURE(d.d1);
            CAPTURE(d.d2);
            CAPTURE(d.d3);
            CHECK(rv.count == rho);
            CHECK(sv.count == star);
        }
    }
}

TEST_CASE("prime power closed forms match the oracle") {
    for (auto& [name, fx] : fixtures::all()) {
        FormTriple t = fx.is_primitive() ? fx : fx.primitive_triple();
        LocalCounter counter(t);
        CAPTURE(name);
        for (u64 p : {2, 3, 5}) {
            for (int v1 = 0; v1 <= 3; ++v1)
                for (int v2 = 0; v2 + v1 <= 3; ++v2)
                    for (int v3 = 0; v1 + v2 + v3 <= 3; ++v3) {
                        if (v1 + v2 + v3 == 0) continue;
                        TripleIndex d{pow_u64(p, v1), pow_u64(p, v2), pow_u64(p, v3)};
                        auto [rv, sv] = rho_pair_bruteforce(d, t, 200000);
                        CAPTURE(p);
                        CAPTURE(v1);
                        CAPTURE(v2);
                        CAPTURE(v3);
                        CHECK(rho_prime_power(p, v1, v2, v3, counter).count == rv.count);
                        CHECK(counter.rho_star_count(p, v1, v2, v3) == sv.count);
                    }
        }
    }
}

TEST_CASE("specific prime power values") {
    LocalCounter counter(fixtures::gaussian());
    CHECK(rho_prime_power(7, 1, 0, 0, counter).count == 7);
    CHECK(rho_prime_power(5, 0, 0, 1, counter).count == 9);
    CHECK(rho_prime_power(3, 0, 0, 2, counter).count == 9);
}

TEST_CASE("rho star explicit bounds") {
    for (auto& [name, fx] : fixtures::all()) {
        FormTriple t = fx.is_primitive() ? fx : fx.primitive_triple();
        LocalCounter counter(t);
        CAPTURE(name);
        for (int v = 1; v <= 10; ++v) {
            u128 c2 = counter.rho_star_count(2, 0, 0, v);
            CHECK(c2 <= ((u128)1 << (v + 2)));
        }
        for (u64 p : {3, 5, 7}) {
            if ((u64)std::abs(t.delta) % p != 0) continue;
            int vD = v_p((u64)std::abs(t.delta), p);
            for (int v = 1; v <= 6; ++v) {
                u128 c = counter.rho_star_count(p, 0, 0, v);
                u128 phi = pow_u64(p, v) - pow_u64(p, v - 1);
                CHECK(c <= 2 * phi * (u128)pow_u64(p, std::min(vD / 2, v / 2)));
            }
        }
    }
}

TEST_CASE("vanishing when a resultant valuation is too small") {
    for (auto& [name, fx] : fixtures::all()) {
        FormTriple t = fx.is_primitive() ? fx : fx.primitive_triple();
        LocalCounter counter(t);
        CAPTURE(name);
        for (u64 p : {2, 3, 5}) {
            for (int v1 = 0; v1 <= 2; ++v1)
                for (int v2 = 0; v2 <= 2; ++v2)
                    for (int v3 = 0; v3 <= 2; ++v3) {
                        int m12 = std::min(v1, v2), m13 = std::min(v1, v3), m23 = std::min(v2, v3);
                        bool vanish = (m12 > 0 && v_p((u64)std::abs(t.delta12), p) < m12) ||
                                      (m13 > 0 && v_p((u64)std::abs(t.delta13), p) < m13) ||
                                      (m23 > 0 && v_p((u64)std::abs(t.delta23), p) < m23);
                        if (vanish) CHECK(counter.rho_star_count(p, v1, v2, v3) == 0);
                    }
        }
    }
}

TEST_CASE("multiplicativity across coprime indices") {
    for (auto& [name, fx] : fixtures::all()) {
        CAPTURE(name);
        std::vector<std::pair<TripleIndex, TripleIndex>> pairs = {
            {{2, 1, 1}, {1, 3, 1}}, {{2, 1, 1}, {1, 1, 5}},  {{4, 1, 1}, {3, 3, 1}},
            {{1, 2, 4}, {9, 1, 1}}, {{1, 1, 8}, {1, 1, 25}}, {{2, 2, 2}, {3, 1, 9}}};
        for (auto& [d, e] : pairs) {
            TripleIndex de{d.d1 * e.d1, d.d2 * e.d2, d.d3 * e.d3};
            auto [rd, sd] = rho_pair_bruteforce(d, fx, 200000);
            auto [re, se] = rho_pair_bruteforce(e, fx, 200000);
            auto [rde, sde] = rho_pair_bruteforce(de, fx, 200000);
            CHECK(rde.count == rd.count * re.count);
            CHECK(sde.count == sd.count * se.count);
        }
    }
}

TEST_CASE("multiplicative evaluation matches brute force") {
    for (auto& [name, fx] : fixtures::all()) {
        CAPTURE(name);
        LocalCounter counter(fx);
        for (TripleIndex d : {TripleIndex{2, 3, 1}, TripleIndex{2, 1, 5}, TripleIndex{6, 1, 4},
                              TripleIndex{12, 5, 2}, TripleIndex{1, 1, 45}}) {
            auto bf = rho_bruteforce(d, fx, 200000);
            auto mv = rho_multiplicative(d, counter);
            CAPTURE(d.d1);
            CAPTURE(d.d2);
            CAPTURE(d.d3);
            CHECK(mv.count == bf.count);
            CHECK(mv.normalized == bf.normalized);
        }
    }
    LocalCounter counter(fixtures::gaussian());
    CHECK(rho_multiplicative({2, 3, 1}, counter).count == 6);
    CHECK(rho_multiplicative({2, 1, 5}, counter).count == 18);
}

TEST_CASE("content reduction identity") {
    auto t = fixtures::nonprimitive();
    auto r = rho_nonprimitive_reduce({2, 1, 1}, t);
    CHECK(r.d_prime == TripleIndex{1, 1, 1});
    CHECK(r.original_density == Rational(1));
    CHECK(r.reduced_density == Rational(1));
    CHECK(reduce_index({4, 1, 1}, t) == TripleIndex{2, 1, 1});
    for (TripleIndex d : {TripleIndex{2, 3, 2}, TripleIndex{4, 9, 8}, TripleIndex{6, 6, 6},
                          TripleIndex{8, 3, 4}}) {
        auto rr = rho_nonprimitive_reduce(d, t, 200000);
        CAPTURE(d.d1);
        CHECK(rr.original_density == rr.reduced_density);
    }
    auto prim = fixtures::gaussian();
    CHECK(rho_nonprimitive_reduce({6, 5, 4}, prim).d_prime == TripleIndex{6, 5, 4});
}

TEST_CASE("exact valuation density identity") {
    for (auto& [name, fx] : fixtures::all()) {
        FormTriple t = fx.is_primitive() ? fx : fx.primitive_triple();
        LocalCounter counter(t);
        CAPTURE(name);
        for (u64 p : {2, 3, 5, 7})
            for (int v1 = 0; v1 <= 2; ++v1)
                for (int v2 = 0; v1 + v2 <= 2; ++v2)
                    for (int v3 = 0; v1 + v2 + v3 <= 2; ++v3) {
                        CAPTURE(p);
                        CAPTURE(v1);
                        CAPTURE(v2);
                        CAPTURE(v3);
                        CHECK(counter.rho_dagger(p, v1, v2, v3) ==
                              dagger_direct(p, v1, v2, v3, t));
                    }
    }
    LocalCounter counter(fixtures::gaussian());
    CHECK(counter.rho_dagger(3, 0, 0, 0) == Rational(4, 9));
    CHECK(doctest::Approx(counter.rho_dagger_density(3, 0, 0, 0)) ==
          counter.rho_dagger(3, 0, 0, 0).to_double());
}

TEST_CASE("density helpers agree with exact counts") {
    for (auto& [name, fx] : fixtures::all()) {
        FormTriple t = fx.is_primitive() ? fx : fx.primitive_triple();
        LocalCounter counter(t);
        for (u64 p : {2, 3, 5, 13})
            for (int v1 = 0; v1 <= 2; ++v1)
                for (int v2 = 0; v2 <= 2; ++v2)
                    for (int v3 = 0; v3 <= 2; ++v3) {
                        double denom = std::pow((double)p, 2.0 * (v1 + v2 + v3));
                        double star = (double)counter.rho_star_count(p, v1, v2, v3) / denom;
                        CHECK(doctest::Approx(counter.rho_star_density(p, v1, v2, v3)) == star);
                        double rho = (double)counter.rho_count(p, v1, v2, v3) / denom;
                        CHECK(doctest::Approx(counter.rho_density(p, v1, v2, v3)) == rho);
                    }
    }
}

TEST_CASE("delta and its lower bound") {
    auto t = fixtures::gaussian();
    CHECK(delta_D({2, 2, 1}, t) == 2);
    CHECK(delta_D({1, 1, 1}, t) == 1);
    CHECK(delta_D({1, 1, 3}, t) == 3);
    CHECK(delta_lower_bound({2, 2, 1}, t) == 2);
    CHECK(delta_lower_bound({1, 1, 1}, t) == 1);
    CHECK(delta_lower_bound({3, 1, 3}, t) == 3);
    CHECK(delta_D({3, 1, 3}, t) % delta_lower_bound({3, 1, 3}, t) == 0);
    CHECK_THROWS(delta_lower_bound({4, 1, 4}, t));

    for (auto& [name, fx] : fixtures::all()) {
        CAPTURE(name);
        for (u64 D1 : {1, 2, 3, 6})
            for (u64 D2 : {1, 2, 5})
                for (u64 D3 : {1, 2, 3, 5}) {
                    TripleIndex D{D1, D2, D3};
                    if (mu(std::gcd(D1, D3)) == 0 || mu(std::gcd(D2, D3)) == 0) continue;
                    u64 lb = delta_lower_bound(D, fx);
                    u64 del = delta_D(D, fx, 200000);
                    CAPTURE(D1);
                    CAPTURE(D2);
                    CAPTURE(D3);
                    CHECK(del % lb == 0);
                }
    }
}

TEST_CASE("psi psi0 and resultant gcd factors") {
    CHECK(psi0({2, 2, 2}) == 2);
    CHECK(psi0({4, 4, 16}) == 16);
    CHECK(psi({2, 1, 4}) == 2);
    CHECK(psi({4, 3, 16}) == 12);
    for (u64 D1 = 1; D1 <= 16; ++D1)
        for (u64 D2 = 1; D2 <= 16; D2 += 3)
            for (u64 D3 = 1; D3 <= 16; D3 += 2) {
                TripleIndex D{D1, D2, D3};
                u64 p0 = psi0(D);
                CHECK((u128)p0 * p0 <= (u128)D1 * D2 * D3);
                if (mu(D3) != 0) CHECK(p0 == std::gcd(std::gcd(D1, D2), D3));
            }
    auto t = fixtures::gaussian();
    CHECK(a_factor({1, 1, 1}, t) == 1);
    CHECK(a_prime_factor({1, 1, 1}, t) == 1);
    // primitive forms: a and a' coincide
    for (u64 D1 : {1, 2, 4})
        for (u64 D3 : {1, 2, 8})
            CHECK(a_factor({D1, 3, D3}, t) == a_prime_factor({D1, 3, D3}, t));
}

TEST_CASE("errors") {
    auto t = fixtures::gaussian();
    CHECK_THROWS_AS(rho_bruteforce({101, 101, 11}, t), std::invalid_argument);
    LocalCounter np(fixtures::nonprimitive());
    CHECK_THROWS_AS(rho_prime_power(2, 1, 0, 0, np), std::invalid_argument);
    CHECK_THROWS_AS(np.rho_dagger(2, 0, 0, 0), std::invalid_argument);
}
