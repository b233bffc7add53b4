#include "quartdiv/lattice.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace quartdiv {

namespace {

u64 mod_pos(i128 v, u64 m) {
    if (m == 1) return 0;
    i128 r = v % (i128)m;
    if (r < 0) r += (i128)m;
    return (u64)r;
}

u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

// modular inverse of a mod m, gcd(a, m) == 1
u64 modinv_u64(u64 a, u64 m) {
    if (m == 1) return 0;
    i64 t = 0, newt = 1;
    i64 r = (i64)m, newr = (i64)(a % m);
    while (newr != 0) {
        i64 q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::logic_error("modinv: not invertible");
    return (u64)(t < 0 ? t + (i64)m : t);
}

struct Progression {
    bool ok = false;
    u64 r = 0;
    u64 m = 1;
};

// a*x == rhs (mod mod); returns x == r (mod m) with m | mod, or not solvable
Progression solve_linear(u64 a, u64 rhs, u64 mod) {
    Progression p;
    if (mod == 1) return {true, 0, 1};
    a %= mod;
    rhs %= mod;
    u64 g = a == 0 ? mod : (u64)gcd64((i64)a, (i64)mod);
    if (rhs % g != 0) return p;
    u64 m = mod / g;
    p.ok = true;
    p.m = m;
    p.r = m == 1 ? 0 : mulmod_u64(rhs / g % m, modinv_u64(a / g, m), m);
    return p;
}

// x == r1 (mod m1) and x == r2 (mod m2)
Progression crt(u64 r1, u64 m1, u64 r2, u64 m2) {
    Progression p;
    u64 g = (u64)gcd64((i64)m1, (i64)m2);
    u64 diff = r2 >= r1 ? r2 - r1 : m2 * ((r1 - r2 + m2 - 1) / m2) + r2 - r1;
    if (diff % g != 0) return p;
    u64 m = m1 / g * m2;
    u64 mg = m2 / g;
    u64 k = mg == 1 ? 0 : mulmod_u64(diff / g % mg, modinv_u64(m1 / g % mg, mg), mg);
    p.ok = true;
    p.m = m;
    p.r = (u64)(((u128)m1 * k + r1) % m);
    return p;
}

// value of the quadratic walk q(k) = q0 + k*dq0 + dd*k*(k-1)/2 mod M
u64 walk_value(u64 q0, u64 dq0, u64 dd, u64 M, u64 k) {
    u128 tri = (u128)k * (k - (k > 0 ? 1 : 0)) / 2;
    return (u64)(((u128)q0 + (u128)(k % M) * dq0 % M + (u128)(tri % M) * dd % M) % M);
}

u64 count_zeros_scalar(u64 q0, u64 dq0, u64 dd, u64 M, u64 n) {
    u64 cnt = 0, q = q0, dq = dq0;
    for (u64 k = 0; k < n; ++k) {
        cnt += (q == 0);
        q += dq;
        if (q >= M) q -= M;
        dq += dd;
        if (dq >= M) dq -= M;
    }
    return cnt;
}

// number of k in [0, n) with q(k) == 0 mod M along the degree-2 walk
u64 count_zeros(u64 q0, u64 dq0, u64 dd, u64 M, u64 n) {
    if (M == 1) return n;
#if defined(__AVX2__)
    if (n >= 64 && M < (1u << 31)) {
        u64 cnt = 0;
        u64 steps = n / 8;
        alignas(32) std::uint32_t qs[8], is[8];
        for (int j = 0; j < 8; ++j) {
            qs[j] = (std::uint32_t)walk_value(q0, dq0, dd, M, (u64)j);
            u64 dqj = ((u128)dq0 + (u128)j * dd) % M;
            is[j] = (std::uint32_t)(((u128)8 * dqj + (u128)28 * dd) % M);
        }
        __m256i vq = _mm256_load_si256((const __m256i*)qs);
        __m256i vi = _mm256_load_si256((const __m256i*)is);
        __m256i vM = _mm256_set1_epi32((int)M);
        __m256i vinc = _mm256_set1_epi32((int)((u128)64 * dd % M));
        __m256i vzero = _mm256_setzero_si256();
        u64 done = 0;
        while (done < steps) {
            u64 block = std::min<u64>(steps - done, 1u << 24);
            __m256i vcnt = _mm256_setzero_si256();
            for (u64 s = 0; s < block; ++s) {
                vcnt = _mm256_sub_epi32(vcnt, _mm256_cmpeq_epi32(vq, vzero));
                __m256i t = _mm256_add_epi32(vq, vi);
                vq = _mm256_min_epu32(t, _mm256_sub_epi32(t, vM));
                __m256i t2 = _mm256_add_epi32(vi, vinc);
                vi = _mm256_min_epu32(t2, _mm256_sub_epi32(t2, vM));
            }
            alignas(32) std::uint32_t cs[8];
            _mm256_store_si256((__m256i*)cs, vcnt);
            for (int j = 0; j < 8; ++j) cnt += cs[j];
            done += block;
        }
        u64 k0 = steps * 8;
        if (k0 < n) {
            u64 qk = walk_value(q0, dq0, dd, M, k0);
            u64 dqk = (u64)(((u128)dq0 + (u128)(k0 % M) * dd) % M);
            cnt += count_zeros_scalar(qk, dqk, dd, M, n - k0);
        }
        return cnt;
    }
#endif
    return count_zeros_scalar(q0, dq0, dd, M, n);
}

u128 pow_u128_checked(u64 p, int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (u128)-1 / p) throw std::overflow_error("prime power exceeds 128 bits");
        r *= p;
    }
    return r;
}

u64 pow_u64_checked(u64 p, int e) {
    u128 r = pow_u128_checked(p, e);
    if (r > (u128)UINT64_MAX) throw std::overflow_error("prime power exceeds 64 bits");
    return (u64)r;
}

u64 checked_product3(u64 a, u64 b, u64 c) {
    u128 r = (u128)a * b;
    if (r > (u128)UINT64_MAX) throw std::overflow_error("modulus exceeds 64 bits");
    r *= c;
    if (r > (u128)UINT64_MAX || (u128)(r / c) != (u128)a * b)
        throw std::overflow_error("modulus exceeds 64 bits");
    return (u64)r;
}

Rational density_of(u128 count, u64 modulus) {
    if (count > (u128)INT64_MAX * INT64_MAX) throw std::overflow_error("count exceeds rational range");
    i128 m2 = mul128_checked((i128)modulus, (i128)modulus);
    return Rational((i128)count, m2);
}

int valuation_capped(i128 v, u64 p, int cap) {
    if (v == 0) return cap;
    v = abs128(v);
    int t = 0;
    while (t < cap && v % (i128)p == 0) {
        v /= (i128)p;
        ++t;
    }
    return t;
}

// Per-column state for the brute-force sweep: the combined solution set of the
// two linear congruences depends on x1 only mod lcm(d1, d2).
struct ColumnTable {
    u64 period;
    std::vector<Progression> cols;
};

ColumnTable build_column_table(const TripleIndex& d, const FormTriple& t) {
    ColumnTable ct;
    ct.period = (u64)lcm64((i64)d.d1, (i64)d.d2);
    ct.cols.resize(ct.period);
    for (u64 x1 = 0; x1 < ct.period; ++x1) {
        Progression p{true, 0, 1};
        bool ok = true;
        const LinearForm* forms[2] = {&t.L1, &t.L2};
        u64 mods[2] = {d.d1, d.d2};
        for (int i = 0; i < 2 && ok; ++i) {
            if (mods[i] == 1) continue;
            u64 a = mod_pos((i128)forms[i]->b, mods[i]);
            u64 rhs = mod_pos(-(i128)forms[i]->a * (i128)x1, mods[i]);
            Progression s = solve_linear(a, rhs, mods[i]);
            if (!s.ok) {
                ok = false;
                break;
            }
            Progression c = crt(p.r, p.m, s.r, s.m);
            if (!c.ok) {
                ok = false;
                break;
            }
            p = c;
        }
        ct.cols[x1] = ok ? p : Progression{};
    }
    return ct;
}

// zeros of Q(x1, .) mod M along x2 = r + k*m, k in [0, n)
u64 count_column(const QuadraticForm& Q, u64 x1, u64 r, u64 m, u64 n, u64 M) {
    u64 q0 = mod_pos(evaluate(Q, (i64)x1, (i64)r), M);
    // Q(x1, r+m) - Q(x1, r) = b3*(2rm + m^2) + c3*x1*m
    i128 d1 = (i128)Q.b3 * ((i128)2 * r * m + (i128)m * m) + (i128)Q.c3 * x1 * m;
    u64 dq0 = mod_pos(d1, M);
    u64 dd = mod_pos((i128)2 * Q.b3 * m % (i128)M * (i128)m, M);
    return count_zeros(q0, dq0, dd, M, n);
}

struct SweepTotals {
    u128 rho = 0;
    u128 star = 0;
};

SweepTotals sweep_range(const TripleIndex& d, const FormTriple& t, const ColumnTable& ct,
                        const std::vector<u64>& prime_factors, u64 L, u64 x_lo, u64 x_hi,
                        bool need_star) {
    SweepTotals totals;
    u64 P = d.d1 * d.d2 * d.d3;
    for (u64 x1 = x_lo; x1 < x_hi; ++x1) {
        const Progression& cp = ct.cols[x1 % ct.period];
        if (!cp.ok) continue;
        u64 n = L / cp.m;
        u64 c0 = d.d3 == 1 ? n : count_column(t.Q, x1, cp.r, cp.m, n, d.d3);
        totals.rho += c0;
        if (!need_star) continue;
        u64 g = x1 == 0 ? P : (u64)gcd64((i64)x1, (i64)P);
        if (g == 1) {
            totals.star += c0;
            continue;
        }
        std::vector<u64> shared;
        for (u64 p : prime_factors)
            if (g % p == 0) shared.push_back(p);
        i64 col = (i64)c0;
        for (unsigned mask = 1; mask < (1u << shared.size()); ++mask) {
            u64 tp = 1;
            int bits = 0;
            for (size_t i = 0; i < shared.size(); ++i)
                if (mask & (1u << i)) {
                    tp *= shared[i];
                    ++bits;
                }
            // x2 == cp.r (mod cp.m) and tp | x2
            Progression s = solve_linear(tp % cp.m, cp.r, cp.m);
            i64 sub = 0;
            if (s.ok) {
                u64 mT = tp * s.m;
                u64 rT = mulmod_u64(tp, s.r, mT);
                u64 nT = L / mT;
                sub = (i64)(d.d3 == 1 ? nT : count_column(t.Q, x1, rT, mT, nT, d.d3));
            }
            col += (bits % 2 == 1) ? -sub : sub;
        }
        if (col < 0) throw std::logic_error("negative star column count");
        totals.star += (u64)col;
    }
    return totals;
}

std::pair<RhoValue, RhoValue> sweep(const TripleIndex& d, const FormTriple& t, u64 bound,
                                    int workers, bool need_star) {
    u64 P = checked_product3(d.d1, d.d2, d.d3);
    if (P > bound) throw std::invalid_argument("modulus exceeds brute-force bound");
    if (d.d1 == 0 || d.d2 == 0 || d.d3 == 0) throw std::invalid_argument("zero modulus component");
    u64 L = (u64)lcm64(lcm64((i64)d.d1, (i64)d.d2), (i64)d.d3);
    ColumnTable ct = build_column_table(d, t);
    std::vector<u64> prime_factors;
    for (auto& [p, e] : factorize(P)) prime_factors.push_back(p);

    SweepTotals totals;
    if (workers <= 1 || L < 256) {
        totals = sweep_range(d, t, ct, prime_factors, L, 0, L, need_star);
    } else {
        int nw = std::min<int>(workers, (int)(L / 64));
        std::vector<SweepTotals> parts(nw);
        std::vector<std::thread> threads;
        for (int w = 0; w < nw; ++w) {
            u64 lo = L * w / nw, hi = L * (w + 1) / nw;
            threads.emplace_back([&, w, lo, hi] {
                parts[w] = sweep_range(d, t, ct, prime_factors, L, lo, hi, need_star);
            });
        }
        for (auto& th : threads) th.join();
        for (auto& pt : parts) {
            totals.rho += pt.rho;
            totals.star += pt.star;
        }
    }

    u128 scale = (u128)(P / L) * (P / L);
    RhoValue rho{totals.rho * scale, P, density_of(totals.rho * scale, P)};
    RhoValue star{totals.star * scale, P, density_of(totals.star * scale, P)};
    return {rho, star};
}

}  // namespace

bool in_lambda(i64 x1, i64 x2, const TripleIndex& d, const FormTriple& t) {
    return mod_pos(evaluate(t.L1, x1, x2), d.d1) == 0 &&
           mod_pos(evaluate(t.L2, x1, x2), d.d2) == 0 &&
           mod_pos(evaluate(t.Q, x1, x2), d.d3) == 0;
}

RhoValue rho_bruteforce(const TripleIndex& d, const FormTriple& t, u64 bound, int workers) {
    return sweep(d, t, bound, workers, false).first;
}

RhoValue rho_star_bruteforce(const TripleIndex& d, const FormTriple& t, u64 bound, int workers) {
    return sweep(d, t, bound, workers, true).second;
}

std::pair<RhoValue, RhoValue> rho_pair_bruteforce(const TripleIndex& d, const FormTriple& t,
                                                  u64 bound, int workers) {
    return sweep(d, t, bound, workers, true);
}

LocalCounter::LocalCounter(const FormTriple& t) : t_(t) {
    auto add_primes = [&](i64 v) {
        u64 a = (u64)(v < 0 ? -v : v);
        if (a <= 1) return;
        for (auto& [p, e] : factorize(a)) bad_primes_.push_back(p);
    };
    add_primes(2);
    add_primes(t.delta);
    add_primes(t.delta12);
    add_primes(t.delta13);
    add_primes(t.delta23);
    add_primes(t.ell1);
    add_primes(t.ell2);
    add_primes(t.q);
    std::sort(bad_primes_.begin(), bad_primes_.end());
    bad_primes_.erase(std::unique(bad_primes_.begin(), bad_primes_.end()), bad_primes_.end());
}

bool LocalCounter::is_bad_prime(u64 p) const {
    return std::binary_search(bad_primes_.begin(), bad_primes_.end(), p);
}

LocalCounter& LocalCounter::primitive_counter() {
    if (t_.is_primitive()) return *this;
    if (!prim_) prim_ = std::make_unique<LocalCounter>(t_.primitive_triple());
    return *prim_;
}

// count over [0, p^m)^2, m = max(n_i), of primitive-mod-p points with
// p^{n_i} | L_i and p^{n3} | Q.  DFS over p-adic digits with Hensel shortcuts.
u128 LocalCounter::star_count_minimal_box(u64 p, int n1, int n2, int n3) {
    int m = std::max({n1, n2, n3});
    if (m == 0) return 1;
    auto key = std::make_tuple(p, n1, n2, n3);
    auto it = star_cache_.find(key);
    if (it != star_cache_.end()) return it->second;

    u64 nodes = 0;
    const u64 node_budget = (u64)1 << 28;
    bool l1_unit = gcd64(t_.L1.a, t_.L1.b) % (i64)p != 0;
    bool l2_unit = gcd64(t_.L2.a, t_.L2.b) % (i64)p != 0;

    std::vector<u64> pw(m + 1);
    pw[0] = 1;
    for (int j = 1; j <= m; ++j) pw[j] = pow_u64_checked(p, j);

    std::function<u128(int, u64, u64)> rec = [&](int j, u64 x1, u64 x2) -> u128 {
        if (j == m) return 1;
        if (++nodes > node_budget) throw std::runtime_error("local counter node budget exceeded");
        bool a1 = n1 > j, a2 = n2 > j, a3 = n3 > j;
        if (a1 && !a2 && !a3 && l1_unit) return pow_u128_checked(p, m - j);
        if (a2 && !a1 && !a3 && l2_unit) return pow_u128_checked(p, m - j);
        if (a3 && !a1 && !a2) {
            i128 gx = (i128)2 * t_.Q.a3 * (i128)x1 + (i128)t_.Q.c3 * (i128)x2;
            i128 gy = (i128)t_.Q.c3 * (i128)x1 + (i128)2 * t_.Q.b3 * (i128)x2;
            int tv = std::min(valuation_capped(gx, p, j), valuation_capped(gy, p, j));
            if (j >= 2 * tv + 1) return pow_u128_checked(p, (m - j) + tv);
        }
        u128 cnt = 0;
        u64 pj = pw[j];
        for (u64 t1 = 0; t1 < p; ++t1) {
            u64 y1 = x1 + t1 * pj;
            for (u64 t2 = 0; t2 < p; ++t2) {
                u64 y2 = x2 + t2 * pj;
                if (a1 && mod_pos(evaluate(t_.L1, (i64)y1, (i64)y2), pw[std::min(j + 1, n1)]) != 0)
                    continue;
                if (a2 && mod_pos(evaluate(t_.L2, (i64)y1, (i64)y2), pw[std::min(j + 1, n2)]) != 0)
                    continue;
                if (a3 && mod_pos(evaluate(t_.Q, (i64)y1, (i64)y2), pw[std::min(j + 1, n3)]) != 0)
                    continue;
                cnt += rec(j + 1, y1, y2);
            }
        }
        return cnt;
    };

    u128 total = 0;
    for (u64 t1 = 0; t1 < p; ++t1)
        for (u64 t2 = 0; t2 < p; ++t2) {
            if (t1 == 0 && t2 == 0) continue;
            if (n1 > 0 && mod_pos(evaluate(t_.L1, (i64)t1, (i64)t2), p) != 0) continue;
            if (n2 > 0 && mod_pos(evaluate(t_.L2, (i64)t1, (i64)t2), p) != 0) continue;
            if (n3 > 0 && mod_pos(evaluate(t_.Q, (i64)t1, (i64)t2), p) != 0) continue;
            total += rec(1, t1, t2);
        }
    star_cache_.emplace(key, total);
    return total;
}

u128 LocalCounter::rho_star_count(u64 p, int n1, int n2, int n3) {
    if (n1 < 0 || n2 < 0 || n3 < 0) throw std::invalid_argument("negative exponent");
    if (n1 == 0 && n2 == 0 && n3 == 0) return 1;
    if (!is_bad_prime(p)) {
        int chi = kronecker(t_.delta, (i64)p);
        if (n2 == 0 && n3 == 0) return pow_u128_checked(p, n1) - pow_u128_checked(p, n1 - 1);
        if (n1 == 0 && n3 == 0) return pow_u128_checked(p, n2) - pow_u128_checked(p, n2 - 1);
        if (n1 == 0 && n2 == 0) {
            u128 phi = pow_u128_checked(p, n3) - pow_u128_checked(p, n3 - 1);
            return phi * (u128)(1 + chi);
        }
        return 0;  // some resultant would need positive valuation
    }
    u128 cmin = star_count_minimal_box(p, n1, n2, n3);
    if (cmin == 0) return 0;
    int m = std::max({n1, n2, n3});
    u128 scale = pow_u128_checked(p, 2 * (n1 + n2 + n3 - m));
    if (cmin > (u128)-1 / scale) throw std::overflow_error("rho* count exceeds 128 bits");
    return cmin * scale;
}

double LocalCounter::rho_star_density(u64 p, int n1, int n2, int n3) {
    if (n1 == 0 && n2 == 0 && n3 == 0) return 1.0;
    double dp = (double)p;
    if (!is_bad_prime(p)) {
        int chi = kronecker(t_.delta, (i64)p);
        // density = count / p^{2 sum n}
        if (n2 == 0 && n3 == 0) return (1.0 - 1.0 / dp) / std::pow(dp, n1);
        if (n1 == 0 && n3 == 0) return (1.0 - 1.0 / dp) / std::pow(dp, n2);
        if (n1 == 0 && n2 == 0) return (1.0 - 1.0 / dp) * (1 + chi) / std::pow(dp, n3);
        return 0.0;
    }
    u128 cmin = star_count_minimal_box(p, n1, n2, n3);
    if (cmin == 0) return 0.0;
    int m = std::max({n1, n2, n3});
    return (double)cmin / std::pow(dp, 2 * m);
}

u128 LocalCounter::rho_count(u64 p, int v1, int v2, int v3) {
    int K = std::max({v1, v2, (v3 + 1) / 2});
    u128 total = 0;
    for (int k = 0; k <= K; ++k) {
        int s1 = std::max(v1 - k, 0), s2 = std::max(v2 - k, 0), s3 = std::max(v3 - 2 * k, 0);
        int mk = 2 * (std::min(v1, k) + std::min(v2, k) + std::min(v3, 2 * k) - k);
        if (mk < 0) throw std::logic_error("negative exponent in k-sum");
        u128 star = rho_star_count(p, s1, s2, s3);
        if (star == 0) continue;
        u128 f = pow_u128_checked(p, mk);
        if (star > (u128)-1 / f) throw std::overflow_error("rho count exceeds 128 bits");
        total += star * f;
    }
    return total;
}

double LocalCounter::rho_density(u64 p, int v1, int v2, int v3) {
    int K = std::max({v1, v2, (v3 + 1) / 2});
    double total = 0;
    for (int k = 0; k <= K; ++k) {
        int s1 = std::max(v1 - k, 0), s2 = std::max(v2 - k, 0), s3 = std::max(v3 - 2 * k, 0);
        int mk = 2 * (std::min(v1, k) + std::min(v2, k) + std::min(v3, 2 * k) - k);
        double star = rho_star_density(p, s1, s2, s3);
        if (star == 0) continue;
        int e = mk + 2 * (s1 + s2 + s3) - 2 * (v1 + v2 + v3);
        total += star * std::pow((double)p, e);
    }
    return total;
}

Rational LocalCounter::rho_dagger(u64 p, int v1, int v2, int v3) {
    if (!t_.is_primitive())
        throw std::invalid_argument("exact-valuation density requires primitive forms");
    Rational total;
    for (int s1 = 0; s1 <= 1; ++s1)
        for (int s2 = 0; s2 <= 1; ++s2)
            for (int s3 = 0; s3 <= 1; ++s3) {
                int n1 = v1 + s1, n2 = v2 + s2, n3 = v3 + s3;
                int sign = (s1 + s2 + s3) % 2 == 0 ? 1 : -1;
                Rational term;
                if (n1 == 0 && n2 == 0 && n3 == 0) {
                    term = Rational(1) - Rational(1, (i128)p * p);
                } else {
                    u128 c = rho_star_count(p, n1, n2, n3);
                    if (c > (u128)INT64_MAX) throw std::overflow_error("rho* count too large");
                    i128 den = (i128)1;
                    for (int i = 0; i < 2 * (n1 + n2 + n3); ++i) den = mul128_checked(den, (i128)p);
                    term = Rational((i128)c, den);
                }
                total += sign == 1 ? term : -term;
            }
    return total;
}

double LocalCounter::rho_dagger_density(u64 p, int v1, int v2, int v3) {
    double total = 0;
    for (int s1 = 0; s1 <= 1; ++s1)
        for (int s2 = 0; s2 <= 1; ++s2)
            for (int s3 = 0; s3 <= 1; ++s3) {
                int n1 = v1 + s1, n2 = v2 + s2, n3 = v3 + s3;
                double sign = (s1 + s2 + s3) % 2 == 0 ? 1.0 : -1.0;
                double term;
                if (n1 == 0 && n2 == 0 && n3 == 0)
                    term = 1.0 - 1.0 / ((double)p * p);
                else
                    term = rho_star_density(p, n1, n2, n3);
                total += sign * term;
            }
    return total;
}

RhoValue rho_prime_power(u64 p, int v1, int v2, int v3, LocalCounter& counter) {
    if (!counter.triple().is_primitive())
        throw std::invalid_argument("prime-power evaluation requires primitive forms");
    u128 count = counter.rho_count(p, v1, v2, v3);
    u64 modulus = pow_u64_checked(p, v1 + v2 + v3);
    return {count, modulus, density_of(count, modulus)};
}

RhoValue rho_multiplicative(const TripleIndex& d, LocalCounter& counter) {
    u64 P = checked_product3(d.d1, d.d2, d.d3);
    const FormTriple& t = counter.triple();
    TripleIndex dp = t.is_primitive() ? d : reduce_index(d, t);
    LocalCounter& prim = counter.primitive_counter();

    std::vector<u64> primes;
    for (u64 comp : {dp.d1, dp.d2, dp.d3})
        for (auto& [p, e] : factorize(comp)) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    u128 count = 1;
    for (u64 p : primes) {
        u128 c = prim.rho_count(p, v_p(dp.d1, p), v_p(dp.d2, p), v_p(dp.d3, p));
        if (c == 0) {
            count = 0;
            break;
        }
        if (count > (u128)-1 / c) throw std::overflow_error("rho count exceeds 128 bits");
        count *= c;
    }
    u64 Pp = checked_product3(dp.d1, dp.d2, dp.d3);
    Rational normalized = density_of(count, Pp);
    u128 scale = (u128)(P / Pp) * (P / Pp);
    return {count * scale, P, normalized};
}

TripleIndex reduce_index(const TripleIndex& d, const FormTriple& t) {
    TripleIndex dp;
    dp.d1 = d.d1 / (u64)gcd64((i64)d.d1, t.ell1);
    dp.d2 = d.d2 / (u64)gcd64((i64)d.d2, t.ell2);
    dp.d3 = d.d3 / (u64)gcd64((i64)d.d3, t.q);
    return dp;
}

ReduceResult rho_nonprimitive_reduce(const TripleIndex& d, const FormTriple& t, u64 bound) {
    ReduceResult r;
    r.d_prime = reduce_index(d, t);
    r.original_density = rho_bruteforce(d, t, bound).normalized;
    r.reduced_density = rho_bruteforce(r.d_prime, t.primitive_triple(), bound).normalized;
    return r;
}

u64 delta_D(const TripleIndex& D, const FormTriple& t, u64 bound) {
    u64 P = checked_product3(D.d1, D.d2, D.d3);
    if (P > bound) throw std::invalid_argument("modulus exceeds brute-force bound");
    ColumnTable ct = build_column_table(D, t);
    u64 g = P;  // the origin lies in Lambda(D)
    for (u64 x1 = 0; x1 < P && g > 1; ++x1) {
        const Progression& cp = ct.cols[x1 % ct.period];
        if (!cp.ok) continue;
        u64 n = P / cp.m;
        u64 gx = x1 == 0 ? P : (u64)gcd64((i64)x1, (i64)P);
        if (D.d3 == 1) {
            for (u64 k = 0; k < n && g > 1; ++k) {
                u64 x2 = cp.r + k * cp.m;
                g = (u64)gcd64((i64)g, (i64)gcd64((i64)gx, x2 == 0 ? (i64)P : (i64)x2));
            }
        } else {
            u64 q = mod_pos(evaluate(t.Q, (i64)x1, (i64)cp.r), D.d3);
            u64 dq = mod_pos((i128)t.Q.b3 * ((i128)2 * cp.r * cp.m + (i128)cp.m * cp.m) +
                                 (i128)t.Q.c3 * x1 * cp.m,
                             D.d3);
            u64 dd = mod_pos((i128)2 * t.Q.b3 * cp.m % (i128)D.d3 * (i128)cp.m, D.d3);
            for (u64 k = 0; k < n && g > 1; ++k) {
                if (q == 0) {
                    u64 x2 = cp.r + k * cp.m;
                    g = (u64)gcd64((i64)g, (i64)gcd64((i64)gx, x2 == 0 ? (i64)P : (i64)x2));
                }
                q += dq;
                if (q >= D.d3) q -= D.d3;
                dq += dd;
                if (dq >= D.d3) dq -= D.d3;
            }
        }
    }
    return g;
}

u64 delta_lower_bound(const TripleIndex& D, const FormTriple& t) {
    u64 g13 = (u64)gcd64((i64)D.d1, (i64)D.d3);
    u64 g23 = (u64)gcd64((i64)D.d2, (i64)D.d3);
    if (mu(g13) == 0 || mu(g23) == 0)
        throw std::invalid_argument("(D1,D3) and (D2,D3) must be squarefree");
    u64 g12 = (u64)gcd64((i64)D.d1, (i64)D.d2);
    u64 t13 = g13 / (u64)gcd64((i64)g13, t.delta13);
    u64 t23 = g23 / (u64)gcd64((i64)g23, t.delta23);
    u64 t12 = g12 / (u64)gcd64((i64)g12, t.delta12);
    return (u64)lcm64(lcm64((i64)t13, (i64)t23), (i64)t12);
}

static std::map<u64, std::array<int, 3>> merged_valuations(const TripleIndex& D) {
    std::map<u64, std::array<int, 3>> m;
    u64 comps[3] = {D.d1, D.d2, D.d3};
    for (int i = 0; i < 3; ++i)
        for (auto& [p, e] : factorize(comps[i])) m[p][i] += e;
    return m;
}

u64 psi(const TripleIndex& Dp) {
    u64 r = 1;
    for (auto& [p, v] : merged_valuations(Dp)) {
        int e = std::max({v[0], v[1], (v[2] + 1) / 2});
        r = checked_product3(r, pow_u64_checked(p, e), 1);
    }
    return r;
}

u64 psi0(const TripleIndex& D) {
    u64 r = 1;
    for (auto& [p, v] : merged_valuations(D)) {
        int bmax = std::max({v[0], v[1], (v[2] + 1) / 2});
        int best = 0;
        for (int b = 0; b <= bmax; ++b)
            best = std::max(best,
                            std::min(b, v[0]) + std::min(b, v[1]) + std::min(2 * b, v[2]) - 2 * b);
        r = checked_product3(r, pow_u64_checked(p, best), 1);
    }
    return r;
}

static u64 gcd_u64_i128(u64 a, i128 b) {
    if (a == 0) throw std::invalid_argument("gcd with zero modulus");
    u64 r = (u64)(abs128(b) % (i128)a);
    return std::gcd(a, r);
}

u64 a_factor(const TripleIndex& D, const FormTriple& t) {
    u64 f1 = (u64)gcd64((i64)D.d1, t.delta12);
    u64 f2 = (u64)gcd64((i64)D.d2, t.delta12);
    i128 big = mul128_checked((i128)t.delta, (i128)gcd64(t.delta13, t.delta23));
    u64 f3 = gcd_u64_i128(D.d3, big);
    return checked_product3(f1, f2, f3);
}

u64 a_prime_factor(const TripleIndex& D, const FormTriple& t) {
    auto exact_div = [](i128 n, i128 d) {
        if (d == 0 || n % d != 0) throw std::logic_error("resultant not divisible by content");
        return n / d;
    };
    i128 d12 = exact_div((i128)t.delta12, (i128)t.ell1 * t.ell2);
    i128 d13 = exact_div((i128)t.delta13, (i128)t.ell1 * t.ell1 * t.q);
    i128 d23 = exact_div((i128)t.delta23, (i128)t.ell2 * t.ell2 * t.q);
    i128 dq = exact_div((i128)t.delta, (i128)t.q * t.q);
    TripleIndex Dp = reduce_index(D, t);
    u64 f1 = gcd_u64_i128(Dp.d1, d12);
    u64 f2 = gcd_u64_i128(Dp.d2, d12);
    i128 big = mul128_checked(dq, gcd128(d13, d23));
    u64 f3 = gcd_u64_i128(D.d3, big);
    return checked_product3(f1, f2, f3);
}

}  // namespace quartdiv
