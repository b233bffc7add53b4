#include "quartdiv/densities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quartdiv {

namespace {

u64 pow_u64(u64 p, int e) {
    u64 r = 1;
    while (e-- > 0) r *= p;
    return r;
}

u128 pow_u128(u64 p, int e) {
    u128 r = 1;
    while (e-- > 0) r *= (u128)p;
    return r;
}

double one_minus_inv_cubed(u64 p) {
    double q = 1.0 - 1.0 / (double)p;
    return q * q * q;
}

// visit all (nu1, nu2, nu3) with nu1+nu2+nu3 == s
template <typename F>
void for_shell(int s, F&& f) {
    for (int v1 = 0; v1 <= s; ++v1)
        for (int v2 = 0; v2 <= s - v1; ++v2) f(v1, v2, s - v1 - v2);
}

// Empirical geometric tail. Shells can decay as slowly as p^(-s/2) (the
// diagonal nu = (v, v, 2v) carries density p^(-s/2) exactly), so the ratio is
// calibrated from the last computed shells and floored at p^(-1/2), with a
// safety factor of two.
double envelope_tail(const std::vector<double>& shells, u64 p) {
    if (shells.empty()) return 0.0;
    double last = shells.back();
    if (last <= 0.0) return 0.0;
    double r = 1.0 / std::sqrt((double)p);
    for (size_t i = shells.size() >= 4 ? shells.size() - 3 : 1; i < shells.size(); ++i)
        if (shells[i - 1] > 0.0) r = std::max(r, shells[i] / shells[i - 1]);
    r = std::min(r, 0.95);
    return 2.0 * last * r / (1.0 - r);
}

std::array<int, 3> valuations(const TripleIndex& n, u64 p) {
    return {v_p(n.d1, p), v_p(n.d2, p), v_p(n.d3, p)};
}

void check_divides(const TripleIndex& d, const TripleIndex& D) {
    if (D.d1 % d.d1 != 0 || D.d2 % d.d2 != 0 || D.d3 % d.d3 != 0)
        throw std::invalid_argument("componentwise divisibility d | D violated");
}

// shared shell-summation driver; term(v1,v2,v3) already normalized
template <typename Term>
DensityReport shell_sum(u64 p, int nu_max, Term&& term, double zero_term) {
    double total = zero_term;
    std::vector<double> shells{zero_term};
    for (int s = 1; s <= nu_max; ++s) {
        double shell = 0.0;
        for_shell(s, [&](int v1, int v2, int v3) { shell += term(v1, v2, v3); });
        total += shell;
        shells.push_back(shell);
        if (s >= 2 && shell < 1e-17 * total) break;
    }
    double pref = one_minus_inv_cubed(p);
    DensityReport rep;
    rep.value = pref * total;
    rep.nu_cutoff = nu_max;
    rep.tail_estimate = pref * envelope_tail(shells, p);
    return rep;
}

}  // namespace

DensityReport sigma_p(u64 p, LocalCounter& counter, int nu_max) {
    if (nu_max < 0) throw std::invalid_argument("nu_max must be nonnegative");
    return shell_sum(
        p, nu_max, [&](int v1, int v2, int v3) { return counter.rho_density(p, v1, v2, v3); },
        1.0);
}

DensityReport sigma_p_dD(u64 p, const TripleIndex& d, const TripleIndex& D, LocalCounter& counter,
                         int nu_max) {
    check_divides(d, D);
    auto lam = valuations(d, p);
    auto mu = valuations(D, p);
    auto term = [&](int v1, int v2, int v3) {
        int N1 = std::max(mu[0], v1 + lam[0]);
        int N2 = std::max(mu[1], v2 + lam[1]);
        int N3 = std::max(mu[2], v3 + lam[2]);
        return counter.rho_density(p, N1, N2, N3);
    };
    return shell_sum(p, nu_max, term, term(0, 0, 0));
}

DensityReport sigma_star_p_dD(u64 p, const TripleIndex& d, const TripleIndex& D,
                              LocalCounter& counter, int nu_max) {
    check_divides(d, D);
    auto lam = valuations(d, p);
    auto mu = valuations(D, p);
    bool p_divides_D = (mu[0] + mu[1] + mu[2]) > 0;
    auto term = [&](int v1, int v2, int v3) {
        int N1 = std::max(mu[0], v1 + lam[0]);
        int N2 = std::max(mu[1], v2 + lam[1]);
        int N3 = std::max(mu[2], v3 + lam[2]);
        return counter.rho_star_density(p, N1, N2, N3);
    };
    double zero_term = p_divides_D ? term(0, 0, 0) : 1.0 - 1.0 / ((double)p * (double)p);
    return shell_sum(p, nu_max, term, zero_term);
}

u64 count_S_lambda(i64 A, u64 p, int n, int lambda) {
    if (n <= 0) return 1;
    i64 pn = (i64)pow_u64(p, n);
    u64 a_mod = (u64)(((A % pn) + pn) % pn);
    int alpha = 0;
    if (a_mod == 0) {
        alpha = n;
    } else {
        u64 m = a_mod;
        while (m % p == 0) {
            m /= p;
            ++alpha;
        }
    }
    if (lambda >= n) return alpha >= n ? pow_u64(p, 2 * n) : 0;
    if (alpha >= n) {
        // exact pair count for A == 0 mod p^n: v(x) + v(y) >= n - lambda
        int m = n - lambda;
        u64 total = 0;
        for (int a = 0; a <= n; ++a) {
            u64 cx = (a < n) ? pow_u64(p, n - a) - pow_u64(p, n - a - 1) : 1;
            int b = m - a;
            u64 cy = (b <= 0) ? (u64)pn : pow_u64(p, n - b);
            total += cx * cy;
        }
        return total;
    }
    if (alpha < lambda) return 0;
    return pow_u64(p, n + lambda - 1) * (p - 1) * (u64)(1 + alpha - lambda);
}

Rational n_lambda_mu_oracle(u64 p, int n, const LocalIndex& idx, const FormTriple& t) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    u128 outer = pow_u128(p, 2 * n);
    if (outer > (u128)1000000) throw std::invalid_argument("p^(2n) exceeds the feasibility bound");
    for (int i = 0; i < 3; ++i) {
        if (idx.mu[i] > n)
            throw std::invalid_argument("mu_i > n: divisibility not determined at level p^n");
        if (idx.lambda[i] < 0 || idx.mu[i] < 0 || idx.lambda[i] > idx.mu[i])
            throw std::invalid_argument("need 0 <= lambda_i <= mu_i");
    }
    i64 pn = (i64)pow_u64(p, n);
    u64 mu_mod[3] = {pow_u64(p, idx.mu[0]), pow_u64(p, idx.mu[1]), pow_u64(p, idx.mu[2])};
    u128 total = 0;
    for (i64 x1 = 0; x1 < pn; ++x1)
        for (i64 x2 = 0; x2 < pn; ++x2) {
            i64 vals[3] = {(i64)(evaluate(t.L1, x1, x2) % pn), (i64)(evaluate(t.L2, x1, x2) % pn),
                           (i64)(evaluate(t.Q, x1, x2) % pn)};
            u128 prod = 1;
            bool ok = true;
            for (int i = 0; i < 3 && ok; ++i) {
                i64 v = ((vals[i] % pn) + pn) % pn;
                if ((u64)v % mu_mod[i] != 0) {
                    ok = false;
                    break;
                }
                prod *= (u128)count_S_lambda(v, p, n, idx.lambda[i]);
            }
            if (ok) total += prod;
        }
    int denom_exp = 5 * n + idx.lambda[0] + idx.lambda[1] + idx.lambda[2];
    i128 denom = 1;
    for (int i = 0; i < denom_exp; ++i) denom = mul128_checked(denom, (i128)p);
    return Rational((i128)total, denom);
}

double g_prime_power(const MultiplicativeFn& h, u64 p, int k) {
    double g = 0.0;
    for (int j = 0; j <= k; ++j) g += (double)(k - j + 1) * h.value_prime_power(p, j);
    return g;
}

namespace {

// primes <= cutoff, merged with the always-included bad primes
std::vector<u64> prime_list(LocalCounter& counter, u64 prime_cutoff) {
    std::vector<u64> ps;
    if (prime_cutoff >= 2) {
        ensure_sieve_bound(prime_cutoff);
        for (u64 p : global_sieve().primes()) {
            if (p > prime_cutoff) break;
            ps.push_back(p);
        }
        for (u64 b : counter.bad_primes())
            if (b > prime_cutoff) ps.push_back(b);
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    }
    return ps;
}

// empirical tail of the log of the remaining product from the envelope
// |factor - 1| <= c / p^2, c calibrated over the top computed primes
double prime_tail_rel(const std::vector<std::pair<u64, double>>& factors, u64 cutoff) {
    if (cutoff < 3) return 1.0;
    double c = 0.0;
    for (const auto& [p, f] : factors)
        if (p > cutoff / 2 && p <= cutoff)
            c = std::max(c, std::fabs(f - 1.0) * (double)p * (double)p);
    return c / ((double)cutoff * std::log((double)cutoff));
}

}  // namespace

DensityReport constant_C(LocalCounter& counter, u64 prime_cutoff, int nu_max, bool accelerate) {
    const FormTriple& t = counter.triple();
    CharacterData chi{t.delta};
    auto primes = prime_list(counter, prime_cutoff);

    double log_value = 0.0;
    double rel_nu_tail = 0.0;
    double log_chi_partial = 0.0;  // sum of log(1 - chi(p)/p) over computed primes
    std::vector<std::pair<u64, double>> adj_factors;
    adj_factors.reserve(primes.size());
    for (u64 p : primes) {
        double dp = (double)p;
        double s = 1.0;
        std::vector<double> terms{1.0};
        for (int v = 1; v <= nu_max; ++v) {
            double term = counter.rho_density(p, v, 0, 0) + counter.rho_density(p, 0, v, 0) +
                          counter.rho_density(p, 0, 0, v);
            s += term;
            terms.push_back(term);
        }
        double factor = one_minus_inv_cubed(p) * s;
        rel_nu_tail += envelope_tail(terms, p) / std::max(s, 1e-300);
        double adj = 1.0 - (double)chi.chi((i64)p) / dp;
        log_chi_partial += std::log(adj);
        adj_factors.emplace_back(p, factor * adj);
        log_value += std::log(accelerate ? factor * adj : factor);
    }

    double l_value = l_one_chi(chi, 1e-9).series_value;

    DensityReport rep;
    rep.nu_cutoff = nu_max;
    rep.prime_cutoff = prime_cutoff;
    rep.accelerated = accelerate;
    rep.value = std::exp(log_value) * (accelerate ? l_value : 1.0);

    double rel_prime_tail = prime_tail_rel(adj_factors, prime_cutoff);
    if (!accelerate && !primes.empty()) {
        // gap between the raw truncated product and the chi-completed value
        rel_prime_tail += std::fabs(std::log(l_value) + log_chi_partial);
    }
    rep.tail_estimate = std::fabs(rep.value) * (rel_nu_tail + rel_prime_tail);
    return rep;
}

DensityReport sigma_euler_product(LocalCounter& counter, const TripleIndex& d,
                                  const TripleIndex& D, bool starred, u64 prime_cutoff, int nu_max,
                                  bool accelerate) {
    CharacterData chi{counter.triple().delta};
    auto primes = prime_list(counter, prime_cutoff);
    double log_value = 0.0;
    double rel_nu_tail = 0.0;
    double log_chi_partial = 0.0;
    std::vector<std::pair<u64, double>> adj_factors;
    adj_factors.reserve(primes.size());
    for (u64 p : primes) {
        DensityReport local = starred ? sigma_star_p_dD(p, d, D, counter, nu_max)
                                      : sigma_p_dD(p, d, D, counter, nu_max);
        if (local.value <= 0.0) throw std::runtime_error("nonpositive local density factor");
        rel_nu_tail += local.tail_estimate / local.value;
        double adj = 1.0 - (double)chi.chi((i64)p) / (double)p;
        log_chi_partial += std::log(adj);
        adj_factors.emplace_back(p, local.value * adj);
        log_value += std::log(accelerate ? local.value * adj : local.value);
    }
    double l_value = l_one_chi(chi, 1e-9).series_value;
    DensityReport rep;
    rep.nu_cutoff = nu_max;
    rep.prime_cutoff = prime_cutoff;
    rep.accelerated = accelerate;
    rep.value = std::exp(log_value) * (accelerate ? l_value : 1.0);
    double rel_prime_tail = prime_tail_rel(adj_factors, prime_cutoff);
    if (!accelerate && !primes.empty())
        rel_prime_tail += std::fabs(std::log(l_value) + log_chi_partial);
    rep.tail_estimate = std::fabs(rep.value) * (rel_nu_tail + rel_prime_tail);
    return rep;
}

DensityReport constant_C_star(LocalCounter& counter, const MultiplicativeFn& h, u64 prime_cutoff,
                              int nu_max) {
    auto primes = prime_list(counter, prime_cutoff);
    double log_value = 0.0;
    double rel_nu_tail = 0.0;
    std::vector<std::pair<u64, double>> factors;
    factors.reserve(primes.size());
    for (u64 p : primes) {
        double total = 0.0;
        std::vector<double> shells;
        for (int s = 0; s <= nu_max; ++s) {
            double gs = g_prime_power(h, p, s);
            double shell = 0.0;
            if (gs != 0.0) {
                for_shell(s, [&](int v1, int v2, int v3) {
                    shell += counter.rho_dagger_density(p, v1, v2, v3);
                });
                shell *= gs;
            }
            total += shell;
            shells.push_back(std::fabs(shell));
            if (s >= 2 && std::fabs(shell) < 1e-17 * std::fabs(total)) break;
        }
        double factor = one_minus_inv_cubed(p) * total;
        if (factor <= 0.0) throw std::runtime_error("nonpositive local factor in C*");
        rel_nu_tail += envelope_tail(shells, p) / std::fabs(total);
        factors.emplace_back(p, factor);
        log_value += std::log(factor);
    }
    DensityReport rep;
    rep.nu_cutoff = nu_max;
    rep.prime_cutoff = prime_cutoff;
    rep.accelerated = false;
    rep.value = std::exp(log_value);
    rep.tail_estimate =
        std::fabs(rep.value) * (rel_nu_tail + prime_tail_rel(factors, prime_cutoff));
    return rep;
}

}  // namespace quartdiv
