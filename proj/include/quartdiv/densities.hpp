#pragma once

#include <array>

#include "quartdiv/arith.hpp"
#include "quartdiv/forms.hpp"
#include "quartdiv/lattice.hpp"
#include "quartdiv/numeric.hpp"

namespace quartdiv {

// Local exponent data at a fixed prime: lambda_i = v_p(d_i), mu_i = v_p(D_i).
struct LocalIndex {
    std::array<int, 3> lambda{0, 0, 0};
    std::array<int, 3> mu{0, 0, 0};
};

// Every density value travels with its truncation metadata.
struct DensityReport {
    double value = 0.0;
    int nu_cutoff = 0;
    u64 prime_cutoff = 0;
    double tail_estimate = 0.0;
    bool accelerated = false;
};

// sigma_p = (1-1/p)^3 * sum over nu of rho(p^nu)/p^(2*sum nu), truncated to
// shells sum(nu) <= nu_max. The tail is an empirical envelope calibrated from
// the last computed shell: shell(s) <= c*(s+1)^3*p^(-s).
DensityReport sigma_p(u64 p, LocalCounter& counter, int nu_max);

// Same sum with N_i = max{mu_i, nu_i + lambda_i} in place of nu_i,
// where lambda_i = v_p(d_i), mu_i = v_p(D_i). Requires d_i | D_i.
DensityReport sigma_p_dD(u64 p, const TripleIndex& d, const TripleIndex& D, LocalCounter& counter,
                         int nu_max);

// Starred variant. For v_p(D) >= 1 the summand is rho*(p^N)/p^(2*sum N);
// for v_p(D) = 0 the nu = 0 term is replaced by 1 - 1/p^2.
DensityReport sigma_star_p_dD(u64 p, const TripleIndex& d, const TripleIndex& D,
                              LocalCounter& counter, int nu_max);

// S_lambda(A; p^n) = #{(x,y) in (Z/p^n)^2 : p^lambda * x * y == A mod p^n}.
// Closed form p^(n+lambda)(1-1/p)(1+alpha-lambda) when alpha = v_p(A) < n
// (zero when alpha < lambda), p^(2n) when lambda >= n, and an exact
// valuation-pair count when A == 0 mod p^n.
u64 count_S_lambda(i64 A, u64 p, int n, int lambda);

// Finite-level oracle: N(p^n) = sum over x in (Z/p^n)^2 with
// p^(mu_1) | L1(x), p^(mu_2) | L2(x), p^(mu_3) | Q(x) of
// S_{lambda_1}(L1(x)) * S_{lambda_2}(L2(x)) * S_{lambda_3}(Q(x)),
// returned normalized as N(p^n) / p^(5n + lambda_1 + lambda_2 + lambda_3).
// Throws when p^(2n) > 10^6.
Rational n_lambda_mu_oracle(u64 p, int n, const LocalIndex& idx, const FormTriple& t);

// C = prod_p (1-1/p)^3 (1 + sum_{nu>=1} [rho(p^nu,1,1) + rho(1,p^nu,1)
//     + rho(1,1,p^nu)] / p^(2 nu)).
// When accelerate is set each factor is multiplied by (1 - chi(p)/p) with
// chi = kronecker(disc Q, .) and the truncated product by L(1, chi); the
// adjusted factors are 1 + O(1/p^2) so the product converges absolutely.
DensityReport constant_C(LocalCounter& counter, u64 prime_cutoff, int nu_max, bool accelerate);

// C* = prod_p (1-1/p)^3 sum_nu g(p^(nu1+nu2+nu3)) * rho_dagger_p(nu), with
// g = tau * h given through the sparse prime-power data of h.
DensityReport constant_C_star(LocalCounter& counter, const MultiplicativeFn& h, u64 prime_cutoff,
                              int nu_max);

// g(p^k) for g = tau * h, computed without forming p^k.
double g_prime_power(const MultiplicativeFn& h, u64 p, int k);

// Truncated Euler product of sigma_p(d,D) (or the starred variant) over
// primes <= prime_cutoff plus the bad primes. With accelerate, factors are
// multiplied by (1 - chi(p)/p) and the product by L(1, chi), as in constant_C.
DensityReport sigma_euler_product(LocalCounter& counter, const TripleIndex& d,
                                  const TripleIndex& D, bool starred, u64 prime_cutoff, int nu_max,
                                  bool accelerate);

}  // namespace quartdiv
