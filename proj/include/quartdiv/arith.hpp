#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "quartdiv/numeric.hpp"

namespace quartdiv {

// (prime, exponent) pairs with strictly increasing primes.
using Factorization = std::vector<std::pair<u64, int>>;

// Smallest-prime-factor sieve. Built once, queried concurrently.
class Sieve {
  public:
    explicit Sieve(u64 bound);
    u64 bound() const { return bound_; }
    const std::vector<u64>& primes() const { return primes_; }

    // factorization of 1 <= n <= bound via the SPF table
    void factorize_small(u64 n, Factorization& out) const;

  private:
    u64 bound_;
    std::vector<std::uint32_t> spf_;
    std::vector<u64> primes_;
};

// Process-wide sieve. Default bound 1e5; QUARTDIV_SIEVE_BOUND overrides.
// ensure_sieve_bound grows it when a run needs larger smooth coverage.
const Sieve& global_sieve();
void ensure_sieve_bound(u64 bound);

bool is_prime_u64(u64 n);  // deterministic Miller-Rabin
u64 pollard_rho(u64 n);    // a nontrivial factor of composite n

Factorization factorize(u64 n);
u64 tau_from_factorization(const Factorization& f);
u64 tau(u64 n);
u64 phi(u64 n);
int mu(u64 n);
int omega(u64 n);  // number of distinct prime factors
int v_p(u64 n, u64 p);

// all positive divisors of n given its factorization (unsorted)
std::vector<u64> divisors(const Factorization& f);

// full Kronecker symbol (a/n), including n <= 0 and even n
int kronecker(i64 a, i64 n);

struct CharacterData {
    i64 disc;  // disc Q; must not be a perfect square for L-value use
    int chi(i64 n) const { return kronecker(disc, n); }
};

// r_d(n) = sum_{k|n} chi(k); multiplicative in n
i64 r_disc(u64 n, const CharacterData& chi);

struct LOneResult {
    double series_value;   // partial sums of chi(n)/n with Abel tail control
    double euler_product;  // truncated product over primes <= 1e6
    double tol;
};

// L(1, chi_D) to absolute accuracy tol (series), with Euler-product cross-check.
LOneResult l_one_chi(const CharacterData& chi, double tol);

// Splitting identity for tau(n1*n2*n3); always equals tau(n1*n2*n3).
u64 split_tau_triple(u64 n1, u64 n2, u64 n3);

// Multiplicative function h given by sparse prime-power values
// (value 0 beyond the listed exponents). h(1) = 1 implicitly.
struct MultiplicativeFn {
    // h(p^k) for listed (p, k); missing entries are 0 for k >= 1
    std::map<std::pair<u64, int>, double> prime_power_values;

    double value_prime_power(u64 p, int k) const {
        if (k == 0) return 1.0;
        auto it = prime_power_values.find({p, k});
        return it == prime_power_values.end() ? 0.0 : it->second;
    }
    double value(u64 n) const;
    bool is_convolution_unit() const { return prime_power_values.empty(); }
};

// g = tau * h evaluated at n
double g_from_h(const MultiplicativeFn& h, u64 n);
double g_from_h(const MultiplicativeFn& h, const Factorization& f);

// partial sum of |h(d)| / d^(1/2 - eta0) for d <= n_max (reported, not enforced)
double h_prefix_sum(const MultiplicativeFn& h, double eta0, u64 n_max);

}  // namespace quartdiv
