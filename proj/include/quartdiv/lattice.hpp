#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "quartdiv/arith.hpp"
#include "quartdiv/forms.hpp"
#include "quartdiv/numeric.hpp"

namespace quartdiv {

struct TripleIndex {
    u64 d1 = 1, d2 = 1, d3 = 1;
    u64 modulus() const { return d1 * d2 * d3; }
    bool operator==(const TripleIndex&) const = default;
};

struct RhoValue {
    u128 count = 0;
    u64 modulus = 1;           // d1*d2*d3
    Rational normalized;       // count / modulus^2
};

bool in_lambda(i64 x1, i64 x2, const TripleIndex& d, const FormTriple& t);

// Exact counts over the box [0, d1*d2*d3)^2 by direct enumeration
// (internally reduced to one period lcm(d1,d2,d3) and rescaled exactly).
// Throws when the modulus exceeds `bound`.
RhoValue rho_bruteforce(const TripleIndex& d, const FormTriple& t, u64 bound = 10000,
                        int workers = 1);
RhoValue rho_star_bruteforce(const TripleIndex& d, const FormTriple& t, u64 bound = 10000,
                             int workers = 1);
// both counts from a single sweep
std::pair<RhoValue, RhoValue> rho_pair_bruteforce(const TripleIndex& d, const FormTriple& t,
                                                  u64 bound = 10000, int workers = 1);

// Per-triple counter with closed forms at good primes, digit-DFS counting at
// bad primes (p | 2*delta*delta12*delta13*delta23*ell1*ell2*q), and caching.
class LocalCounter {
  public:
    explicit LocalCounter(const FormTriple& t);

    const FormTriple& triple() const { return t_; }
    bool is_bad_prime(u64 p) const;
    const std::vector<u64>& bad_primes() const { return bad_primes_; }

    // counter for the primitive parts; *this when already primitive
    LocalCounter& primitive_counter();

    // rho*(p^n1, p^n2, p^n3): count over [0, p^(n1+n2+n3))^2 with the
    // coprimality constraint. Exact; throws on 128-bit overflow.
    u128 rho_star_count(u64 p, int n1, int n2, int n3);
    // density rho*(p^n)/p^(2*sum n) as double (safe for large p/exponents)
    double rho_star_density(u64 p, int n1, int n2, int n3);

    // rho(p^nu) via the k-sum over rho* values
    u128 rho_count(u64 p, int nu1, int nu2, int nu3);
    double rho_density(u64 p, int nu1, int nu2, int nu3);

    // exact-valuation density with the convention value 1-1/p^2 at nu=0 shift
    Rational rho_dagger(u64 p, int nu1, int nu2, int nu3);
    double rho_dagger_density(u64 p, int nu1, int nu2, int nu3);

  private:
    FormTriple t_;
    std::vector<u64> bad_primes_;
    std::unique_ptr<LocalCounter> prim_;
    std::map<std::tuple<u64, int, int, int>, u128> star_cache_;  // minimal-box counts
    u128 star_count_minimal_box(u64 p, int n1, int n2, int n3);
};

// rho at a prime power through the Lemme-style k-sum; primitive forms required.
RhoValue rho_prime_power(u64 p, int nu1, int nu2, int nu3, LocalCounter& counter);

// rho(d) for arbitrary d via primitivity reduction + per-prime combination.
RhoValue rho_multiplicative(const TripleIndex& d, LocalCounter& counter);

struct ReduceResult {
    TripleIndex d_prime;
    Rational original_density;  // rho(d; L1,L2,Q)/(d1 d2 d3)^2
    Rational reduced_density;   // rho(d'; L1*,L2*,Q*)/(d1' d2' d3')^2
};
// index reduction only (no enumeration)
TripleIndex reduce_index(const TripleIndex& d, const FormTriple& t);
// with both densities evaluated by brute force for assertion
ReduceResult rho_nonprimitive_reduce(const TripleIndex& d, const FormTriple& t,
                                     u64 bound = 10000);

// largest delta with Lambda(D) contained in {x : delta | gcd(x1,x2)}
u64 delta_D(const TripleIndex& D, const FormTriple& t, u64 bound = 10000);
// lcm[(Di,Dj)/(Di,Dj,delta_ij)]; requires (D1,D3), (D2,D3) squarefree
u64 delta_lower_bound(const TripleIndex& D, const FormTriple& t);

u64 psi(const TripleIndex& Dp);
u64 psi0(const TripleIndex& D);
u64 a_factor(const TripleIndex& D, const FormTriple& t);
u64 a_prime_factor(const TripleIndex& D, const FormTriple& t);

}  // namespace quartdiv
