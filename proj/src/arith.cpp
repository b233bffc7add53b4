#include "quartdiv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace quartdiv {

Sieve::Sieve(u64 bound) : bound_(bound) {
    if (bound_ < 3) bound_ = 3;
    if (bound_ > (u64)1 << 32) throw std::invalid_argument("sieve bound exceeds 2^32");
    spf_.assign(bound_ + 1, 0);
    for (u64 i = 2; i <= bound_; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = (std::uint32_t)i;
            primes_.push_back(i);
        }
        for (u64 p : primes_) {
            if (p > spf_[i] || i * p > bound_) break;
            spf_[i * p] = (std::uint32_t)p;
        }
    }
}

void Sieve::factorize_small(u64 n, Factorization& out) const {
    while (n > 1) {
        u64 p = spf_[n];
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
}

namespace {
std::mutex g_sieve_mutex;
std::shared_ptr<const Sieve> g_sieve;
// superseded sieves are retained so outstanding references stay valid
std::vector<std::shared_ptr<const Sieve>> g_retired_sieves;

u64 default_sieve_bound() {
    if (const char* env = std::getenv("QUARTDIV_SIEVE_BOUND")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v >= 100) return (u64)v;
        throw std::invalid_argument("QUARTDIV_SIEVE_BOUND is not a valid bound");
    }
    return 100000;
}
}  // namespace

const Sieve& global_sieve() {
    std::lock_guard<std::mutex> lock(g_sieve_mutex);
    if (!g_sieve) g_sieve = std::make_shared<Sieve>(default_sieve_bound());
    return *g_sieve;
}

void ensure_sieve_bound(u64 bound) {
    std::lock_guard<std::mutex> lock(g_sieve_mutex);
    if (!g_sieve) {
        g_sieve = std::make_shared<Sieve>(std::max(bound, default_sieve_bound()));
    } else if (g_sieve->bound() < bound) {
        g_retired_sieves.push_back(g_sieve);
        g_sieve = std::make_shared<Sieve>(bound);
    }
}

namespace {
u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}
}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    // Brent's cycle variant; deterministic restart schedule.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod_u64(v, v, n) + c) % n; };
        u64 q = 1;
        int steps = 0;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            q = mulmod_u64(q, diff, n);
            if (++steps % 64 == 0) {
                d = std::gcd(q, n);
                if (d != 1 && d != n) return d;
                if (d == n) break;
            }
        }
        d = std::gcd(q, n);
        if (d != 1 && d != n) return d;
    }
}

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize(0)");
    Factorization out;
    if (n == 1) return out;
    const Sieve& sv = global_sieve();
    if (n <= sv.bound()) {
        sv.factorize_small(n, out);
        return out;
    }
    u64 m = n;
    for (u64 p : sv.primes()) {
        if (p * p > m) break;
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (m > 1) {
        if (m <= sv.bound()) {
            sv.factorize_small(m, out);
        } else if (is_prime_u64(m)) {
            out.emplace_back(m, 1);
        } else {
            u64 r = isqrt_u64(m);
            if (r * r == m && is_prime_u64(r)) {
                out.emplace_back(r, 2);
            } else {
                // at most two large factors beyond the sieve
                u64 f = pollard_rho(m);
                u64 g = m / f;
                if (f > g) std::swap(f, g);
                if (!is_prime_u64(f) || !is_prime_u64(g))
                    throw std::domain_error("factorize: residual cofactor resists splitting");
                if (f == g)
                    out.emplace_back(f, 2);
                else {
                    out.emplace_back(f, 1);
                    out.emplace_back(g, 1);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 tau_from_factorization(const Factorization& f) {
    u64 t = 1;
    for (auto& [p, e] : f) t *= (u64)(e + 1);
    return t;
}

u64 tau(u64 n) { return tau_from_factorization(factorize(n)); }

u64 phi(u64 n) {
    u64 r = n;
    for (auto& [p, e] : factorize(n)) r -= r / p;
    return r;
}

int mu(u64 n) {
    auto f = factorize(n);
    for (auto& [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

int omega(u64 n) { return (int)factorize(n).size(); }

int v_p(u64 n, u64 p) {
    if (n == 0) throw std::invalid_argument("v_p(0)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> ds{1};
    for (auto& [p, e] : f) {
        size_t n = ds.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < n; ++i) ds.push_back(ds[i] * pk);
        }
    }
    return ds;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int k = 1;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v & 1) {
        i64 r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v;
        }
        if (v & 1) {
            i64 r = n % 8;
            if (r == 3 || r == 5) k = -k;
        }
        if ((a & 3) == 3 && (n & 3) == 3) k = -k;
        i64 t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? k : 0;
}

i64 r_disc(u64 n, const CharacterData& chi) {
    i64 r = 1;
    for (auto& [p, e] : factorize(n)) {
        int c = chi.chi((i64)p);
        i64 local;
        if (c == 1)
            local = e + 1;
        else if (c == 0)
            local = 1;
        else
            local = (e % 2 == 0) ? 1 : 0;
        r *= local;
    }
    return r;
}

LOneResult l_one_chi(const CharacterData& chi, double tol) {
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    if (is_perfect_square_i128((i128)chi.disc))
        throw std::invalid_argument("disc is a perfect square: principal character");
    i64 period = chi.disc < 0 ? -chi.disc : chi.disc;
    // Abel tail bound: |sum_{n>N} chi(n)/n| <= max partial sum / N <= period / N
    u64 N = (u64)std::min(1e8, std::max(1e4, 2.0 * (double)period / tol));
    double sum = 0.0, comp = 0.0;
    for (u64 n = 1; n <= N; ++n) {
        int c = chi.chi((i64)n);
        if (c == 0) continue;
        double term = (double)c / (double)n;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // cross-check: Euler product over primes <= 1e6
    const u64 pcut = 1000000;
    std::vector<bool> comp_flag(pcut + 1, false);
    double prod = 1.0;
    for (u64 i = 2; i <= pcut; ++i) {
        if (comp_flag[i]) continue;
        for (u64 j = i * i; j <= pcut; j += i) comp_flag[j] = true;
        int c = chi.chi((i64)i);
        if (c != 0) prod /= (1.0 - (double)c / (double)i);
    }
    return LOneResult{sum, prod, tol};
}

u64 split_tau_triple(u64 n1, u64 n2, u64 n3) {
    auto divs_of_gcd = [](u64 a, u64 b) { return divisors(factorize(std::gcd(a, b))); };
    std::vector<u64> d1s = divs_of_gcd(n2, n3);
    std::vector<u64> d2s = divs_of_gcd(n1, n3);
    std::vector<u64> d3s = divs_of_gcd(n1, n2);
    Rational acc(0);
    for (u64 d1 : d1s) {
        for (u64 d2 : d2s) {
            int m12 = mu(d1 * d2);
            if (m12 == 0) continue;
            if (n3 % (d1 * d2) != 0) continue;
            int w = omega(std::gcd(d1, n1)) + omega(std::gcd(d2, n2));
            for (u64 d3 : d3s) {
                int m3 = mu(d3);
                if (m3 == 0) continue;
                if (n1 % (d2 * d3) != 0 || n2 % (d1 * d3) != 0) continue;
                i128 num = (i128)m12 * m3 * (i128)(tau(n1 / (d2 * d3)) * tau(n2 / (d1 * d3)) *
                                                   tau(n3 / (d1 * d2)));
                acc += Rational(num, (i128)1 << w);
            }
        }
    }
    if (!acc.is_integer() || acc.sign() < 0)
        throw std::domain_error("split_tau_triple: non-integral result");
    return (u64)acc.num();
}

double MultiplicativeFn::value(u64 n) const {
    double v = 1.0;
    for (auto& [p, e] : factorize(n)) {
        v *= value_prime_power(p, e);
        if (v == 0.0) return 0.0;
    }
    return v;
}

double g_from_h(const MultiplicativeFn& h, const Factorization& f) {
    // multiplicative: g(p^e) = sum_{j<=e} tau(p^(e-j)) h(p^j)
    double g = 1.0;
    for (auto& [p, e] : f) {
        double local = 0.0;
        for (int j = 0; j <= e; ++j) local += (double)(e - j + 1) * h.value_prime_power(p, j);
        g *= local;
    }
    return g;
}

double g_from_h(const MultiplicativeFn& h, u64 n) { return g_from_h(h, factorize(n)); }

double h_prefix_sum(const MultiplicativeFn& h, double eta0, u64 n_max) {
    double s = 0.0;
    for (u64 d = 1; d <= n_max; ++d) {
        double v = h.value(d);
        if (v != 0.0) s += std::abs(v) / std::pow((double)d, 0.5 - eta0);
    }
    return s;
}

}  // namespace quartdiv
