#include "quartdiv/sums.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace quartdiv {

namespace {

// largest integer strictly below num/den (den > 0)
i64 strict_below(const Rational& r) { return (i64)(ceil_div_i128(r.num(), r.den()) - 1); }
// smallest integer strictly above num/den
i64 strict_above(const Rational& r) { return (i64)(floor_div_i128(r.num(), r.den()) + 1); }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

struct Part {
    u128 int_sum = 0;
    Rational rat_sum;
    long double dbl_sum = 0.0L;
    u64 count = 0;
    std::map<i64, u128> buckets;  // keyed by max(|x1|,|x2|) for the primed sum

    void merge(const Part& o) {
        int_sum += o.int_sum;
        rat_sum += o.rat_sum;
        dbl_sum += o.dbl_sum;
        count += o.count;
        for (const auto& [k, v] : o.buckets) buckets[k] += v;
    }
};

// process rows in parallel; RowFn: void(Part&, const RowRange&)
template <typename RowFn>
Part sweep_rows(const std::vector<RowRange>& rows, int workers, RowFn&& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || rows.size() < 2) {
        Part p;
        for (const RowRange& r : rows) fn(p, r);
        return p;
    }
    size_t n = rows.size();
    size_t chunks = std::min<size_t>(workers, n);
    std::vector<Part> parts(chunks);
    std::vector<std::thread> pool;
    for (size_t c = 0; c < chunks; ++c) {
        size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
        pool.emplace_back([&, lo, hi, c] {
            for (size_t i = lo; i < hi; ++i) fn(parts[c], rows[i]);
        });
    }
    for (auto& t : pool) t.join();
    Part total;
    for (Part& p : parts) total.merge(p);
    return total;
}

struct FormValues {
    u64 n1, n2, n3;
};

FormValues values_at(const FormTriple& t, i64 x1, i64 x2) {
    i128 v1 = evaluate(t.L1, x1, x2);
    i128 v2 = evaluate(t.L2, x1, x2);
    i128 v3 = evaluate(t.Q, x1, x2);
    if (v1 <= 0 || v2 <= 0 || v3 <= 0)
        throw std::logic_error("nonpositive form value at an interior point");
    return {(u64)v1, (u64)v2, (u64)v3};
}

bool coprime_point(i64 x1, i64 x2) {
    return std::gcd(x1 < 0 ? -x1 : x1, x2 < 0 ? -x2 : x2) == 1;
}

struct Prepared {
    std::vector<RowRange> rows;
    RegionMetrics metrics;
    double log_norm;  // log(r' X), clamped above 0
    double Xd;
};

Prepared prepare(const SumRequest& req) {
    if (!(req.X > Rational(0))) throw std::invalid_argument("X must be positive");
    Prepared p{interior_rows(req.region, req.X), region_metrics(req.region, req.triple), 0.0,
               req.X.to_double()};
    double rpX = p.metrics.r_prime * p.Xd;
    p.log_norm = rpX > 1.0 ? std::log(rpX) : 0.0;
    if (!p.rows.empty()) {
        // cover every form value with the SPF sieve so factorization stays O(log n)
        double bound = p.metrics.r_prime_squared.to_double() * p.Xd * p.Xd + 2.0;
        ensure_sieve_bound(std::min<u64>((u64)bound, u64(1) << 27));
    }
    return p;
}

void finish(SumReport& rep, const Timer& timer) {
    rep.ratio = rep.predicted_main != 0.0 ? rep.value / rep.predicted_main : 0.0;
    rep.wall_time_ms = timer.ms();
}

void require_divides(const TripleIndex& d, const TripleIndex& D) {
    if (D.d1 % d.d1 != 0 || D.d2 % d.d2 != 0 || D.d3 % d.d3 != 0)
        throw std::invalid_argument("componentwise divisibility d | D violated");
}

// per-prime divisor data for the g(...;V) inner sums
struct PrimeDigit {
    double logp;
    int a1, a2, a3;            // v_p of the three form values
    std::vector<double> w;     // (1*h)(p^f) for f = 0..a1+a2+a3
};

// sum over d | n1 n2 n3 of (1*h)(d) restricted to V-membership of the
// log-vector of ((d,n1),(d,n2),(d,n3)) (dims log-normalized by L, L2 = 2L),
// optionally with a fixed extra coordinate (the primed variant).
// When h is the convolution unit every weight is 1; unit_count then holds the
// exact integer value.
struct GResult {
    double value = 0.0;
    u128 unit_count = 0;
};

GResult g_inner_sum(const FormValues& v, const MultiplicativeFn& h, bool unit, double L,
                    const Polytope& V, std::optional<double> extra_coord) {
    std::vector<PrimeDigit> digits;
    {
        Factorization f1 = factorize(v.n1), f2 = factorize(v.n2), f3 = factorize(v.n3);
        std::map<u64, std::array<int, 3>> merged;
        for (auto& [p, e] : f1) merged[p][0] += e;
        for (auto& [p, e] : f2) merged[p][1] += e;
        for (auto& [p, e] : f3) merged[p][2] += e;
        for (auto& [p, a] : merged) {
            PrimeDigit d;
            d.logp = std::log((double)p);
            d.a1 = a[0];
            d.a2 = a[1];
            d.a3 = a[2];
            int e = a[0] + a[1] + a[2];
            d.w.resize(e + 1);
            double acc = 0.0;
            for (int f = 0; f <= e; ++f) {
                acc += h.value_prime_power(p, f);
                d.w[f] = unit ? 1.0 : acc;
            }
            digits.push_back(std::move(d));
        }
    }
    GResult out;
    std::vector<double> coord(extra_coord ? 4 : 3);
    if (extra_coord) coord[3] = *extra_coord;
    auto dfs = [&](auto&& self, size_t i, double l1, double l2, double l3, double w) -> void {
        if (i == digits.size()) {
            coord[0] = L > 0 ? l1 / L : (l1 > 0 ? 2.0 : 0.0);
            coord[1] = L > 0 ? l2 / L : (l2 > 0 ? 2.0 : 0.0);
            coord[2] = L > 0 ? l3 / (2 * L) : (l3 > 0 ? 2.0 : 0.0);
            if (polytope_contains(V, coord, 1e-9)) {
                out.value += w;
                if (unit) ++out.unit_count;
            }
            return;
        }
        const PrimeDigit& d = digits[i];
        int e = d.a1 + d.a2 + d.a3;
        for (int f = 0; f <= e; ++f)
            self(self, i + 1, l1 + std::min(f, d.a1) * d.logp, l2 + std::min(f, d.a2) * d.logp,
                 l3 + std::min(f, d.a3) * d.logp, w * d.w[f]);
    };
    dfs(dfs, 0, 0.0, 0.0, 0.0, 1.0);
    return out;
}

}  // namespace

std::vector<RowRange> interior_rows(const ConvexPolygonRegion& R, const Rational& X) {
    const auto& vs = R.vertices();
    size_t k = vs.size();
    std::vector<Point2> sv(k);
    for (size_t i = 0; i < k; ++i) sv[i] = {X * vs[i][0], X * vs[i][1]};
    Rational ylo = sv[0][1], yhi = sv[0][1];
    for (const Point2& p : sv) {
        ylo = std::min(ylo, p[1]);
        yhi = std::max(yhi, p[1]);
    }
    std::vector<RowRange> rows;
    for (i64 y = strict_above(ylo); y <= strict_below(yhi); ++y) {
        Rational ry(y);
        std::optional<Rational> lower, upper;
        bool empty = false;
        for (size_t i = 0; i < k && !empty; ++i) {
            const Point2& A = sv[i];
            const Point2& B = sv[(i + 1) % k];
            Rational dx = B[0] - A[0], dy = B[1] - A[1];
            // interior of the CCW polygon: dx (y - Ay) - dy (x - Ax) > 0
            Rational rhs = dx * (ry - A[1]) + dy * A[0];
            if (dy.is_zero()) {
                if (!(dx * (ry - A[1]) > Rational(0))) empty = true;
            } else if (dy > Rational(0)) {
                Rational b = rhs / dy;
                if (!upper || b < *upper) upper = b;
            } else {
                Rational b = rhs / dy;
                if (!lower || b > *lower) lower = b;
            }
        }
        if (empty || !lower || !upper) continue;
        i64 lo = strict_above(*lower), hi = strict_below(*upper);
        if (lo <= hi) rows.push_back({y, lo, hi});
    }
    return rows;
}

u64 tau_V(const std::array<u64, 3>& n, double log_rprime_X, const Polytope& V) {
    if (V.dim != 3) throw std::invalid_argument("tau_V needs a 3-dimensional polytope");
    if (n[0] == 0 || n[1] == 0 || n[2] == 0) throw std::invalid_argument("tau_V needs n_i >= 1");
    if (V.halfspaces.empty() && log_rprime_X > 0.0) return tau(n[0]) * tau(n[1]) * tau(n[2]);
    std::array<std::vector<u64>, 3> divs;
    for (int i = 0; i < 3; ++i) divs[i] = divisors(factorize(n[i]));
    double L = log_rprime_X;
    auto coord = [&](u64 d, double scale) {
        if (d == 1) return 0.0;
        return L > 0 ? std::log((double)d) / (scale * L) : 2.0;
    };
    u64 count = 0;
    std::vector<double> t(3);
    for (u64 d1 : divs[0]) {
        t[0] = coord(d1, 1.0);
        for (u64 d2 : divs[1]) {
            t[1] = coord(d2, 1.0);
            for (u64 d3 : divs[2]) {
                t[2] = coord(d3, 2.0);
                if (polytope_contains(V, t, 1e-9)) ++count;
            }
        }
    }
    return count;
}

double main_term(SumKind kind, double constant, double vol_R, double vol_V, double X,
                 double log_base) {
    if (kind == SumKind::Tg_prime) return 4.0 * constant * vol_R * vol_V * std::pow(log_base, 4);
    return 2.0 * constant * vol_R * vol_V * X * X * std::pow(log_base, 3);
}

double predicted_main(SumKind kind, const SumRequest& req) {
    LocalCounter counter(req.triple);
    double vol_R = req.region.area().to_double();
    double Xd = req.X.to_double();
    auto metrics = region_metrics(req.region, req.triple);
    TripleIndex one{1, 1, 1};
    switch (kind) {
        case SumKind::T: {
            double C = constant_C(counter, req.prime_cutoff, req.nu_max, true).value;
            return main_term(kind, C, vol_R, 1.0, Xd, std::log(Xd));
        }
        case SumKind::S: {
            double prod =
                sigma_euler_product(counter, one, one, false, req.prime_cutoff, req.nu_max, true)
                    .value;
            return main_term(kind, prod, vol_R, polytope_volume(req.V).to_double(), Xd,
                             std::log(metrics.r_prime * Xd));
        }
        case SumKind::S_dD: {
            double prod = sigma_euler_product(counter, req.d, req.D, false, req.prime_cutoff,
                                              req.nu_max, true)
                              .value;
            return main_term(kind, prod, vol_R, polytope_volume(req.V).to_double(), Xd,
                             std::log(metrics.r_prime * Xd));
        }
        case SumKind::S_star: {
            double prod = sigma_euler_product(counter, req.d, req.D, true, req.prime_cutoff,
                                              req.nu_max, true)
                              .value;
            return main_term(kind, prod, vol_R, polytope_volume(req.V).to_double(), Xd,
                             std::log(metrics.r_prime * Xd));
        }
        case SumKind::Tg_star: {
            double Cs = constant_C_star(counter, req.h, req.prime_cutoff, req.nu_max).value;
            return main_term(kind, Cs, vol_R, polytope_volume(req.V).to_double(), Xd,
                             std::log(Xd));
        }
        case SumKind::Tg_prime: {
            if (req.Y < 2 || Rational((i128)req.Y) < req.X)
                throw std::invalid_argument("need 2 <= X <= Y");
            double Cs = constant_C_star(counter, req.h, req.prime_cutoff, req.nu_max).value;
            Polytope W = req.V;
            if (W.dim != 4) throw std::invalid_argument("primed sums need a 4-dimensional V");
            double u = std::log(Xd) / std::log((double)req.Y);
            // intersect with V0'(u): t_i <= t_4 (i<4), t_4 <= u
            for (int i = 0; i < 3; ++i) {
                HalfSpace hs;
                hs.n.assign(4, Rational(0));
                hs.n[i] = Rational(1);
                hs.n[3] = Rational(-1);
                hs.c = Rational(0);
                W.halfspaces.push_back(hs);
            }
            {
                HalfSpace hs;
                hs.n.assign(4, Rational(0));
                hs.n[3] = Rational(1);
                // rational upper bound >= u, accurate to ~1e-9
                hs.c = Rational((i128)std::llround(u * 1000000000.0), (i128)1000000000);
                W.halfspaces.push_back(hs);
            }
            return main_term(kind, Cs, vol_R, polytope_volume(W).to_double(), Xd,
                             std::log((double)req.Y));
        }
    }
    return 0.0;
}

SumReport sum_T(const SumRequest& req) {
    Timer timer;
    Prepared prep = prepare(req);
    Part part = sweep_rows(prep.rows, req.workers, [&](Part& p, const RowRange& r) {
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
            FormValues v = values_at(req.triple, x1, r.x2);
            p.int_sum += split_tau_triple(v.n1, v.n2, v.n3);
            ++p.count;
        }
    });
    SumReport rep;
    rep.exact_sum = Rational((i128)part.int_sum);
    rep.value = rep.exact_sum.to_double();
    rep.point_count = part.count;
    rep.predicted_main = req.predict ? predicted_main(SumKind::T, req) : 0.0;
    finish(rep, timer);
    return rep;
}

namespace {

SumReport sum_S_family(const SumRequest& req, bool coprime, SumKind kind) {
    Timer timer;
    require_divides(req.d, req.D);
    Prepared prep = prepare(req);
    Part part = sweep_rows(prep.rows, req.workers, [&](Part& p, const RowRange& r) {
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
            if (coprime && !coprime_point(x1, r.x2)) continue;
            if (!in_lambda(x1, r.x2, req.D, req.triple)) continue;
            FormValues v = values_at(req.triple, x1, r.x2);
            if (v.n1 % req.d.d1 != 0 || v.n2 % req.d.d2 != 0 || v.n3 % req.d.d3 != 0)
                throw std::logic_error("lattice membership does not divide the form values");
            p.int_sum +=
                tau_V({v.n1 / req.d.d1, v.n2 / req.d.d2, v.n3 / req.d.d3}, prep.log_norm, req.V);
            ++p.count;
        }
    });
    SumReport rep;
    rep.exact_sum = Rational((i128)part.int_sum);
    rep.value = rep.exact_sum.to_double();
    rep.point_count = part.count;
    rep.predicted_main = req.predict ? predicted_main(kind, req) : 0.0;
    finish(rep, timer);
    return rep;
}

}  // namespace

SumReport sum_S(const SumRequest& req) {
    SumRequest plain = req;
    plain.d = plain.D = TripleIndex{1, 1, 1};
    return sum_S_family(plain, false, SumKind::S);
}

SumReport sum_S_dD(const SumRequest& req) { return sum_S_family(req, false, SumKind::S_dD); }

SumReport sum_S_star(const SumRequest& req) { return sum_S_family(req, true, SumKind::S_star); }

SumReport sum_Tg_star(const SumRequest& req) {
    Timer timer;
    Prepared prep = prepare(req);
    bool unit = req.h.is_convolution_unit();
    bool full_box = req.V.halfspaces.empty() && req.V.dim == 3;
    Part part = sweep_rows(prep.rows, req.workers, [&](Part& p, const RowRange& r) {
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
            if (!coprime_point(x1, r.x2)) continue;
            FormValues v = values_at(req.triple, x1, r.x2);
            ++p.count;
            if (full_box) {
                if (unit) {
                    p.int_sum += split_tau_triple(v.n1, v.n2, v.n3);
                } else {
                    Factorization f1 = factorize(v.n1), f2 = factorize(v.n2), f3 = factorize(v.n3);
                    std::map<u64, int> merged;
                    for (auto& [q, e] : f1) merged[q] += e;
                    for (auto& [q, e] : f2) merged[q] += e;
                    for (auto& [q, e] : f3) merged[q] += e;
                    Factorization f(merged.begin(), merged.end());
                    p.dbl_sum += g_from_h(req.h, f);
                }
                continue;
            }
            GResult g = g_inner_sum(v, req.h, unit, prep.log_norm, req.V, std::nullopt);
            if (unit)
                p.int_sum += g.unit_count;
            else
                p.dbl_sum += g.value;
        }
    });
    SumReport rep;
    if (unit) {
        rep.exact_sum = Rational((i128)part.int_sum);
        rep.value = rep.exact_sum.to_double();
    } else {
        rep.exact = false;
        rep.value = (double)part.dbl_sum;
    }
    rep.point_count = part.count;
    rep.predicted_main = req.predict ? predicted_main(SumKind::Tg_star, req) : 0.0;
    finish(rep, timer);
    return rep;
}

SumReport sum_Tg_prime(const SumRequest& req) {
    Timer timer;
    if (req.Y < 2 || Rational((i128)req.Y) < req.X || req.X < Rational(2))
        throw std::invalid_argument("need 2 <= X <= Y");
    if (req.V.dim != 4) throw std::invalid_argument("primed sums need a 4-dimensional V");
    Prepared prep = prepare(req);
    double logY = std::log((double)req.Y);
    bool unit = req.h.is_convolution_unit();
    Part part = sweep_rows(prep.rows, req.workers, [&](Part& p, const RowRange& r) {
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) {
            if (!coprime_point(x1, r.x2)) continue;
            FormValues v = values_at(req.triple, x1, r.x2);
            i64 m = std::max(x1 < 0 ? -x1 : x1, r.x2 < 0 ? -r.x2 : r.x2);
            if (m < 1) continue;
            ++p.count;
            double extra = std::log((double)m) / logY;
            GResult g = g_inner_sum(v, req.h, unit, logY, req.V, extra);
            if (unit) {
                p.buckets[m] += g.unit_count;
                p.dbl_sum += (long double)(double)(u64)g.unit_count / ((long double)m * m);
            } else {
                p.dbl_sum += (long double)g.value / ((long double)m * m);
            }
        }
    });
    SumReport rep;
    rep.point_count = part.count;
    rep.value = (double)part.dbl_sum;
    if (unit) {
        try {
            Rational total;
            for (const auto& [m, c] : part.buckets)
                total += Rational((i128)c, (i128)m * (i128)m);
            rep.exact_sum = total;
            rep.value = total.to_double();
        } catch (const std::overflow_error&) {
            rep.exact = false;
        }
    } else {
        rep.exact = false;
    }
    rep.predicted_main = req.predict ? predicted_main(SumKind::Tg_prime, req) : 0.0;
    finish(rep, timer);
    return rep;
}

double m_x_v(const FormTriple& t, const ConvexPolygonRegion& R, const Rational& X,
             const Polytope& V, u64 budget) {
    if (V.dim != 3) throw std::invalid_argument("m_x_v needs a 3-dimensional polytope");
    auto metrics = region_metrics(R, t);
    double Xp = metrics.r_prime * X.to_double();
    if (Xp < 1.0) return 0.0;
    u64 d3max = (u64)std::floor(Xp);
    u64 y0 = (u64)std::floor(std::sqrt(Xp));
    if (y0 < 1) y0 = 1;
    if ((u128)y0 * y0 * d3max > budget) throw std::invalid_argument("triple-sum budget exceeded");
    double L = Xp > 1.0 ? std::log(Xp) : 0.0;
    LocalCounter counter(t);
    auto coord = [&](u64 d, double scale) {
        if (d == 1) return 0.0;
        return L > 0 ? std::log((double)d) / (scale * L) : 2.0;
    };
    double total = 0.0;
    std::vector<double> tv(3);
    for (u64 d1 = 1; d1 <= y0; ++d1) {
        tv[0] = coord(d1, 1.0);
        for (u64 d2 = 1; d2 <= y0; ++d2) {
            tv[1] = coord(d2, 1.0);
            for (u64 d3 = 1; d3 <= d3max; ++d3) {
                tv[2] = coord(d3, 2.0);
                if (!polytope_contains(V, tv, 1e-9)) continue;
                total += rho_multiplicative({d1, d2, d3}, counter).normalized.to_double();
            }
        }
    }
    return total;
}

double lod_discrepancy(const FormTriple& t, const ConvexPolygonRegion& R, u64 X, u64 V1, u64 V2,
                       u64 V3) {
    if (V1 < 1 || V2 < 1 || V3 < 1) throw std::invalid_argument("divisor bounds must be >= 1");
    std::vector<RowRange> rows = interior_rows(R, Rational((i128)X));
    std::vector<std::pair<i64, i64>> points;
    for (const RowRange& r : rows)
        for (i64 x1 = r.lo; x1 <= r.hi; ++x1) points.emplace_back(x1, r.x2);
    LocalCounter counter(t);
    Rational area = R.area();
    Rational X2 = Rational((i128)X) * Rational((i128)X);
    Rational total;
    for (u64 d1 = 1; d1 <= V1; ++d1)
        for (u64 d2 = 1; d2 <= V2; ++d2)
            for (u64 d3 = 1; d3 <= V3; ++d3) {
                TripleIndex d{d1, d2, d3};
                u64 count = 0;
                for (auto& [x1, x2] : points)
                    if (in_lambda(x1, x2, d, t)) ++count;
                Rational main = area * X2 * rho_multiplicative(d, counter).normalized;
                Rational diff = Rational((i128)count) - main;
                if (diff < Rational(0)) diff = -diff;
                total += diff;
            }
    return total.to_double();
}

}  // namespace quartdiv
