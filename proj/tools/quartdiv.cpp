// quartdiv: batch front-end for the divisor-sum toolkit.
//
// Usage: quartdiv <rho|delta|sigma|constants|sum|verify|discrepancy>
//            --config path.json [--x-list 250,500,...] [--workers N] [--out path]
//
// Exit codes: 0 success, 1 violated assertion in `verify`, 2 configuration
// error (malformed JSON reports line and column).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "quartdiv/densities.hpp"
#include "quartdiv/forms.hpp"
#include "quartdiv/geometry.hpp"
#include "quartdiv/lattice.hpp"
#include "quartdiv/sums.hpp"

using json = nlohmann::ordered_json;
using namespace quartdiv;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- parsing

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(u64 v) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

Rational parse_rational(const json& j, const char* what) {
    if (j.is_number_integer()) return Rational((i128)j.get<i64>());
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer())
        return Rational((i128)j[0].get<i64>(), (i128)j[1].get<i64>());
    throw ConfigError(std::string(what) + ": expected integer or [num, den] pair");
}

FormTriple parse_forms(const json& cfg) {
    for (const char* k : {"L1", "L2", "Q"})
        if (!cfg.contains(k)) throw ConfigError(std::string("missing form key ") + k);
    auto lin = [](const json& j, const char* k) -> LinearForm {
        if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(k) + ": expected [a, b]");
        return {j[0].get<i64>(), j[1].get<i64>()};
    };
    const json& q = cfg["Q"];
    if (!q.is_array() || q.size() != 3) throw ConfigError("Q: expected [a3, b3, c3]");
    try {
        return make_form_triple(lin(cfg["L1"], "L1"), lin(cfg["L2"], "L2"),
                                {q[0].get<i64>(), q[1].get<i64>(), q[2].get<i64>()});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid form triple: ") + e.what());
    }
}

TripleIndex parse_triple_index(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + ": expected [d1, d2, d3]");
    TripleIndex d{j[0].get<u64>(), j[1].get<u64>(), j[2].get<u64>()};
    if (d.d1 == 0 || d.d2 == 0 || d.d3 == 0) throw ConfigError(std::string(what) + ": entries must be >= 1");
    return d;
}

ConvexPolygonRegion parse_region(const json& cfg) {
    if (!cfg.contains("region")) return unit_square();
    const json& r = cfg["region"];
    if (!r.is_array() || r.size() < 3) throw ConfigError("region: expected >= 3 vertices");
    std::vector<Point2> verts;
    for (const auto& v : r) {
        if (!v.is_array() || v.size() != 2) throw ConfigError("region vertex: expected [x, y]");
        verts.push_back({parse_rational(v[0], "region x"), parse_rational(v[1], "region y")});
    }
    try {
        return ConvexPolygonRegion(std::move(verts));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid region: ") + e.what());
    }
}

Polytope parse_polytope(const json& cfg, const char* key, int default_dim) {
    if (!cfg.contains(key)) return unit_box(default_dim);
    const json& v = cfg[key];
    Polytope V;
    V.dim = v.value("dim", default_dim);
    if (V.dim < 1 || V.dim > 4) throw ConfigError(std::string(key) + ": dim must be 1..4");
    for (const auto& h : v.value("halfspaces", json::array())) {
        HalfSpace hs;
        if (!h.contains("n") || !h.contains("c"))
            throw ConfigError(std::string(key) + " halfspace: expected {\"n\": [...], \"c\": ...}");
        for (const auto& c : h["n"]) hs.n.push_back(parse_rational(c, "halfspace coefficient"));
        if ((int)hs.n.size() != V.dim)
            throw ConfigError(std::string(key) + " halfspace: normal length != dim");
        hs.c = parse_rational(h["c"], "halfspace bound");
        V.halfspaces.push_back(std::move(hs));
    }
    return V;
}

MultiplicativeFn parse_h(const json& cfg) {
    MultiplicativeFn h;
    if (!cfg.contains("h")) return h;
    for (const auto& e : cfg["h"]) {
        if (!e.is_array() || e.size() != 3) throw ConfigError("h: expected entries [p, k, value]");
        u64 p = e[0].get<u64>();
        int k = e[1].get<int>();
        if (p < 2 || k < 1) throw ConfigError("h: need p >= 2, k >= 1");
        h.prime_power_values[{p, k}] = e[2].get<double>();
    }
    return h;
}

// ------------------------------------------------------------- reporting

json rational_json(const Rational& r) {
    return json{{"repr", r.to_string()}, {"value", r.to_double()}};
}

json density_json(const DensityReport& r) {
    return json{{"value", r.value},
                {"nu_cutoff", r.nu_cutoff},
                {"prime_cutoff", r.prime_cutoff},
                {"tail_estimate", r.tail_estimate},
                {"accelerated", r.accelerated}};
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot open output file: " + out_path);
        out << report.dump(2) << "\n";
    }
}

// ------------------------------------------------------------- commands

struct Ctx {
    json cfg;
    std::string config_hash;
    std::string out_path;
    std::vector<u64> x_list;  // from --x-list, overrides config
    int workers_override = 0;
};

int cmd_rho(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    auto d = parse_triple_index(ctx.cfg.at("d"), "d");
    LocalCounter counter(t);
    auto rho = rho_multiplicative(d, counter);
    json rep{{"command", "rho"},
             {"config_hash", ctx.config_hash},
             {"d", {d.d1, d.d2, d.d3}},
             {"count", to_string_u128(rho.count)},
             {"modulus", rho.modulus},
             {"normalized", rational_json(rho.normalized)}};
    emit(rep, ctx.out_path);
    return 0;
}

int cmd_delta(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    auto D = parse_triple_index(ctx.cfg.at("D"), "D");
    u64 bound = ctx.cfg.value("bound", (u64)10000);
    u64 dD = delta_D(D, t, bound);
    u64 lower = delta_lower_bound(D, t);
    json rep{{"command", "delta"},
             {"config_hash", ctx.config_hash},
             {"D", {D.d1, D.d2, D.d3}},
             {"delta_D", dD},
             {"delta_lower_bound", lower},
             {"lower_divides", dD % lower == 0}};
    emit(rep, ctx.out_path);
    return 0;
}

int cmd_sigma(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    TripleIndex d{}, D{};
    if (ctx.cfg.contains("d")) d = parse_triple_index(ctx.cfg["d"], "d");
    if (ctx.cfg.contains("D")) D = parse_triple_index(ctx.cfg["D"], "D");
    int nu_max = ctx.cfg.value("nu_max", 8);
    std::vector<u64> primes;
    if (ctx.cfg.contains("primes"))
        for (const auto& p : ctx.cfg["primes"]) primes.push_back(p.get<u64>());
    else
        primes.push_back(ctx.cfg.value("p", (u64)2));
    LocalCounter counter(t);
    json rows = json::array();
    for (u64 p : primes) {
        if (p < 2 || !is_prime_u64(p)) throw ConfigError("sigma: p must be prime");
        auto plain = sigma_p_dD(p, d, D, counter, nu_max);
        auto starred = sigma_star_p_dD(p, d, D, counter, nu_max);
        rows.push_back({{"p", p}, {"sigma", density_json(plain)}, {"sigma_star", density_json(starred)}});
    }
    json rep{{"command", "sigma"},
             {"config_hash", ctx.config_hash},
             {"d", {d.d1, d.d2, d.d3}},
             {"D", {D.d1, D.d2, D.d3}},
             {"nu_max", nu_max},
             {"results", rows}};
    emit(rep, ctx.out_path);
    return 0;
}

int cmd_constants(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    u64 cutoff = ctx.cfg.value("prime_cutoff", (u64)10000);
    int nu_max = ctx.cfg.value("nu_max", 10);
    bool accelerate = ctx.cfg.value("accelerate", true);
    LocalCounter counter(t);
    auto C = constant_C(counter, cutoff, nu_max, accelerate);
    auto h = parse_h(ctx.cfg);
    auto Cstar = constant_C_star(counter, h, cutoff, nu_max);
    json rep{{"command", "constants"},
             {"config_hash", ctx.config_hash},
             {"C", density_json(C)},
             {"C_star", density_json(Cstar)}};
    emit(rep, ctx.out_path);
    return 0;
}

SumRequest build_sum_request(const Ctx& ctx, const FormTriple& t, u64 X) {
    SumRequest req{t};
    req.region = parse_region(ctx.cfg);
    req.X = Rational((i128)X);
    req.Y = ctx.cfg.value("Y", (u64)0);
    std::string kind = ctx.cfg.value("kind", "T");
    req.V = parse_polytope(ctx.cfg, "V", kind == "Tg_prime" ? 4 : 3);
    if (ctx.cfg.contains("d")) req.d = parse_triple_index(ctx.cfg["d"], "d");
    if (ctx.cfg.contains("D")) req.D = parse_triple_index(ctx.cfg["D"], "D");
    req.h = parse_h(ctx.cfg);
    req.workers = ctx.workers_override > 0 ? ctx.workers_override : ctx.cfg.value("workers", 1);
    req.prime_cutoff = ctx.cfg.value("prime_cutoff", (u64)10000);
    req.nu_max = ctx.cfg.value("nu_max", 8);
    return req;
}

int cmd_sum(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    std::string kind = ctx.cfg.value("kind", "T");
    std::vector<u64> xs = ctx.x_list;
    if (xs.empty() && ctx.cfg.contains("x_list"))
        for (const auto& x : ctx.cfg["x_list"]) xs.push_back(x.get<u64>());
    if (xs.empty()) xs.push_back(ctx.cfg.value("X", (u64)100));

    json rows = json::array();
    std::ostringstream csv;
    csv << "kind,X,Y,exact_sum,predicted_main,ratio,nu_cutoff,prime_cutoff,wall_time_ms\n";
    for (u64 X : xs) {
        auto req = build_sum_request(ctx, t, X);
        SumReport rep;
        if (kind == "T") rep = sum_T(req);
        else if (kind == "S") rep = sum_S(req);
        else if (kind == "S_dD") rep = sum_S_dD(req);
        else if (kind == "S_star") rep = sum_S_star(req);
        else if (kind == "Tg_star") rep = sum_Tg_star(req);
        else if (kind == "Tg_prime") rep = sum_Tg_prime(req);
        else throw ConfigError("kind: expected T|S|S_dD|S_star|Tg_star|Tg_prime");
        csv << kind << "," << X << "," << req.Y << "," << rep.exact_sum.to_string() << ","
            << rep.predicted_main << "," << rep.ratio << "," << req.nu_max << ","
            << req.prime_cutoff << "," << rep.wall_time_ms << "\n";
        rows.push_back({{"kind", kind},
                        {"X", X},
                        {"Y", req.Y},
                        {"exact_sum", rational_json(rep.exact_sum)},
                        {"exact", rep.exact},
                        {"value", rep.value},
                        {"point_count", rep.point_count},
                        {"predicted_main", rep.predicted_main},
                        {"ratio", rep.ratio},
                        {"nu_cutoff", req.nu_max},
                        {"prime_cutoff", req.prime_cutoff},
                        {"wall_time_ms", rep.wall_time_ms}});
    }
    json rep{{"command", "sum"},
             {"config_hash", ctx.config_hash},
             {"kind", kind},
             {"workers", ctx.workers_override > 0 ? ctx.workers_override : ctx.cfg.value("workers", 1)},
             {"rows", rows}};
    emit(rep, ctx.out_path);
    if (!ctx.out_path.empty()) {
        std::ofstream c(ctx.out_path + ".csv", std::ios::app);
        c << csv.str();
    } else {
        std::cerr << csv.str();
    }
    return 0;
}

int cmd_discrepancy(const Ctx& ctx) {
    auto t = parse_forms(ctx.cfg);
    auto R = parse_region(ctx.cfg);
    u64 X = ctx.cfg.value("X", (u64)100);
    auto V = ctx.cfg.contains("V_box") ? parse_triple_index(ctx.cfg["V_box"], "V_box")
                                       : TripleIndex{4, 4, 4};
    double disc = lod_discrepancy(t, R, X, V.d1, V.d2, V.d3);
    json rep{{"command", "discrepancy"},
             {"config_hash", ctx.config_hash},
             {"X", X},
             {"V_box", {V.d1, V.d2, V.d3}},
             {"discrepancy", disc}};
    emit(rep, ctx.out_path);
    return 0;
}

// ------------------------------------------------------------------ verify

struct Verifier {
    int violations = 0;

    void check(bool ok, const std::string& name, const std::string& detail = "") {
        if (ok) {
            std::cout << "ok " << name << "\n";
        } else {
            ++violations;
            std::cout << "VIOLATION " << name << (detail.empty() ? "" : ": " + detail) << "\n";
        }
    }
};

std::vector<std::pair<std::string, FormTriple>> verify_fixtures() {
    return {{"gaussian", make_form_triple({1, 0}, {0, 1}, {1, 1, 0})},
            {"eisenstein", make_form_triple({1, 1}, {1, -1}, {1, 1, 1})},
            {"real_disc", make_form_triple({1, 0}, {1, 1}, {1, -1, 1})},
            {"nonprimitive", make_form_triple({2, 0}, {0, 3}, {2, 2, 0})}};
}

// region on which all three forms of every bundled fixture are positive
ConvexPolygonRegion positive_rectangle() {
    return rational_rectangle(Rational(1), Rational(0), Rational(2), Rational(1, 2));
}

int cmd_verify(const Ctx& ctx) {
    Verifier v;
    auto fixtures = verify_fixtures();

    // closed forms against brute force, all fixtures, p <= 5, sum nu <= 3
    for (auto& [name, t] : fixtures) {
        LocalCounter counter(t);
        bool ok = true;
        for (u64 p : {2, 3, 5})
            for (int n1 = 0; n1 <= 3; ++n1)
                for (int n2 = 0; n1 + n2 <= 3; ++n2)
                    for (int n3 = 0; n1 + n2 + n3 <= 3; ++n3) {
                        u64 m = 1;
                        for (int i = 0; i < n1 + n2 + n3; ++i) m *= p;
                        if (m > 200) continue;
                        TripleIndex d{1, 1, 1};
                        u64 q1 = 1, q2 = 1, q3 = 1;
                        for (int i = 0; i < n1; ++i) q1 *= p;
                        for (int i = 0; i < n2; ++i) q2 *= p;
                        for (int i = 0; i < n3; ++i) q3 *= p;
                        d = {q1, q2, q3};
                        auto direct = rho_bruteforce(d, t);
                        auto fast = rho_multiplicative(d, counter);
                        if (direct.count != fast.count) ok = false;
                        if (t.is_primitive()) {
                            auto star = rho_star_bruteforce(d, t);
                            u128 sc = counter.rho_star_count(p, n1, n2, n3);
                            if (star.count != sc) ok = false;
                        }
                    }
        v.check(ok, "rho_closed_forms_" + name);
    }

    // multiplicativity of rho on coprime split moduli
    {
        auto t = fixtures[0].second;
        LocalCounter counter(t);
        bool ok = true;
        std::vector<TripleIndex> idx = {{2, 1, 1}, {1, 3, 1}, {1, 1, 5},  {2, 3, 1},
                                        {4, 1, 3}, {1, 9, 2}, {3, 1, 25}, {5, 7, 1}};
        for (auto& a : idx)
            for (auto& b : idx) {
                if (std::gcd(a.modulus(), b.modulus()) != 1) continue;
                TripleIndex ab{a.d1 * b.d1, a.d2 * b.d2, a.d3 * b.d3};
                if (ab.modulus() > 5000) continue;
                auto va = rho_multiplicative(a, counter);
                auto vb = rho_multiplicative(b, counter);
                auto vab = rho_multiplicative(ab, counter);
                if (vab.count != va.count * vb.count) ok = false;
            }
        v.check(ok, "rho_multiplicative");
    }

    // splitting identity
    {
        bool ok = true;
        for (u64 n1 = 1; n1 <= 20 && ok; ++n1)
            for (u64 n2 = 1; n2 <= 20 && ok; ++n2)
                for (u64 n3 = 1; n1 * n2 * n3 <= 2000 && ok; ++n3)
                    if (split_tau_triple(n1, n2, n3) != tau(n1 * n2 * n3)) ok = false;
        v.check(ok, "split_tau_identity");
    }

    // psi0 identities
    {
        bool ok = true;
        for (u64 D1 : {1, 2, 3, 4, 6, 8, 12})
            for (u64 D2 : {1, 2, 3, 5, 9})
                for (u64 D3 : {1, 2, 3, 6, 10}) {
                    TripleIndex D{D1, D2, D3};
                    u64 p0 = psi0(D);
                    if (mu(D3) != 0 && p0 != std::gcd(std::gcd(D1, D2), D3)) ok = false;
                    if ((u128)p0 * p0 > (u128)D1 * D2 * D3) ok = false;
                }
        v.check(ok, "psi0_identities");
    }

    // delta divisibility on a small admissible grid
    {
        bool ok = true;
        for (auto& [name, t] : fixtures)
            for (u64 D1 : {1, 2, 3})
                for (u64 D2 : {1, 2})
                    for (u64 D3 : {1, 2, 3, 5}) {
                        TripleIndex D{D1, D2, D3};
                        if (mu(std::gcd(D1, D3)) == 0 || mu(std::gcd(D2, D3)) == 0) continue;
                        u64 lower = delta_lower_bound(D, t);
                        u64 full = delta_D(D, t);
                        if (full % lower != 0) ok = false;
                    }
        v.check(ok, "delta_lower_bound_divides");
    }

    // sums consistency web on every fixture at X = 30
    for (auto& [name, t] : fixtures) {
        ConvexPolygonRegion R = (name == "eisenstein" || name == "real_disc")
                                    ? positive_rectangle()
                                    : unit_square();
        SumRequest req{t};
        req.region = R;
        req.X = Rational(30);
        req.prime_cutoff = 20;
        req.nu_max = 4;
        auto s = sum_S(req);
        auto sdd = sum_S_dD(req);
        u128 direct = 0;
        for (const RowRange& row : interior_rows(R, req.X))
            for (i64 x1 = row.lo; x1 <= row.hi; ++x1)
                direct += tau((u64)evaluate(t.L1, x1, row.x2)) *
                          tau((u64)evaluate(t.L2, x1, row.x2)) *
                          tau((u64)evaluate(t.Q, x1, row.x2));
        v.check(s.exact_sum == Rational((i128)direct), "sum_S_definition_" + name);
        v.check(s.exact_sum == sdd.exact_sum, "sum_S_dD_unit_" + name);

        auto tg = sum_Tg_star(req);
        u128 coprime = 0;
        for (const RowRange& row : interior_rows(R, req.X))
            for (i64 x1 = row.lo; x1 <= row.hi; ++x1) {
                if (std::gcd(x1, row.x2) != 1) continue;
                coprime += split_tau_triple((u64)evaluate(t.L1, x1, row.x2),
                                            (u64)evaluate(t.L2, x1, row.x2),
                                            (u64)evaluate(t.Q, x1, row.x2));
            }
        v.check(tg.exact_sum == Rational((i128)coprime), "sum_Tg_star_tau_" + name);
    }

    // Moebius identity at X = 10 on the first fixture
    {
        auto t = fixtures[0].second;
        SumRequest base{t};
        base.X = Rational(10);
        base.prime_cutoff = 10;
        base.nu_max = 4;
        auto star = sum_S_star(base);
        Rational rhs;
        for (i64 k = 1; k <= 10; ++k) {
            if (mu((u64)k) == 0) continue;
            auto scaled = make_form_triple({k * t.L1.a, k * t.L1.b}, {k * t.L2.a, k * t.L2.b},
                                           {k * k * t.Q.a3, k * k * t.Q.b3, k * k * t.Q.c3});
            SumRequest req{scaled};
            req.X = Rational(10, k);
            req.prime_cutoff = 10;
            req.nu_max = 4;
            Rational term = sum_S(req).exact_sum;
            rhs += mu((u64)k) == 1 ? term : -term;
        }
        v.check(star.exact_sum == rhs, "moebius_identity");
    }

    // worker-count determinism
    {
        auto t = fixtures[0].second;
        SumRequest a{t};
        a.X = Rational(25);
        a.prime_cutoff = 10;
        a.nu_max = 4;
        auto r1 = sum_T(a);
        a.workers = 4;
        auto r4 = sum_T(a);
        v.check(r1.exact_sum == r4.exact_sum && r1.point_count == r4.point_count,
                "parallel_determinism");
    }

    std::cout << (v.violations == 0 ? "verify: all checks passed"
                                    : "verify: " + std::to_string(v.violations) + " violation(s)")
              << "\n";
    return v.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "quartdiv: exact divisor-sum experiments for products of two linear and one "
        "quadratic binary form.\n"
        "CSV columns (sum): kind,X,Y,exact_sum,predicted_main,ratio,nu_cutoff,"
        "prime_cutoff,wall_time_ms\n"
        "Environment: QUARTDIV_SIEVE_BOUND overrides the factorization sieve size."};
    app.require_subcommand(1);

    std::string config_path, out_path, x_list_arg;
    int workers = 0;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--x-list", x_list_arg, "comma-separated X values (overrides config)");
    app.add_option("--workers", workers, "worker threads for enumeration");
    app.add_option("--out", out_path, "output file (JSON; sum also appends <out>.csv)");

    for (const char* name : {"rho", "delta", "sigma", "constants", "sum", "verify", "discrepancy"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    try {
        if (const char* sb = std::getenv("QUARTDIV_SIEVE_BOUND")) {
            char* end = nullptr;
            unsigned long long b = strtoull(sb, &end, 10);
            if (end == sb || *end != '\0' || b < 2)
                throw ConfigError("QUARTDIV_SIEVE_BOUND: expected an integer >= 2");
            ensure_sieve_bound((u64)b);
        }

        std::string text = read_file(config_path);
        Ctx ctx;
        try {
            ctx.cfg = json::parse(text);
        } catch (const json::parse_error& e) {
            auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
            std::cerr << "config error: malformed JSON at line " << line << ", column " << col
                      << ": " << e.what() << "\n";
            return 2;
        }
        ctx.config_hash = hex64(fnv1a(text));
        ctx.out_path = out_path;
        ctx.workers_override = workers;
        if (!x_list_arg.empty()) {
            std::stringstream ss(x_list_arg);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) ctx.x_list.push_back(std::stoull(tok));
        }

        if (cmd == "rho") return cmd_rho(ctx);
        if (cmd == "delta") return cmd_delta(ctx);
        if (cmd == "sigma") return cmd_sigma(ctx);
        if (cmd == "constants") return cmd_constants(ctx);
        if (cmd == "sum") return cmd_sum(ctx);
        if (cmd == "verify") return cmd_verify(ctx);
        if (cmd == "discrepancy") return cmd_discrepancy(ctx);
        std::cerr << "unknown command " << cmd << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
