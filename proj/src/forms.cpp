#include "quartdiv/forms.hpp"

#include <algorithm>
#include <cstdlib>

namespace quartdiv {

i128 evaluate(const LinearForm& f, i64 x1, i64 x2) {
    return add128_checked(mul128_checked((i128)f.a, (i128)x1),
                          mul128_checked((i128)f.b, (i128)x2));
}

i128 evaluate(const QuadraticForm& f, i64 x1, i64 x2) {
    i128 t1 = mul128_checked(mul128_checked((i128)f.a3, (i128)x1), (i128)x1);
    i128 t2 = mul128_checked(mul128_checked((i128)f.b3, (i128)x2), (i128)x2);
    i128 t3 = mul128_checked(mul128_checked((i128)f.c3, (i128)x1), (i128)x2);
    return add128_checked(add128_checked(t1, t2), t3);
}

static i64 narrow(i128 v, const char* what) {
    if (v > (i128)INT64_MAX || v < (i128)INT64_MIN)
        throw std::overflow_error(std::string(what) + " exceeds 64 bits");
    return (i64)v;
}

FormTriple make_form_triple(const LinearForm& L1, const LinearForm& L2, const QuadraticForm& Q) {
    FormTriple t;
    t.L1 = L1;
    t.L2 = L2;
    t.Q = Q;

    if (L1.a == 0 && L1.b == 0) throw std::invalid_argument("L1 is the zero form");
    if (L2.a == 0 && L2.b == 0) throw std::invalid_argument("L2 is the zero form");
    if (Q.a3 == 0 || Q.b3 == 0)
        throw std::invalid_argument("Q has a zero outer coefficient (reducible: x1 or x2 divides Q)");

    t.delta = narrow(mul128_checked((i128)Q.c3, (i128)Q.c3) -
                         mul128_checked((i128)4, mul128_checked((i128)Q.a3, (i128)Q.b3)),
                     "disc Q");
    if (is_perfect_square_i128((i128)t.delta))
        throw std::invalid_argument("disc Q is a perfect square (Q reducible over Q)");

    t.delta12 = narrow(mul128_checked((i128)L1.a, (i128)L2.b) -
                           mul128_checked((i128)L2.a, (i128)L1.b),
                       "delta12");
    if (t.delta12 == 0) throw std::invalid_argument("L1 and L2 are proportional (delta12 = 0)");

    t.delta13 = narrow(evaluate(Q, -L1.b, L1.a), "delta13");
    t.delta23 = narrow(evaluate(Q, -L2.b, L2.a), "delta23");
    if (t.delta13 == 0) throw std::invalid_argument("L1 divides Q (delta13 = 0)");
    if (t.delta23 == 0) throw std::invalid_argument("L2 divides Q (delta23 = 0)");

    t.ell1 = gcd64(L1.a, L1.b);
    t.ell2 = gcd64(L2.a, L2.b);
    t.q = gcd64(gcd64(Q.a3, Q.b3), Q.c3);
    t.L1star = {L1.a / t.ell1, L1.b / t.ell1};
    t.L2star = {L2.a / t.ell2, L2.b / t.ell2};
    t.Qstar = {Q.a3 / t.q, Q.b3 / t.q, Q.c3 / t.q};
    return t;
}

FormTriple FormTriple::primitive_triple() const {
    return make_form_triple(L1star, L2star, Qstar);
}

i64 l_infinity(const FormTriple& t) {
    i64 m = 0;
    for (i64 v : {t.L1.a, t.L1.b, t.L2.a, t.L2.b, t.Q.a3, t.Q.b3, t.Q.c3})
        m = std::max(m, v < 0 ? -v : v);
    return m;
}

static void append_term(std::string& s, i64 c, const char* mono) {
    if (c == 0) return;
    if (!s.empty()) s += c > 0 ? "+" : "-";
    else if (c < 0) s += "-";
    i64 a = c < 0 ? -c : c;
    if (a != 1 || mono[0] == '\0') s += std::to_string(a);
    s += mono;
}

std::string form_to_string(const LinearForm& f) {
    std::string s;
    append_term(s, f.a, "x1");
    append_term(s, f.b, "x2");
    return s.empty() ? "0" : s;
}

std::string form_to_string(const QuadraticForm& f) {
    std::string s;
    append_term(s, f.a3, "x1^2");
    append_term(s, f.c3, "x1*x2");
    append_term(s, f.b3, "x2^2");
    return s.empty() ? "0" : s;
}

}  // namespace quartdiv
