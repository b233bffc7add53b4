#pragma once

#include <string>

#include "quartdiv/numeric.hpp"

namespace quartdiv {

// L(x) = a*x1 + b*x2
struct LinearForm {
    i64 a = 0;
    i64 b = 0;
};

// Q(x) = a3*x1^2 + b3*x2^2 + c3*x1*x2
struct QuadraticForm {
    i64 a3 = 0;
    i64 b3 = 0;
    i64 c3 = 0;
};

i128 evaluate(const LinearForm& f, i64 x1, i64 x2);
i128 evaluate(const QuadraticForm& f, i64 x1, i64 x2);

struct FormTriple {
    LinearForm L1, L2;
    QuadraticForm Q;

    // resultants and discriminant
    i64 delta12 = 0;  // a1*b2 - a2*b1
    i64 delta13 = 0;  // Q(-b1, a1)
    i64 delta23 = 0;  // Q(-b2, a2)
    i64 delta = 0;    // c3^2 - 4*a3*b3

    // contents and primitive parts
    i64 ell1 = 1, ell2 = 1, q = 1;
    LinearForm L1star, L2star;
    QuadraticForm Qstar;

    bool is_primitive() const { return ell1 == 1 && ell2 == 1 && q == 1; }
    FormTriple primitive_triple() const;
};

// Validates the hypotheses on the triple (irreducible Q, pairwise
// non-proportional forms) and fills in resultants and primitive parts.
// Throws std::invalid_argument naming the violated condition.
FormTriple make_form_triple(const LinearForm& L1, const LinearForm& L2, const QuadraticForm& Q);

i64 l_infinity(const FormTriple& t);

std::string form_to_string(const LinearForm& f);
std::string form_to_string(const QuadraticForm& f);

}  // namespace quartdiv
