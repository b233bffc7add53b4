#pragma once

#include <string>
#include <vector>

#include "quartdiv/forms.hpp"

namespace quartdiv::fixtures {

struct NamedTriple {
    std::string name;
    FormTriple t;
};

// L1 = x1, L2 = x2, Q = x1^2 + x2^2  (disc -4, 2 | disc)
inline FormTriple gaussian() {
    return make_form_triple({1, 0}, {0, 1}, {1, 1, 0});
}

// L1 = x1+x2, L2 = x1-x2, Q = x1^2 + x1*x2 + x2^2  (disc -3)
inline FormTriple eisenstein() {
    return make_form_triple({1, 1}, {1, -1}, {1, 1, 1});
}

// L1 = x1, L2 = x1+x2, Q = x1^2 + x1*x2 - x2^2  (disc 5 > 0)
inline FormTriple real_disc() {
    return make_form_triple({1, 0}, {1, 1}, {1, -1, 1});
}

// L1 = 2*x1, L2 = 3*x2, Q = 2*x1^2 + 2*x2^2  (contents 2, 3, 2)
inline FormTriple nonprimitive() {
    return make_form_triple({2, 0}, {0, 3}, {2, 2, 0});
}

inline std::vector<NamedTriple> all() {
    return {{"gaussian", gaussian()},
            {"eisenstein", eisenstein()},
            {"real_disc", real_disc()},
            {"nonprimitive", nonprimitive()}};
}

}  // namespace quartdiv::fixtures
