#include "quartdiv/numeric.hpp"

#include <algorithm>

namespace quartdiv {

std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(char('0' + (int)(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string_i128(i128 v) {
    if (v < 0) return "-" + to_string_u128((u128)(-v));
    return to_string_u128((u128)v);
}

u128 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    u128 x = (u128)1 << ((128 - __builtin_clzll((u64)(n >> 64 ? n >> 64 : n)) -
                          (n >> 64 ? 0 : 64)) / 2 + 1);
    // Newton iteration; x starts above the root.
    u128 y = (x + n / x) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

}  // namespace quartdiv
