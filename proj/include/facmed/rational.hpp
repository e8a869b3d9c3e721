#ifndef FACMED_RATIONAL_HPP
#define FACMED_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdio>
#include <string>
#include <string_view>

#include "facmed/errors.hpp"

namespace facmed {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator. This is the sole numeric type used for lengths,
/// weights, costs and probabilities; there is no floating point in the core.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw validation_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(BigInt(num), BigInt(den));
}

/// Parses "num" or "num/den" with optional leading '-'. Decimal literals are
/// rejected; denominators must be nonzero.
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&](const char* why) {
        throw validation_error("malformed rational '" + std::string(text) + "': " + why);
    };
    if (text.empty()) bad("empty");
    const auto slash = text.find('/');
    const auto parse_int = [&](std::string_view part) -> BigInt {
        if (part.empty()) bad("empty integer part");
        std::size_t i = part[0] == '-' ? 1 : 0;
        if (i == part.size()) bad("sign without digits");
        for (; i < part.size(); ++i) {
            if (part[i] < '0' || part[i] > '9') bad("expected only digits (decimal literals are not accepted)");
        }
        return BigInt(std::string(part));
    };
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = 1;
    if (slash != std::string_view::npos) {
        std::string_view den_part = text.substr(slash + 1);
        if (!den_part.empty() && den_part[0] == '-') bad("negative denominator");
        den = parse_int(den_part);
        if (den == 0) bad("zero denominator");
    }
    return Rational(num, den);
}

/// Canonical rendering: "num" when the denominator is 1, else "num/den".
inline std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

/// Decimal rendering with 6 significant digits. Display-only; never used in
/// comparisons.
inline std::string rational_decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", r.convert_to<double>());
    return std::string(buf);
}

} // namespace facmed

#endif
