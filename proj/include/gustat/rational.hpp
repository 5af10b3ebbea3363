#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "gustat/errors.hpp"

namespace gustat {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw ArgumentError("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

// (n)_r = n (n-1) ... (n-r+1); zero when r > n.
inline BigInt falling_factorial(long long n, long long r) {
    if (r < 0) throw ArgumentError("falling_factorial: negative order");
    if (r > n) return BigInt(0);
    BigInt out = 1;
    for (long long i = 0; i < r; ++i) out *= (n - i);
    return out;
}

inline BigInt factorial(long long n) { return falling_factorial(n, n); }

inline BigInt ipow(const BigInt& base, unsigned exp) {
    BigInt out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

inline Rational rpow(const Rational& base, unsigned exp) {
    Rational out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

inline Rational rabs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline std::string to_string(const Rational& q) {
    if (denominator_of(q) == 1) return numerator_of(q).str();
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline std::string to_string(const BigInt& z) { return z.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact value of a binary double.
inline Rational from_double(double x) { return Rational(x); }

// Decimal integer with optional sign. Boost would read "010" as octal.
inline BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("not an integer: '" + std::string(text) + "'");
    auto nz = s.find_first_not_of('0');
    BigInt v(nz == std::string::npos ? std::string("0") : s.substr(nz));
    return neg ? BigInt(-v) : v;
}

// Accepts "a", "a/b", and finite decimals such as "-0.125" or "1.2e-3".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string v) {
        auto b = v.find_first_not_of(" \t");
        auto e = v.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    s = trim(s);
    if (s.empty()) throw ParseError("empty rational");
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt num = parse_bigint(trim(s.substr(0, slash)));
            BigInt den = parse_bigint(trim(s.substr(slash + 1)));
            if (den == 0) throw ParseError("zero denominator in '" + s + "'");
            return Rational(num, den);
        }
        long long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string::npos) {
            exp10 = std::stoll(s.substr(e + 1));
            s = s.substr(0, e);
        }
        bool neg = false;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
            neg = s[0] == '-';
            s = s.substr(1);
        }
        std::string digits;
        if (auto dot = s.find('.'); dot != std::string::npos) {
            digits = s.substr(0, dot) + s.substr(dot + 1);
            exp10 -= static_cast<long long>(s.size() - dot - 1);
        } else {
            digits = s;
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("not a rational: '" + std::string(text) + "'");
        Rational value{parse_bigint(digits)};
        BigInt scale = ipow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
        value = exp10 < 0 ? Rational(value / scale) : Rational(value * scale);
        return neg ? Rational(-value) : value;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("not a rational: '" + std::string(text) + "'");
    }
}

// Shortest decimal that round-trips to x, read exactly: 0.8 -> 4/5.
inline Rational decimal_rational(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc()) throw ArgumentError("cannot format number");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

}  // namespace gustat
