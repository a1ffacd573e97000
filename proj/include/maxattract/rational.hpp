#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace maxattract {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction with arbitrary-precision numerator and positive
/// denominator; always kept in lowest terms, zero is 0/1.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(long long v) : value_(v) {}  // NOLINT: implicit on purpose
    Rational(const BigInt& v) : value_(v) {}
    Rational(const BigInt& num, const BigInt& den) : value_(num) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        value_ /= boost::multiprecision::cpp_rational(den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    bool is_zero() const { return value_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return value_ < 0 ? -1 : (value_ > 0 ? 1 : 0); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { Rational r; r.value_ = -value_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    /// Renders "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    /// Parses "p" or "p/q" with q > 0. Leading '-' on p only.
    static Rational parse(std::string_view text) {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            return Rational(parse_int(text, "numerator"));
        }
        BigInt num = parse_int(text.substr(0, slash), "numerator");
        BigInt den = parse_int(text.substr(slash + 1), "denominator");
        if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive in '" + std::string(text) + "'");
        return Rational(num, den);
    }

private:
    static BigInt parse_int(std::string_view s, const char* what) {
        if (s.empty()) throw std::invalid_argument(std::string("Rational: empty ") + what);
        std::size_t pos = (s[0] == '-') ? 1 : 0;
        if (pos == s.size()) throw std::invalid_argument(std::string("Rational: bare sign in ") + what);
        for (std::size_t k = pos; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9')
                throw std::invalid_argument("Rational: non-digit in '" + std::string(s) + "'");
        }
        return BigInt(std::string(s));
    }

    boost::multiprecision::cpp_rational value_;
};

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace maxattract
