#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "maxattract/errors.hpp"
#include "maxattract/rational.hpp"

namespace maxattract {

using Json = nlohmann::ordered_json;

/// Numerals in documents are JSON integers or "p/q" strings, never binary
/// floating point: ingestion must stay exact.
inline Rational numeral_from_json(const Json& j, const std::string& path) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Rational(BigInt(j.get<std::uint64_t>()));
        return Rational(static_cast<long long>(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(path, e.what());
        }
    }
    if (j.is_number_float())
        throw ParseError(path, "floating-point numerals are not accepted; use integers or \"p/q\"");
    throw ParseError(path, "expected an integer or a \"p/q\" string");
}

inline Json numeral_to_json(const Rational& r) {
    if (r.is_integer()) {
        const BigInt num = r.numerator();
        if (num >= std::numeric_limits<std::int64_t>::min() &&
            num <= std::numeric_limits<std::int64_t>::max()) {
            return Json(static_cast<std::int64_t>(num));
        }
        return Json(num.str() + "/1");
    }
    return Json(r.str());
}

}  // namespace maxattract
