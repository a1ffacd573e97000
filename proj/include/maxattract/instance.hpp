#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "maxattract/errors.hpp"
#include "maxattract/linalg.hpp"
#include "maxattract/numerals.hpp"
#include "maxattract/rational.hpp"

namespace maxattract {

/// A problem instance: m customer sites, n candidate locations, capacities
/// c_j and the attraction matrix d_ij (demand of site i when j is the sole
/// open location). Opening costs and revenues are solver plumbing only.
/// Immutable after construction by convention; safe to share across threads.
struct Instance {
    int m = 0;
    int n = 0;
    std::vector<Rational> capacity;        // n entries, each > 0
    std::vector<RVector> demand;           // m rows of n entries, each >= 0
    std::optional<std::vector<Rational>> opening_cost;  // n entries
    std::optional<std::vector<Rational>> revenue;       // m entries

    const Rational& d(int i, int j) const { return demand[i][j]; }
    const Rational& c(int j) const { return capacity[j]; }

    /// Hypothesis of the facet theorems: every d_ij strictly positive.
    bool strictly_positive_demand() const {
        for (const auto& row : demand)
            for (const auto& v : row)
                if (!(v > 0)) return false;
        return true;
    }

    Rational opening_cost_or_zero(int j) const {
        return opening_cost ? (*opening_cost)[j] : Rational(0);
    }
    Rational revenue_or_one(int i) const { return revenue ? (*revenue)[i] : Rational(1); }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.m == b.m && a.n == b.n && a.capacity == b.capacity &&
               a.demand == b.demand && a.opening_cost == b.opening_cost &&
               a.revenue == b.revenue;
    }
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string path;
    std::string message;
};

/// Checks every invariant; returns diagnostics instead of throwing. A zero
/// d_ij is a warning, not an error: the feasible set is well defined, only
/// the facet theorems need strict positivity.
inline std::vector<Diagnostic> validate(const Instance& inst) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string path, std::string msg) {
        out.push_back({Diagnostic::Severity::Error, std::move(path), std::move(msg)});
    };
    if (inst.m < 1) error("m", "must be a positive integer");
    if (inst.n < 1) error("n", "must be a positive integer");
    if (static_cast<int>(inst.capacity.size()) != inst.n)
        error("capacity", "dimension mismatch: expected " + std::to_string(inst.n) +
                              " entries, got " + std::to_string(inst.capacity.size()));
    if (static_cast<int>(inst.demand.size()) != inst.m)
        error("demand", "dimension mismatch: expected " + std::to_string(inst.m) +
                            " rows, got " + std::to_string(inst.demand.size()));
    for (std::size_t i = 0; i < inst.demand.size(); ++i) {
        if (static_cast<int>(inst.demand[i].size()) != inst.n)
            error("demand[" + std::to_string(i + 1) + "]",
                  "dimension mismatch: expected " + std::to_string(inst.n) + " entries, got " +
                      std::to_string(inst.demand[i].size()));
    }
    for (std::size_t j = 0; j < inst.capacity.size(); ++j) {
        if (!(inst.capacity[j] > 0))
            error("capacity[" + std::to_string(j + 1) + "]", "capacity must be positive");
    }
    bool some_zero = false;
    for (std::size_t i = 0; i < inst.demand.size(); ++i) {
        for (std::size_t j = 0; j < inst.demand[i].size(); ++j) {
            if (inst.demand[i][j] < 0)
                error("demand[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]",
                      "demand must be nonnegative");
            else if (inst.demand[i][j].is_zero())
                some_zero = true;
        }
    }
    if (inst.opening_cost && static_cast<int>(inst.opening_cost->size()) != inst.n)
        error("opening_cost", "dimension mismatch: expected " + std::to_string(inst.n) + " entries");
    if (inst.revenue && static_cast<int>(inst.revenue->size()) != inst.m)
        error("revenue", "dimension mismatch: expected " + std::to_string(inst.m) + " entries");
    if (some_zero && out.empty())
        out.push_back({Diagnostic::Severity::Warning, "demand",
                       "theorem hypotheses need d_ij>0; some entries are zero"});
    return out;
}

/// Parses the JSON instance document. All numerals are read exactly;
/// any invariant violation is reported with its field path.
inline Instance parse_instance(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError("document", e.what());
    }
    if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
    Instance inst;
    auto require = [&](const char* key) -> const Json& {
        if (!doc.contains(key)) throw ParseError(key, "missing required key");
        return doc.at(key);
    };
    const Json& jm = require("m");
    const Json& jn = require("n");
    if (!jm.is_number_integer()) throw ParseError("m", "expected an integer");
    if (!jn.is_number_integer()) throw ParseError("n", "expected an integer");
    inst.m = jm.get<int>();
    inst.n = jn.get<int>();
    const Json& jc = require("capacity");
    if (!jc.is_array()) throw ParseError("capacity", "expected an array");
    for (std::size_t j = 0; j < jc.size(); ++j)
        inst.capacity.push_back(numeral_from_json(jc[j], "capacity[" + std::to_string(j + 1) + "]"));
    const Json& jd = require("demand");
    if (!jd.is_array()) throw ParseError("demand", "expected an array of arrays");
    for (std::size_t i = 0; i < jd.size(); ++i) {
        const std::string rowpath = "demand[" + std::to_string(i + 1) + "]";
        if (!jd[i].is_array()) throw ParseError(rowpath, "expected an array");
        RVector row;
        for (std::size_t j = 0; j < jd[i].size(); ++j)
            row.push_back(numeral_from_json(jd[i][j], rowpath + "[" + std::to_string(j + 1) + "]"));
        inst.demand.push_back(std::move(row));
    }
    if (doc.contains("opening_cost")) {
        const Json& jf = doc.at("opening_cost");
        if (!jf.is_array()) throw ParseError("opening_cost", "expected an array");
        std::vector<Rational> f;
        for (std::size_t j = 0; j < jf.size(); ++j)
            f.push_back(numeral_from_json(jf[j], "opening_cost[" + std::to_string(j + 1) + "]"));
        inst.opening_cost = std::move(f);
    }
    if (doc.contains("revenue")) {
        const Json& jr = doc.at("revenue");
        if (!jr.is_array()) throw ParseError("revenue", "expected an array");
        std::vector<Rational> r;
        for (std::size_t i = 0; i < jr.size(); ++i)
            r.push_back(numeral_from_json(jr[i], "revenue[" + std::to_string(i + 1) + "]"));
        inst.revenue = std::move(r);
    }
    for (const auto& diag : validate(inst)) {
        if (diag.severity == Diagnostic::Severity::Error)
            throw ParseError(diag.path, diag.message);
    }
    return inst;
}

inline Json instance_to_json(const Instance& inst) {
    Json doc;
    doc["m"] = inst.m;
    doc["n"] = inst.n;
    Json jc = Json::array();
    for (const auto& v : inst.capacity) jc.push_back(numeral_to_json(v));
    doc["capacity"] = std::move(jc);
    Json jd = Json::array();
    for (const auto& row : inst.demand) {
        Json jrow = Json::array();
        for (const auto& v : row) jrow.push_back(numeral_to_json(v));
        jd.push_back(std::move(jrow));
    }
    doc["demand"] = std::move(jd);
    if (inst.opening_cost) {
        Json jf = Json::array();
        for (const auto& v : *inst.opening_cost) jf.push_back(numeral_to_json(v));
        doc["opening_cost"] = std::move(jf);
    }
    if (inst.revenue) {
        Json jr = Json::array();
        for (const auto& v : *inst.revenue) jr.push_back(numeral_to_json(v));
        doc["revenue"] = std::move(jr);
    }
    return doc;
}

inline std::string serialize_instance(const Instance& inst) {
    return instance_to_json(inst).dump(2) + "\n";
}

/// Integer bounds for random generation. Demand lower bound defaults to 1
/// so generated instances satisfy the strict-positivity hypothesis.
struct GenRanges {
    std::int64_t capacity_min = 1;
    std::int64_t capacity_max = 5;
    std::int64_t demand_min = 1;
    std::int64_t demand_max = 4;
};

namespace detail {

/// Rejection sampling on the raw 64-bit stream: identical output on every
/// platform, unlike std::uniform_int_distribution.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

inline Rational draw_in(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return Rational(lo + static_cast<std::int64_t>(
                             draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1))));
}

}  // namespace detail

/// Deterministic for a fixed seed; all entries are integers within the
/// given ranges and the result always passes validate().
inline Instance generate_random(int m, int n, std::uint64_t seed, const GenRanges& ranges = {}) {
    if (m < 1 || n < 1) throw std::invalid_argument("generate_random: m and n must be positive");
    if (ranges.capacity_min > ranges.capacity_max || ranges.demand_min > ranges.demand_max)
        throw std::invalid_argument("generate_random: empty range");
    if (ranges.capacity_min < 1)
        throw std::invalid_argument("generate_random: capacities must be positive");
    if (ranges.demand_min < 0)
        throw std::invalid_argument("generate_random: demands must be nonnegative");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.m = m;
    inst.n = n;
    for (int j = 0; j < n; ++j)
        inst.capacity.push_back(detail::draw_in(rng, ranges.capacity_min, ranges.capacity_max));
    for (int i = 0; i < m; ++i) {
        RVector row;
        for (int j = 0; j < n; ++j)
            row.push_back(detail::draw_in(rng, ranges.demand_min, ranges.demand_max));
        inst.demand.push_back(std::move(row));
    }
    return inst;
}

/// Site subset I and location subset J (0-based, sorted, deduplicated),
/// plus an optional extra location j' outside J.
struct IndexSubsets {
    std::vector<int> I;
    std::vector<int> J;
    std::optional<int> jprime;

    static IndexSubsets checked(std::vector<int> sites, std::vector<int> locations,
                                std::optional<int> jprime, const Instance& inst) {
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        std::sort(locations.begin(), locations.end());
        locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
        if (sites.empty()) throw std::invalid_argument("IndexSubsets: I must be nonempty");
        if (locations.empty()) throw std::invalid_argument("IndexSubsets: J must be nonempty");
        for (int i : sites)
            if (i < 0 || i >= inst.m) throw std::invalid_argument("IndexSubsets: site index out of range");
        for (int j : locations)
            if (j < 0 || j >= inst.n)
                throw std::invalid_argument("IndexSubsets: location index out of range");
        if (jprime) {
            if (*jprime < 0 || *jprime >= inst.n)
                throw std::invalid_argument("IndexSubsets: j' out of range");
            if (std::binary_search(locations.begin(), locations.end(), *jprime))
                throw std::invalid_argument("IndexSubsets: j' must lie outside J");
        }
        return IndexSubsets{std::move(sites), std::move(locations), jprime};
    }

    bool contains_site(int i) const { return std::binary_search(I.begin(), I.end(), i); }
    bool contains_location(int j) const { return std::binary_search(J.begin(), J.end(), j); }

    friend bool operator==(const IndexSubsets& a, const IndexSubsets& b) {
        return a.I == b.I && a.J == b.J && a.jprime == b.jprime;
    }
};

}  // namespace maxattract
