#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxattract/cuts.hpp"
#include "maxattract/instance.hpp"
#include "maxattract/numerals.hpp"
#include "maxattract/oracle.hpp"
#include "maxattract/separation.hpp"
#include "maxattract/solver.hpp"
#include "maxattract/witness.hpp"

namespace maxattract {

// All documents carry 1-based site/location indices; the conversion to the
// library's 0-based indices happens here and nowhere else.

inline Json cut_to_json(const LinearInequality& cut) {
    Json doc;
    doc["family"] = family_name(cut.family);
    Json ji = Json::array(), jj = Json::array();
    for (int i : cut.subsets.I) ji.push_back(i + 1);
    for (int j : cut.subsets.J) jj.push_back(j + 1);
    doc["I"] = std::move(ji);
    doc["J"] = std::move(jj);
    if (cut.subsets.jprime) doc["jprime"] = *cut.subsets.jprime + 1;
    Json cx = Json::array();
    for (const auto& [ij, coef] : cut.coeff_x)
        cx.push_back(Json::array({ij.first + 1, ij.second + 1, numeral_to_json(coef)}));
    doc["coeff_x"] = std::move(cx);
    Json cy = Json::array();
    for (const auto& [j, coef] : cut.coeff_y)
        cy.push_back(Json::array({j + 1, numeral_to_json(coef)}));
    doc["coeff_y"] = std::move(cy);
    doc["rhs"] = numeral_to_json(cut.rhs);
    return doc;
}

inline CutFamily family_from_name(const std::string& name) {
    if (name == "single") return CutFamily::SingleLocation;
    if (name == "multi") return CutFamily::MultiLocation;
    if (name == "facet") return CutFamily::CriticalFacet;
    throw ParseError("family", "unknown cut family '" + name + "'");
}

inline LinearInequality cut_from_json(const Json& doc, const Instance& inst) {
    if (!doc.is_object()) throw ParseError("cut", "expected a JSON object");
    LinearInequality cut;
    if (!doc.contains("family")) throw ParseError("family", "missing required key");
    cut.family = family_from_name(doc.at("family").get<std::string>());
    const auto read_indices = [&](const char* key, int limit) {
        std::vector<int> out;
        if (!doc.contains(key) || !doc.at(key).is_array())
            throw ParseError(key, "expected an array of indices");
        for (const auto& e : doc.at(key)) {
            if (!e.is_number_integer()) throw ParseError(key, "expected integer indices");
            const int v = e.get<int>();
            if (v < 1 || v > limit) throw ParseError(key, "index out of range");
            out.push_back(v - 1);
        }
        return out;
    };
    std::optional<int> jprime;
    if (doc.contains("jprime")) {
        const int v = doc.at("jprime").get<int>();
        if (v < 1 || v > inst.n) throw ParseError("jprime", "index out of range");
        jprime = v - 1;
    }
    cut.subsets = IndexSubsets::checked(read_indices("I", inst.m), read_indices("J", inst.n),
                                        jprime, inst);
    if (doc.contains("coeff_x")) {
        for (std::size_t t = 0; t < doc.at("coeff_x").size(); ++t) {
            const Json& e = doc.at("coeff_x")[t];
            const std::string path = "coeff_x[" + std::to_string(t + 1) + "]";
            if (!e.is_array() || e.size() != 3) throw ParseError(path, "expected [i, j, numeral]");
            const int i = e[0].get<int>(), j = e[1].get<int>();
            if (i < 1 || i > inst.m || j < 1 || j > inst.n)
                throw ParseError(path, "index out of range");
            cut.coeff_x.emplace_back(std::make_pair(i - 1, j - 1), numeral_from_json(e[2], path));
        }
    }
    if (doc.contains("coeff_y")) {
        for (std::size_t t = 0; t < doc.at("coeff_y").size(); ++t) {
            const Json& e = doc.at("coeff_y")[t];
            const std::string path = "coeff_y[" + std::to_string(t + 1) + "]";
            if (!e.is_array() || e.size() != 2) throw ParseError(path, "expected [j, numeral]");
            const int j = e[0].get<int>();
            if (j < 1 || j > inst.n) throw ParseError(path, "index out of range");
            cut.coeff_y.emplace_back(j - 1, numeral_from_json(e[1], path));
        }
    }
    if (!doc.contains("rhs")) throw ParseError("rhs", "missing required key");
    cut.rhs = numeral_from_json(doc.at("rhs"), "rhs");
    detail::sort_cut(cut);
    return cut;
}

inline Json point_to_json(const PointXYQ& p) {
    Json doc;
    Json jx = Json::array(), jq = Json::array(), jy = Json::array();
    for (int i = 0; i < p.m; ++i) {
        for (int j = 0; j < p.n; ++j) {
            if (!p.x_at(i, j).is_zero())
                jx.push_back(Json::array({i + 1, j + 1, numeral_to_json(p.x_at(i, j))}));
            if (!p.q_at(i, j).is_zero())
                jq.push_back(Json::array({i + 1, j + 1, numeral_to_json(p.q_at(i, j))}));
        }
    }
    for (int j = 0; j < p.n; ++j) jy.push_back(numeral_to_json(p.y[j]));
    doc["x"] = std::move(jx);
    doc["y"] = std::move(jy);
    doc["q"] = std::move(jq);
    return doc;
}

inline PointXYQ point_from_json(const Json& doc, const Instance& inst) {
    if (!doc.is_object()) throw ParseError("point", "expected a JSON object");
    PointXYQ p = PointXYQ::zero(inst.m, inst.n);
    const auto read_sparse = [&](const char* key, auto setter) {
        if (!doc.contains(key)) return;
        const Json& arr = doc.at(key);
        if (!arr.is_array()) throw ParseError(key, "expected an array of [i, j, numeral]");
        for (std::size_t t = 0; t < arr.size(); ++t) {
            const std::string path = std::string(key) + "[" + std::to_string(t + 1) + "]";
            const Json& e = arr[t];
            if (!e.is_array() || e.size() != 3) throw ParseError(path, "expected [i, j, numeral]");
            const int i = e[0].get<int>(), j = e[1].get<int>();
            if (i < 1 || i > inst.m || j < 1 || j > inst.n)
                throw ParseError(path, "index out of range");
            setter(i - 1, j - 1, numeral_from_json(e[2], path));
        }
    };
    read_sparse("x", [&](int i, int j, Rational v) { p.x_at(i, j) = std::move(v); });
    read_sparse("q", [&](int i, int j, Rational v) { p.q_at(i, j) = std::move(v); });
    if (doc.contains("y")) {
        const Json& jy = doc.at("y");
        if (!jy.is_array() || static_cast<int>(jy.size()) != inst.n)
            throw ParseError("y", "expected an array of n numerals");
        for (int j = 0; j < inst.n; ++j)
            p.y[j] = numeral_from_json(jy[j], "y[" + std::to_string(j + 1) + "]");
    }
    return p;
}

inline Json pattern_to_json(const std::vector<int>& pat) {
    Json arr = Json::array();
    for (int b : pat) arr.push_back(b);
    return arr;
}

inline Json validity_report_to_json(const ValidityReport& rep) {
    Json doc;
    doc["valid"] = rep.valid;
    doc["worst_pattern"] = pattern_to_json(rep.worst_pattern);
    doc["maximizing_point"] = point_to_json(rep.maximizing_point);
    doc["slack"] = numeral_to_json(rep.slack);
    return doc;
}

inline Json facet_report_to_json(const FacetReport& rep) {
    Json doc;
    doc["dimension"] = rep.dimension;
    doc["face_dimension"] = rep.face_dimension;
    doc["classification"] = classification_name(rep.classification);
    return doc;
}

inline Json condition_entry_to_json(const ConditionEntry& e) {
    Json doc;
    doc["condition"] = e.name;
    doc["holds"] = e.holds;
    doc["lhs"] = numeral_to_json(e.lhs);
    doc["rhs"] = numeral_to_json(e.rhs);
    return doc;
}

inline Json condition_report_to_json(const ConditionReport& rep) {
    Json doc;
    doc["all_hold"] = rep.all_hold;
    doc["surplus"] = condition_entry_to_json(rep.surplus);
    Json dom = Json::array(), crit = Json::array();
    for (const auto& e : rep.dominance) dom.push_back(condition_entry_to_json(e));
    for (const auto& e : rep.criticality) crit.push_back(condition_entry_to_json(e));
    doc["dominance"] = std::move(dom);
    doc["criticality"] = std::move(crit);
    return doc;
}

inline Json separation_result_to_json(const SeparationResult& res) {
    Json doc;
    doc["mode"] = res.mode == SeparationMode::Exhaustive ? "exhaustive" : "greedy";
    doc["subsets_examined"] = res.subsets_examined;
    Json cuts = Json::array();
    for (const auto& vc : res.cuts) {
        Json e = cut_to_json(vc.cut);
        e["violation"] = numeral_to_json(vc.violation);
        cuts.push_back(std::move(e));
    }
    doc["cuts"] = std::move(cuts);
    return doc;
}

inline Json diagnostics_to_json(const std::vector<Diagnostic>& diags) {
    Json arr = Json::array();
    for (const auto& d : diags) {
        Json e;
        e["severity"] = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
        e["path"] = d.path;
        e["message"] = d.message;
        arr.push_back(std::move(e));
    }
    return arr;
}

inline Json vertex_set_to_json(const VertexSet& vs) {
    Json doc;
    if (vs.pattern) doc["pattern"] = pattern_to_json(*vs.pattern);
    Json coords = Json::array();
    for (const auto& id : vs.coords) coords.push_back(id.name());
    doc["coords"] = std::move(coords);
    Json pts = Json::array();
    for (const auto& p : vs.points) {
        Json row = Json::array();
        for (const auto& v : p) row.push_back(numeral_to_json(v));
        pts.push_back(std::move(row));
    }
    doc["points"] = std::move(pts);
    doc["count"] = vs.points.size();
    return doc;
}

inline Json bound_report_to_json(const BoundReport& rep) {
    Json doc;
    doc["bound_without_cuts"] = numeral_to_json(rep.bound_without_cuts);
    doc["bound_with_cuts"] = numeral_to_json(rep.bound_with_cuts);
    doc["rounds"] = rep.rounds;
    Json cuts = Json::array();
    for (const auto& vc : rep.cuts_added) {
        Json e = cut_to_json(vc.cut);
        e["violation"] = numeral_to_json(vc.violation);
        cuts.push_back(std::move(e));
    }
    doc["cuts_added"] = std::move(cuts);
    doc["lp_point"] = point_to_json(rep.lp_point);
    return doc;
}

/// Wall time is intentionally not part of the document so identical inputs
/// produce byte-identical output; the CLI reports timing on stderr.
inline Json solve_report_to_json(const SolveReport& rep) {
    Json doc;
    doc["optimal_value"] = numeral_to_json(rep.optimal_value);
    doc["incumbent"] = point_to_json(rep.incumbent);
    doc["root_bound_without_cuts"] = numeral_to_json(rep.root_bound_without_cuts);
    doc["root_bound_with_cuts"] = numeral_to_json(rep.root_bound_with_cuts);
    Json cuts = Json::array();
    for (const auto& vc : rep.cuts_added) {
        Json e = cut_to_json(vc.cut);
        e["violation"] = numeral_to_json(vc.violation);
        cuts.push_back(std::move(e));
    }
    doc["cuts_added"] = std::move(cuts);
    doc["node_count"] = rep.node_count;
    return doc;
}

inline Json vector_family_to_json(const VectorFamily& fam) {
    Json doc;
    Json groups = Json::object();
    for (const auto& [label, vecs] : fam.groups) {
        Json arr = Json::array();
        for (const auto& v : vecs) {
            Json row = Json::array();
            for (const auto& e : v) row.push_back(numeral_to_json(e));
            arr.push_back(std::move(row));
        }
        groups[label] = std::move(arr);
    }
    doc["groups"] = std::move(groups);
    doc["claimed_count"] = fam.claimed_count;
    doc["achieved_affine_rank"] = fam.achieved_affine_rank;
    if (fam.epsilon) doc["epsilon"] = numeral_to_json(*fam.epsilon);
    return doc;
}

}  // namespace maxattract
