// Command-line frontend: instance generation, cut generation, oracle
// checks, separation, solving and the independence constructions, all
// exchanging exact-numeral JSON documents on stdout/files. Exit codes:
// 0 success / positive answer, 1 negative answer, 2 input or usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxattract/json_io.hpp"

namespace mx = maxattract;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mx::ParseError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw mx::ParseError(out_path, "cannot open output file");
    out << text;
}

void emit_json(const mx::Json& doc, const std::string& out_path) {
    emit(doc.dump(2) + "\n", out_path);
}

std::vector<int> parse_index_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok) - 1);
        } catch (const std::exception&) {
            throw mx::ParseError(what, "expected a comma-separated list of indices");
        }
    }
    if (out.empty()) throw mx::ParseError(what, "empty index list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw mx::ParseError(what, "expected a comma-separated list of integers");
        }
    }
    if (out.empty()) throw mx::ParseError(what, "empty list");
    return out;
}

std::vector<int> parse_pattern(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "0")
            out.push_back(0);
        else if (tok == "1")
            out.push_back(1);
        else
            throw mx::ParseError(what, "expected a comma-separated 0/1 pattern");
    }
    if (out.empty()) throw mx::ParseError(what, "empty pattern");
    return out;
}

std::vector<mx::Rational> parse_rational_list(const std::string& text, const char* what) {
    std::vector<mx::Rational> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(mx::Rational::parse(tok));
        } catch (const std::exception& e) {
            throw mx::ParseError(what, e.what());
        }
    }
    if (out.empty()) throw mx::ParseError(what, "empty list");
    return out;
}

mx::Instance load_instance(const std::string& path) {
    return mx::parse_instance(read_file(path));
}

mx::CutConfig cut_config_from(const std::string& cuts, const std::string& sep_mode,
                              long long budget, int rounds) {
    mx::CutConfig cfg;
    if (cuts == "all")
        cfg = mx::CutConfig::all();
    else if (cuts == "facet-only")
        cfg = mx::CutConfig::facet_only();
    else if (cuts == "none")
        cfg = mx::CutConfig::none();
    else
        throw mx::ParseError("--cuts", "expected all, none or facet-only");
    if (sep_mode == "exhaustive")
        cfg.mode = mx::SeparationMode::Exhaustive;
    else if (sep_mode == "greedy")
        cfg.mode = mx::SeparationMode::Greedy;
    else
        throw mx::ParseError("--sep-mode", "expected exhaustive or greedy");
    cfg.greedy_budget = budget;
    cfg.round_cap = rounds;
    return cfg;
}

struct Options {
    std::string instance_path, cut_path, point_path, out_path;
    int m = 2, n = 2, jobs = 1, rounds = 20;
    std::uint64_t seed = 0;
    std::int64_t cap_min = 1, cap_max = 5, dem_min = 1, dem_max = 4;
    std::string I, J, fix_y, family, mode = "exhaustive", cuts = "none";
    std::string construction, blocks, obj_cost, revenue;
    int jprime = 0, wn = 3, wl = 1, wm = 1;
    long long budget = 1000;
};

int run_gen(const Options& o) {
    mx::GenRanges ranges{o.cap_min, o.cap_max, o.dem_min, o.dem_max};
    const mx::Instance inst = mx::generate_random(o.m, o.n, o.seed, ranges);
    emit(mx::serialize_instance(inst), o.out_path);
    return 0;
}

int run_validate(const Options& o) {
    const std::string text = read_file(o.instance_path);
    mx::Instance inst;
    try {
        inst = mx::parse_instance(text);
    } catch (const mx::ParseError& e) {
        mx::Json doc = mx::Json::array();
        mx::Json entry;
        entry["severity"] = "error";
        entry["path"] = e.path();
        entry["message"] = e.what();
        doc.push_back(std::move(entry));
        emit_json(doc, o.out_path);
        return 1;
    }
    const auto diags = mx::validate(inst);
    emit_json(mx::diagnostics_to_json(diags), o.out_path);
    for (const auto& d : diags)
        if (d.severity == mx::Diagnostic::Severity::Error) return 1;
    return 0;
}

int run_cuts(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const std::vector<int> I = parse_index_list(o.I, "--I");
    const std::vector<int> J = parse_index_list(o.J, "--J");
    if (o.family == "single") {
        if (o.jprime < 1) throw mx::ParseError("--jprime", "required for the single family");
        emit_json(mx::cut_to_json(mx::single_location_cut(inst, I, J, o.jprime - 1)), o.out_path);
        return 0;
    }
    if (o.family == "multi") {
        const mx::Rational cap = mx::sum_capacity(inst, mx::IndexSubsets::checked(I, J, {}, inst).J);
        const mx::Rational att = mx::sum_max_demand(inst, I, J);
        if (!(cap <= att)) {
            mx::Json doc;
            doc["condition"] = "sum_J c_j <= sum_I max_J d_ij";
            doc["holds"] = false;
            doc["lhs"] = mx::numeral_to_json(cap);
            doc["rhs"] = mx::numeral_to_json(att);
            emit_json(doc, o.out_path);
            return 1;
        }
        emit_json(mx::cut_to_json(mx::multi_location_cut(inst, I, J)), o.out_path);
        return 0;
    }
    if (o.family == "facet") {
        const mx::ConditionReport rep = mx::facet_conditions(inst, I, J);
        if (!rep.all_hold) {
            emit_json(mx::condition_report_to_json(rep), o.out_path);
            return 1;
        }
        emit_json(mx::cut_to_json(mx::critical_facet_cut(inst, I, J)), o.out_path);
        return 0;
    }
    throw mx::ParseError("--family", "expected single, multi or facet");
}

int run_check_valid(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const mx::LinearInequality cut = mx::cut_from_json(mx::Json::parse(read_file(o.cut_path)), inst);
    const mx::ValidityReport rep = mx::check_valid(inst, cut, o.jobs);
    emit_json(mx::validity_report_to_json(rep), o.out_path);
    return rep.valid ? 0 : 1;
}

int run_check_facet(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const mx::LinearInequality cut = mx::cut_from_json(mx::Json::parse(read_file(o.cut_path)), inst);
    const mx::FacetReport rep = mx::check_facet(inst, cut);
    emit_json(mx::facet_report_to_json(rep), o.out_path);
    return rep.classification == mx::FacetReport::Classification::Facet ? 0 : 1;
}

int run_dim(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    mx::Json doc;
    doc["dimension"] = mx::polytope_dimension(inst);
    doc["strictly_positive_demand"] = inst.strictly_positive_demand();
    emit_json(doc, o.out_path);
    return 0;
}

int run_vertices(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const std::vector<int> pat = parse_pattern(o.fix_y, "--fix-y");
    const mx::ConstraintSystem fixed = mx::fix_binary(mx::build_lifted(inst), pat);
    mx::VertexSet vs = mx::enumerate_vertices(fixed);
    vs.pattern = pat;
    emit_json(mx::vertex_set_to_json(vs), o.out_path);
    return 0;
}

int run_project_check(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const bool ok = mx::check_projection(inst);
    mx::Json doc;
    doc["projection_holds"] = ok;
    emit_json(doc, o.out_path);
    return ok ? 0 : 1;
}

int run_separate(const Options& o) {
    const mx::Instance inst = load_instance(o.instance_path);
    const mx::PointXYQ point = mx::point_from_json(mx::Json::parse(read_file(o.point_path)), inst);
    mx::SeparationResult res;
    if (o.mode == "exhaustive")
        res = mx::separate_exhaustive(inst, point, o.jobs);
    else if (o.mode == "greedy")
        res = mx::separate_greedy(inst, point, o.budget);
    else
        throw mx::ParseError("--mode", "expected exhaustive or greedy");
    emit_json(mx::separation_result_to_json(res), o.out_path);
    return res.cuts.empty() ? 0 : 1;
}

int run_solve(const Options& o) {
    mx::Instance inst = load_instance(o.instance_path);
    if (!o.obj_cost.empty()) inst.opening_cost = parse_rational_list(o.obj_cost, "--obj-cost");
    if (!o.revenue.empty()) inst.revenue = parse_rational_list(o.revenue, "--revenue");
    for (const auto& d : mx::validate(inst))
        if (d.severity == mx::Diagnostic::Severity::Error)
            throw mx::ParseError(d.path, d.message);
    const mx::Objective obj = mx::Objective::for_instance(inst);
    const mx::CutConfig cfg = cut_config_from(o.cuts, o.mode, o.budget, o.rounds);
    const mx::SolveReport rep = mx::branch_and_bound(inst, obj, cfg);
    emit_json(mx::solve_report_to_json(rep), o.out_path);
    std::cerr << "solved in " << rep.wall_seconds << " s, " << rep.node_count << " nodes\n";
    return 0;
}

int run_witness(const Options& o) {
    try {
        if (o.construction == "cycle") {
            emit_json(mx::vector_family_to_json(mx::cycle_difference_vectors(o.wn)), o.out_path);
            return 0;
        }
        if (o.construction == "blocks") {
            emit_json(mx::vector_family_to_json(
                          mx::block_cycle_vectors(parse_int_list(o.blocks, "--blocks"))),
                      o.out_path);
            return 0;
        }
        if (o.construction == "perturbation") {
            std::mt19937_64 rng(o.seed);
            const auto draw = [&]() {
                return mx::Rational(static_cast<long long>(mx::detail::draw_below(rng, 4)));
            };
            const int l = o.wl, m = o.wm, n = o.wn;
            std::vector<mx::RVector> u(n), v(n), w(n);
            for (int k = 0; k < n; ++k) {
                u[k].resize(static_cast<std::size_t>(l) * n);
                for (auto& e : u[k]) e = draw();
                v[k].resize(static_cast<std::size_t>(m) * n);
                for (auto& e : v[k]) e = draw();
                w[k].assign(n, mx::Rational(0));
                w[k][k] = 1;
            }
            // u' above the draw range keeps the Y base affinely generic
            mx::RVector up(static_cast<std::size_t>(l) * n, mx::Rational(5));
            mx::RVector vp(static_cast<std::size_t>(m) * n);
            for (auto& e : vp) e = draw();
            emit_json(mx::vector_family_to_json(mx::perturbation_family(u, v, w, up, vp)),
                      o.out_path);
            return 0;
        }
        if (o.construction == "extension") {
            const mx::Instance inst = load_instance(o.instance_path);
            const std::vector<int> I = parse_index_list(o.I, "--I");
            const std::vector<int> J = parse_index_list(o.J, "--J");
            const mx::IndexSubsets sub = mx::IndexSubsets::checked(I, J, {}, inst);
            const mx::LinearInequality cut = mx::critical_facet_cut(inst, I, J);
            const mx::TightPlane plane = mx::TightPlane::of(cut);
            const auto tight = mx::affinely_independent_subset(
                mx::tight_vertices_of_restriction(inst, sub, plane));
            emit_json(mx::vector_family_to_json(mx::extension_points(inst, sub, tight, plane)),
                      o.out_path);
            return 0;
        }
        throw mx::ParseError("construction", "expected cycle, blocks, perturbation or extension");
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const mx::ParseError*>(&e)) throw;
        std::cerr << "witness: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Exact polyhedral toolkit for capacitated location with attraction-driven demand"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--m", o.m, "customer sites")->required();
    gen->add_option("--n", o.n, "candidate locations")->required();
    gen->add_option("--seed", o.seed, "random seed")->required();
    gen->add_option("--cap-min", o.cap_min, "capacity lower bound");
    gen->add_option("--cap-max", o.cap_max, "capacity upper bound");
    gen->add_option("--dem-min", o.dem_min, "demand lower bound");
    gen->add_option("--dem-max", o.dem_max, "demand upper bound");
    gen->add_option("-o,--output", o.out_path, "output path");

    auto* validate = app.add_subcommand("validate", "Check instance invariants");
    validate->add_option("instance", o.instance_path)->required();
    validate->add_option("-o,--output", o.out_path);

    auto* cuts = app.add_subcommand("cuts", "Generate one family cut for given subsets");
    cuts->add_option("instance", o.instance_path)->required();
    cuts->add_option("--I", o.I, "site subset, e.g. 1,2,3")->required();
    cuts->add_option("--J", o.J, "location subset, e.g. 1,2")->required();
    cuts->add_option("--jprime", o.jprime, "extra location (single family)");
    cuts->add_option("--family", o.family, "single|multi|facet")->required();
    cuts->add_option("-o,--output", o.out_path);

    auto* chk_valid = app.add_subcommand("check-valid", "Exhaustive validity oracle for a cut");
    chk_valid->add_option("instance", o.instance_path)->required();
    chk_valid->add_option("cut", o.cut_path)->required();
    chk_valid->add_option("--jobs", o.jobs, "parallel pattern workers");
    chk_valid->add_option("-o,--output", o.out_path);

    auto* chk_facet = app.add_subcommand("check-facet", "Dimension/facet oracle for a cut");
    chk_facet->add_option("instance", o.instance_path)->required();
    chk_facet->add_option("cut", o.cut_path)->required();
    chk_facet->add_option("-o,--output", o.out_path);

    auto* dim = app.add_subcommand("dim", "Measure the polytope dimension");
    dim->add_option("instance", o.instance_path)->required();
    dim->add_option("-o,--output", o.out_path);

    auto* vertices = app.add_subcommand("vertices", "Enumerate vertices at a fixed pattern");
    vertices->add_option("instance", o.instance_path)->required();
    vertices->add_option("--fix-y", o.fix_y, "binary pattern, e.g. 1,0")->required();
    vertices->add_option("-o,--output", o.out_path);

    auto* proj = app.add_subcommand("project-check", "Projection equivalence oracle");
    proj->add_option("instance", o.instance_path)->required();
    proj->add_option("-o,--output", o.out_path);

    auto* sep = app.add_subcommand("separate", "Find cuts violated at a point");
    sep->add_option("instance", o.instance_path)->required();
    sep->add_option("point", o.point_path)->required();
    sep->add_option("--mode", o.mode, "exhaustive|greedy");
    sep->add_option("--budget", o.budget, "greedy subset-evaluation budget");
    sep->add_option("--jobs", o.jobs, "parallel scan workers");
    sep->add_option("-o,--output", o.out_path);

    auto* solve = app.add_subcommand("solve", "Exact branch and bound with optional cuts");
    solve->add_option("instance", o.instance_path)->required();
    solve->add_option("--cuts", o.cuts, "all|none|facet-only");
    solve->add_option("--sep-mode", o.mode, "exhaustive|greedy");
    solve->add_option("--budget", o.budget, "greedy budget");
    solve->add_option("--rounds", o.rounds, "cut rounds per node");
    solve->add_option("--obj-cost", o.obj_cost, "opening costs f_1,...,f_n");
    solve->add_option("--revenue", o.revenue, "revenues r_1,...,r_m");
    solve->add_option("-o,--output", o.out_path);

    auto* witness = app.add_subcommand("witness", "Affine-independence constructions");
    witness->add_option("construction", o.construction, "cycle|blocks|perturbation|extension")
        ->required();
    witness->add_option("instance", o.instance_path);
    witness->add_option("--n", o.wn, "dimension parameter");
    witness->add_option("--l", o.wl, "x-block rows");
    witness->add_option("--m", o.wm, "q-block rows");
    witness->add_option("--seed", o.seed, "seed for the base vectors");
    witness->add_option("--blocks", o.blocks, "block sizes, e.g. 2,2");
    witness->add_option("--I", o.I, "site subset");
    witness->add_option("--J", o.J, "location subset");
    witness->add_option("-o,--output", o.out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(o);
        if (validate->parsed()) return run_validate(o);
        if (cuts->parsed()) return run_cuts(o);
        if (chk_valid->parsed()) return run_check_valid(o);
        if (chk_facet->parsed()) return run_check_facet(o);
        if (dim->parsed()) return run_dim(o);
        if (vertices->parsed()) return run_vertices(o);
        if (proj->parsed()) return run_project_check(o);
        if (sep->parsed()) return run_separate(o);
        if (solve->parsed()) return run_solve(o);
        if (witness->parsed()) return run_witness(o);
    } catch (const mx::ConditionNotMet& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
