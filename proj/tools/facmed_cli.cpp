// Command-line front end: solve instances, audit incentive compatibility,
// run seeded ratio campaigns and emit the built-in instance families.
//
// Exit codes: 0 success, 2 parse/validation error, 3 mechanism/metric
// mismatch, 4 audit found a counterexample, 5 campaign bound violated.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facmed/facmed.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace facmed;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitShape = 3;
constexpr int kExitCounterexample = 4;
constexpr int kExitBound = 5;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// CLI point syntax: a vertex name, or "a~b@offset" for a point inside the
/// edge between a and b, measured from a.
PointRef parse_cli_point(const TreeMetric& metric, const std::string& text) {
    const auto tilde = text.find('~');
    if (tilde == std::string::npos) {
        auto v = metric.find_vertex(text);
        if (!v) throw validation_error("--z: unknown vertex '" + text + "'");
        return metric.vertex_point(*v);
    }
    const auto at = text.find('@', tilde);
    if (at == std::string::npos)
        throw validation_error("--z: interior points use the form a~b@offset");
    const std::string na = text.substr(0, tilde);
    const std::string nb = text.substr(tilde + 1, at - tilde - 1);
    auto a = metric.find_vertex(na);
    auto b = metric.find_vertex(nb);
    if (!a || !b) throw validation_error("--z: unknown edge endpoints '" + na + "~" + nb + "'");
    for (const auto& [nbr, e] : metric.neighbors(*a)) {
        if (nbr != *b) continue;
        const Rational offset = parse_rational(text.substr(at + 1));
        const auto& ed = metric.edge(e);
        if (offset < 0 || offset > ed.length)
            throw validation_error("--z: offset out of range");
        return metric.point_on_edge(e, ed.a == *a ? offset : ed.length - offset);
    }
    throw validation_error("--z: no edge between '" + na + "' and '" + nb + "'");
}

Json point_json(const TreeMetric& metric, const PointRef& p) { return io_detail::point_json(metric, p); }

Json outcome_json(const TreeMetric& metric, const MechanismOutcome& out) {
    Json j;
    if (out.deterministic()) {
        j["kind"] = "point";
        j["point"] = point_json(metric, out.point());
        return j;
    }
    j["kind"] = "distribution";
    j["support"] = Json::array();
    for (const auto& [p, prob] : out.distribution().entries()) {
        Json row;
        row["point"] = point_json(metric, p);
        row["probability"] = rational_str(prob);
        row["probability_decimal"] = rational_decimal(prob);
        j["support"].push_back(std::move(row));
    }
    return j;
}

Json cost_json(const TreeMetric& metric, const CostReport& r) {
    Json j;
    j["mechanism_cost"] = rational_str(r.cost);
    j["mechanism_cost_decimal"] = rational_decimal(r.cost);
    j["optimal_location"] = point_json(metric, r.optimal_point);
    j["optimal_cost"] = rational_str(r.optimal_cost);
    j["infinite_ratio"] = r.infinite_ratio;
    if (r.infinite_ratio) {
        j["ratio"] = nullptr;
    } else {
        j["ratio"] = rational_str(r.ratio);
        j["ratio_decimal"] = rational_decimal(r.ratio);
    }
    return j;
}

Json diagnostics_json(const TreeMetric& metric, const MechanismOutcome& out) {
    Json j;
    if (const auto* w = std::get_if<WmmDiagnostics>(&out.diagnostics)) {
        j["medians"] = Json::array();
        for (const auto& m : w->medians) j["medians"].push_back(point_json(metric, m));
    } else if (const auto* t = std::get_if<TprmDiagnostics>(&out.diagnostics)) {
        j["medians"] = Json::array();
        for (const auto& m : t->medians) j["medians"].push_back(point_json(metric, m));
        j["pick_first"] = t->pick_first;
        j["pick_last"] = t->pick_last;
    } else if (const auto* tr = std::get_if<TrmDiagnostics>(&out.diagnostics)) {
        j["medians"] = Json::array();
        for (const auto& m : tr->medians) j["medians"].push_back(point_json(metric, m));
        j["root"] = point_json(metric, tr->root);
        j["vertices"] = Json::array();
        for (const auto& rec : tr->vertices) {
            Json row;
            row["point"] = point_json(metric, rec.point);
            row["size"] = rec.size;
            row["treesize"] = rec.treesize;
            row["in_core"] = rec.in_core;
            row["probability"] = rational_str(rec.probability);
            j["vertices"].push_back(std::move(row));
        }
    } else if (const auto* iw = std::get_if<IwmmDiagnostics>(&out.diagnostics)) {
        j["reports"] = Json::array();
        for (const auto& [name, report] : iw->reports) {
            Json row;
            row["node"] = name;
            row["report"] = point_json(metric, report);
            j["reports"].push_back(std::move(row));
        }
    }
    return j;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

struct SolveOptions {
    std::string mechanism;
    std::string instance_path;
    std::string z_override;
};

int run_solve(const SolveOptions& opt) {
    ParsedDocument doc = parse_document(read_input(opt.instance_path));

    Json report;
    report["command"] = "solve";
    report["flags"] = Json{{"mechanism", opt.mechanism}, {"instance", opt.instance_path}};
    if (!opt.z_override.empty()) report["flags"]["z"] = opt.z_override;

    const bool is_hierarchy = std::holds_alternative<HierarchyInstance>(doc);
    if (opt.mechanism == "iwmm") {
        if (!is_hierarchy) {
            std::cerr << "error: iwmm needs a hierarchy document\n";
            return kExitShape;
        }
        HierarchyInstance h = std::get<HierarchyInstance>(std::move(doc));
        if (!opt.z_override.empty()) h.root.z = parse_cli_point(h.metric, opt.z_override);
        report["instance_digest"] = digest(serialize(h));
        report["z"] = point_json(h.metric, h.root.z);
        MechanismOutcome out = iwmm(h);
        report["outcome"] = outcome_json(h.metric, out);
        report["cost"] = cost_json(h.metric, competitive_report(h, out));
        report["diagnostics"] = diagnostics_json(h.metric, out);
        emit(report);
        return kExitOk;
    }
    if (is_hierarchy) {
        std::cerr << "error: mechanism '" << opt.mechanism << "' needs a one-level instance document\n";
        return kExitShape;
    }
    Instance inst = std::get<Instance>(std::move(doc));
    if (!opt.z_override.empty()) inst.z = parse_cli_point(inst.metric, opt.z_override);
    report["instance_digest"] = digest(serialize(inst));
    report["z"] = point_json(inst.metric, inst.z);

    MechanismOutcome out;
    if (opt.mechanism == "wmm") {
        out = wmm(inst);
    } else if (opt.mechanism == "tprm") {
        out = tprm(inst);
    } else if (opt.mechanism == "trm") {
        out = trm(inst);
    } else { // opt
        out = global_median(inst);
    }
    report["outcome"] = outcome_json(inst.metric, out);
    report["cost"] = cost_json(inst.metric, competitive_report(inst, out));
    report["diagnostics"] = diagnostics_json(inst.metric, out);
    emit(report);
    return kExitOk;
}

struct AuditOptions {
    std::string side;
    std::string mechanism;
    std::string instance_path;
    int samples_per_edge = 8;
    std::uint64_t seed = 0;
};

Json deviation_json(const TreeMetric& metric, const Deviation& d) {
    Json j;
    j["deviator"] = d.deviator;
    j["candidate"] = point_json(metric, d.candidate);
    j["candidate_index"] = d.candidate_index;
    j["truthful_cost"] = rational_str(d.truthful_cost);
    j["deviating_cost"] = rational_str(d.deviating_cost);
    j["description"] = d.description;
    return j;
}

int run_audit(const AuditOptions& opt) {
    ParsedDocument doc = parse_document(read_input(opt.instance_path));
    CandidateParams params;
    params.samples_per_edge = opt.samples_per_edge;
    params.seed = opt.seed;

    Json report;
    report["command"] = "audit";
    report["flags"] = Json{{"side", opt.side},
                           {"mechanism", opt.mechanism},
                           {"instance", opt.instance_path},
                           {"samples_per_edge", opt.samples_per_edge}};
    report["seed"] = opt.seed;

    AuditReport result;
    const TreeMetric* metric = nullptr;
    if (opt.side == "naive") {
        if (!std::holds_alternative<HierarchyInstance>(doc)) {
            std::cerr << "error: --side naive needs a hierarchy document\n";
            return kExitInvalid;
        }
        const HierarchyInstance& h = std::get<HierarchyInstance>(doc);
        metric = &h.metric;
        report["instance_digest"] = digest(serialize(h));
        HierarchyMechanismKind kind;
        if (opt.mechanism == "iwmm") {
            kind = HierarchyMechanismKind::Iwmm;
        } else if (opt.mechanism == "direct-median") {
            kind = HierarchyMechanismKind::DirectMedian;
        } else {
            std::cerr << "error: --side naive audits iwmm or direct-median\n";
            return kExitInvalid;
        }
        result = audit_naive(h, kind, default_candidates(h, params));
    } else {
        if (!std::holds_alternative<Instance>(doc)) {
            std::cerr << "error: --side " << opt.side << " needs a one-level instance document\n";
            return kExitInvalid;
        }
        const Instance& inst = std::get<Instance>(doc);
        metric = &inst.metric;
        report["instance_digest"] = digest(serialize(inst));
        MechanismKind kind;
        if (opt.mechanism == "wmm") {
            kind = MechanismKind::Wmm;
        } else if (opt.mechanism == "tprm") {
            kind = MechanismKind::Tprm;
        } else if (opt.mechanism == "trm") {
            kind = MechanismKind::Trm;
        } else if (opt.mechanism == "global-median" || opt.mechanism == "opt") {
            kind = MechanismKind::GlobalMedian;
        } else {
            std::cerr << "error: unknown mechanism '" << opt.mechanism << "'\n";
            return kExitInvalid;
        }
        const auto cands = default_candidates(inst, params);
        result = opt.side == "agent"
                     ? audit_agent_side(inst, kind, cands)
                     : audit_mediator_side(inst, kind, cands, /*check_mediator_based=*/true);
    }

    report["mechanism"] = result.mechanism;
    report["side"] = result.side;
    report["deviations_tested"] = result.deviations_tested;
    report["mediator_based_consistent"] = result.mediator_based_consistent;
    if (result.counterexample) {
        report["verdict"] = "counterexample";
        report["counterexample"] = deviation_json(*metric, *result.counterexample);
    } else {
        report["verdict"] = "no-beneficial-deviation-found";
    }
    emit(report);
    return result.clean() ? kExitOk : kExitCounterexample;
}

struct CampaignOptions {
    std::string mechanism;
    long long trials = 0;
    std::uint64_t seed = 0;
    std::string assert_bound;
    GeneratorParams gen;
};

int run_campaign(const CampaignOptions& opt) {
    std::optional<Rational> bound;
    if (!opt.assert_bound.empty()) bound = parse_rational(opt.assert_bound);

    Json report;
    report["command"] = "campaign";
    report["mechanism"] = opt.mechanism;
    report["seed"] = opt.seed;
    report["trials_requested"] = opt.trials;
    if (bound) report["bound"] = rational_str(*bound);
    report["trials"] = Json::array();

    GeneratorParams gen = opt.gen;
    if (opt.mechanism == "tprm") gen.force_path = true;

    Rational max_ratio(0);
    Rational ratio_sum(0);
    bool any_infinite = false;
    long long violations = 0;
    for (long long i = 0; i < opt.trials; ++i) {
        gen.seed = opt.seed + static_cast<std::uint64_t>(i);
        Json row;
        row["index"] = i;
        row["seed"] = gen.seed;

        CostReport cost;
        if (opt.mechanism == "iwmm") {
            HierarchyInstance h = gen_random_hierarchy(gen);
            row["instance_digest"] = digest(serialize(h));
            cost = competitive_report(h, iwmm(h));
        } else {
            Instance inst = gen_random(gen);
            row["instance_digest"] = digest(serialize(inst));
            MechanismOutcome out;
            if (opt.mechanism == "wmm") {
                out = wmm(inst);
            } else if (opt.mechanism == "tprm") {
                out = tprm(inst);
            } else if (opt.mechanism == "trm") {
                out = trm(inst);
            } else { // opt
                out = global_median(inst);
            }
            cost = competitive_report(inst, out);
        }

        row["infinite_ratio"] = cost.infinite_ratio;
        if (cost.infinite_ratio) {
            any_infinite = true;
            row["ratio"] = nullptr;
        } else {
            row["ratio"] = rational_str(cost.ratio);
            row["ratio_decimal"] = rational_decimal(cost.ratio);
            if (cost.ratio > max_ratio) max_ratio = cost.ratio;
            ratio_sum += cost.ratio;
        }
        if (bound && (cost.infinite_ratio || cost.ratio > *bound)) {
            ++violations;
            row["violates_bound"] = true;
        }
        report["trials"].push_back(std::move(row));
    }

    report["trials_run"] = opt.trials;
    if (opt.trials > 0 && !any_infinite) {
        report["max_ratio"] = rational_str(max_ratio);
        report["max_ratio_decimal"] = rational_decimal(max_ratio);
        const Rational mean = ratio_sum / Rational(opt.trials);
        report["mean_ratio"] = rational_str(mean);
        report["mean_ratio_decimal"] = rational_decimal(mean);
    } else {
        report["max_ratio"] = nullptr;
        report["mean_ratio"] = nullptr;
    }
    report["violations"] = violations;
    emit(report);
    return (bound && violations > 0) ? kExitBound : kExitOk;
}

struct FamilyOptions {
    std::string name;
    std::string l = "0";
    std::string h = "1";
    long long r = 1;
    int s = 3;
    int variant = 1;
};

int run_family(const FamilyOptions& opt) {
    if (opt.name == "ex51") {
        std::cout << serialize(family_ex51(parse_rational(opt.l), parse_rational(opt.h), opt.r,
                                           opt.variant));
    } else if (opt.name == "ex61") {
        std::cout << serialize(family_ex61(opt.r, opt.s, opt.variant));
    } else if (opt.name == "fig1") {
        std::cout << serialize(fig1_tree());
    } else if (opt.name == "sec6") {
        std::cout << serialize(sec6_example());
    } else {
        std::cerr << "error: unknown family '" << opt.name << "'\n";
        return kExitInvalid;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facility location mechanisms with strategic mediators on tree metrics"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "Run a mechanism on an instance");
    solve->add_option("--mechanism", solve_opt.mechanism, "wmm|tprm|trm|iwmm|opt")
        ->required()
        ->check(CLI::IsMember({"wmm", "tprm", "trm", "iwmm", "opt"}));
    solve->add_option("--instance", solve_opt.instance_path, "instance file, or - for stdin")->required();
    solve->add_option("--z", solve_opt.z_override, "override the global tie-break point");

    AuditOptions audit_opt;
    CLI::App* audit = app.add_subcommand("audit", "Search for profitable deviations");
    audit->add_option("--side", audit_opt.side, "agent|mediator|naive")
        ->required()
        ->check(CLI::IsMember({"agent", "mediator", "naive"}));
    audit->add_option("--mechanism", audit_opt.mechanism, "mechanism to audit")->required();
    audit->add_option("--instance", audit_opt.instance_path, "instance file, or - for stdin")->required();
    audit->add_option("--samples-per-edge", audit_opt.samples_per_edge,
                      "random interior candidates per edge");
    audit->add_option("--seed", audit_opt.seed, "candidate sampling seed");

    CampaignOptions camp_opt;
    CLI::App* campaign = app.add_subcommand("campaign", "Seeded random competitive-ratio trials");
    campaign->add_option("--mechanism", camp_opt.mechanism, "wmm|tprm|trm|iwmm|opt")
        ->required()
        ->check(CLI::IsMember({"wmm", "tprm", "trm", "iwmm", "opt"}));
    campaign->add_option("--trials", camp_opt.trials, "number of trials")->required();
    campaign->add_option("--seed", camp_opt.seed, "base seed; trial i uses seed + i");
    campaign->add_option("--assert-bound", camp_opt.assert_bound,
                         "fail (exit 5) if any ratio exceeds this rational");
    campaign->add_option("--min-vertices", camp_opt.gen.min_vertices);
    campaign->add_option("--max-vertices", camp_opt.gen.max_vertices);
    campaign->add_option("--min-mediators", camp_opt.gen.min_mediators);
    campaign->add_option("--max-mediators", camp_opt.gen.max_mediators);
    campaign->add_option("--min-agents", camp_opt.gen.min_agents);
    campaign->add_option("--max-agents", camp_opt.gen.max_agents);
    campaign->add_option("--min-depth", camp_opt.gen.min_depth);
    campaign->add_option("--max-depth", camp_opt.gen.max_depth);
    std::string min_len, max_len;
    campaign->add_option("--min-edge-len", min_len, "rational");
    campaign->add_option("--max-edge-len", max_len, "rational");
    campaign->add_option("--length-grid", camp_opt.gen.length_grid);
    campaign->add_option("--offset-grid", camp_opt.gen.offset_grid);
    campaign->add_flag("--path", camp_opt.gen.force_path, "restrict to path metrics");

    FamilyOptions fam_opt;
    CLI::App* family = app.add_subcommand("family", "Emit a built-in instance family document");
    family->add_option("--name", fam_opt.name, "ex51|ex61|fig1|sec6")
        ->required()
        ->check(CLI::IsMember({"ex51", "ex61", "fig1", "sec6"}));
    family->add_option("--l", fam_opt.l, "left location (rational)");
    family->add_option("--h-loc", fam_opt.h, "right location (rational)");
    family->add_option("--r", fam_opt.r, "family size parameter");
    family->add_option("--s", fam_opt.s, "hierarchy depth");
    family->add_option("--variant", fam_opt.variant, "family variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitInvalid;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = kExitOk;
    try {
        if (solve->parsed()) {
            code = run_solve(solve_opt);
        } else if (audit->parsed()) {
            code = run_audit(audit_opt);
        } else if (campaign->parsed()) {
            if (!min_len.empty()) camp_opt.gen.min_edge_length = parse_rational(min_len);
            if (!max_len.empty()) camp_opt.gen.max_edge_length = parse_rational(max_len);
            code = run_campaign(camp_opt);
        } else if (family->parsed()) {
            code = run_family(fam_opt);
        }
    } catch (const shape_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = kExitShape;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        code = kExitInvalid;
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    std::cerr << "elapsed_ms=" << elapsed.count() << "\n";
    return code;
}
