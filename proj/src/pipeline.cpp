#include "kpref/pipeline.hpp"

#include <chrono>

namespace kpref {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool cut_formula_ok(const FormP& a) { return within_level(a, Level{true, 1}) || within_level(a, Level{false, 1}); }

}  // namespace

WalkReport verify_truth_walk(const DerivP& root, const Universe& u, const TermBattery& battery, const WalkOptions& opt) {
    WalkReport rep;
    if (!ord_le(root->rank, omega_plus(1))) {
        rep.refused = true;
        rep.verdict = Truth::Unknown;
        rep.violations.push_back({".", "rank bound " + root->rank.str() + " above Omega+1; audit refused"});
        return rep;
    }
    std::vector<Step> path;
    auto fail = [&](const std::string& msg) {
        rep.violations.push_back({path_str(path), msg});
        rep.verdict = Truth::False;
    };
    std::function<void(const DerivP&, std::size_t)> go = [&](const DerivP& w, std::size_t depth) {
        if (rep.visited >= opt.node_budget) return;
        ++rep.visited;
        Truth t = truth_sequent(w->end(), u);
        if (t == Truth::False) {
            fail("end sequent false: " + w->end().str());
            return;
        }
        if (t == Truth::Unknown && rep.verdict == Truth::True) rep.verdict = Truth::Unknown;
        if (w->rule == Rule::Cut && !cut_formula_ok(w->principal))
            fail("cut formula not Sigma1/Pi1: " + show(w->principal));
        if (w->rule == Rule::SigmaRef) {
            FormP a = w->minor;
            Truth ta = truth_any(a, u);
            Truth tr = truth_any(sigma_ref_formula(a), u);
            if (ta == Truth::True && tr == Truth::False) fail("reflection lost: " + show(a) + " holds but not in the universe");
        }
        if (depth >= opt.depth) return;
        for (const auto& [idx, c] : explore_kids(w, battery)) {
            if (!c) continue;
            path.push_back(idx);
            go(c, depth + 1);
            path.pop_back();
            if (rep.violations.size() >= 20) return;
        }
    };
    go(root, 0);
    return rep;
}

DerivP replace_kid(const DerivP& w, std::size_t i, const DerivP& kid) {
    std::vector<std::shared_ptr<LazyKid>> kids = w->kids;
    if (i >= kids.size()) throw std::out_of_range("replace_kid: no such child");
    kids[i] = ready(kid);
    switch (w->rule) {
    case Rule::BEx:
    case Rule::Ex: return mk_witness(w->rule, w->principal, w->witness, w->side, w->length, w->rank, kids[0], w->origin);
    case Rule::SigmaRef: return mk_sigma_ref(w->minor, w->side, w->length, w->rank, kids[0], w->origin);
    default: return mk_node(w->rule, w->principal, w->side, w->length, w->rank, std::move(kids), w->origin);
    }
}

nlohmann::json node_json(const NodeInfo& n) {
    return {{"rule", rule_str(n.rule)},
            {"principal", n.principal ? show(n.principal) : ""},
            {"end", n.end.str()},
            {"length", n.length.str()},
            {"rank", n.rank.str()}};
}

nlohmann::json PipelineReport::to_json(bool timing) const {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["proof"] = proof;
    j["subst"] = subst;
    j["k"] = k;
    j["m"] = m;
    j["ok"] = ok();
    j["failed_stage"] = failed_stage;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : stages) {
        nlohmann::json e = {{"name", s.name}, {"root", node_json(s.root)}, {"note", s.note}};
        if (timing) e["wall_ms"] = s.wall_ms;
        j["stages"].push_back(e);
    }
    j["final_rank"] = final_rank ? final_rank->str() : "";
    j["final_length"] = final_length ? final_length->str() : "";
    j["truth_verdict"] = truth_str(verdict);
    j["explored_nodes"] = explored;
    j["violations"] = nlohmann::json::array();
    for (const auto& v : violations) j["violations"].push_back({{"stage", v.stage}, {"path", v.path}, {"message", v.message}});
    return j;
}

PipelineReport reflect(const FinProofP& p, const std::string& subst, const PipelineOptions& opt, const std::string& name) {
    PipelineReport rep;
    rep.proof = name;
    rep.subst = subst;
    Universe u = Universe::make(opt.universe_rank, opt.omega_fuel);
    TermBattery battery = battery_by_name(opt.battery);

    auto stage_fail = [&](const std::string& stage, const std::string& path, const std::string& msg) {
        rep.violations.push_back({stage, path, msg});
        if (rep.failed_stage.empty()) rep.failed_stage = stage;
    };
    auto record = [&](const std::string& stage, const DerivP& w, Clock::time_point t0, std::string note = "") {
        rep.stages.push_back({stage, node_info(*w), ms_since(t0), std::move(note)});
    };

    // check
    auto t0 = Clock::now();
    CheckReport chk = check_fin(*p);
    rep.k = chk.k;
    rep.m = chk.m;
    if (!chk.valid()) {
        for (const auto& v : chk.violations) stage_fail("check", v.path, v.message);
        return rep;
    }
    std::map<std::string, TermP> sigma;
    try {
        sigma = parse_subst(subst);
    } catch (const std::exception& e) {
        stage_fail("check", ".", std::string("bad substitution: ") + e.what());
        return rep;
    }

    // embed
    t0 = Clock::now();
    DerivP w;
    try {
        w = embed_proof(p, sigma);
    } catch (const std::exception& e) {
        stage_fail("embed", ".", e.what());
        return rep;
    }
    OrdNotation bound = embedding_bound(*p, chk.k);
    if (!ord_lt(w->length, bound))
        stage_fail("embed", ".", "length " + w->length.str() + " not below " + bound.str());
    if (!ord_eq(w->rank, omega_plus(chk.m)))
        stage_fail("embed", ".", "rank " + w->rank.str() + " is not Omega+" + std::to_string(chk.m));
    record("embed", w, t0, "bound " + bound.str());
    if (!rep.ok()) return rep;

    if (opt.sabotage) {
        t0 = Clock::now();
        w = opt.sabotage(w);
        record("sabotage", w, t0);
    }

    // wellformed
    t0 = Clock::now();
    WfOptions wo;
    wo.depth = opt.wf_depth;
    wo.universe = u;
    WfReport wf = check_wf_bounded(w, battery, wo);
    rep.explored += wf.visited;
    for (const auto& v : wf.violations) stage_fail("wellformed", v.path, v.message);
    record("wellformed", w, t0, std::to_string(wf.visited) + " nodes" + (wf.truncated ? ", truncated" : ""));
    if (!rep.ok()) return rep;

    // cut elimination down to Omega+1
    for (unsigned i = 1; i < chk.m; ++i) {
        t0 = Clock::now();
        OrdNotation before_len = w->length, before_rank = w->rank;
        try {
            w = cut_elim(w);
        } catch (const std::exception& e) {
            stage_fail("cutelim", ".", e.what());
            return rep;
        }
        if (!ord_eq(w->rank, ord_pred(before_rank)))
            stage_fail("cutelim", ".", "rank did not drop by one: " + w->rank.str());
        if (!ord_eq(w->length, OrdNotation::pow(before_len)))
            stage_fail("cutelim", ".", "length is not omega^" + before_len.str());
        record("cutelim", w, t0);
        if (!rep.ok()) return rep;
    }

    // bounds
    t0 = Clock::now();
    if (!below_eps_omega_plus_1(w->length).flag) stage_fail("bounds", ".", "length not below eps(W+1)");
    if (!ord_le(w->rank, omega_plus(1))) stage_fail("bounds", ".", "rank " + w->rank.str() + " above Omega+1");
    rep.final_rank = w->rank;
    rep.final_length = w->length;
    rep.final_derivation = w;
    record("bounds", w, t0);
    if (!rep.ok()) return rep;

    // truth
    t0 = Clock::now();
    WalkReport walk = verify_truth_walk(w, u, battery, opt.walk);
    rep.explored += walk.visited;
    rep.verdict = walk.verdict;
    for (const auto& v : walk.violations) stage_fail("truth", v.path, v.message);
    record("truth", w, t0, std::to_string(walk.visited) + " nodes");
    return rep;
}

PipelineReport reflect_text(const std::string& text, const std::string& subst, const PipelineOptions& opt,
                            const std::string& name) {
    FinProofP p;
    try {
        p = parse_proof(text);
    } catch (const std::exception& e) {
        PipelineReport rep;
        rep.proof = name;
        rep.subst = subst;
        rep.violations.push_back({"check", ".", std::string("parse: ") + e.what()});
        rep.failed_stage = "check";
        return rep;
    }
    return reflect(p, subst, opt, name);
}

namespace {

const std::string& corpus_text(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e.text;
    throw std::out_of_range("no corpus entry " + name);
}

// First Ex node sitting on an axiom gets the empty set as witness.
DerivP wrong_witness(const DerivP& w) {
    if ((w->rule == Rule::Ex || w->rule == Rule::BEx) && w->kid(0)->rule == Rule::Axiom) {
        TermP bad = t_empty();
        DerivP ax = mk_axiom(w->side.with(decompose_child(w->principal, bad)), "sabotage");
        return mk_witness(w->rule, w->principal, bad, w->side, w->length, w->rank, ready(ax), "sabotage");
    }
    for (std::size_t i = 0; i < w->kids.size(); ++i) {
        DerivP k = wrong_witness(w->kid(i));
        if (k != w->kid(i)) return replace_kid(w, i, k);
    }
    return w;
}

DerivP flat_length(const DerivP& w) {
    OrdNotation len;
    for (std::size_t i = 0; i < w->kids.size(); ++i) len = ord_max(len, w->kid(i)->length);
    return with_bounds(w, len, w->rank);
}

DerivP zero_rank(const DerivP& w) { return with_bounds(w, w->length, OrdNotation::nat(0)); }

}  // namespace

std::vector<Sabotage> sabotages() {
    std::vector<Sabotage> out;
    for (const auto& b : bad_corpus()) out.push_back({b.name, b.text, "", nullptr, "check", b.expected});
    out.push_back({"pair_wrong_witness", corpus_text("pair"), "a={} b={{}}", wrong_witness, "wellformed",
                   "no true Delta0"});
    out.push_back({"cut_flat_length", corpus_text("cut"), "a={} b={{}}", flat_length, "wellformed",
                   "length not strictly below"});
    out.push_back({"cut_zero_rank", corpus_text("cut"), "a={} b={{}}", zero_rank, "wellformed", "rank"});
    return out;
}

}  // namespace kpref
