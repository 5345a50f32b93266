#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpref/pipeline.hpp"

using namespace kpref;
using nlohmann::json;

namespace {

struct Globals {
    unsigned universe_rank = 4;
    std::uint64_t omega_fuel = 8;
    std::string battery = "std-v1";
    std::size_t depth = 3;
    bool json_out = false;
};

void add_globals(CLI::App* app, Globals& g) {
    app->add_option("--universe-rank", g.universe_rank, "Sets of rank below k form the universe");
    app->add_option("--omega-fuel", g.omega_fuel, "Naturals sampled for quantifiers bounded by omega");
    app->add_option("--battery", g.battery, "Term battery for branch exploration");
    app->add_option("--depth", g.depth, "Exploration depth");
    app->add_flag("--json", g.json_out, "Machine-readable output");
}

std::string ord_sign(CmpResult c) {
    switch (c) {
    case CmpResult::Less: return "<";
    case CmpResult::Equal: return "=";
    default: return ">";
    }
}

struct TraceRow {
    std::string path;
    NodeInfo info;
    std::size_t depth;
};

std::vector<TraceRow> trace(const DerivP& root, const TermBattery& battery, std::size_t max_depth,
                            std::size_t limit = 5000) {
    std::vector<TraceRow> rows;
    std::vector<Step> path;
    std::function<void(const DerivP&, std::size_t)> go = [&](const DerivP& w, std::size_t d) {
        if (rows.size() >= limit) return;
        rows.push_back({path_str(path), node_info(*w), d});
        if (d >= max_depth) return;
        for (const auto& [idx, c] : explore_kids(w, battery)) {
            if (!c) continue;
            path.push_back(idx);
            go(c, d + 1);
            path.pop_back();
        }
    };
    go(root, 0);
    return rows;
}

json trace_json(const std::vector<TraceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json n = node_json(r.info);
        n["address"] = r.path;
        arr.push_back(n);
    }
    return arr;
}

void print_tree(const std::vector<TraceRow>& rows) {
    for (const auto& r : rows) {
        std::string last = r.path == "." ? "." : r.path.substr(r.path.rfind('/') == std::string::npos ? 0 : r.path.rfind('/') + 1);
        std::cout << std::string(2 * r.depth, ' ') << "[" << last << "] " << rule_str(r.info.rule) << "  "
                  << r.info.end.str() << "  len " << r.info.length.str() << "  rank " << r.info.rank.str() << "\n";
    }
}

DerivP load_embedding(const std::string& file, const std::string& subst) {
    FinProofP p = load_proof(file);
    CheckReport chk = check_fin(*p);
    if (!chk.valid()) {
        std::ostringstream os;
        os << "invalid proof:";
        for (const auto& v : chk.violations) os << "\n  " << v.path << ": " << v.message;
        throw std::runtime_error(os.str());
    }
    return embed_proof(p, parse_subst(subst));
}

Index parse_index(const std::string& s) {
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::stoi(s);
    return parse_term(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kpref: ordinal notations, KP proofs and infinitary derivations"};
    app.require_subcommand(1);
    Globals g;
    int code = 0;

    // ord
    auto* ord = app.add_subcommand("ord", "Ordinal notations");
    ord->require_subcommand(1);
    std::string oa, ob;
    auto* ocmp = ord->add_subcommand("cmp", "Compare two notations");
    ocmp->add_option("a", oa)->required();
    ocmp->add_option("b", ob)->required();
    ocmp->callback([&] { std::cout << ord_sign(compare(parse_ord(oa), parse_ord(ob))) << "\n"; });
    auto* onsum = ord->add_subcommand("nsum", "Natural sum");
    onsum->add_option("a", oa)->required();
    onsum->add_option("b", ob)->required();
    onsum->callback([&] { std::cout << natural_sum(parse_ord(oa), parse_ord(ob)).str() << "\n"; });
    auto* ocnf = ord->add_subcommand("cnf", "Cantor normal form");
    ocnf->add_option("a", oa)->required();
    ocnf->callback([&] { std::cout << normalize_cnf(parse_ord(oa)).str() << "\n"; });
    auto* obelow = ord->add_subcommand("below-eps", "Is the notation below eps(W+1)");
    obelow->add_option("a", oa)->required();
    obelow->callback([&] {
        BelowEps b = below_eps_omega_plus_1(parse_ord(oa));
        if (b.flag) std::cout << "true e_" << *b.witness << "\n";
        else {
            std::cout << "false\n";
            code = 1;
        }
    });

    // kp
    auto* kp = app.add_subcommand("kp", "Finitary KP proofs");
    kp->require_subcommand(1);
    std::string file;
    auto* kcheck = kp->add_subcommand("check", "Check a proof file");
    kcheck->add_option("file", file)->required();
    add_globals(kcheck, g);
    kcheck->callback([&] {
        CheckReport r = check_fin(*load_proof(file));
        if (g.json_out) {
            json j = {{"valid", r.valid()}, {"nodes", r.nodes}, {"k", r.k}, {"m", r.m}, {"violations", json::array()}};
            for (const auto& v : r.violations) j["violations"].push_back({{"path", v.path}, {"message", v.message}});
            std::cout << j.dump(2) << "\n";
        } else if (r.valid()) {
            std::cout << "valid\n";
        } else {
            for (const auto& v : r.violations) std::cout << v.path << ": " << v.message << "\n";
        }
        if (!r.valid()) code = 1;
    });

    // rs
    auto* rs = app.add_subcommand("rs", "Infinitary derivations");
    rs->require_subcommand(1);
    std::string subst;
    bool audit = false;
    auto* rembed = rs->add_subcommand("embed", "Embed a finitary proof");
    rembed->add_option("file", file)->required();
    rembed->add_option("--subst", subst, "Closed sets for free variables, e.g. \"a={} b={{}}\"");
    rembed->add_flag("--audit-bounds", audit, "Compare the bounds with the embedding theorem");
    add_globals(rembed, g);
    rembed->callback([&] {
        FinProofP p = load_proof(file);
        CheckReport chk = check_fin(*p);
        if (!chk.valid()) throw std::runtime_error("invalid proof: " + chk.violations.front().message);
        DerivP w = embed_proof(p, parse_subst(subst));
        json j = node_json(node_info(*w));
        j["k"] = chk.k;
        j["m"] = chk.m;
        if (audit) {
            OrdNotation bound = embedding_bound(*p, chk.k);
            bool len_ok = ord_lt(w->length, bound);
            bool rank_ok = ord_eq(w->rank, omega_plus(chk.m));
            j["bound"] = bound.str();
            j["length_ok"] = len_ok;
            j["rank_ok"] = rank_ok;
            if (!len_ok || !rank_ok) code = 1;
        }
        if (g.json_out) {
            j["trace"] = trace_json(trace(w, battery_by_name(g.battery), g.depth));
            std::cout << j.dump(2) << "\n";
        } else {
            for (auto it = j.begin(); it != j.end(); ++it)
                std::cout << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
        }
    });

    std::string op, formula, index;
    auto* rtrans = rs->add_subcommand("transform", "Apply a transformer to an embedded proof");
    rtrans->add_option("file", file)->required();
    rtrans->add_option("--subst", subst);
    rtrans->add_option("--op", op)->required()->check(CLI::IsMember({"wkn", "inv", "red", "cutelim"}));
    rtrans->add_option("--formula", formula, "wkn: added formula; inv: formula to invert");
    rtrans->add_option("--index", index, "inv: child index or term");
    add_globals(rtrans, g);
    rtrans->callback([&] {
        DerivP w = load_embedding(file, subst);
        DerivP out;
        if (op == "wkn") {
            out = wkn(formula.empty() ? Sequent{} : Sequent{parse_formula(formula)}, w);
        } else if (op == "inv") {
            if (formula.empty() || index.empty()) throw CLI::ValidationError("inv needs --formula and --index");
            out = inv(parse_formula(formula), w, parse_index(index));
        } else if (op == "red") {
            if (w->rule != Rule::Cut) throw std::runtime_error("red needs a proof whose embedding ends in a cut");
            out = red(w->principal, w->kid(0), w->kid(1), w->side);
        } else {
            out = cut_elim(w);
        }
        auto rows = trace(out, battery_by_name(g.battery), g.depth);
        if (g.json_out) std::cout << json{{"op", op}, {"trace", trace_json(rows)}}.dump(2) << "\n";
        else print_tree(rows);
    });

    auto* rdump = rs->add_subcommand("dump", "Print the embedded derivation tree");
    rdump->add_option("file", file)->required();
    rdump->add_option("--subst", subst);
    add_globals(rdump, g);
    rdump->callback([&] {
        auto rows = trace(load_embedding(file, subst), battery_by_name(g.battery), g.depth);
        if (g.json_out) std::cout << trace_json(rows).dump(2) << "\n";
        else print_tree(rows);
    });

    // reflect
    auto* refl = app.add_subcommand("reflect", "Embed, eliminate cuts down to Omega+1 and audit truth");
    refl->add_option("file", file)->required();
    refl->add_option("--subst", subst);
    bool timing = false;
    refl->add_flag("--timing", timing, "Include wall times in the report");
    add_globals(refl, g);
    refl->callback([&] {
        PipelineOptions opt;
        opt.universe_rank = g.universe_rank;
        opt.omega_fuel = g.omega_fuel;
        opt.battery = g.battery;
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot read " + file);
        std::stringstream ss;
        ss << in.rdbuf();
        PipelineReport r = reflect_text(ss.str(), subst, opt, file);
        std::cout << r.to_json(timing).dump(2) << "\n";
        if (!r.ok() || r.verdict != Truth::True) code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return code;
}
