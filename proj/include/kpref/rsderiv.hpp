#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpref/ord.hpp"
#include "kpref/syntax.hpp"
#include "kpref/truth.hpp"

namespace kpref {

enum class Rule { Axiom, And, Or0, Or1, BAll, BEx, All, Ex, Cut, SigmaRef };
std::string rule_str(Rule r);

struct Derivation;
using DerivP = std::shared_ptr<const Derivation>;
using BranchFn = std::function<DerivP(const TermP&)>;
using KidFn = std::function<DerivP()>;

// Finite child computed on first demand.
class LazyKid {
public:
    explicit LazyKid(KidFn f) : fn_(std::move(f)) {}
    explicit LazyKid(DerivP d);
    const DerivP& get() const;
    bool forced() const;

private:
    KidFn fn_;
    mutable std::once_flag once_;
    mutable DerivP value_;
    mutable std::atomic<bool> done_{false};
};

struct Derivation {
    Rule rule = Rule::Axiom;
    FormP principal;  // Cut: the cut formula; Axiom: none
    Sequent side;     // Axiom: the whole sequent
    OrdNotation length;
    OrdNotation rank;
    std::vector<std::shared_ptr<LazyKid>> kids;
    BranchFn branch;  // BAll, All
    TermP witness;    // BEx, Ex
    FormP minor;      // SigmaRef: the reflected formula
    std::string origin;

    Sequent end() const;
    std::size_t arity() const;  // finite children expected by the rule
    bool branching() const { return rule == Rule::BAll || rule == Rule::All; }
    // Finite child i; forces it.
    DerivP kid(std::size_t i) const;
    // Branch child at s; counts the invocation.
    DerivP at(const TermP& s) const;

    mutable std::mutex cache_mu;
    mutable std::unordered_map<std::string, DerivP> cache;
};

// Global invocation counter for branch functions.
std::uint64_t branch_calls();
void reset_branch_calls();
// Optional memo of branch children per node (off by default).
void set_branch_cache(bool on);
bool branch_cache();

// Minor formula feeding child i (int) or branch term; throws on a bad index.
FormP child_minor(const Derivation& w, const Index& i);
// The index at which an inversion of the principal formula finds child i.
std::optional<Index> principal_index(const Derivation& w, std::size_t i);

struct NodeInfo {
    Rule rule;
    FormP principal;
    Sequent end;
    OrdNotation length;
    OrdNotation rank;
};
NodeInfo node_info(const Derivation& w);

// Address step: a finite child index or a branch term.
using Step = Index;
// Empty (nullptr) for out-of-shape addresses.
DerivP navigate(const DerivP& w, const std::vector<Step>& path);
std::string path_str(const std::vector<Step>& path);

bool check_quasicode(const Derivation& w);
std::string quasicode_problem(const Derivation& w);  // empty when fine

// Constructors. Kids are given as thunks or values.
DerivP mk_axiom(Sequent s, std::string origin = "");
DerivP mk_node(Rule rule, FormP principal, Sequent side, OrdNotation length, OrdNotation rank,
               std::vector<std::shared_ptr<LazyKid>> kids, std::string origin = "");
DerivP mk_branch(Rule rule, FormP principal, Sequent side, OrdNotation length, OrdNotation rank, BranchFn fn,
                 std::string origin = "");
DerivP mk_witness(Rule rule, FormP principal, TermP witness, Sequent side, OrdNotation length, OrdNotation rank,
                  std::shared_ptr<LazyKid> kid, std::string origin = "");
DerivP mk_sigma_ref(FormP reflected, Sequent side, OrdNotation length, OrdNotation rank, std::shared_ptr<LazyKid> kid,
                    std::string origin = "");
std::shared_ptr<LazyKid> lazy(KidFn f);
std::shared_ptr<LazyKid> ready(DerivP d);
// Same node with new bounds; children shared.
DerivP with_bounds(const DerivP& w, OrdNotation length, OrdNotation rank);

struct TermBattery {
    std::string name;
    std::vector<TermP> terms;
};
// std-v1: V_3 constants, pairs of them, their unions, and omega.
TermBattery standard_battery();
TermBattery battery_by_name(const std::string& name);  // throws on unknown

struct Violation {
    std::string path;
    std::string message;
};

struct WfReport {
    std::vector<Violation> violations;
    std::size_t visited = 0;
    bool truncated = false;  // depth fuel ran out somewhere
    bool ok() const { return violations.empty(); }
};

struct WfOptions {
    std::size_t depth = 6;
    std::size_t max_violations = 20;
    std::size_t node_budget = 200000;
    Universe universe = Universe::make(4, 8);
};

// Local conditions of a derivation at one node, children included.
std::vector<std::string> check_local(const Derivation& w, const std::vector<std::pair<Index, DerivP>>& kids,
                                     const Universe& u);
WfReport check_wf_bounded(const DerivP& w, const TermBattery& battery, const WfOptions& opt);

// Children visited by explorations: finite kids, or the battery for branches.
std::vector<std::pair<Index, DerivP>> explore_kids(const DerivP& w, const TermBattery& battery);

}  // namespace kpref
