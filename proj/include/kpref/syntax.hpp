#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kpref/hfset.hpp"
#include "kpref/ord.hpp"

namespace kpref {

struct Term;
struct Formula;
using TermP = std::shared_ptr<const Term>;
using FormP = std::shared_ptr<const Formula>;

// Bound variables use de Bruijn indices; free variables are names and only
// occur in the finitary calculus.
struct Term {
    enum class Kind { Const, Bound, Free, Pair, Union, Sep };
    Kind kind = Kind::Const;
    HFSet value;
    unsigned index = 0;
    std::string name;
    TermP a, b;
    FormP body;  // Sep: binds index 0
    std::string key;
    unsigned loose = 0;  // 1 + largest loose bound index, 0 if none
    bool has_free = false;

    bool closed() const { return loose == 0 && !has_free; }

    mutable std::once_flag ev_once;
    mutable std::optional<HFSet> ev_cache;
    mutable std::string ev_error;
};

struct Formula {
    enum class Kind { Mem, NotMem, And, Or, BAll, BEx, All, Ex };
    Kind kind = Kind::Mem;
    TermP s, t;  // atoms: s in t; bounded quantifiers: t is the bound
    FormP l, r;  // And/Or: both; quantifiers: l is the body
    std::string key;
    unsigned loose = 0;
    bool has_free = false;
    bool unbounded = false;  // contains an unbounded quantifier

    bool closed() const { return loose == 0 && !has_free; }
    bool is_delta0() const { return !unbounded; }

    mutable std::once_flag rank_once;
    mutable std::optional<OrdNotation> rank_cache;
};

struct SyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// constructors
TermP t_const(const HFSet& v);
TermP t_bound(unsigned i);
TermP t_free(const std::string& name);
TermP t_pair(TermP a, TermP b);
TermP t_union(TermP a);
TermP t_sep(TermP base, FormP body);
TermP t_empty();
TermP t_omega();

FormP f_mem(TermP s, TermP t);
FormP f_nmem(TermP s, TermP t);
FormP f_and(FormP l, FormP r);
FormP f_or(FormP l, FormP r);
FormP f_ball(TermP t, FormP body);
FormP f_bex(TermP t, FormP body);
FormP f_all(FormP body);
FormP f_ex(FormP body);

// Binder helpers taking the body as a function of the bound variable.
using BodyFn = std::function<FormP(const TermP&)>;
FormP h_ball(const TermP& t, const BodyFn& body);
FormP h_bex(const TermP& t, const BodyFn& body);
FormP h_all(const BodyFn& body);
FormP h_ex(const BodyFn& body);
TermP h_sep(const TermP& base, const BodyFn& body);
std::string fresh_name();

FormP f_eq(const TermP& s, const TermP& t);   // (all x in s) x in t  and  (all x in t) x in s
FormP f_neq(const TermP& s, const TermP& t);  // negation of f_eq
FormP f_imp(const FormP& a, const FormP& b);  // not a  or  b

FormP negate(const FormP& f);
// body[0 := term]; term must have no loose bound indices.
FormP instantiate(const FormP& body, const TermP& term);
TermP instantiate_term(const TermP& body, const TermP& term);
// Free(name) becomes the variable bound by a new outermost binder.
FormP abstract(const FormP& f, const std::string& name);
FormP substitute(const FormP& f, const std::map<std::string, TermP>& sigma);
TermP substitute_term(const TermP& t, const std::map<std::string, TermP>& sigma);
FormP substitute_free(const FormP& f, const std::string& name, const TermP& term);
void free_vars(const FormP& f, std::set<std::string>& out);
void free_vars_term(const TermP& t, std::set<std::string>& out);
bool occurs_free(const FormP& f, const std::string& name);

// Unbounded quantifiers become bounded by `bound` (a closed term).
FormP relativize(const FormP& f, const TermP& bound);
// exists z A^z for closed A.
FormP sigma_ref_formula(const FormP& a);
bool is_sigma(const FormP& f);  // no unbounded forall
bool is_pi(const FormP& f);     // no unbounded exists

struct Complexity {
    unsigned sigma = 0;  // least n with f in Sigma_n
    unsigned pi = 0;     // least n with f in Pi_n
};
Complexity complexity(const FormP& f);

// Conjunctive / disjunctive reading of non-atomic formulas.
using Index = std::variant<int, TermP>;
bool is_conjunctive(const FormP& f);
bool is_disjunctive(const FormP& f);
bool is_atomic(const FormP& f);
bool term_indexed(const FormP& f);
FormP decompose_child(const FormP& f, const Index& i);  // throws on a bad index
std::string index_str(const Index& i);

// Ev and ranks
HFSet ev_term(const TermP& t);  // closed terms; throws EvalError
OrdNotation set_rank(const TermP& t);   // |t|
OrdNotation term_rank(const TermP& t);  // omega * |t|
OrdNotation formula_rank(const FormP& f);
std::vector<OrdNotation> k_of(const FormP& f);
// Fuel used for comprehension filters during Ev.
constexpr std::uint64_t kEvFuel = 8;

// Sequents: duplicate-free, ordered by key.
class Sequent {
public:
    Sequent() = default;
    Sequent(std::initializer_list<FormP> fs);
    explicit Sequent(const std::vector<FormP>& fs);

    const std::vector<FormP>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    bool contains(const FormP& f) const;
    Sequent with(const FormP& f) const;
    Sequent without(const FormP& f) const;
    Sequent merged(const Sequent& o) const;
    Sequent minus(const Sequent& o) const;
    bool subset_of(const Sequent& o) const;
    bool operator==(const Sequent& o) const;
    bool operator!=(const Sequent& o) const { return !(*this == o); }
    std::string str() const;  // user syntax, (seq ...)

private:
    std::vector<FormP> items_;
};

// Text syntax
std::string show(const FormP& f);
std::string show(const TermP& t);
FormP parse_formula(const std::string& text);
TermP parse_term(const std::string& text);
Sequent parse_sequent(const std::string& text);

// S-expressions, shared with the proof-file reader.
struct SExpr {
    bool atom = true;
    std::string text;
    std::vector<SExpr> list;
    std::size_t offset = 0;
};
SExpr read_sexpr(const std::string& text);
std::vector<SExpr> read_sexprs(const std::string& text);

// Parse with a scope of bound names (innermost last) and a set of names that
// are read as free variables even if they look reserved.
FormP formula_from_sexpr(const SExpr& e, std::vector<std::string>& scope);
TermP term_from_sexpr(const SExpr& e, std::vector<std::string>& scope);

}  // namespace kpref
