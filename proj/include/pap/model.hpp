#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pap {

inline constexpr double kEps = 1e-9;

struct PapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Objects: tagged ground literals (int, real, string, record of named fields).
// ---------------------------------------------------------------------------

struct Object;
using Record = std::map<std::string, Object>;

struct Object {
    std::variant<long long, double, std::string, Record> v;

    Object() : v(0LL) {}
    Object(long long i) : v(i) {}
    Object(double d) : v(d) {}
    Object(std::string s) : v(std::move(s)) {}
    Object(Record r) : v(std::move(r)) {}

    bool is_int() const { return std::holds_alternative<long long>(v); }
    bool is_real() const { return std::holds_alternative<double>(v); }
    bool is_str() const { return std::holds_alternative<std::string>(v); }
    bool is_record() const { return std::holds_alternative<Record>(v); }
    bool is_numeric() const { return is_int() || is_real(); }

    long long as_int() const { return std::get<long long>(v); }
    double as_real() const {
        return is_int() ? static_cast<double>(as_int()) : std::get<double>(v);
    }
    const std::string& as_str() const { return std::get<std::string>(v); }
    const Record& as_record() const { return std::get<Record>(v); }
};

// Total order; ints and reals compare by numeric value (1 and 1.0 are equal).
int compare(const Object& a, const Object& b);
inline bool operator==(const Object& a, const Object& b) { return compare(a, b) == 0; }
inline bool operator!=(const Object& a, const Object& b) { return compare(a, b) != 0; }
inline bool operator<(const Object& a, const Object& b) { return compare(a, b) < 0; }

std::string to_string(const Object& o);

// ---------------------------------------------------------------------------
// Terms: objects, variables, field access, arithmetic.
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Obj, Var, Field, BinOp };
    Kind kind;
    Object obj;        // Kind::Obj
    std::string name;  // variable name or field name
    TermPtr lhs, rhs;  // Field base (lhs) / BinOp children
    char op = 0;       // + - * /
};

TermPtr term_obj(Object o);
TermPtr term_var(std::string name);
TermPtr term_field(TermPtr base, std::string field);
TermPtr term_binop(char op, TermPtr lhs, TermPtr rhs);

bool term_equal(const TermPtr& a, const TermPtr& b);
bool term_ground(const TermPtr& t);
void collect_vars(const TermPtr& t, std::set<std::string>& out);
std::string to_string(const TermPtr& t);

// ---------------------------------------------------------------------------
// Code calls and code call conditions.
// ---------------------------------------------------------------------------

struct CodeCall {
    std::string domain;
    std::string fn;
    std::vector<TermPtr> args;
};
std::string to_string(const CodeCall& c);

// A fully instantiated code call, usable as an ordered map key.
struct GroundCall {
    std::string domain;
    std::string fn;
    std::vector<Object> args;
};
int compare(const GroundCall& a, const GroundCall& b);
inline bool operator==(const GroundCall& a, const GroundCall& b) { return compare(a, b) == 0; }
inline bool operator<(const GroundCall& a, const GroundCall& b) { return compare(a, b) < 0; }
std::string to_string(const GroundCall& c);

struct CodeCallAtom {
    bool positive = true;  // in(...) vs notin(...)
    TermPtr subject;
    CodeCall call;
};
std::string to_string(const CodeCallAtom& a);

enum class Rel { Eq, Ne, Lt, Gt, Le, Ge };
std::string to_string(Rel r);

struct Comparison {
    TermPtr lhs;
    Rel rel;
    TermPtr rhs;
};
std::string to_string(const Comparison& c);

using Conjunct = std::variant<CodeCallAtom, Comparison>;
using CodeCallCondition = std::vector<Conjunct>;  // evaluated left to right
std::string to_string(const Conjunct& c);
std::string to_string(const CodeCallCondition& c);
void collect_vars(const CodeCallCondition& c, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// Probability intervals and annotations.
// ---------------------------------------------------------------------------

struct ProbInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool valid() const {
        return lo >= -kEps && hi <= 1.0 + kEps && lo <= hi + kEps;
    }
    bool contains(const ProbInterval& inner) const {
        return lo <= inner.lo + kEps && inner.hi <= hi + kEps;
    }
    bool contains(double p) const { return lo - kEps <= p && p <= hi + kEps; }
};
inline bool operator==(const ProbInterval& a, const ProbInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
}
std::string to_string(const ProbInterval& i);

struct AnnotationItem {
    enum class Kind { Const, Var, Apply };
    Kind kind = Kind::Const;
    double value = 0.0;
    std::string name;  // variable or function name
    std::vector<AnnotationItem> args;

    static AnnotationItem constant(double v) { return {Kind::Const, v, {}, {}}; }
    static AnnotationItem variable(std::string n) { return {Kind::Var, 0.0, std::move(n), {}}; }
    static AnnotationItem apply(std::string fn, std::vector<AnnotationItem> a) {
        return {Kind::Apply, 0.0, std::move(fn), std::move(a)};
    }
};
bool operator==(const AnnotationItem& a, const AnnotationItem& b);
std::string to_string(const AnnotationItem& a);

struct Annotation {
    AnnotationItem lo;
    AnnotationItem hi;
};
std::string to_string(const Annotation& a);

enum class Strategy { Ig, Pc, Nc, In };
std::string to_string(Strategy s);
std::optional<Strategy> strategy_from_string(const std::string& s);

struct AnnotatedCondition {
    CodeCallCondition cond;
    Annotation ann;
    Strategy strat = Strategy::Ig;
};
std::string to_string(const AnnotatedCondition& ac);

// ---------------------------------------------------------------------------
// Status atoms, rules, actions, constraints, programs.
// ---------------------------------------------------------------------------

enum class Modality { P, F, W, Do, O };
std::string to_string(Modality m);
std::optional<Modality> modality_from_string(const std::string& s);

struct StatusAtom {
    Modality op = Modality::P;
    std::string action;
    std::vector<TermPtr> args;
};
std::string to_string(const StatusAtom& a);

struct GroundAction {
    std::string name;
    std::vector<Object> args;
};
int compare(const GroundAction& a, const GroundAction& b);
inline bool operator==(const GroundAction& a, const GroundAction& b) { return compare(a, b) == 0; }
inline bool operator<(const GroundAction& a, const GroundAction& b) { return compare(a, b) < 0; }
std::string to_string(const GroundAction& a);

struct GroundStatusAtom {
    Modality op = Modality::P;
    GroundAction atom;
};
int compare(const GroundStatusAtom& a, const GroundStatusAtom& b);
inline bool operator==(const GroundStatusAtom& a, const GroundStatusAtom& b) {
    return compare(a, b) == 0;
}
inline bool operator<(const GroundStatusAtom& a, const GroundStatusAtom& b) {
    return compare(a, b) < 0;
}
std::string to_string(const GroundStatusAtom& a);

using StatusSet = std::set<GroundStatusAtom>;
std::string to_string(const StatusSet& s);

std::set<GroundAction> op_projection(const StatusSet& ps, Modality m);

struct Rule {
    StatusAtom head;
    std::vector<AnnotatedCondition> body_prob;  // the condition part Γ
    std::vector<StatusAtom> body_pos;
    std::vector<StatusAtom> body_neg;
    int id = 0;  // 1-based position in the program text
};
std::string to_string(const Rule& r);

struct ActionDef {
    std::string name;
    std::vector<std::string> params;
    CodeCallCondition pre;               // empty = trivially true
    std::vector<CodeCallAtom> add;       // polarity "in" templates
    std::vector<CodeCallAtom> del;
};
std::string to_string(const ActionDef& a);

struct ActionAtom {
    std::string name;
    std::vector<TermPtr> args;
};
std::string to_string(const ActionAtom& a);

struct ActionConstraint {
    std::vector<ActionAtom> blocked;  // nonempty
    CodeCallCondition guard;          // empty = unconditional
};
std::string to_string(const ActionConstraint& c);

struct IntegrityConstraint {
    CodeCallCondition antecedent;
    CodeCallCondition consequent;  // exactly one conjunct
};
std::string to_string(const IntegrityConstraint& c);

struct Program {
    std::vector<Rule> rules;
    std::map<std::string, ActionDef> actions;
    std::vector<ActionConstraint> action_constraints;
    std::vector<IntegrityConstraint> integrity_constraints;

    bool positive() const {
        for (const auto& r : rules)
            if (!r.body_neg.empty()) return false;
        return true;
    }
};
std::string to_string(const Program& p);

// Validation report shared by value-level checks.
struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

}  // namespace pap
