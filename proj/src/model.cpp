#include "pap/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pap {

// ---------------------------------------------------------------------------
// Objects.
// ---------------------------------------------------------------------------

namespace {

// Group rank for the total order: numerics sort together so that cross-type
// numeric comparison stays a strict weak ordering.
int group_rank(const Object& o) {
    if (o.is_numeric()) return 0;
    if (o.is_str()) return 1;
    return 2;
}

int compare_records(const Record& a, const Record& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        int c = compare(ia->second, ib->second);
        if (c != 0) return c;
    }
    if (ia != a.end()) return 1;
    if (ib != b.end()) return -1;
    return 0;
}

}  // namespace

int compare(const Object& a, const Object& b) {
    int ra = group_rank(a), rb = group_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (ra) {
        case 0: {
            if (a.is_int() && b.is_int()) {
                long long x = a.as_int(), y = b.as_int();
                return x < y ? -1 : x > y ? 1 : 0;
            }
            double x = a.as_real(), y = b.as_real();
            return x < y ? -1 : x > y ? 1 : 0;
        }
        case 1: {
            const auto& x = a.as_str();
            const auto& y = b.as_str();
            return x < y ? -1 : x > y ? 1 : 0;
        }
        default:
            return compare_records(a.as_record(), b.as_record());
    }
}

std::string to_string(const Object& o) {
    if (o.is_int()) return std::to_string(o.as_int());
    if (o.is_real()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(o.v));
        std::string s = buf;
        // Keep reals visually distinct from ints for round-tripping.
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        return s;
    }
    if (o.is_str()) return o.as_str();
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [k, v] : o.as_record()) {
        if (!first) out << ", ";
        first = false;
        out << k << ": " << to_string(v);
    }
    out << "}";
    return out.str();
}

// ---------------------------------------------------------------------------
// Terms.
// ---------------------------------------------------------------------------

TermPtr term_obj(Object o) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Obj;
    t->obj = std::move(o);
    return t;
}

TermPtr term_var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr term_field(TermPtr base, std::string field) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Field;
    t->lhs = std::move(base);
    t->name = std::move(field);
    return t;
}

TermPtr term_binop(char op, TermPtr lhs, TermPtr rhs) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::BinOp;
    t->op = op;
    t->lhs = std::move(lhs);
    t->rhs = std::move(rhs);
    return t;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Obj:
            return a->obj == b->obj;
        case Term::Kind::Var:
            return a->name == b->name;
        case Term::Kind::Field:
            return a->name == b->name && term_equal(a->lhs, b->lhs);
        case Term::Kind::BinOp:
            return a->op == b->op && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
    }
    return false;
}

bool term_ground(const TermPtr& t) {
    if (!t) return true;
    switch (t->kind) {
        case Term::Kind::Obj:
            return true;
        case Term::Kind::Var:
            return false;
        case Term::Kind::Field:
            return term_ground(t->lhs);
        case Term::Kind::BinOp:
            return term_ground(t->lhs) && term_ground(t->rhs);
    }
    return false;
}

void collect_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    switch (t->kind) {
        case Term::Kind::Obj:
            return;
        case Term::Kind::Var:
            out.insert(t->name);
            return;
        case Term::Kind::Field:
            collect_vars(t->lhs, out);
            return;
        case Term::Kind::BinOp:
            collect_vars(t->lhs, out);
            collect_vars(t->rhs, out);
            return;
    }
}

std::string to_string(const TermPtr& t) {
    if (!t) return "<null>";
    switch (t->kind) {
        case Term::Kind::Obj:
            return to_string(t->obj);
        case Term::Kind::Var:
            return t->name;
        case Term::Kind::Field:
            return to_string(t->lhs) + "." + t->name;
        case Term::Kind::BinOp:
            return to_string(t->lhs) + " " + std::string(1, t->op) + " " + to_string(t->rhs);
    }
    return "<term>";
}

// ---------------------------------------------------------------------------
// Code calls.
// ---------------------------------------------------------------------------

namespace {
std::string join_terms(const std::vector<TermPtr>& ts) {
    std::string out;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += to_string(ts[i]);
    }
    return out;
}
std::string join_objects(const std::vector<Object>& os) {
    std::string out;
    for (size_t i = 0; i < os.size(); ++i) {
        if (i) out += ", ";
        out += to_string(os[i]);
    }
    return out;
}
}  // namespace

std::string to_string(const CodeCall& c) {
    return c.domain + "." + c.fn + "(" + join_terms(c.args) + ")";
}

int compare(const GroundCall& a, const GroundCall& b) {
    if (a.domain != b.domain) return a.domain < b.domain ? -1 : 1;
    if (a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
    size_t n = std::min(a.args.size(), b.args.size());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a.args[i], b.args[i]);
        if (c != 0) return c;
    }
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    return 0;
}

std::string to_string(const GroundCall& c) {
    return c.domain + "." + c.fn + "(" + join_objects(c.args) + ")";
}

std::string to_string(const CodeCallAtom& a) {
    return std::string(a.positive ? "in" : "notin") + "(" + to_string(a.subject) + ", " +
           to_string(a.call) + ")";
}

std::string to_string(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Ne: return "!=";
        case Rel::Lt: return "<";
        case Rel::Gt: return ">";
        case Rel::Le: return "<=";
        case Rel::Ge: return ">=";
    }
    return "?";
}

std::string to_string(const Comparison& c) {
    return to_string(c.lhs) + " " + to_string(c.rel) + " " + to_string(c.rhs);
}

std::string to_string(const Conjunct& c) {
    if (const auto* a = std::get_if<CodeCallAtom>(&c)) return to_string(*a);
    return to_string(std::get<Comparison>(c));
}

std::string to_string(const CodeCallCondition& c) {
    std::string out;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) out += " & ";
        out += to_string(c[i]);
    }
    return out;
}

void collect_vars(const CodeCallCondition& c, std::set<std::string>& out) {
    for (const auto& cj : c) {
        if (const auto* a = std::get_if<CodeCallAtom>(&cj)) {
            collect_vars(a->subject, out);
            for (const auto& t : a->call.args) collect_vars(t, out);
        } else {
            const auto& cmp = std::get<Comparison>(cj);
            collect_vars(cmp.lhs, out);
            collect_vars(cmp.rhs, out);
        }
    }
}

// ---------------------------------------------------------------------------
// Intervals, annotations, strategies.
// ---------------------------------------------------------------------------

namespace {
std::string real_str(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}
}  // namespace

std::string to_string(const ProbInterval& i) {
    return "[" + real_str(i.lo) + ", " + real_str(i.hi) + "]";
}

bool operator==(const AnnotationItem& a, const AnnotationItem& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case AnnotationItem::Kind::Const:
            return a.value == b.value;
        case AnnotationItem::Kind::Var:
            return a.name == b.name;
        case AnnotationItem::Kind::Apply:
            return a.name == b.name && a.args == b.args;
    }
    return false;
}

std::string to_string(const AnnotationItem& a) {
    switch (a.kind) {
        case AnnotationItem::Kind::Const:
            return real_str(a.value);
        case AnnotationItem::Kind::Var:
            return a.name;
        case AnnotationItem::Kind::Apply: {
            std::string out = a.name + "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) out += ", ";
                out += to_string(a.args[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

std::string to_string(const Annotation& a) {
    return "[" + to_string(a.lo) + ", " + to_string(a.hi) + "]";
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Ig: return "ig";
        case Strategy::Pc: return "pc";
        case Strategy::Nc: return "nc";
        case Strategy::In: return "in_";
    }
    return "?";
}

std::optional<Strategy> strategy_from_string(const std::string& s) {
    if (s == "ig") return Strategy::Ig;
    if (s == "pc") return Strategy::Pc;
    if (s == "nc") return Strategy::Nc;
    if (s == "in_") return Strategy::In;
    return std::nullopt;
}

std::string to_string(const AnnotatedCondition& ac) {
    return to_string(ac.cond) + " : " + to_string(ac.ann) + " @ " + to_string(ac.strat);
}

// ---------------------------------------------------------------------------
// Status atoms, rules, programs.
// ---------------------------------------------------------------------------

std::string to_string(Modality m) {
    switch (m) {
        case Modality::P: return "P";
        case Modality::F: return "F";
        case Modality::W: return "W";
        case Modality::Do: return "Do";
        case Modality::O: return "O";
    }
    return "?";
}

std::optional<Modality> modality_from_string(const std::string& s) {
    if (s == "P") return Modality::P;
    if (s == "F") return Modality::F;
    if (s == "W") return Modality::W;
    if (s == "Do") return Modality::Do;
    if (s == "O") return Modality::O;
    return std::nullopt;
}

std::string to_string(const StatusAtom& a) {
    return to_string(a.op) + " " + a.action + "(" + join_terms(a.args) + ")";
}

int compare(const GroundAction& a, const GroundAction& b) {
    if (a.name != b.name) return a.name < b.name ? -1 : 1;
    size_t n = std::min(a.args.size(), b.args.size());
    for (size_t i = 0; i < n; ++i) {
        int c = compare(a.args[i], b.args[i]);
        if (c != 0) return c;
    }
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    return 0;
}

std::string to_string(const GroundAction& a) {
    return a.name + "(" + join_objects(a.args) + ")";
}

int compare(const GroundStatusAtom& a, const GroundStatusAtom& b) {
    int c = compare(a.atom, b.atom);
    if (c != 0) return c;
    int x = static_cast<int>(a.op), y = static_cast<int>(b.op);
    return x < y ? -1 : x > y ? 1 : 0;
}

std::string to_string(const GroundStatusAtom& a) {
    return to_string(a.op) + " " + to_string(a.atom);
}

std::string to_string(const StatusSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& a : s) {
        if (!first) out += ", ";
        first = false;
        out += to_string(a);
    }
    return out + "}";
}

std::set<GroundAction> op_projection(const StatusSet& ps, Modality m) {
    std::set<GroundAction> out;
    for (const auto& a : ps)
        if (a.op == m) out.insert(a.atom);
    return out;
}

std::string to_string(const Rule& r) {
    std::string out = to_string(r.head);
    std::vector<std::string> body;
    for (const auto& ac : r.body_prob) body.push_back(to_string(ac));
    for (const auto& a : r.body_pos) body.push_back(to_string(a));
    for (const auto& a : r.body_neg) body.push_back("not " + to_string(a));
    if (!body.empty()) {
        out += " <- ";
        for (size_t i = 0; i < body.size(); ++i) {
            if (i) out += ", ";
            out += body[i];
        }
    }
    return out + ".";
}

std::string to_string(const ActionDef& a) {
    std::ostringstream out;
    out << "action " << a.name << "(";
    for (size_t i = 0; i < a.params.size(); ++i) {
        if (i) out << ", ";
        out << a.params[i];
    }
    out << ") {";
    if (!a.pre.empty()) out << " pre: " << to_string(a.pre) << ";";
    if (!a.add.empty()) {
        out << " add: ";
        for (size_t i = 0; i < a.add.size(); ++i) {
            if (i) out << ", ";
            out << to_string(a.add[i]);
        }
        out << ";";
    }
    if (!a.del.empty()) {
        out << " del: ";
        for (size_t i = 0; i < a.del.size(); ++i) {
            if (i) out << ", ";
            out << to_string(a.del[i]);
        }
        out << ";";
    }
    out << " }";
    return out.str();
}

std::string to_string(const ActionAtom& a) {
    return a.name + "(" + join_terms(a.args) + ")";
}

std::string to_string(const ActionConstraint& c) {
    std::string out = "constraint { ";
    for (size_t i = 0; i < c.blocked.size(); ++i) {
        if (i) out += ", ";
        out += to_string(c.blocked[i]);
    }
    out += " }";
    if (!c.guard.empty()) out += " <- " + to_string(c.guard);
    return out + ".";
}

std::string to_string(const IntegrityConstraint& c) {
    return "ic " + to_string(c.antecedent) + " => " + to_string(c.consequent) + ".";
}

std::string to_string(const Program& p) {
    std::ostringstream out;
    for (const auto& [name, a] : p.actions) out << to_string(a) << "\n";
    for (const auto& c : p.action_constraints) out << to_string(c) << "\n";
    for (const auto& c : p.integrity_constraints) out << to_string(c) << "\n";
    for (const auto& r : p.rules) out << to_string(r) << "\n";
    return out.str();
}

}  // namespace pap
