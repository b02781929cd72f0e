#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bao/complex_algebra.hpp"
#include "bao/errors.hpp"

namespace bao {

/// An operator index: either a concrete digit or a schematic letter
/// (i, j, k, l, m) to be instantiated when a schema is bound to a dimension.
struct Idx {
    std::int8_t num = -1;
    char sym = 0;

    static Idx concrete(int v) { return Idx{static_cast<std::int8_t>(v), 0}; }
    static Idx symbol(char c) { return Idx{-1, c}; }

    bool symbolic() const { return sym != 0; }
    int value() const {
        if (symbolic()) throw invalid_parameter("schematic index has no value");
        return num;
    }
    char print() const { return symbolic() ? sym : static_cast<char>('0' + num); }
    bool operator==(const Idx& o) const { return num == o.num && sym == o.sym; }
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Abstract syntax over the operator alphabet: constants 0, 1, dij;
/// variables; complement; join; meet; cI(...); sIJ(...) replacement;
/// pIJ(...) transposition.
struct Term {
    enum class Kind { zero, one, var, diag, complement, join, meet, cyl, repl, swap };

    Kind kind;
    std::string name; // var
    Idx i, j;
    TermPtr a, b;

    static TermPtr zero() { return std::make_shared<Term>(Term{Kind::zero, "", {}, {}, nullptr, nullptr}); }
    static TermPtr one() { return std::make_shared<Term>(Term{Kind::one, "", {}, {}, nullptr, nullptr}); }
    static TermPtr var(std::string n) {
        return std::make_shared<Term>(Term{Kind::var, std::move(n), {}, {}, nullptr, nullptr});
    }
    static TermPtr diag(Idx i, Idx j) {
        return std::make_shared<Term>(Term{Kind::diag, "", i, j, nullptr, nullptr});
    }
    static TermPtr complement(TermPtr t) {
        return std::make_shared<Term>(Term{Kind::complement, "", {}, {}, std::move(t), nullptr});
    }
    static TermPtr join(TermPtr l, TermPtr r) {
        return std::make_shared<Term>(Term{Kind::join, "", {}, {}, std::move(l), std::move(r)});
    }
    static TermPtr meet(TermPtr l, TermPtr r) {
        return std::make_shared<Term>(Term{Kind::meet, "", {}, {}, std::move(l), std::move(r)});
    }
    static TermPtr cyl(Idx i, TermPtr t) {
        return std::make_shared<Term>(Term{Kind::cyl, "", i, {}, std::move(t), nullptr});
    }
    static TermPtr repl(Idx i, Idx j, TermPtr t) {
        return std::make_shared<Term>(Term{Kind::repl, "", i, j, std::move(t), nullptr});
    }
    static TermPtr swap(Idx i, Idx j, TermPtr t) {
        return std::make_shared<Term>(Term{Kind::swap, "", i, j, std::move(t), nullptr});
    }
};

inline bool terms_equal(const TermPtr& a, const TermPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Term::Kind::zero:
    case Term::Kind::one: return true;
    case Term::Kind::var: return a->name == b->name;
    case Term::Kind::diag: return a->i == b->i && a->j == b->j;
    case Term::Kind::complement: return terms_equal(a->a, b->a);
    case Term::Kind::join:
    case Term::Kind::meet: return terms_equal(a->a, b->a) && terms_equal(a->b, b->b);
    case Term::Kind::cyl: return a->i == b->i && terms_equal(a->a, b->a);
    case Term::Kind::repl:
    case Term::Kind::swap: return a->i == b->i && a->j == b->j && terms_equal(a->a, b->a);
    }
    return false;
}

/// Canonical printing; joins and meets are always parenthesized, so the
/// output reparses to the same tree.
inline std::string term_to_string(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::zero: return "0";
    case Term::Kind::one: return "1";
    case Term::Kind::var: return t->name;
    case Term::Kind::diag: return std::string("d") + t->i.print() + t->j.print();
    case Term::Kind::complement: return "-" + term_to_string(t->a);
    case Term::Kind::join: return "(" + term_to_string(t->a) + " + " + term_to_string(t->b) + ")";
    case Term::Kind::meet: return "(" + term_to_string(t->a) + " * " + term_to_string(t->b) + ")";
    case Term::Kind::cyl: return std::string("c") + t->i.print() + "(" + term_to_string(t->a) + ")";
    case Term::Kind::repl:
        return std::string("s") + t->i.print() + t->j.print() + "(" + term_to_string(t->a) + ")";
    case Term::Kind::swap:
        return std::string("p") + t->i.print() + t->j.print() + "(" + term_to_string(t->a) + ")";
    }
    return "?";
}

namespace detail {

inline bool is_index_char(char c) {
    return (c >= '0' && c <= '9') || c == 'i' || c == 'j' || c == 'k' || c == 'l' || c == 'm';
}
inline bool is_var_char(char c) {
    return c == 'x' || c == 'y' || c == 'z' || c == 'u' || c == 'v' || c == 'w';
}

/// Recursive-descent parser.  Accepts the parenthesized binary forms and, as
/// a convenience, infix chains with '-' binding tighter than '*' tighter
/// than '+'; printing always re-emits the parenthesized form.
class TermParser {
public:
    explicit TermParser(const std::string& text) : text_(text) {}

    TermPtr parse() {
        TermPtr t = sum();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

    TermPtr parse_prefix() { return sum(); } // for equation parsing
    std::size_t position() const { return pos_; }

private:
    [[noreturn]] void fail(const std::string& why) const { throw parse_error("term: " + why, pos_ + 1); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    char take() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_++];
    }
    void expect(char c) {
        if (take() != c) { --pos_; fail(std::string("expected '") + c + "'"); }
    }
    Idx index() {
        const char c = take();
        if (!is_index_char(c)) { --pos_; fail("expected an index (digit or i/j/k/l/m)"); }
        return c >= '0' && c <= '9' ? Idx::concrete(c - '0') : Idx::symbol(c);
    }

    TermPtr sum() {
        TermPtr t = prod();
        while (peek() == '+') {
            take();
            t = Term::join(t, prod());
        }
        return t;
    }
    TermPtr prod() {
        TermPtr t = unary();
        while (peek() == '*') {
            take();
            t = Term::meet(t, unary());
        }
        return t;
    }
    TermPtr unary() {
        if (peek() == '-') {
            take();
            return Term::complement(unary());
        }
        return primary();
    }
    TermPtr primary() {
        const char c = peek();
        switch (c) {
        case '0': take(); return Term::zero();
        case '1': take(); return Term::one();
        case '(': {
            take();
            TermPtr t = sum();
            expect(')');
            return t;
        }
        case 'c': {
            take();
            const Idx i = index();
            expect('(');
            TermPtr t = sum();
            expect(')');
            return Term::cyl(i, t);
        }
        case 'd': {
            take();
            const Idx i = index();
            const Idx j = index();
            return Term::diag(i, j);
        }
        case 's':
        case 'p': {
            take();
            const Idx i = index();
            const Idx j = index();
            expect('(');
            TermPtr t = sum();
            expect(')');
            return c == 's' ? Term::repl(i, j, t) : Term::swap(i, j, t);
        }
        default:
            if (is_var_char(c)) {
                take();
                return Term::var(std::string(1, c));
            }
            if (c == '\0') fail("unexpected end of input");
            fail(std::string("unknown symbol '") + c + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline TermPtr parse_term(const std::string& text) { return detail::TermParser(text).parse(); }

inline void collect_free_variables(const TermPtr& t, std::vector<std::string>& out) {
    switch (t->kind) {
    case Term::Kind::var:
        if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
        return;
    case Term::Kind::complement:
    case Term::Kind::cyl:
    case Term::Kind::repl:
    case Term::Kind::swap: collect_free_variables(t->a, out); return;
    case Term::Kind::join:
    case Term::Kind::meet:
        collect_free_variables(t->a, out);
        collect_free_variables(t->b, out);
        return;
    default: return;
    }
}

inline void collect_symbols(const TermPtr& t, std::vector<char>& out) {
    auto add = [&](const Idx& ix) {
        if (ix.symbolic() && std::find(out.begin(), out.end(), ix.sym) == out.end())
            out.push_back(ix.sym);
    };
    switch (t->kind) {
    case Term::Kind::diag: add(t->i); add(t->j); return;
    case Term::Kind::cyl: add(t->i); collect_symbols(t->a, out); return;
    case Term::Kind::repl:
    case Term::Kind::swap: add(t->i); add(t->j); collect_symbols(t->a, out); return;
    case Term::Kind::complement: collect_symbols(t->a, out); return;
    case Term::Kind::join:
    case Term::Kind::meet:
        collect_symbols(t->a, out);
        collect_symbols(t->b, out);
        return;
    default: return;
    }
}

/// Substitute schematic index letters by concrete values.
inline TermPtr instantiate(const TermPtr& t, const std::vector<std::pair<char, int>>& binding) {
    auto bind = [&](const Idx& ix) -> Idx {
        if (!ix.symbolic()) return ix;
        for (auto [sym, val] : binding)
            if (sym == ix.sym) return Idx::concrete(val);
        throw invalid_parameter(std::string("unbound index letter '") + ix.sym + "'");
    };
    switch (t->kind) {
    case Term::Kind::zero:
    case Term::Kind::one:
    case Term::Kind::var: return t;
    case Term::Kind::diag: return Term::diag(bind(t->i), bind(t->j));
    case Term::Kind::complement: return Term::complement(instantiate(t->a, binding));
    case Term::Kind::join: return Term::join(instantiate(t->a, binding), instantiate(t->b, binding));
    case Term::Kind::meet: return Term::meet(instantiate(t->a, binding), instantiate(t->b, binding));
    case Term::Kind::cyl: return Term::cyl(bind(t->i), instantiate(t->a, binding));
    case Term::Kind::repl: return Term::repl(bind(t->i), bind(t->j), instantiate(t->a, binding));
    case Term::Kind::swap: return Term::swap(bind(t->i), bind(t->j), instantiate(t->a, binding));
    }
    return t;
}

using Env = std::vector<std::pair<std::string, Element>>;

/// Structural evaluation against a complex algebra.  All indices must be
/// concrete and within the algebra's dimension.
inline Element eval_term(const TermPtr& t, const Env& env, const ComplexAlgebra& a) {
    auto idx = [&](const Idx& ix) {
        if (ix.symbolic())
            throw invalid_parameter("eval_term: schema must be instantiated before evaluation");
        if (ix.value() >= a.dim())
            throw invalid_parameter("eval_term: index " + std::to_string(ix.value()) +
                                    " out of range for dimension " + std::to_string(a.dim()));
        return ix.value();
    };
    switch (t->kind) {
    case Term::Kind::zero: return a.bottom();
    case Term::Kind::one: return a.top();
    case Term::Kind::var:
        for (const auto& [name, value] : env)
            if (name == t->name) return value;
        throw invalid_parameter("eval_term: unbound variable '" + t->name + "'");
    case Term::Kind::diag: return a.diag(idx(t->i), idx(t->j));
    case Term::Kind::complement: return ~eval_term(t->a, env, a);
    case Term::Kind::join: return eval_term(t->a, env, a) | eval_term(t->b, env, a);
    case Term::Kind::meet: return eval_term(t->a, env, a) & eval_term(t->b, env, a);
    case Term::Kind::cyl: return a.cyl(idx(t->i), eval_term(t->a, env, a));
    case Term::Kind::repl: return a.subst_repl(idx(t->i), idx(t->j), eval_term(t->a, env, a));
    case Term::Kind::swap: return a.subst_swap(idx(t->i), idx(t->j), eval_term(t->a, env, a));
    }
    throw invalid_parameter("eval_term: malformed term");
}

} // namespace bao
