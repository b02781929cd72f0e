#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bao/errors.hpp"
#include "bao/term.hpp"

namespace bao {

/// One equation, possibly schematic.  Guards are conjunctions of
/// distinct(...) groups over the schematic index letters; a schema instance
/// is admissible when every group's letters receive pairwise distinct values.
struct Equation {
    TermPtr lhs, rhs;
    std::vector<std::vector<char>> distinct_guards;
    std::string label;
    std::string binding; // "[i=0,j=1]" once instantiated

    std::string name() const { return label + binding; }

    std::vector<std::string> free_variables() const {
        std::vector<std::string> vars;
        collect_free_variables(lhs, vars);
        collect_free_variables(rhs, vars);
        std::sort(vars.begin(), vars.end());
        return vars;
    }

    std::vector<char> symbols() const {
        std::vector<char> syms;
        collect_symbols(lhs, syms);
        collect_symbols(rhs, syms);
        for (const auto& group : distinct_guards)
            for (char c : group)
                if (std::find(syms.begin(), syms.end(), c) == syms.end()) syms.push_back(c);
        std::sort(syms.begin(), syms.end());
        return syms;
    }

    bool ground() const { return symbols().empty(); }

    std::string to_string() const {
        std::string out = term_to_string(lhs) + " = " + term_to_string(rhs);
        if (!distinct_guards.empty()) {
            out += " |";
            for (std::size_t g = 0; g < distinct_guards.size(); ++g) {
                if (g) out += " &";
                out += " distinct(";
                for (std::size_t c = 0; c < distinct_guards[g].size(); ++c) {
                    if (c) out += ",";
                    out += distinct_guards[g][c];
                }
                out += ")";
            }
        }
        return out;
    }
};

/// Parse "lhs = rhs [| distinct(i,j) [& distinct(...)]]".
inline Equation parse_equation(const std::string& line, std::string label = "") {
    std::string body = line, guard_text;
    if (const auto bar = line.find('|'); bar != std::string::npos) {
        body = line.substr(0, bar);
        guard_text = line.substr(bar + 1);
    }
    const auto eq_pos = body.find('=');
    if (eq_pos == std::string::npos) throw parse_error("equation: missing '='");
    if (body.find('=', eq_pos + 1) != std::string::npos)
        throw parse_error("equation: more than one '='");

    Equation eq;
    eq.lhs = parse_term(body.substr(0, eq_pos));
    eq.rhs = parse_term(body.substr(eq_pos + 1));
    eq.label = std::move(label);

    std::istringstream gs(guard_text);
    std::string tok;
    bool expect_clause = !guard_text.empty();
    while (gs >> tok) {
        if (tok == "&") { expect_clause = true; continue; }
        std::string clause = tok;
        if (!expect_clause) throw parse_error("equation guard: clauses must be joined with '&'");
        if (clause.rfind("distinct(", 0) != 0 || clause.back() != ')')
            throw parse_error("equation guard: only distinct(...) clauses are supported");
        std::vector<char> group;
        for (char c : clause.substr(9, clause.size() - 10)) {
            if (c == ',' || c == ' ') continue;
            if (c < 'i' || c > 'm') throw parse_error("equation guard: bad index letter");
            group.push_back(c);
        }
        if (group.size() < 2) throw parse_error("equation guard: distinct(...) needs two letters");
        eq.distinct_guards.push_back(std::move(group));
        expect_clause = false;
    }
    if (expect_clause && !eq.distinct_guards.empty())
        throw parse_error("equation guard: dangling '&'");
    return eq;
}

/// Every admissible instantiation of a schema's index letters over 0..n-1.
/// Ground equations pass through unchanged (after a bind-time check that
/// their concrete indices fit the dimension).
inline std::vector<Equation> expand_schema(const Equation& schema, int n) {
    const auto syms = schema.symbols();
    std::vector<Equation> out;
    if (syms.empty()) {
        out.push_back(schema);
        return out;
    }
    std::vector<int> assign(syms.size(), 0);
    while (true) {
        bool admissible = true;
        for (const auto& group : schema.distinct_guards) {
            for (std::size_t a = 0; a < group.size() && admissible; ++a)
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    const auto pa = std::find(syms.begin(), syms.end(), group[a]) - syms.begin();
                    const auto pb = std::find(syms.begin(), syms.end(), group[b]) - syms.begin();
                    if (assign[pa] == assign[pb]) { admissible = false; break; }
                }
            if (!admissible) break;
        }
        if (admissible) {
            std::vector<std::pair<char, int>> binding;
            std::string tag = "[";
            for (std::size_t s = 0; s < syms.size(); ++s) {
                binding.push_back({syms[s], assign[s]});
                if (s) tag += ",";
                tag += syms[s];
                tag += "=" + std::to_string(assign[s]);
            }
            tag += "]";
            Equation inst;
            inst.lhs = instantiate(schema.lhs, binding);
            inst.rhs = instantiate(schema.rhs, binding);
            inst.label = schema.label;
            inst.binding = tag;
            out.push_back(std::move(inst));
        }
        std::size_t pos = 0;
        while (pos < assign.size() && assign[pos] == n - 1) assign[pos++] = 0;
        if (pos == assign.size()) break;
        ++assign[pos];
    }
    return out;
}

inline std::vector<Equation> expand_suite(const std::vector<Equation>& schemata, int n) {
    std::vector<Equation> out;
    for (const auto& schema : schemata)
        for (auto& inst : expand_schema(schema, n)) out.push_back(std::move(inst));
    return out;
}

// ---------------------------------------------------------------------------
// Built-in suites.  The master list carries the cylindric postulates and the
// substitution laws; the named suites are its restrictions to the signature
// alphabets (df: c only; sc: c,s; ca: c,d; qa: c,s,p; qea: everything).
// ---------------------------------------------------------------------------

inline const char* builtin_master_suite() {
    return R"(# C1-zero: cylindrification of the bottom element
ci(0) = 0
# C2-increasing: every element lies below its cylindrification
(x + ci(x)) = ci(x)
# C3-quasidistributive
ci((x * ci(y))) = (ci(x) * ci(y))
# C4-commute: cylindrifications commute
ci(cj(x)) = cj(ci(x))
# C5-diag-reflexive
dii = 1
# C6-diag-expand
dij = ck((dik * dkj)) | distinct(i,k) & distinct(j,k)
# C7-diag-separate
(ci((dij * x)) * ci((dij * -x))) = 0 | distinct(i,j)
# C8-diag-symmetric
dij = dji
# repl-identity
sii(x) = x
# swap-identity
pii(x) = x
# swap-symmetric
pij(x) = pji(x)
# swap-join: transposition distributes over join
pij((x + y)) = (pij(x) + pij(y))
# swap-complement: transposition commutes with complement
pij(-x) = -pij(x)
# swap-involution
pij(pij(x)) = x
# swap-after-repl: transposing a replacement flips it
pij(sij(x)) = sji(x)
# swap-triple
pij(pik(x)) = pjk(pij(x)) | distinct(i,j,k)
# repl-by-diag: replacement defined through the diagonal
sij(x) = ci((x * dij)) | distinct(i,j)
)";
}

namespace detail {

inline void collect_op_alphabet(const TermPtr& t, bool& c, bool& d, bool& s, bool& p) {
    switch (t->kind) {
    case Term::Kind::diag: d = true; return;
    case Term::Kind::cyl: c = true; collect_op_alphabet(t->a, c, d, s, p); return;
    case Term::Kind::repl: s = true; collect_op_alphabet(t->a, c, d, s, p); return;
    case Term::Kind::swap: p = true; collect_op_alphabet(t->a, c, d, s, p); return;
    case Term::Kind::complement: collect_op_alphabet(t->a, c, d, s, p); return;
    case Term::Kind::join:
    case Term::Kind::meet:
        collect_op_alphabet(t->a, c, d, s, p);
        collect_op_alphabet(t->b, c, d, s, p);
        return;
    default: return;
    }
}

} // namespace detail

inline std::vector<Equation> parse_suite_text(const std::string& text) {
    std::vector<Equation> out;
    std::istringstream in(text);
    std::string line, pending_comment;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            pending_comment = line.substr(first + 1);
            const auto start = pending_comment.find_first_not_of(" \t");
            pending_comment = start == std::string::npos ? "" : pending_comment.substr(start);
            // keep only the head word as the label
            if (const auto colon = pending_comment.find(':'); colon != std::string::npos)
                pending_comment = pending_comment.substr(0, colon);
            if (const auto space = pending_comment.find(' '); space != std::string::npos)
                pending_comment = pending_comment.substr(0, space);
            continue;
        }
        std::string label = pending_comment.empty() ? "line" + std::to_string(lineno) : pending_comment;
        try {
            out.push_back(parse_equation(line, std::move(label)));
        } catch (const parse_error& e) {
            throw parse_error("suite line " + std::to_string(lineno) + ": " + e.what());
        }
        pending_comment.clear();
    }
    return out;
}

/// A built-in suite name (df, sc, ca, qa, qea) or a path to an equation file.
inline std::vector<Equation> load_suite(const std::string& name_or_path) {
    const std::map<std::string, int> alphabet = {
        // bit 1 = d allowed, bit 2 = s allowed, bit 4 = p allowed
        {"df", 0}, {"sc", 2}, {"ca", 1}, {"qa", 6}, {"qea", 7}};
    const auto it = alphabet.find(name_or_path);
    if (it == alphabet.end()) {
        std::ifstream file(name_or_path);
        if (!file) throw invalid_parameter("load_suite: unknown suite or unreadable file '" +
                                           name_or_path + "'");
        std::ostringstream buf;
        buf << file.rdbuf();
        return parse_suite_text(buf.str());
    }
    const int mask = it->second;
    std::vector<Equation> out;
    for (auto& eq : parse_suite_text(builtin_master_suite())) {
        bool c = false, d = false, s = false, p = false;
        detail::collect_op_alphabet(eq.lhs, c, d, s, p);
        detail::collect_op_alphabet(eq.rhs, c, d, s, p);
        if (d && !(mask & 1)) continue;
        if (s && !(mask & 2)) continue;
        if (p && !(mask & 4)) continue;
        out.push_back(std::move(eq));
    }
    return out;
}

} // namespace bao
