#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bao/atom.hpp"
#include "bao/errors.hpp"
#include "bao/graph.hpp"
#include "bao/partition.hpp"

namespace bao {

/// Which relation families a structure carries.  Cylindrification relations
/// are always present; the others follow the signature taxonomy.
enum class Signature { df, sc, ca, qa, qea };

struct SignatureFamilies {
    bool diag = false;
    bool subst = false;
    bool swap = false;
};

inline SignatureFamilies families_of(Signature s) {
    switch (s) {
    case Signature::df: return {false, false, false};
    case Signature::sc: return {false, true, false};
    case Signature::ca: return {true, false, false};
    case Signature::qa: return {false, true, true};
    case Signature::qea: return {true, true, true};
    }
    return {};
}

inline const char* signature_tag(Signature s) {
    switch (s) {
    case Signature::df: return "df";
    case Signature::sc: return "sc";
    case Signature::ca: return "ca";
    case Signature::qa: return "qa";
    case Signature::qea: return "qea";
    }
    return "?";
}

inline std::optional<Signature> signature_from_tag(const std::string& tag) {
    for (auto s : {Signature::df, Signature::sc, Signature::ca, Signature::qa, Signature::qea})
        if (tag == signature_tag(s)) return s;
    return std::nullopt;
}

/// target is a legal reduct of source iff its relation families are a subset.
inline bool is_reduct_of(Signature target, Signature source) {
    const auto t = families_of(target), s = families_of(source);
    return (!t.diag || s.diag) && (!t.subst || s.subst) && (!t.swap || s.swap);
}

// ---------------------------------------------------------------------------

struct BuildOptions {
    std::uint64_t atom_cap = 500000;
};

/// An indexed atom list together with its relation families.  Atoms built by
/// build_eta are in canonical order (partition string, then placement);
/// structures loaded from dump files keep file order so that damaged inputs
/// can still be examined by the checkers.
class AtomStructure {
public:
    AtomStructure(int dim, CopyRule rule, Signature sig, std::vector<Atom> atoms,
                  std::optional<Graph> source)
        : dim_(dim), rule_(rule), sig_(sig), atoms_(std::move(atoms)), source_(std::move(source)) {
        if (dim_ < 3 || dim_ > Atom::max_dim)
            throw invalid_parameter("atom structure: dimension must be in 3..6");
        index_.reserve(atoms_.size() * 2);
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            index_.emplace(atoms_[i], i); // first occurrence wins
    }

    int dim() const { return dim_; }
    CopyRule rule() const { return rule_; }
    Signature signature() const { return sig_; }
    std::size_t size() const { return atoms_.size(); }
    const Atom& atom(std::size_t i) const { return atoms_[i]; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<Graph>& source_graph() const { return source_; }

    std::optional<std::size_t> index_of(const Atom& a) const {
        auto it = index_.find(a);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool has_diag() const { return families_of(sig_).diag; }
    bool has_subst() const { return families_of(sig_).subst; }
    bool has_swap() const { return families_of(sig_).swap; }

    bool rel_cyl(std::size_t a, std::size_t b, int i) const {
        check_index(i);
        return equiv_cyl(atoms_[a], atoms_[b], i);
    }

    bool rel_diag(std::size_t a, int i, int j) const {
        require(has_diag(), "diagonal");
        check_index(i);
        check_index(j);
        return diag_membership(atoms_[a], i, j);
    }

    bool rel_swap(std::size_t a, std::size_t b, int i, int j) const {
        require(has_swap(), "swap");
        check_index(i);
        check_index(j);
        return equiv_swap(atoms_[a], atoms_[b], i, j);
    }

    bool rel_subst(std::size_t a, std::size_t b, int i, int j) const {
        require(has_subst(), "substitution");
        check_index(i);
        check_index(j);
        return subst_rel(atoms_[a], atoms_[b], i, j);
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= dim_) throw invalid_parameter("relation index out of range");
    }
    void require(bool ok, const char* family) const {
        if (!ok)
            throw invalid_parameter(std::string("relation family '") + family +
                                    "' is not part of signature " + signature_tag(sig_));
    }

    int dim_;
    CopyRule rule_;
    Signature sig_;
    std::vector<Atom> atoms_;
    std::optional<Graph> source_;
    std::unordered_map<Atom, std::size_t, AtomHash> index_;
};

inline AtomStructure reduct(const AtomStructure& s, Signature target) {
    if (!is_reduct_of(target, s.signature()))
        throw invalid_parameter(std::string("reduct: ") + signature_tag(target) +
                                " is not a reduct of " + signature_tag(s.signature()));
    return AtomStructure(s.dim(), s.rule(), target, s.atoms(), s.source_graph());
}

// ---------------------------------------------------------------------------
// Enumeration and counting.
//
// Atoms with a discrete partition are total placements whose range is not
// independent in the copy product.  Counting goes through a census of node
// tuples with non-independent support, classified by support size; the number
// of independent placements then follows in closed form:
//   transparent: (|G|^n - dep) * n^n
//   clique:      sum_k (C(|G|,k) * surj(n,k) - dep_k) * n^k
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kPlainLoopLimit = 25000000;
constexpr std::uint64_t kGenerationStepLimit = 200000000;
constexpr std::uint64_t kMaxGraphNodes = 50000;

inline __int128 int_pow(std::uint64_t base, int exp) {
    __int128 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline __int128 binomial128(std::uint64_t a, int b) {
    __int128 r = 1;
    for (int i = 0; i < b; ++i) {
        if (static_cast<std::uint64_t>(i) >= a) return 0;
        r = r * static_cast<__int128>(a - i) / (i + 1);
    }
    return r;
}

inline int support_size(const std::array<std::uint32_t, 6>& nodes, int n) {
    int distinct = 0;
    for (int i = 0; i < n; ++i) {
        bool fresh = true;
        for (int j = 0; j < i; ++j)
            if (nodes[j] == nodes[i]) { fresh = false; break; }
        if (fresh) ++distinct;
    }
    return distinct;
}

inline bool support_dependent(const Graph& g, const std::array<std::uint32_t, 6>& nodes, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (nodes[i] != nodes[j] && g.adjacent(nodes[i], nodes[j])) return true;
    return false;
}

inline bool has_repeat(const std::array<std::uint32_t, 6>& nodes, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (nodes[i] == nodes[j]) return true;
    return false;
}

/// Visit every node tuple whose support is not independent, exactly once.
/// Throws resource_limit when more than max_unique tuples exist or the
/// generation itself would be too expensive.
template <typename Sink>
void for_each_dependent_tuple(const Graph& g, int n, std::uint64_t max_unique, Sink&& sink) {
    if (g.edge_count() == 0) return;
    const std::uint64_t v = g.node_count();
    const __int128 tuple_space = int_pow(v, n);
    std::uint64_t emitted = 0;
    auto emit = [&](const std::array<std::uint32_t, 6>& nodes) {
        if (++emitted > max_unique)
            throw resource_limit("atom structure: placement census exceeds cap");
        sink(nodes, support_size(nodes, n));
    };

    if (tuple_space <= static_cast<__int128>(kPlainLoopLimit)) {
        std::array<std::uint32_t, 6> nodes{};
        while (true) {
            if (support_dependent(g, nodes, n)) emit(nodes);
            int pos = n - 1;
            while (pos >= 0 && nodes[pos] + 1 == v) nodes[pos--] = 0;
            if (pos < 0) break;
            ++nodes[pos];
        }
        return;
    }
    if (n == 3 && v <= kMaxGraphNodes) {
        // Sparse path: anchor an edge at an ordered slot pair, third slot free.
        std::unordered_set<std::uint64_t> seen;
        std::array<std::uint32_t, 6> nodes{};
        std::uint64_t steps = 0;
        for (auto [eu, ew] : g.edges()) {
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) {
                    if (p == q) continue;
                    const int r = 3 - p - q;
                    for (std::uint32_t x = 0; x < v; ++x) {
                        if (++steps > kGenerationStepLimit)
                            throw resource_limit("atom structure: placement census too expensive");
                        nodes[p] = eu;
                        nodes[q] = ew;
                        nodes[r] = x;
                        const std::uint64_t key = (static_cast<std::uint64_t>(nodes[0]) * v + nodes[1]) * v + nodes[2];
                        if (seen.insert(key).second) emit(nodes);
                    }
                }
        }
        return;
    }
    throw resource_limit("atom structure: graph too large to enumerate placements");
}

/// Visit node tuples with independent support but a repeated node, once each.
/// Only relevant under the clique copy rule.
template <typename Sink>
void for_each_repeat_independent_tuple(const Graph& g, int n, std::uint64_t max_unique, Sink&& sink) {
    const std::uint64_t v = g.node_count();
    if (v == 0) return;
    const __int128 tuple_space = int_pow(v, n);
    std::uint64_t emitted = 0;
    auto consider = [&](const std::array<std::uint32_t, 6>& nodes) {
        if (!has_repeat(nodes, n) || support_dependent(g, nodes, n)) return;
        if (++emitted > max_unique)
            throw resource_limit("atom structure: placement census exceeds cap");
        sink(nodes);
    };
    if (tuple_space <= static_cast<__int128>(kPlainLoopLimit)) {
        std::array<std::uint32_t, 6> nodes{};
        while (true) {
            consider(nodes);
            int pos = n - 1;
            while (pos >= 0 && nodes[pos] + 1 == v) nodes[pos--] = 0;
            if (pos < 0) break;
            ++nodes[pos];
        }
        return;
    }
    if (n == 3 && v <= kMaxGraphNodes) {
        std::unordered_set<std::uint64_t> seen;
        std::array<std::uint32_t, 6> nodes{};
        std::uint64_t steps = 0;
        for (std::uint32_t u = 0; u < v; ++u)
            for (int p = 0; p < 3; ++p)
                for (int q = p + 1; q < 3; ++q) {
                    const int r = 3 - p - q;
                    for (std::uint32_t x = 0; x < v; ++x) {
                        if (++steps > kGenerationStepLimit)
                            throw resource_limit("atom structure: placement census too expensive");
                        nodes[p] = u;
                        nodes[q] = u;
                        nodes[r] = x;
                        const std::uint64_t key = (static_cast<std::uint64_t>(nodes[0]) * v + nodes[1]) * v + nodes[2];
                        if (seen.insert(key).second) consider(nodes);
                    }
                }
        return;
    }
    throw resource_limit("atom structure: graph too large to enumerate placements");
}

struct PlacementCensus {
    std::array<std::uint64_t, 7> dep_by_size{};
    std::uint64_t dep_total = 0;
};

inline PlacementCensus run_census(const Graph& g, int n, std::uint64_t max_unique) {
    PlacementCensus census;
    for_each_dependent_tuple(g, n, max_unique, [&](const std::array<std::uint32_t, 6>&, int k) {
        ++census.dep_by_size[k];
        ++census.dep_total;
    });
    return census;
}

} // namespace detail

/// Closed-form atom count, validated against the cap.  Equals the length of
/// build_eta's output by construction; the test suites check that against an
/// independent brute-force enumeration as well.
inline std::uint64_t atom_count(const Graph& g, int n, CopyRule rule = CopyRule::transparent,
                                std::uint64_t cap = BuildOptions{}.atom_cap) {
    if (n < 3 || n > Atom::max_dim) throw invalid_parameter("atom_count: dimension must be in 3..6");
    if (g.node_count() > detail::kMaxGraphNodes)
        throw resource_limit("atom_count: graph too large");
    const std::uint64_t v = g.node_count();
    const std::uint64_t nn = static_cast<std::uint64_t>(detail::int_pow(n, n));
    const auto census = detail::run_census(g, n, cap / nn + 1);

    const __int128 total_maps = detail::int_pow(static_cast<std::uint64_t>(n) * v, n);
    __int128 indep_maps = 0;
    if (rule == CopyRule::transparent) {
        indep_maps = (detail::int_pow(v, n) - static_cast<__int128>(census.dep_total)) *
                     static_cast<__int128>(nn);
    } else {
        for (int k = 1; k <= n; ++k) {
            const __int128 tuples_k = detail::binomial128(v, k) * surjection_count(n, k) -
                                      static_cast<__int128>(census.dep_by_size[k]);
            indep_maps += tuples_k * detail::int_pow(n, k);
        }
    }
    const __int128 total_placements = total_maps - indep_maps;

    const std::uint64_t pair_block = static_cast<std::uint64_t>(n) * (n - 1) / 2 *
                                     static_cast<std::uint64_t>(n) * v;
    const std::uint64_t partition_only =
        bell_number(n) - 1 - static_cast<std::uint64_t>(n) * (n - 1) / 2;

    const __int128 count = total_placements + pair_block + partition_only;
    if (count > static_cast<__int128>(cap))
        throw resource_limit("atom_count: predicted atom count exceeds cap " + std::to_string(cap));
    return static_cast<std::uint64_t>(count);
}

/// Enumerate the full atom structure of a graph in canonical order.
inline AtomStructure build_eta(const Graph& g, int n, CopyRule rule = CopyRule::transparent,
                               const BuildOptions& opts = {}) {
    const std::uint64_t predicted = atom_count(g, n, rule, opts.atom_cap);
    std::vector<Atom> atoms;
    atoms.reserve(predicted);

    // partition-only atoms (at most n-2 blocks)
    for (const auto& p : all_partitions(n))
        if (p.block_count() <= n - 2) atoms.push_back(Atom::empty(n, p));

    // pair-block atoms: placement defined exactly on a two-element block
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::array<std::uint8_t, Partition::max_dim> labels{};
            std::uint8_t next = 0;
            for (int k = 0; k < n; ++k) {
                if (k == j) labels[k] = labels[i];
                else labels[k] = next++;
            }
            const Partition p = Partition::from_labels(labels, n);
            for (std::uint32_t node = 0; node < g.node_count(); ++node)
                for (int copy = 0; copy < n; ++copy) {
                    Atom a = Atom::empty(n, p);
                    a.slot[i] = a.slot[j] = static_cast<std::int32_t>(node * n + copy);
                    atoms.push_back(a);
                }
        }

    // total placements with non-independent range
    const Partition discrete = Partition::discrete(n);
    const std::uint64_t nn = static_cast<std::uint64_t>(detail::int_pow(n, n));
    auto emit_copies = [&](const std::array<std::uint32_t, 6>& nodes, bool filter_independent) {
        std::array<int, 6> copy{};
        while (true) {
            Atom a = Atom::empty(n, discrete);
            for (int s = 0; s < n; ++s)
                a.slot[s] = static_cast<std::int32_t>(nodes[s] * n + copy[s]);
            if (!filter_independent || atom_satisfies_cases(a, g, rule)) atoms.push_back(a);
            int pos = n - 1;
            while (pos >= 0 && copy[pos] + 1 == n) copy[pos--] = 0;
            if (pos < 0) break;
            ++copy[pos];
        }
    };
    detail::for_each_dependent_tuple(g, n, opts.atom_cap / nn + 1,
                                     [&](const std::array<std::uint32_t, 6>& nodes, int) {
                                         emit_copies(nodes, false);
                                     });
    if (rule == CopyRule::clique)
        detail::for_each_repeat_independent_tuple(g, n, opts.atom_cap,
                                                  [&](const std::array<std::uint32_t, 6>& nodes) {
                                                      emit_copies(nodes, true);
                                                  });

    std::sort(atoms.begin(), atoms.end());
    if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end())
        throw std::logic_error("build_eta: duplicate atoms generated");
    if (atoms.size() != predicted)
        throw std::logic_error("build_eta: enumeration disagrees with closed-form count");
    return AtomStructure(n, rule, Signature::qea, std::move(atoms), g);
}

// ---------------------------------------------------------------------------
// Dump format.  Header "atoms <count> dim <n> rule <tag>", then one line per
// atom: "atom <index> part <rgs digits> K <slot...>" where a slot is '-' or
// "<node>.<copy>".  The format is byte-exact: tests diff dumps directly.
// ---------------------------------------------------------------------------

inline void write_structure(std::ostream& out, const AtomStructure& s) {
    out << "atoms " << s.size() << " dim " << s.dim() << " rule " << copy_rule_tag(s.rule())
        << "\n";
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        const Atom& a = s.atom(idx);
        out << "atom " << idx << " part ";
        for (int i = 0; i < s.dim(); ++i) out << static_cast<int>(a.part.rgs[i]);
        out << " K";
        for (int i = 0; i < s.dim(); ++i) {
            if (a.slot_defined(i))
                out << " " << a.slot_node(i) << "." << a.slot_copy(i);
            else
                out << " -";
        }
        out << "\n";
    }
}

inline std::string structure_to_text(const AtomStructure& s) {
    std::ostringstream out;
    write_structure(out, s);
    return out.str();
}

/// Parse a dump.  Syntax is strict; the semantic membership conditions are
/// deliberately not enforced here, so damaged structures can be loaded and
/// fed to the checkers.
inline AtomStructure load_structure(std::istream& in) {
    std::string keyword;
    std::size_t count = 0;
    int dim = 0;
    std::string rule_tag, dim_kw, rule_kw;
    if (!(in >> keyword >> count >> dim_kw >> dim >> rule_kw >> rule_tag) || keyword != "atoms" ||
        dim_kw != "dim" || rule_kw != "rule")
        throw parse_error("structure dump: bad header");
    if (dim < 3 || dim > Atom::max_dim) throw parse_error("structure dump: dimension out of range");
    const auto rule = copy_rule_from_tag(rule_tag);
    if (!rule) throw parse_error("structure dump: unknown copy rule '" + rule_tag + "'");

    std::vector<Atom> atoms;
    atoms.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::size_t stated = 0;
        std::string part_kw, part, k_kw;
        if (!(in >> keyword >> stated >> part_kw >> part >> k_kw) || keyword != "atom" ||
            part_kw != "part" || k_kw != "K")
            throw parse_error("structure dump: bad atom line " + std::to_string(idx));
        if (stated != idx) throw parse_error("structure dump: atom index mismatch");
        if (part.size() != static_cast<std::size_t>(dim))
            throw parse_error("structure dump: partition length mismatch");
        Atom a;
        a.dim = static_cast<std::uint8_t>(dim);
        a.slot.fill(-1);
        a.part.dim = static_cast<std::uint8_t>(dim);
        for (int i = 0; i < dim; ++i) {
            if (part[i] < '0' || part[i] > '5') throw parse_error("structure dump: bad partition digit");
            a.part.rgs[i] = static_cast<std::uint8_t>(part[i] - '0');
        }
        for (int i = 0; i < dim; ++i) {
            std::string slot;
            if (!(in >> slot)) throw parse_error("structure dump: missing slot");
            if (slot == "-") continue;
            const auto dot = slot.find('.');
            if (dot == std::string::npos) throw parse_error("structure dump: bad slot '" + slot + "'");
            long node = -1, copy = -1;
            try {
                node = std::stol(slot.substr(0, dot));
                copy = std::stol(slot.substr(dot + 1));
            } catch (const std::exception&) {
                throw parse_error("structure dump: bad slot '" + slot + "'");
            }
            if (node < 0 || node > 10000000 || copy < 0 || copy >= dim)
                throw parse_error("structure dump: slot out of range '" + slot + "'");
            a.slot[i] = static_cast<std::int32_t>(node * dim + copy);
        }
        atoms.push_back(a);
    }
    std::string trailing;
    if (in >> trailing) throw parse_error("structure dump: trailing tokens");
    return AtomStructure(dim, *rule, Signature::qea, std::move(atoms), std::nullopt);
}

inline AtomStructure load_structure(const std::string& text) {
    std::istringstream in(text);
    return load_structure(in);
}

} // namespace bao
