#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "bao/errors.hpp"
#include "bao/graph.hpp"
#include "bao/partition.hpp"

namespace bao {

/// How two copies (x,c), (y,d) of graph nodes relate inside the copy product.
/// transparent: adjacent iff {x,y} is an edge (copies of one node never clash).
/// clique: additionally, distinct copies of the same node are adjacent.
enum class CopyRule { transparent, clique };

inline const char* copy_rule_tag(CopyRule r) {
    return r == CopyRule::transparent ? "transparent" : "clique";
}

inline std::optional<CopyRule> copy_rule_from_tag(const std::string& tag) {
    if (tag == "transparent") return CopyRule::transparent;
    if (tag == "clique") return CopyRule::clique;
    return std::nullopt;
}

inline bool copies_adjacent(const Graph& g, CopyRule rule,
                            std::uint32_t node_a, int copy_a,
                            std::uint32_t node_b, int copy_b) {
    if (node_a == node_b)
        return rule == CopyRule::clique && copy_a != copy_b;
    return g.adjacent(node_a, node_b);
}

/// One atom: a partial placement of the n slots into graph-node copies,
/// plus an equivalence relation on the slots.  Slot values are encoded as
/// node * n + copy, or -1 when the slot is unassigned.  Two unassigned slots
/// compare equal, matching the placement-equality convention.
struct Atom {
    static constexpr int max_dim = Partition::max_dim;

    std::array<std::int32_t, max_dim> slot{};
    Partition part;
    std::uint8_t dim = 0;

    static Atom empty(int n, Partition p) {
        Atom a;
        a.dim = static_cast<std::uint8_t>(n);
        a.slot.fill(-1);
        a.part = p;
        return a;
    }

    bool slot_defined(int i) const { return slot[i] >= 0; }
    std::uint32_t slot_node(int i) const { return static_cast<std::uint32_t>(slot[i]) / dim; }
    int slot_copy(int i) const { return slot[i] % dim; }

    bool operator==(const Atom& other) const {
        if (dim != other.dim || !(part == other.part)) return false;
        for (int i = 0; i < dim; ++i)
            if (slot[i] != other.slot[i]) return false;
        return true;
    }

    /// Canonical order: partition restricted-growth string first, then the
    /// slot array with unassigned (-1) before any assigned value.
    bool operator<(const Atom& other) const {
        if (part.cmp_key() != other.part.cmp_key()) return part.cmp_key() < other.part.cmp_key();
        for (int i = 0; i < dim; ++i)
            if (slot[i] != other.slot[i]) return slot[i] < other.slot[i];
        return false;
    }
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const {
        std::size_t h = a.part.cmp_key();
        for (int i = 0; i < a.dim; ++i)
            h = h * 1099511628211ULL + static_cast<std::size_t>(a.slot[i] + 2);
        return h;
    }
};

/// Render in the dump-line style: "part 001 K 0.0 0.0 -".
inline std::string atom_to_string(const Atom& a) {
    std::string out = "part ";
    for (int i = 0; i < a.dim; ++i) out += static_cast<char>('0' + a.part.rgs[i]);
    out += " K";
    for (int i = 0; i < a.dim; ++i) {
        out += " ";
        if (a.slot[i] < 0)
            out += "-";
        else
            out += std::to_string(a.slot[i] / a.dim) + "." + std::to_string(a.slot[i] % a.dim);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The relations of the structure, evaluated directly on atom data.
// ---------------------------------------------------------------------------

/// i and j lie in one block of the atom's equivalence relation.
inline bool diag_membership(const Atom& a, int i, int j) {
    return a.part.same_block(i, j);
}

/// Placement agrees at slot i and the partitions agree away from i.
inline bool equiv_cyl(const Atom& a, const Atom& b, int i) {
    return a.slot[i] == b.slot[i] && a.part.restricted_key(i) == b.part.restricted_key(i);
}

/// The swap relation: placements exchanged at i and j, equal elsewhere;
/// the partition is unchanged when i ~ j and transposed otherwise.
inline bool equiv_swap(const Atom& a, const Atom& b, int i, int j) {
    if (a.slot[i] != b.slot[j] || a.slot[j] != b.slot[i]) return false;
    for (int k = 0; k < a.dim; ++k)
        if (k != i && k != j && a.slot[k] != b.slot[k]) return false;
    if (a.part.same_block(i, j)) return a.part == b.part;
    return b.part == a.part.swapped(i, j);
}

/// The derived replacement relation: b contributes a to the replacement image.
inline bool subst_rel(const Atom& a, const Atom& b, int i, int j) {
    if (i == j) return a == b;
    return diag_membership(b, i, j) && equiv_cyl(b, a, i);
}

/// Def-style action of a bijection: slots pulled back through tau, partition
/// relabeled and renormalized.  apply(sigma, apply(tau, a)) = apply(tau o sigma, a).
inline Atom apply_bijection(const std::array<std::uint8_t, Atom::max_dim>& tau, const Atom& a) {
    const int n = a.dim;
    std::array<bool, Atom::max_dim> hit{};
    for (int i = 0; i < n; ++i) {
        if (tau[i] >= n) throw invalid_parameter("apply_bijection: index out of range");
        hit[tau[i]] = true;
    }
    for (int i = 0; i < n; ++i)
        if (!hit[i]) throw invalid_parameter("apply_bijection: map is not a bijection");
    Atom out;
    out.dim = a.dim;
    out.slot.fill(-1);
    for (int i = 0; i < n; ++i) out.slot[i] = a.slot[tau[i]];
    out.part = a.part.relabeled(tau);
    return out;
}

inline std::array<std::uint8_t, Atom::max_dim> identity_map(int n) {
    std::array<std::uint8_t, Atom::max_dim> tau{};
    for (int i = 0; i < n; ++i) tau[i] = static_cast<std::uint8_t>(i);
    return tau;
}

inline std::array<std::uint8_t, Atom::max_dim> transposition_map(int n, int i, int j) {
    auto tau = identity_map(n);
    tau[i] = static_cast<std::uint8_t>(j);
    tau[j] = static_cast<std::uint8_t>(i);
    return tau;
}

/// The membership conditions an atom must satisfy, checked against the source
/// graph.  With block count n the placement is total and its range is not an
/// independent set of the copy product; with n-1 blocks it is defined exactly
/// on the unique two-element block, with equal values; below that it is empty.
inline bool atom_satisfies_cases(const Atom& a, const Graph& g, CopyRule rule) {
    const int n = a.dim;
    if (!a.part.valid()) return false;
    for (int i = 0; i < n; ++i) {
        if (!a.slot_defined(i)) continue;
        if (a.slot_node(i) >= g.node_count() || a.slot_copy(i) >= n) return false;
    }
    const int blocks = a.part.block_count();
    if (blocks == n) {
        for (int i = 0; i < n; ++i)
            if (!a.slot_defined(i)) return false;
        // range treated as a set of distinct values
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (a.slot[i] == a.slot[j]) continue;
                if (copies_adjacent(g, rule, a.slot_node(i), a.slot_copy(i),
                                    a.slot_node(j), a.slot_copy(j)))
                    return true; // some adjacent pair: not independent
            }
        return false;
    }
    if (blocks == n - 1) {
        int bi = -1, bj = -1;
        for (int i = 0; i < n && bj == -1; ++i)
            for (int j = i + 1; j < n; ++j)
                if (a.part.same_block(i, j)) { bi = i; bj = j; break; }
        if (bi == -1) return false;
        for (int k = 0; k < n; ++k) {
            const bool in_block = (k == bi || k == bj);
            if (in_block != a.slot_defined(k)) return false;
        }
        return a.slot[bi] == a.slot[bj];
    }
    for (int i = 0; i < n; ++i)
        if (a.slot_defined(i)) return false;
    return true;
}

} // namespace bao
