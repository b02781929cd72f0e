#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "bao/atom_structure.hpp"
#include "bao/errors.hpp"

namespace bao {

class ComplexAlgebra;

/// A subset of the atoms, as a dense bit vector in canonical atom order.
/// Elements remember their algebra; combining elements of different algebras
/// is rejected.
class Element {
public:
    Element() = default;

    std::size_t universe_size() const { return size_; }
    const ComplexAlgebra* algebra() const { return alg_; }

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    template <typename Fn>
    void for_each_member(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = __builtin_ctzll(w);
                fn(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each_member([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    Element operator~() const {
        Element r = *this;
        for (auto& w : r.words_) w = ~w;
        r.mask_tail();
        return r;
    }
    Element operator|(const Element& o) const {
        Element r = combine_check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
        return r;
    }
    Element operator&(const Element& o) const {
        Element r = combine_check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    Element operator^(const Element& o) const {
        Element r = combine_check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ o.words_[i];
        return r;
    }
    Element operator-(const Element& o) const {
        Element r = combine_check(o);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~o.words_[i];
        return r;
    }

    bool operator==(const Element& o) const {
        return alg_ == o.alg_ && words_ == o.words_;
    }

    bool leq(const Element& o) const {
        check_same(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    /// Sorted atom-index list, e.g. "{0, 3, 7}"; used by counterexample reports.
    std::string to_string(std::size_t limit = 24) const {
        std::string out = "{";
        std::size_t shown = 0;
        bool truncated = false;
        for_each_member([&](std::size_t i) {
            if (shown >= limit) { truncated = true; return; }
            if (shown++) out += ", ";
            out += std::to_string(i);
        });
        if (truncated) out += ", ...(" + std::to_string(count()) + " atoms)";
        out += "}";
        return out;
    }

private:
    friend class ComplexAlgebra;
    Element(const ComplexAlgebra* alg, std::size_t bits)
        : words_((bits + 63) / 64, 0), size_(bits), alg_(alg) {}

    void mask_tail() {
        if (size_ % 64) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
        if (size_ == 0 && !words_.empty()) words_.back() = 0;
    }
    void check_same(const Element& o) const {
        if (alg_ != o.alg_)
            throw invalid_parameter("elements of different algebras cannot be combined");
    }
    Element combine_check(const Element& o) const {
        check_same(o);
        return Element(alg_, size_);
    }

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
    const ComplexAlgebra* alg_ = nullptr;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        std::size_t h = 1469598103934665603ULL;
        for (auto w : e.words()) h = (h ^ w) * 1099511628211ULL;
        return h;
    }
};

/// The full powerset algebra over an atom structure: Boolean set operations
/// plus cylindrifications, replacements, transpositions and diagonal
/// constants, realized through tables built once from the structure.
///
/// The algebra owns a copy of its structure.  It is neither copyable nor
/// movable, since elements refer back to it by address.
class ComplexAlgebra {
public:
    explicit ComplexAlgebra(AtomStructure s) : s_(std::move(s)) {
        const int n = s_.dim();
        const std::size_t count = s_.size();

        cyl_block_of_.assign(n, std::vector<std::uint32_t>(count, 0));
        cyl_blocks_.assign(n, {});
        for (int i = 0; i < n; ++i) {
            // group by the ~_i key: placement value at i plus partition off i
            std::unordered_map<std::uint64_t, std::uint32_t> block_ids;
            for (std::size_t a = 0; a < count; ++a) {
                const Atom& at = s_.atom(a);
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(static_cast<std::uint32_t>(at.slot[i] + 1)) << 24) |
                    at.part.restricted_key(i);
                auto [it, fresh] = block_ids.emplace(key, static_cast<std::uint32_t>(cyl_blocks_[i].size()));
                if (fresh) cyl_blocks_[i].push_back({});
                cyl_block_of_[i][a] = it->second;
                cyl_blocks_[i][it->second].push_back(static_cast<std::uint32_t>(a));
            }
        }

        diag_.assign(static_cast<std::size_t>(n) * n, Element(this, count));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Element& d = diag_[static_cast<std::size_t>(i) * n + j];
                for (std::size_t a = 0; a < count; ++a)
                    if (diag_membership(s_.atom(a), i, j)) d.set(a);
            }

        swap_image_.assign(static_cast<std::size_t>(n) * n, {});
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                auto& table = swap_image_[static_cast<std::size_t>(i) * n + j];
                table.resize(count);
                for (std::size_t a = 0; a < count; ++a) {
                    if (i == j) {
                        table[a] = static_cast<std::uint32_t>(a);
                        continue;
                    }
                    const auto img = s_.index_of(swap_partner(s_.atom(a), i, j));
                    table[a] = img ? static_cast<std::uint32_t>(*img) : UINT32_MAX;
                }
            }

        // table diagnostics; violations surface in the structural check suite
        for (int i = 0; i < n && diagnostics_.empty(); ++i)
            for (int j = i + 1; j < n; ++j) {
                const auto& table = swap_image_[static_cast<std::size_t>(i) * n + j];
                for (std::size_t a = 0; a < count; ++a) {
                    if (table[a] == UINT32_MAX || table[table[a]] != a) {
                        diagnostics_.push_back("swap table over (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") is not an involution at atom " +
                                               std::to_string(a));
                        break;
                    }
                }
            }
    }

    ComplexAlgebra(const ComplexAlgebra&) = delete;
    ComplexAlgebra& operator=(const ComplexAlgebra&) = delete;

    const AtomStructure& structure() const { return s_; }
    int dim() const { return s_.dim(); }
    std::size_t atom_count() const { return s_.size(); }

    /// Empty when every table satisfies the structural table invariants.
    const std::vector<std::string>& table_diagnostics() const { return diagnostics_; }

    // -- element factories --------------------------------------------------

    Element bottom() const { return Element(this, s_.size()); }
    Element top() const { return ~bottom(); }
    Element singleton(std::size_t atom) const {
        if (atom >= s_.size()) throw invalid_parameter("singleton: atom index out of range");
        Element e = bottom();
        e.set(atom);
        return e;
    }
    Element from_atoms(const std::vector<std::size_t>& idxs) const {
        Element e = bottom();
        for (auto i : idxs) {
            if (i >= s_.size()) throw invalid_parameter("from_atoms: atom index out of range");
            e.set(i);
        }
        return e;
    }
    /// Element from raw bit words (excess bits beyond the atom count are
    /// dropped); used by the assignment generators.
    Element from_words(const std::vector<std::uint64_t>& words) const {
        Element e = bottom();
        for (std::size_t i = 0; i < e.words_.size() && i < words.size(); ++i)
            e.words_[i] = words[i];
        e.mask_tail();
        return e;
    }

    // -- operators ----------------------------------------------------------

    Element diag(int i, int j) const {
        if (!s_.has_diag())
            throw invalid_parameter("diagonal constants are not in this signature");
        check_index(i);
        check_index(j);
        return diag_[static_cast<std::size_t>(i) * dim() + j];
    }

    Element cyl(int i, const Element& x) const {
        check_index(i);
        check_element(x);
        std::vector<std::uint8_t> hit(cyl_blocks_[i].size(), 0);
        x.for_each_member([&](std::size_t a) { hit[cyl_block_of_[i][a]] = 1; });
        Element out = bottom();
        for (std::size_t b = 0; b < hit.size(); ++b)
            if (hit[b])
                for (auto a : cyl_blocks_[i][b]) out.set(a);
        return out;
    }

    Element subst_repl(int i, int j, const Element& x) const {
        if (!s_.has_subst() && !s_.has_diag())
            throw invalid_parameter("replacements are not in this signature");
        check_index(i);
        check_index(j);
        check_element(x);
        if (i == j) return x;
        return cyl(i, x & diag_[static_cast<std::size_t>(i) * dim() + j]);
    }

    Element subst_swap(int i, int j, const Element& x) const {
        if (!s_.has_swap())
            throw invalid_parameter("transpositions are not in this signature");
        check_index(i);
        check_index(j);
        check_element(x);
        Element out = bottom();
        const auto& table = swap_table(i, j);
        x.for_each_member([&](std::size_t a) {
            if (table[a] != UINT32_MAX) out.set(table[a]);
        });
        return out;
    }

    /// Image of one atom under the swap table, or UINT32_MAX when the
    /// structure has no partner (possible only for damaged structures).
    std::uint32_t swap_image(int i, int j, std::size_t atom) const {
        check_index(i);
        check_index(j);
        return swap_table(i, j)[atom];
    }

    std::uint32_t cyl_block_of(int i, std::size_t atom) const { return cyl_block_of_[i][atom]; }
    const std::vector<std::uint32_t>& cyl_block_members(int i, std::uint32_t block) const {
        return cyl_blocks_[i][block];
    }

    // -- derived notions ----------------------------------------------------

    std::vector<int> dimension_set(const Element& x) const {
        check_element(x);
        std::vector<int> out;
        for (int i = 0; i < dim(); ++i)
            if (!(cyl(i, x) == x)) out.push_back(i);
        return out;
    }

private:
    static Atom swap_partner(const Atom& a, int i, int j) {
        Atom out = a;
        std::swap(out.slot[i], out.slot[j]);
        if (!a.part.same_block(i, j)) out.part = a.part.swapped(i, j);
        return out;
    }

    const std::vector<std::uint32_t>& swap_table(int i, int j) const {
        const auto [lo, hi] = std::minmax(i, j);
        return swap_image_[static_cast<std::size_t>(lo) * dim() + hi];
    }

    void check_index(int i) const {
        if (i < 0 || i >= dim()) throw invalid_parameter("operator index out of range");
    }
    void check_element(const Element& x) const {
        if (x.algebra() != this)
            throw invalid_parameter("element does not belong to this algebra");
    }

    const AtomStructure s_;
    std::vector<std::vector<std::uint32_t>> cyl_block_of_;
    std::vector<std::vector<std::vector<std::uint32_t>>> cyl_blocks_;
    std::vector<Element> diag_;
    std::vector<std::vector<std::uint32_t>> swap_image_;
    std::vector<std::string> diagnostics_;
};

// ---------------------------------------------------------------------------
// Subalgebra closure and the structural constructions over the algebra.
// ---------------------------------------------------------------------------

/// Least set of elements containing the generators and the diagonal
/// constants, closed under the Boolean operations and every operator of the
/// signature.  Returned sorted by bit pattern.  Throws resource_limit when
/// the closure would exceed cap.
inline std::vector<Element> generated_subalgebra(const ComplexAlgebra& a,
                                                 const std::vector<Element>& gens,
                                                 std::size_t cap = 4096) {
    const int n = a.dim();
    std::unordered_set<Element, ElementHash> known;
    std::vector<Element> worklist;

    auto push = [&](const Element& e) {
        if (known.insert(e).second) {
            if (known.size() > cap)
                throw resource_limit("generated_subalgebra: closure exceeds cap " + std::to_string(cap));
            worklist.push_back(e);
        }
    };

    push(a.bottom());
    push(a.top());
    if (a.structure().has_diag())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) push(a.diag(i, j));
    for (const auto& g : gens) push(g);

    const bool has_subst = a.structure().has_subst() || a.structure().has_diag();
    while (!worklist.empty()) {
        const Element x = worklist.back();
        worklist.pop_back();
        push(~x);
        for (int i = 0; i < n; ++i) {
            push(a.cyl(i, x));
            for (int j = 0; j < n; ++j) {
                if (has_subst) push(a.subst_repl(i, j, x));
                if (a.structure().has_swap()) push(a.subst_swap(i, j, x));
            }
        }
        // binary joins and meets against everything known so far
        for (const auto& y : std::vector<Element>(known.begin(), known.end())) {
            push(x | y);
            push(x & y);
        }
    }

    std::vector<Element> out(known.begin(), known.end());
    std::sort(out.begin(), out.end(), [](const Element& l, const Element& r) {
        return std::lexicographical_compare(l.words().rbegin(), l.words().rend(),
                                            r.words().rbegin(), r.words().rend());
    });
    return out;
}

/// Simplicity witness: sweeping every atom through all cylindrifications must
/// reach the top element.  Returns the first failing atom, or nullopt.
inline std::optional<std::size_t> is_simple_witness(const ComplexAlgebra& a) {
    const auto top = a.top();
    for (std::size_t b = 0; b < a.atom_count(); ++b) {
        Element x = a.singleton(b);
        for (int i = a.dim() - 1; i >= 0; --i) x = a.cyl(i, x);
        if (!(x == top)) return b;
    }
    return std::nullopt;
}

/// The ultrafilter frame of a finite algebra.  Ultrafilters of a finite
/// Boolean algebra are principal over atoms, so the frame's carrier is the
/// atom list and its relations are computed through the algebra's operators:
/// R(b0, b1) holds iff the operator image of the ultrafilter at b1 lands in
/// the ultrafilter at b0, which for principal ultrafilters reduces to the
/// operator applied to the singleton of b1.
struct UltrafilterFrame {
    int dim = 0;
    std::vector<std::vector<Element>> r_cyl;   // [i][b1] = points b0 with R_ci(b0, b1)
    std::vector<Element> r_diag;               // [i*dim+j] = points in R_dij
    std::vector<std::vector<Element>> r_repl;  // [i*dim+j][b1]
    std::vector<std::vector<Element>> r_swap;  // [i*dim+j][b1]

    /// Identity-on-indices comparison against a structure's own relation
    /// predicates.  Returns a mismatch description, or nullopt on agreement.
    std::optional<std::string> agrees_with(const AtomStructure& s) const {
        const std::size_t count = s.size();
        if (r_cyl.empty() || r_cyl[0].size() != count) return "frame carrier size mismatch";
        for (int i = 0; i < dim; ++i)
            for (std::size_t b = 0; b < count; ++b)
                for (std::size_t c = 0; c < count; ++c)
                    if (r_cyl[i][b].test(c) != s.rel_cyl(c, b, i))
                        return "frame R_c" + std::to_string(i) + " disagrees at (" +
                               std::to_string(c) + ", " + std::to_string(b) + ")";
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const std::size_t ij = static_cast<std::size_t>(i) * dim + j;
                if (s.has_diag())
                    for (std::size_t b = 0; b < count; ++b)
                        if (r_diag[ij].test(b) != s.rel_diag(b, i, j))
                            return "frame R_d" + std::to_string(i) + std::to_string(j) +
                                   " disagrees at " + std::to_string(b);
                if (s.has_swap())
                    for (std::size_t b = 0; b < count; ++b)
                        for (std::size_t c = 0; c < count; ++c)
                            if (r_swap[ij][b].test(c) != s.rel_swap(c, b, i, j))
                                return "frame swap relation (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") disagrees at (" + std::to_string(c) +
                                       ", " + std::to_string(b) + ")";
                if (s.has_subst() || s.has_diag())
                    for (std::size_t b = 0; b < count; ++b)
                        for (std::size_t c = 0; c < count; ++c)
                            if (r_repl[ij][b].test(c) != subst_rel(s.atom(c), s.atom(b), i, j))
                                return "frame replacement relation (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") disagrees at (" + std::to_string(c) +
                                       ", " + std::to_string(b) + ")";
            }
        return std::nullopt;
    }
};

inline UltrafilterFrame ultrafilter_frame(const ComplexAlgebra& a) {
    const int n = a.dim();
    const std::size_t count = a.atom_count();
    UltrafilterFrame f;
    f.dim = n;
    f.r_cyl.assign(n, {});
    for (int i = 0; i < n; ++i) {
        f.r_cyl[i].reserve(count);
        for (std::size_t b = 0; b < count; ++b) f.r_cyl[i].push_back(a.cyl(i, a.singleton(b)));
    }
    const bool diag_ok = a.structure().has_diag();
    const bool subst_ok = diag_ok || a.structure().has_subst();
    const bool swap_ok = a.structure().has_swap();
    f.r_diag.assign(static_cast<std::size_t>(n) * n, a.bottom());
    f.r_repl.assign(static_cast<std::size_t>(n) * n, {});
    f.r_swap.assign(static_cast<std::size_t>(n) * n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t ij = static_cast<std::size_t>(i) * n + j;
            if (diag_ok) f.r_diag[ij] = a.diag(i, j);
            if (subst_ok) {
                f.r_repl[ij].reserve(count);
                for (std::size_t b = 0; b < count; ++b)
                    f.r_repl[ij].push_back(a.subst_repl(i, j, a.singleton(b)));
            }
            if (swap_ok) {
                f.r_swap[ij].reserve(count);
                for (std::size_t b = 0; b < count; ++b)
                    f.r_swap[ij].push_back(a.subst_swap(i, j, a.singleton(b)));
            }
        }
    return f;
}

/// Pointwise agreement of the reconstructed atom-structure relations (each
/// relation read off the algebra's operators on singletons) with the source
/// structure's own predicates.  Returns a mismatch description, or nullopt.
inline std::optional<std::string> atcm_agreement_failure(const ComplexAlgebra& a) {
    const auto& s = a.structure();
    const std::size_t count = s.size();
    const int n = a.dim();
    for (int i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < count; ++b) {
            const Element img = a.cyl(i, a.singleton(b));
            for (std::size_t c = 0; c < count; ++c)
                if (img.test(c) != s.rel_cyl(c, b, i))
                    return "R_c" + std::to_string(i) + " disagrees at atoms (" + std::to_string(c) +
                           ", " + std::to_string(b) + ")";
        }
    }
    if (s.has_diag())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Element d = a.diag(i, j);
                for (std::size_t b = 0; b < count; ++b)
                    if (d.test(b) != s.rel_diag(b, i, j))
                        return "R_d" + std::to_string(i) + std::to_string(j) + " disagrees at atom " +
                               std::to_string(b);
            }
    if (s.has_swap())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (std::size_t b = 0; b < count; ++b) {
                    const Element img = a.subst_swap(i, j, a.singleton(b));
                    for (std::size_t c = 0; c < count; ++c)
                        if (img.test(c) != s.rel_swap(c, b, i, j))
                            return "R_s" + std::to_string(i) + std::to_string(j) +
                                   " (swap) disagrees at atoms (" + std::to_string(c) + ", " +
                                   std::to_string(b) + ")";
                }
            }
    if (s.has_subst() || s.has_diag())
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (std::size_t b = 0; b < count; ++b) {
                    const Element img = a.subst_repl(i, j, a.singleton(b));
                    for (std::size_t c = 0; c < count; ++c)
                        if (img.test(c) != subst_rel(s.atom(c), s.atom(b), i, j))
                            return "R_s" + std::to_string(i) + "^" + std::to_string(j) +
                                   " (replacement) disagrees at atoms (" + std::to_string(c) + ", " +
                                   std::to_string(b) + ")";
                }
            }
    return std::nullopt;
}

} // namespace bao
