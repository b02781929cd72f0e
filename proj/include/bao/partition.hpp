#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bao/errors.hpp"

namespace bao {

/// Partitions of {0..n-1} in restricted-growth form: rgs[0] = 0 and
/// rgs[i] <= 1 + max(rgs[0..i-1]).  Two equivalence relations are equal iff
/// their restricted-growth arrays are equal.
struct Partition {
    static constexpr int max_dim = 6;

    std::array<std::uint8_t, max_dim> rgs{};
    std::uint8_t dim = 0;

    static Partition discrete(int n) {
        Partition p;
        p.dim = static_cast<std::uint8_t>(n);
        for (int i = 0; i < n; ++i) p.rgs[i] = static_cast<std::uint8_t>(i);
        return p;
    }

    static Partition single_block(int n) {
        Partition p;
        p.dim = static_cast<std::uint8_t>(n);
        return p;
    }

    /// Normalize arbitrary block labels into restricted-growth form.
    static Partition from_labels(const std::array<std::uint8_t, max_dim>& labels, int n) {
        Partition p;
        p.dim = static_cast<std::uint8_t>(n);
        std::array<std::int8_t, 2 * max_dim> remap;
        remap.fill(-1);
        std::uint8_t next = 0;
        for (int i = 0; i < n; ++i) {
            if (remap[labels[i]] == -1) remap[labels[i]] = static_cast<std::int8_t>(next++);
            p.rgs[i] = static_cast<std::uint8_t>(remap[labels[i]]);
        }
        return p;
    }

    bool valid() const {
        if (dim == 0 || dim > max_dim || rgs[0] != 0) return false;
        std::uint8_t seen = 0;
        for (int i = 1; i < dim; ++i) {
            if (rgs[i] > seen + 1) return false;
            if (rgs[i] == seen + 1) ++seen;
        }
        return true;
    }

    int block_count() const {
        std::uint8_t m = 0;
        for (int i = 0; i < dim; ++i) m = rgs[i] > m ? rgs[i] : m;
        return m + 1;
    }

    bool same_block(int i, int j) const { return rgs[i] == rgs[j]; }

    /// Restriction to {0..n-1} minus one index, renormalized and packed
    /// three bits per entry.  Used as the partition part of the ~_i keys.
    std::uint32_t restricted_key(int skip) const {
        std::array<std::int8_t, 2 * max_dim> remap;
        remap.fill(-1);
        std::uint32_t key = 0;
        std::uint8_t next = 0;
        int shift = 0;
        for (int i = 0; i < dim; ++i) {
            if (i == skip) continue;
            if (remap[rgs[i]] == -1) remap[rgs[i]] = static_cast<std::int8_t>(next++);
            key |= static_cast<std::uint32_t>(remap[rgs[i]]) << shift;
            shift += 3;
        }
        return key;
    }

    /// Pullback along a permutation: i ~' j iff perm(i) ~ perm(j).
    Partition relabeled(const std::array<std::uint8_t, max_dim>& perm) const {
        std::array<std::uint8_t, max_dim> labels{};
        for (int i = 0; i < dim; ++i) labels[i] = rgs[perm[i]];
        return from_labels(labels, dim);
    }

    /// Pullback along the transposition (i j).
    Partition swapped(int i, int j) const {
        std::array<std::uint8_t, max_dim> perm{};
        for (int k = 0; k < dim; ++k) perm[k] = static_cast<std::uint8_t>(k);
        perm[i] = static_cast<std::uint8_t>(j);
        perm[j] = static_cast<std::uint8_t>(i);
        return relabeled(perm);
    }

    bool operator==(const Partition& other) const {
        if (dim != other.dim) return false;
        for (int i = 0; i < dim; ++i)
            if (rgs[i] != other.rgs[i]) return false;
        return true;
    }

    auto cmp_key() const {
        std::uint32_t key = 0;
        for (int i = 0; i < dim; ++i) key = key * 8 + rgs[i];
        return key;
    }
};

/// All partitions of {0..n-1}, in restricted-growth lexicographic order.
inline std::vector<Partition> all_partitions(int n) {
    if (n < 1 || n > Partition::max_dim) throw invalid_parameter("all_partitions: bad dimension");
    std::vector<Partition> out;
    Partition p;
    p.dim = static_cast<std::uint8_t>(n);
    // iterate restricted-growth strings in lexicographic order
    std::array<std::uint8_t, Partition::max_dim> a{};
    while (true) {
        for (int i = 0; i < n; ++i) p.rgs[i] = a[i];
        out.push_back(p);
        int i = n - 1;
        while (i > 0) {
            std::uint8_t maxpre = 0;
            for (int k = 0; k < i; ++k) maxpre = a[k] > maxpre ? a[k] : maxpre;
            if (a[i] <= maxpre) { ++a[i]; break; }
            a[i] = 0;
            --i;
        }
        if (i == 0) break;
        for (int k = i + 1; k < n; ++k) a[k] = 0;
    }
    return out;
}

inline std::uint64_t bell_number(int n) {
    constexpr std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203};
    if (n < 0 || n > 6) throw invalid_parameter("bell_number: supported range is 0..6");
    return bell[n];
}

/// Number of surjections from an n-element set onto a k-element set.
inline std::uint64_t surjection_count(int n, int k) {
    // k! * S(n, k) via inclusion-exclusion
    auto power = [](std::uint64_t b, int e) {
        std::uint64_t r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    };
    auto binom = [](int a, int b) {
        std::uint64_t r = 1;
        for (int i = 0; i < b; ++i) r = r * static_cast<std::uint64_t>(a - i) / (i + 1);
        return r;
    };
    std::int64_t total = 0;
    for (int j = 0; j <= k; ++j) {
        const std::int64_t term = static_cast<std::int64_t>(binom(k, j) * power(static_cast<std::uint64_t>(k - j), n));
        total += (j % 2 == 0) ? term : -term;
    }
    return static_cast<std::uint64_t>(total);
}

} // namespace bao
