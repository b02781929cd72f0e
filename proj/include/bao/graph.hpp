#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bao/errors.hpp"

namespace bao {

/// Finite loop-free undirected graph. Nodes are 0..node_count-1, edges are
/// unordered pairs stored as (u, w) with u < w. Immutable once built.
class Graph {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    Graph() = default;

    // Adjacency is a dense bit matrix, so node counts are capped to keep the
    // footprint sane (20000 nodes = 50 MB).
    static constexpr std::size_t max_nodes = 20000;

    explicit Graph(std::size_t node_count, std::vector<Edge> edges = {})
        : node_count_(node_count) {
        if (node_count_ > max_nodes)
            throw resource_limit("graph: node count " + std::to_string(node_count_) +
                                 " exceeds the supported maximum " + std::to_string(max_nodes));
        for (auto& [u, w] : edges) {
            if (u > w) std::swap(u, w);
            if (u == w) throw invalid_parameter("graph: self-loop on node " + std::to_string(u));
            if (w >= node_count_)
                throw invalid_parameter("graph: edge endpoint " + std::to_string(w) +
                                        " out of range (node count " + std::to_string(node_count_) + ")");
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw invalid_parameter("graph: duplicate edge");
        edges_ = std::move(edges);
        words_per_row_ = (node_count_ + 63) / 64;
        adj_.assign(node_count_ * words_per_row_, 0);
        for (auto [u, w] : edges_) {
            adj_[u * words_per_row_ + w / 64] |= std::uint64_t{1} << (w % 64);
            adj_[w * words_per_row_ + u / 64] |= std::uint64_t{1} << (u % 64);
        }
    }

    std::size_t node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool adjacent(std::uint32_t u, std::uint32_t w) const {
        return (adj_[u * words_per_row_ + w / 64] >> (w % 64)) & 1;
    }

    std::vector<std::uint32_t> neighbors(std::uint32_t u) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t w = 0; w < node_count_; ++w)
            if (adjacent(u, w)) out.push_back(w);
        return out;
    }

    std::size_t degree(std::uint32_t u) const { return neighbors(u).size(); }

    bool operator==(const Graph& other) const {
        return node_count_ == other.node_count_ && edges_ == other.edges_;
    }

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint64_t> adj_;
    std::size_t words_per_row_ = 0;
};

enum class StandardGraph { complete, cycle, path, edgeless };

inline Graph build_standard(StandardGraph kind, std::size_t k) {
    if (k < 1) throw invalid_parameter("build_standard: size must be >= 1");
    std::vector<Graph::Edge> edges;
    switch (kind) {
    case StandardGraph::complete:
        for (std::uint32_t u = 0; u + 1 < k; ++u)
            for (std::uint32_t w = u + 1; w < k; ++w) edges.push_back({u, w});
        break;
    case StandardGraph::cycle:
        if (k < 3) throw invalid_parameter("build_standard: cycle needs >= 3 nodes");
        for (std::uint32_t u = 0; u + 1 < k; ++u) edges.push_back({u, u + 1});
        edges.push_back({0, static_cast<std::uint32_t>(k - 1)});
        break;
    case StandardGraph::path:
        for (std::uint32_t u = 0; u + 1 < k; ++u) edges.push_back({u, u + 1});
        break;
    case StandardGraph::edgeless:
        break;
    }
    return Graph(k, std::move(edges));
}

inline Graph disjoint_union(const Graph& g, const Graph& h) {
    std::vector<Graph::Edge> edges = g.edges();
    const auto offset = static_cast<std::uint32_t>(g.node_count());
    for (auto [u, w] : h.edges()) edges.push_back({u + offset, w + offset});
    return Graph(g.node_count() + h.node_count(), std::move(edges));
}

/// Mycielski construction: raises the chromatic number by one and preserves
/// triangle-freeness. Nodes: originals 0..k-1, shadows k..2k-1, apex 2k.
inline Graph mycielskian(const Graph& g) {
    if (g.node_count() < 1) throw invalid_parameter("mycielskian: graph must be nonempty");
    const auto k = static_cast<std::uint32_t>(g.node_count());
    std::vector<Graph::Edge> edges = g.edges();
    for (auto [u, w] : g.edges()) {
        edges.push_back({k + u, w});
        edges.push_back({u, k + w});
    }
    for (std::uint32_t u = 0; u < k; ++u) edges.push_back({k + u, 2 * k});
    return Graph(2 * std::size_t{k} + 1, std::move(edges));
}

inline bool is_independent(const Graph& g, const std::vector<std::uint32_t>& nodes) {
    for (auto u : nodes)
        if (u >= g.node_count())
            throw invalid_parameter("is_independent: node " + std::to_string(u) + " out of range");
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            if (g.adjacent(nodes[a], nodes[b])) return false;
    return true;
}

namespace detail {

// Decision procedure: can g be colored with at most k colors?  Backtracking
// with DSATUR-style dynamic vertex selection and a symmetry break (vertex may
// only open one fresh color beyond those already used).
inline bool k_colorable(const Graph& g, std::size_t k) {
    const std::size_t n = g.node_count();
    if (k >= n) return true;
    std::vector<int> color(n, -1);
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::uint32_t u = 0; u < n; ++u) adj[u] = g.neighbors(u);

    struct Frame { std::uint32_t vertex; int tried; };
    auto pick = [&]() -> int {
        int best = -1;
        std::size_t best_sat = 0, best_deg = 0;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (color[u] != -1) continue;
            std::uint64_t mask = 0;
            for (auto w : adj[u])
                if (color[w] != -1) mask |= std::uint64_t{1} << color[w];
            const auto sat = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (best == -1 || sat > best_sat || (sat == best_sat && adj[u].size() > best_deg)) {
                best = static_cast<int>(u);
                best_sat = sat;
                best_deg = adj[u].size();
            }
        }
        return best;
    };

    std::vector<Frame> stack;
    int used = 0;

    auto admissible = [&](std::uint32_t u, int c) {
        for (auto w : adj[u])
            if (color[w] == c) return false;
        return true;
    };

    int v0 = pick();
    if (v0 == -1) return true;
    stack.push_back({static_cast<std::uint32_t>(v0), -1});
    while (!stack.empty()) {
        auto& fr = stack.back();
        if (fr.tried >= 0) color[fr.vertex] = -1;
        // recompute 'used' = number of colors among assigned vertices
        used = 0;
        {
            std::uint64_t mask = 0;
            for (std::uint32_t u = 0; u < n; ++u)
                if (color[u] != -1) mask |= std::uint64_t{1} << color[u];
            used = __builtin_popcountll(mask);
        }
        const int limit = static_cast<int>(std::min(k, static_cast<std::size_t>(used) + 1));
        int next = -1;
        for (int c = fr.tried + 1; c < limit; ++c) {
            if (admissible(fr.vertex, c)) { next = c; break; }
        }
        if (next == -1) {
            stack.pop_back();
            continue;
        }
        fr.tried = next;
        color[fr.vertex] = next;
        int v = pick();
        if (v == -1) return true;
        stack.push_back({static_cast<std::uint32_t>(v), -1});
    }
    return false;
}

inline std::size_t greedy_upper_bound(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t u = 0; u < n; ++u) order[u] = u;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.degree(a) > g.degree(b); });
    std::vector<int> color(n, -1);
    std::size_t used = 0;
    for (auto u : order) {
        std::uint64_t mask = 0;
        for (auto w : g.neighbors(u))
            if (color[w] != -1) mask |= std::uint64_t{1} << color[w];
        int c = 0;
        while ((mask >> c) & 1) ++c;
        color[u] = c;
        used = std::max(used, static_cast<std::size_t>(c) + 1);
    }
    return used;
}

inline std::size_t greedy_clique_bound(const Graph& g) {
    const std::size_t n = g.node_count();
    std::size_t best = n > 0 ? 1 : 0;
    for (std::uint32_t seed = 0; seed < n; ++seed) {
        std::vector<std::uint32_t> clique{seed};
        for (std::uint32_t u = 0; u < n; ++u) {
            if (u == seed) continue;
            bool ok = true;
            for (auto w : clique)
                if (!g.adjacent(u, w)) { ok = false; break; }
            if (ok) clique.push_back(u);
        }
        best = std::max(best, clique.size());
    }
    return best;
}

} // namespace detail

/// Exact chromatic number. Throws resource_limit above node_cap so the answer
/// is never approximate.
inline std::size_t chromatic_number(const Graph& g, std::size_t node_cap = 64) {
    const std::size_t n = g.node_count();
    if (n > node_cap)
        throw resource_limit("chromatic_number: " + std::to_string(n) + " nodes exceeds cap " +
                             std::to_string(node_cap));
    if (n == 0) return 0;
    if (g.edge_count() == 0) return 1;
    std::size_t lb = detail::greedy_clique_bound(g);
    std::size_t ub = detail::greedy_upper_bound(g);
    for (std::size_t k = lb; k < ub; ++k)
        if (detail::k_colorable(g, k)) return k;
    return ub;
}

/// Length of the shortest cycle, or nullopt for forests.
inline std::optional<std::size_t> girth(const Graph& g) {
    const std::size_t n = g.node_count();
    std::size_t best = SIZE_MAX;
    std::vector<std::int64_t> dist(n);
    std::vector<std::int64_t> parent(n);
    std::vector<std::uint32_t> queue(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::size_t head = 0, tail = 0;
        dist[s] = 0;
        queue[tail++] = s;
        while (head < tail) {
            const auto u = queue[head++];
            if (static_cast<std::size_t>(2 * dist[u]) >= best) break;
            for (auto w : g.neighbors(u)) {
                if (dist[w] == -1) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue[tail++] = w;
                } else if (parent[u] != w) {
                    best = std::min(best, static_cast<std::size_t>(dist[u] + dist[w] + 1));
                }
            }
        }
    }
    if (best == SIZE_MAX) return std::nullopt;
    return best;
}

inline std::string girth_to_string(const std::optional<std::size_t>& g) {
    return g ? std::to_string(*g) : std::string("inf");
}

// ---------------------------------------------------------------------------
// Witness search: a graph with a cycle, girth >= min_girth and chromatic
// number >= min_chi.  Deterministic constructions first (complete graphs,
// odd cycles, Mycielski towers), then seeded girth-constrained random graphs.
// Every candidate is re-verified with the exact solvers before it is returned.
// ---------------------------------------------------------------------------

struct WitnessRequest {
    std::size_t min_girth = 3;
    std::size_t min_chi = 1;
    std::uint64_t seed = 1;
    std::uint64_t budget = 100000;
    std::size_t node_cap = 64;
};

namespace detail {

inline bool witness_ok(const Graph& g, const WitnessRequest& req) {
    const auto gi = girth(g);
    if (!gi || *gi < req.min_girth) return false;
    return chromatic_number(g, req.node_cap) >= req.min_chi;
}

// BFS distance between u and w in the partial graph described by an adjacency
// list, or SIZE_MAX if disconnected.
inline std::size_t bfs_distance(const std::vector<std::vector<std::uint32_t>>& adj,
                                std::uint32_t u, std::uint32_t w) {
    if (u == w) return 0;
    std::vector<std::int64_t> dist(adj.size(), -1);
    std::vector<std::uint32_t> queue;
    queue.push_back(u);
    dist[u] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto x = queue[head];
        for (auto y : adj[x]) {
            if (dist[y] != -1) continue;
            dist[y] = dist[x] + 1;
            if (y == w) return static_cast<std::size_t>(dist[y]);
            queue.push_back(y);
        }
    }
    return SIZE_MAX;
}

} // namespace detail

inline std::optional<Graph> search_witness(const WitnessRequest& req) {
    if (req.min_girth < 3) throw invalid_parameter("search_witness: min_girth must be >= 3");
    if (req.min_chi < 1) throw invalid_parameter("search_witness: min_chi must be >= 1");

    std::uint64_t spent = 0;
    auto try_candidate = [&](const Graph& g) -> bool {
        if (spent >= req.budget) return false;
        ++spent;
        if (g.node_count() > req.node_cap) return false;
        return detail::witness_ok(g, req);
    };

    // Constructive phase.  Candidates beyond the node cap are not even built.
    if (req.min_chi <= 3) {
        // A cycle suffices: odd length when chi 3 is needed.
        std::size_t len = std::max<std::size_t>(3, req.min_girth);
        if (req.min_chi == 3 && len % 2 == 0) ++len;
        if (len <= req.node_cap) {
            Graph c = build_standard(StandardGraph::cycle, len);
            if (try_candidate(c)) return c;
        }
    } else if (req.min_girth <= 3) {
        if (req.min_chi <= req.node_cap) {
            Graph k = build_standard(StandardGraph::complete, req.min_chi);
            if (try_candidate(k)) return k;
        }
    } else if (req.min_girth <= 4) {
        // Mycielski tower over the 5-cycle: chi climbs by one per level,
        // triangle-freeness is preserved.
        Graph g = build_standard(StandardGraph::cycle, 5);
        for (std::size_t chi = 3; chi < req.min_chi && g.node_count() <= req.node_cap; ++chi)
            g = mycielskian(g);
        if (try_candidate(g)) return g;
    }

    // Seeded random phase: grow graphs edge-by-edge, only accepting edges that
    // keep every cycle at length >= min_girth, then verify exactly.
    std::mt19937_64 rng(req.seed);
    const std::uint64_t node_span = req.node_cap > 8 ? req.node_cap - 7 : 1;
    while (spent < req.budget) {
        const std::size_t v = std::min<std::size_t>(req.node_cap, 8 + rng() % node_span);
        std::vector<Graph::Edge> all_pairs;
        for (std::uint32_t u = 0; u + 1 < v; ++u)
            for (std::uint32_t w = u + 1; w < v; ++w) all_pairs.push_back({u, w});
        for (std::size_t i = all_pairs.size(); i > 1; --i)
            std::swap(all_pairs[i - 1], all_pairs[rng() % i]);
        std::vector<std::vector<std::uint32_t>> adj(v);
        std::vector<Graph::Edge> chosen;
        for (auto [u, w] : all_pairs) {
            if (detail::bfs_distance(adj, u, w) + 1 >= req.min_girth) {
                adj[u].push_back(w);
                adj[w].push_back(u);
                chosen.push_back({u, w});
            }
        }
        Graph g(v, std::move(chosen));
        if (try_candidate(g)) return g;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text format.  Line 1 "nodes <v>", then "edge <u> <w>" with 0 <= u < w < v;
// '#' starts a comment line; duplicate edges are rejected.
// ---------------------------------------------------------------------------

inline Graph parse_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool have_nodes = false;
    std::size_t node_count = 0;
    std::vector<Graph::Edge> edges;
    std::set<Graph::Edge> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword == "nodes") {
            if (have_nodes) throw parse_error("graph file: repeated 'nodes' line", lineno);
            long long v = -1;
            if (!(ls >> v) || v < 0) throw parse_error("graph file: bad node count", lineno);
            node_count = static_cast<std::size_t>(v);
            have_nodes = true;
        } else if (keyword == "edge") {
            if (!have_nodes) throw parse_error("graph file: 'edge' before 'nodes'", lineno);
            long long u = -1, w = -1;
            if (!(ls >> u >> w)) throw parse_error("graph file: bad edge line", lineno);
            if (u < 0 || w < 0 || u >= w || static_cast<std::size_t>(w) >= node_count)
                throw parse_error("graph file: edge must satisfy 0 <= u < w < nodes", lineno);
            Graph::Edge e{static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(w)};
            if (!seen.insert(e).second) throw parse_error("graph file: duplicate edge", lineno);
            edges.push_back(e);
        } else {
            throw parse_error("graph file: unknown keyword '" + keyword + "'", lineno);
        }
        std::string rest;
        if (ls >> rest) throw parse_error("graph file: trailing tokens", lineno);
    }
    if (!have_nodes) throw parse_error("graph file: missing 'nodes' line");
    return Graph(node_count, std::move(edges));
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
    out << "nodes " << g.node_count() << "\n";
    for (auto [u, w] : g.edges()) out << "edge " << u << " " << w << "\n";
}

inline std::string graph_to_text(const Graph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

} // namespace bao
