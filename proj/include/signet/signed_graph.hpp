#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signet/core.hpp"

namespace signet {

enum class EdgeKind { Link, Loop, HalfEdge, LooseEdge };

inline const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Link: return "link";
        case EdgeKind::Loop: return "loop";
        case EdgeKind::HalfEdge: return "half";
        case EdgeKind::LooseEdge: return "loose";
    }
    return "?";
}

/// One edge of a signed graph. Links use both endpoints; loops and
/// half-edges anchor at `u` (with `v` empty); loose edges use neither.
struct Edge {
    std::string id;
    EdgeKind kind = EdgeKind::Link;
    std::string u, v;
    int sign = +1;
};

/// A signed graph: vertices plus typed, signed edges. Values are immutable
/// after construction; every operation returns a new graph.
class SignedGraph {
  public:
    SignedGraph() = default;

    SignedGraph(std::vector<std::string> vertices, std::vector<Edge> edges) {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        vertices_ = std::move(vertices);
        edges_ = std::move(edges);
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        validate();
        for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_[edges_[i].id] = i;
        for (std::size_t i = 0; i < vertices_.size(); ++i) vertex_index_[vertices_[i]] = i;
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t vertex_count() const { return vertices_.size(); }

    bool has_vertex(const std::string& v) const { return vertex_index_.count(v) != 0; }
    bool has_edge(const std::string& id) const { return edge_index_.count(id) != 0; }

    const Edge& edge(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw invalid_argument("unknown edge id: " + id);
        return edges_[it->second];
    }

    std::size_t edge_pos(const std::string& id) const {
        auto it = edge_index_.find(id);
        if (it == edge_index_.end()) throw invalid_argument("unknown edge id: " + id);
        return it->second;
    }

    EdgeSet edge_ids() const {
        EdgeSet out;
        for (const auto& e : edges_) out.insert(e.id);
        return out;
    }

    bool incident(const Edge& e, const std::string& v) const {
        switch (e.kind) {
            case EdgeKind::Link: return e.u == v || e.v == v;
            case EdgeKind::Loop:
            case EdgeKind::HalfEdge: return e.u == v;
            case EdgeKind::LooseEdge: return false;
        }
        return false;
    }

    /// The joints J(Sigma): negative loops and half-edges.
    EdgeSet joints() const {
        EdgeSet out;
        for (const auto& e : edges_)
            if ((e.kind == EdgeKind::Loop && e.sign < 0) || e.kind == EdgeKind::HalfEdge)
                out.insert(e.id);
        return out;
    }

    /// b-star of v: incident edges that are not positive loops.
    EdgeSet b_star(const std::string& v) const {
        if (!has_vertex(v)) throw invalid_argument("unknown vertex: " + v);
        EdgeSet out;
        for (const auto& e : edges_) {
            if (!incident(e, v)) continue;
            if (e.kind == EdgeKind::Loop && e.sign > 0) continue;
            out.insert(e.id);
        }
        return out;
    }

    EdgeSet incident_edges(const std::string& v) const {
        if (!has_vertex(v)) throw invalid_argument("unknown vertex: " + v);
        EdgeSet out;
        for (const auto& e : edges_)
            if (incident(e, v)) out.insert(e.id);
        return out;
    }

  private:
    void validate() const {
        std::set<std::string> seen;
        for (const auto& e : edges_) {
            if (!seen.insert(e.id).second)
                throw invalid_argument("duplicate edge id: " + e.id);
            switch (e.kind) {
                case EdgeKind::Link:
                    require_vertex(e.u);
                    require_vertex(e.v);
                    break;
                case EdgeKind::Loop:
                    require_vertex(e.u);
                    break;
                case EdgeKind::HalfEdge:
                    require_vertex(e.u);
                    if (e.sign != -1)
                        throw invalid_argument("half-edge must be negative: " + e.id);
                    break;
                case EdgeKind::LooseEdge:
                    if (e.sign != +1)
                        throw invalid_argument("loose edge must be positive: " + e.id);
                    break;
            }
            if (e.sign != 1 && e.sign != -1)
                throw invalid_argument("edge sign must be +1 or -1: " + e.id);
        }
    }

    void require_vertex(const std::string& v) const {
        if (std::find(vertices_.begin(), vertices_.end(), v) == vertices_.end())
            throw invalid_argument("edge endpoint not in vertex set: " + v);
    }

    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::map<std::string, std::size_t> edge_index_;
    std::map<std::string, std::size_t> vertex_index_;
};

// ---------------------------------------------------------------------------
// switching

/// Negate the sign of every link incident to v. Self-inverse.
inline SignedGraph switch_vertex(const SignedGraph& g, const std::string& v) {
    if (!g.has_vertex(v)) throw invalid_argument("unknown vertex: " + v);
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges)
        if (e.kind == EdgeKind::Link && (e.u == v || e.v == v) && e.u != e.v)
            e.sign = -e.sign;
    return SignedGraph(g.vertices(), std::move(edges));
}

inline SignedGraph switch_vertices(const SignedGraph& g, const std::set<std::string>& vs) {
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) {
        if (e.kind != EdgeKind::Link) continue;
        bool cu = vs.count(e.u) != 0, cv = vs.count(e.v) != 0;
        if (cu != cv) e.sign = -e.sign;
    }
    return SignedGraph(g.vertices(), std::move(edges));
}

// ---------------------------------------------------------------------------
// balance

struct BalanceResult {
    bool balanced = false;
    /// On success: a +-/- marking of the vertices; switching at the negative
    /// class makes every link positive.
    std::map<std::string, int> marks;
    /// On failure: the edge ids of one negative cycle (a single joint counts).
    std::vector<std::string> negative_cycle;
};

namespace detail {

/// Adjacency over links only, with edge positions.
inline std::map<std::string, std::vector<std::size_t>> link_adjacency(const SignedGraph& g) {
    std::map<std::string, std::vector<std::size_t>> adj;
    for (const auto& v : g.vertices()) adj[v];
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        if (e.kind == EdgeKind::Link) {
            adj[e.u].push_back(i);
            adj[e.v].push_back(i);
        }
    }
    return adj;
}

}  // namespace detail

inline BalanceResult is_balanced(const SignedGraph& g) {
    BalanceResult r;
    // A half-edge or a negative loop is a one-edge negative cycle.
    for (const auto& e : g.edges()) {
        if (e.kind == EdgeKind::HalfEdge || (e.kind == EdgeKind::Loop && e.sign < 0)) {
            r.balanced = false;
            r.negative_cycle = {e.id};
            return r;
        }
    }
    auto adj = detail::link_adjacency(g);
    std::map<std::string, int> mark;
    std::map<std::string, std::pair<std::string, std::size_t>> parent;  // vertex -> (prev, edge pos)
    for (const auto& s : g.vertices()) {
        if (mark.count(s)) continue;
        mark[s] = +1;
        std::vector<std::string> stack{s};
        while (!stack.empty()) {
            std::string u = stack.back();
            stack.pop_back();
            for (std::size_t pos : adj[u]) {
                const Edge& e = g.edges()[pos];
                if (e.u == e.v) continue;  // positive loop, sign-neutral
                std::string w = (e.u == u) ? e.v : e.u;
                int expect = mark[u] * e.sign;
                auto it = mark.find(w);
                if (it == mark.end()) {
                    mark[w] = expect;
                    parent[w] = {u, pos};
                    stack.push_back(w);
                } else if (it->second != expect) {
                    // Negative cycle: the violating edge plus the two tree paths.
                    r.balanced = false;
                    std::vector<std::string> pu, pw;
                    std::string a = u, b = w;
                    std::set<std::string> aseen;
                    std::vector<std::string> achain{a};
                    while (parent.count(a)) {
                        a = parent[a].first;
                        achain.push_back(a);
                    }
                    std::map<std::string, std::size_t> apos;
                    for (std::size_t i = 0; i < achain.size(); ++i) apos[achain[i]] = i;
                    std::string meet = b;
                    while (!apos.count(meet)) meet = parent[meet].first;
                    std::string x = u;
                    while (x != meet) {
                        r.negative_cycle.push_back(g.edges()[parent[x].second].id);
                        x = parent[x].first;
                    }
                    x = w;
                    while (x != meet) {
                        r.negative_cycle.push_back(g.edges()[parent[x].second].id);
                        x = parent[x].first;
                    }
                    r.negative_cycle.push_back(e.id);
                    return r;
                }
            }
        }
    }
    r.balanced = true;
    r.marks = std::move(mark);
    return r;
}

/// Balance of the subgraph induced by an edge set (its touched vertices).
inline bool is_balanced_subset(const SignedGraph& g, const EdgeSet& S) {
    std::vector<Edge> edges;
    for (const auto& id : S) edges.push_back(g.edge(id));
    return is_balanced(SignedGraph(g.vertices(), std::move(edges))).balanced;
}

// ---------------------------------------------------------------------------
// deletion / restriction / contraction

inline SignedGraph delete_edges(const SignedGraph& g, const EdgeSet& S) {
    std::vector<Edge> keep;
    for (const auto& e : g.edges())
        if (!S.count(e.id)) keep.push_back(e);
    for (const auto& id : S) (void)g.edge(id);  // validates ids
    return SignedGraph(g.vertices(), std::move(keep));
}

inline SignedGraph delete_vertex(const SignedGraph& g, const std::string& v) {
    if (!g.has_vertex(v)) throw invalid_argument("unknown vertex: " + v);
    std::vector<Edge> keep;
    for (const auto& e : g.edges())
        if (!g.incident(e, v)) keep.push_back(e);
    std::vector<std::string> vs;
    for (const auto& w : g.vertices())
        if (w != v) vs.push_back(w);
    return SignedGraph(std::move(vs), std::move(keep));
}

/// G|S: keep exactly the edges of S and their end-vertices.
inline SignedGraph restrict_to(const SignedGraph& g, const EdgeSet& S) {
    std::vector<Edge> keep;
    std::set<std::string> touched;
    for (const auto& id : S) {
        const Edge& e = g.edge(id);
        keep.push_back(e);
        if (e.kind != EdgeKind::LooseEdge) {
            touched.insert(e.u);
            if (e.kind == EdgeKind::Link) touched.insert(e.v);
        }
    }
    return SignedGraph({touched.begin(), touched.end()}, std::move(keep));
}

namespace detail {

inline std::string lex_smaller(const std::string& a, const std::string& b) {
    return a < b ? a : b;
}

}  // namespace detail

/// Contract a single edge, by the case split on its kind and sign.
inline SignedGraph contract_edge(const SignedGraph& g, const std::string& id) {
    const Edge e = g.edge(id);
    if (e.kind == EdgeKind::LooseEdge ||
        (e.kind == EdgeKind::Loop && e.sign > 0)) {
        return delete_edges(g, {id});
    }
    if (e.kind == EdgeKind::HalfEdge || (e.kind == EdgeKind::Loop && e.sign < 0)) {
        // Remove the anchor; loops and half-edges there vanish, other links
        // there become half-edges at their other end.
        const std::string v = e.u;
        std::vector<Edge> out;
        for (const auto& f : g.edges()) {
            if (f.id == id) continue;
            if (!g.incident(f, v)) {
                out.push_back(f);
                continue;
            }
            if (f.kind == EdgeKind::Loop || f.kind == EdgeKind::HalfEdge) continue;
            Edge h = f;
            h.kind = EdgeKind::HalfEdge;
            h.u = (f.u == v) ? f.v : f.u;
            h.v.clear();
            h.sign = -1;
            if (h.u == v) {  // link was a loop disguised? cannot happen: loops handled above
                continue;
            }
            out.push_back(h);
        }
        std::vector<std::string> vs;
        for (const auto& w : g.vertices())
            if (w != v) vs.push_back(w);
        return SignedGraph(std::move(vs), std::move(out));
    }
    // Link. Negative links switch at the lexicographically smaller end first.
    SignedGraph work = g;
    if (e.sign < 0) work = switch_vertex(g, detail::lex_smaller(e.u, e.v));
    const Edge we = work.edge(id);
    const std::string keep = detail::lex_smaller(we.u, we.v);
    const std::string gone = (keep == we.u) ? we.v : we.u;
    std::vector<Edge> out;
    for (const auto& f : work.edges()) {
        if (f.id == id) continue;
        Edge h = f;
        if (h.kind == EdgeKind::Link) {
            if (h.u == gone) h.u = keep;
            if (h.v == gone) h.v = keep;
            if (h.u == h.v) {
                h.kind = EdgeKind::Loop;
                h.v.clear();
            }
        } else if (h.kind == EdgeKind::Loop || h.kind == EdgeKind::HalfEdge) {
            if (h.u == gone) h.u = keep;
        }
        out.push_back(h);
    }
    std::vector<std::string> vs;
    for (const auto& w : work.vertices())
        if (w != gone) vs.push_back(w);
    return SignedGraph(std::move(vs), std::move(out));
}

inline SignedGraph contract_edges(const SignedGraph& g, const EdgeSet& S) {
    SignedGraph out = g;
    for (const auto& id : S) (void)g.edge(id);
    // Contract in id order; the resulting matroid is order-independent.
    for (const auto& id : S) out = contract_edge(out, id);
    return out;
}

inline SignedGraph drop_isolated_vertices(const SignedGraph& g) {
    std::set<std::string> touched;
    for (const auto& e : g.edges()) {
        if (e.kind == EdgeKind::LooseEdge) continue;
        touched.insert(e.u);
        if (e.kind == EdgeKind::Link) touched.insert(e.v);
    }
    return SignedGraph({touched.begin(), touched.end()}, g.edges());
}

/// G.S: contract the complement, then drop isolated vertices.
inline SignedGraph contract_to(const SignedGraph& g, const EdgeSet& S) {
    EdgeSet co;
    for (const auto& e : g.edges())
        if (!S.count(e.id)) co.insert(e.id);
    for (const auto& id : S) (void)g.edge(id);
    return drop_isolated_vertices(contract_edges(g, co));
}

inline SignedGraph strip_joints(const SignedGraph& g) {
    return delete_edges(g, g.joints());
}

// ---------------------------------------------------------------------------
// connectivity, components, blocks

/// Vertex sets of connected components (isolated vertices included).
inline std::vector<std::set<std::string>> components(const SignedGraph& g) {
    std::map<std::string, std::string> par;
    std::function<std::string(std::string)> find = [&](std::string x) {
        while (par[x] != x) {
            par[x] = par[par[x]];
            x = par[x];
        }
        return x;
    };
    for (const auto& v : g.vertices()) par[v] = v;
    for (const auto& e : g.edges())
        if (e.kind == EdgeKind::Link) {
            auto a = find(e.u), b = find(e.v);
            if (a != b) par[a] = b;
        }
    std::map<std::string, std::set<std::string>> comp;
    for (const auto& v : g.vertices()) comp[find(v)].insert(v);
    std::vector<std::set<std::string>> out;
    for (auto& [root, vs] : comp) out.push_back(std::move(vs));
    return out;
}

inline bool is_connected(const SignedGraph& g) {
    return components(g).size() <= 1;
}

/// Number of balanced components, counting isolated vertices as balanced.
/// Loose edges belong to no component and are ignored.
inline int balanced_component_count(const SignedGraph& g) {
    int count = 0;
    for (const auto& vs : components(g)) {
        std::vector<Edge> sub;
        for (const auto& e : g.edges())
            if (e.kind != EdgeKind::LooseEdge && vs.count(e.u)) sub.push_back(e);
        if (is_balanced(SignedGraph({vs.begin(), vs.end()}, std::move(sub))).balanced)
            ++count;
    }
    return count;
}

/// Tutte blocks as edge sets: maximal 2-connected link subgraphs; every loop,
/// half-edge, and loose edge is a block by itself.
inline std::vector<EdgeSet> blocks(const SignedGraph& g) {
    std::vector<EdgeSet> out;
    for (const auto& e : g.edges())
        if (e.kind != EdgeKind::Link) out.push_back({e.id});
    // Standard lowpoint biconnected-components over the links.
    auto adj = detail::link_adjacency(g);
    std::map<std::string, int> num, low;
    std::vector<std::size_t> estack;
    int counter = 0;
    std::function<void(const std::string&, std::size_t)> dfs =
        [&](const std::string& u, std::size_t pedge) {
            num[u] = low[u] = ++counter;
            for (std::size_t pos : adj.at(u)) {
                const Edge& e = g.edges()[pos];
                if (e.u == e.v) continue;
                std::string w = (e.u == u) ? e.v : e.u;
                if (!num.count(w)) {
                    estack.push_back(pos);
                    dfs(w, pos);
                    low[u] = std::min(low[u], low[w]);
                    if (low[w] >= num[u]) {
                        EdgeSet blk;
                        while (true) {
                            std::size_t top = estack.back();
                            estack.pop_back();
                            blk.insert(g.edges()[top].id);
                            if (top == pos) break;
                        }
                        out.push_back(std::move(blk));
                    }
                } else if (pos != pedge && num[w] < num[u]) {
                    estack.push_back(pos);
                    low[u] = std::min(low[u], num[w]);
                }
            }
        };
    for (const auto& v : g.vertices())
        if (!num.count(v)) dfs(v, static_cast<std::size_t>(-1));
    std::sort(out.begin(), out.end());
    return out;
}

struct InnerOuterBlocks {
    std::vector<EdgeSet> inner;
    std::vector<EdgeSet> outer;
};

namespace detail {

inline std::set<std::string> block_vertices(const SignedGraph& g, const EdgeSet& blk) {
    std::set<std::string> vs;
    for (const auto& id : blk) {
        const Edge& e = g.edge(id);
        if (e.kind == EdgeKind::LooseEdge) continue;
        vs.insert(e.u);
        if (e.kind == EdgeKind::Link) vs.insert(e.v);
    }
    return vs;
}

}  // namespace detail

/// Inner blocks: unbalanced, or on a path between two unbalanced blocks in
/// the block-cut tree. Requires a connected graph.
inline InnerOuterBlocks inner_outer_blocks(const SignedGraph& g) {
    if (!is_connected(g))
        throw invalid_argument("inner_outer_blocks: disconnected input; call per component");
    auto blks = blocks(g);
    std::vector<bool> unbal(blks.size());
    std::vector<std::set<std::string>> bverts(blks.size());
    for (std::size_t i = 0; i < blks.size(); ++i) {
        unbal[i] = !is_balanced_subset(g, blks[i]);
        bverts[i] = detail::block_vertices(g, blks[i]);
    }
    // Block adjacency through shared (cut) vertices.
    std::vector<std::vector<std::size_t>> badj(blks.size());
    for (std::size_t i = 0; i < blks.size(); ++i)
        for (std::size_t j = i + 1; j < blks.size(); ++j) {
            bool share = false;
            for (const auto& v : bverts[i])
                if (bverts[j].count(v)) { share = true; break; }
            if (share) {
                badj[i].push_back(j);
                badj[j].push_back(i);
            }
        }
    // A block is inner iff it is unbalanced or lies on a simple path between
    // two unbalanced blocks of the block tree.
    InnerOuterBlocks io;
    for (std::size_t i = 0; i < blks.size(); ++i) {
        bool inner = unbal[i];
        if (!inner) {
            // In the block tree, "between two unbalanced blocks" means removal
            // of block i separates two unbalanced ones.
            int sides = 0;
            std::vector<bool> seen(blks.size(), false);
            seen[i] = true;
            for (std::size_t s : badj[i]) {
                if (seen[s]) continue;
                bool found = false;
                std::vector<std::size_t> stack{s};
                seen[s] = true;
                std::vector<std::size_t> visited{s};
                while (!stack.empty()) {
                    auto u = stack.back();
                    stack.pop_back();
                    if (unbal[u]) found = true;
                    for (auto w : badj[u])
                        if (!seen[w]) {
                            seen[w] = true;
                            visited.push_back(w);
                            stack.push_back(w);
                        }
                }
                if (found) ++sides;
            }
            inner = sides >= 2;
        }
        (inner ? io.inner : io.outer).push_back(blks[i]);
    }
    return io;
}

/// Core: union of the inner blocks.
inline EdgeSet core(const SignedGraph& g) {
    EdgeSet out;
    for (const auto& blk : inner_outer_blocks(g).inner)
        out.insert(blk.begin(), blk.end());
    return out;
}

/// All v with Sigma \ v balanced.
inline std::set<std::string> balancing_vertices(const SignedGraph& g) {
    std::set<std::string> out;
    for (const auto& v : g.vertices())
        if (is_balanced(delete_vertex(g, v)).balanced) out.insert(v);
    return out;
}

// ---------------------------------------------------------------------------
// cycles

/// A cycle as its edge-id set plus the traversed vertices. Joints and
/// negative loops are one-edge cycles; positive loops are too.
struct Cycle {
    EdgeSet edges;
    std::set<std::string> vertices;
    int sign = +1;
};

/// Enumerate all cycles of the underlying graph: single-edge cycles (loops,
/// half-edges) and simple link cycles (digons included). Loose edges are not
/// cycles here. Desk scale.
inline std::vector<Cycle> enumerate_cycles(const SignedGraph& g) {
    std::vector<Cycle> out;
    for (const auto& e : g.edges())
        if (e.kind == EdgeKind::Loop || e.kind == EdgeKind::HalfEdge)
            out.push_back({{e.id}, {e.u}, e.kind == EdgeKind::HalfEdge ? -1 : e.sign});
    const auto& vs = g.vertices();
    auto adj = detail::link_adjacency(g);
    // Anchored DFS: cycles are rooted at their smallest vertex, and to avoid
    // direction duplicates the second vertex must be smaller than the last.
    std::size_t n = vs.size();
    for (std::size_t root = 0; root < n; ++root) {
        const std::string& r = vs[root];
        std::vector<std::pair<std::string, std::size_t>> path;  // (vertex, via-edge)
        std::set<std::string> onpath{r};
        std::set<std::size_t> used;
        std::function<void(const std::string&)> dfs = [&](const std::string& u) {
            for (std::size_t pos : adj.at(u)) {
                if (used.count(pos)) continue;
                const Edge& e = g.edges()[pos];
                if (e.u == e.v) continue;
                std::string w = (e.u == u) ? e.v : e.u;
                if (w < r) continue;  // cycles anchored at smallest vertex
                if (w == r) {
                    if (path.empty()) continue;  // direct loop handled above
                    // Deduplicate orientation: first step edge id < closing edge id.
                    if (g.edges()[path.front().second].id < e.id) {
                        Cycle c;
                        c.vertices.insert(r);
                        int sgn = e.sign;
                        for (const auto& [pv, pe] : path) {
                            c.vertices.insert(pv);
                            c.edges.insert(g.edges()[pe].id);
                            sgn *= g.edges()[pe].sign;
                        }
                        c.edges.insert(e.id);
                        c.sign = sgn;
                        out.push_back(std::move(c));
                    }
                    continue;
                }
                if (onpath.count(w)) continue;
                path.emplace_back(w, pos);
                onpath.insert(w);
                used.insert(pos);
                dfs(w);
                used.erase(pos);
                onpath.erase(w);
                path.pop_back();
            }
        };
        dfs(r);
    }
    return out;
}

/// Two vertex-disjoint negative cycles exist (the structural nonbinarity test).
inline bool has_two_vertex_disjoint_negative_cycles(const SignedGraph& g) {
    auto cycles = enumerate_cycles(g);
    std::vector<const Cycle*> neg;
    for (const auto& c : cycles)
        if (c.sign < 0) neg.push_back(&c);
    for (std::size_t i = 0; i < neg.size(); ++i)
        for (std::size_t j = i + 1; j < neg.size(); ++j) {
            bool meet = false;
            for (const auto& v : neg[i]->vertices)
                if (neg[j]->vertices.count(v)) { meet = true; break; }
            if (!meet) return true;
        }
    return false;
}

// ---------------------------------------------------------------------------
// B-necklaces

/// Sigma is a B-necklace: 2-connected, unbalanced, and composed of >= 2
/// maximal balanced 2-connected pieces glued cyclically at single vertices.
/// Pieces are classes of the relation "lie on a common positive cycle".
inline bool is_b_necklace(const SignedGraph& g) {
    if (g.edge_count() < 2) return false;
    auto blks = blocks(g);
    if (blks.size() != 1) return false;  // need 2-connected
    if (is_balanced(g).balanced) return false;
    for (const auto& e : g.edges())
        if (e.kind != EdgeKind::Link) return false;  // joints/loops break the shape
    auto cycles = enumerate_cycles(g);
    // Union-find over edges via positive cycles.
    std::map<std::string, std::string> par;
    for (const auto& e : g.edges()) par[e.id] = e.id;
    std::function<std::string(std::string)> find = [&](std::string x) {
        while (par[x] != x) {
            par[x] = par[par[x]];
            x = par[x];
        }
        return x;
    };
    for (const auto& c : cycles) {
        if (c.sign < 0) continue;
        auto it = c.edges.begin();
        auto a = find(*it);
        for (++it; it != c.edges.end(); ++it) {
            auto b = find(*it);
            if (a != b) par[b] = a;
        }
    }
    std::map<std::string, EdgeSet> pieces;
    for (const auto& e : g.edges()) pieces[find(e.id)].insert(e.id);
    if (pieces.size() < 2) return false;
    // Each piece must be balanced, and consecutive pieces must share exactly
    // one vertex, the whole piece-graph forming a single cycle.
    std::vector<EdgeSet> ps;
    for (auto& [k, s] : pieces) ps.push_back(s);
    std::vector<std::set<std::string>> pverts;
    for (const auto& p : ps) {
        if (!is_balanced_subset(g, p)) return false;
        pverts.push_back(detail::block_vertices(g, p));
    }
    // Count shared vertices pairwise; necklace iff the sharing graph is a
    // single cycle with single shared vertices (for 2 pieces: two shared).
    std::size_t k = ps.size();
    std::vector<int> deg(k, 0);
    int shares = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            int common = 0;
            for (const auto& v : pverts[i])
                if (pverts[j].count(v)) ++common;
            if (k == 2) {
                if (common != 2) return false;
                return true;
            }
            if (common > 1) return false;
            if (common == 1) {
                ++deg[i];
                ++deg[j];
                ++shares;
            }
        }
    for (std::size_t i = 0; i < k; ++i)
        if (deg[i] != 2) return false;
    return shares == static_cast<int>(k);
}

/// The maximal balanced pieces of a B-necklace (positive-cycle classes).
inline std::vector<EdgeSet> b_necklace_pieces(const SignedGraph& g) {
    std::map<std::string, std::string> par;
    for (const auto& e : g.edges()) par[e.id] = e.id;
    std::function<std::string(std::string)> find = [&](std::string x) {
        while (par[x] != x) {
            par[x] = par[par[x]];
            x = par[x];
        }
        return x;
    };
    for (const auto& c : enumerate_cycles(g)) {
        if (c.sign < 0) continue;
        auto it = c.edges.begin();
        auto a = find(*it);
        for (++it; it != c.edges.end(); ++it) {
            auto b = find(*it);
            if (a != b) par[b] = a;
        }
    }
    std::map<std::string, EdgeSet> pieces;
    for (const auto& e : g.edges()) pieces[find(e.id)].insert(e.id);
    std::vector<EdgeSet> out;
    for (auto& [k, s] : pieces) out.push_back(std::move(s));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// expansion and twisting

/// Expansion at v: split v into v1 = v and v2 = new_vertex, add a positive
/// link between them, and distribute v's edge-ends per `assignment`
/// (edge id -> 0,1,2: end stays at v / moves to the new vertex / both, for
/// loops split across). Must preserve 2-connectivity.
inline SignedGraph expansion(const SignedGraph& g, const std::string& v,
                             const std::string& new_vertex,
                             const std::string& new_edge_id,
                             const std::map<std::string, int>& assignment) {
    if (!g.has_vertex(v)) throw invalid_argument("unknown vertex: " + v);
    if (g.has_vertex(new_vertex)) throw invalid_argument("vertex exists: " + new_vertex);
    if (g.has_edge(new_edge_id)) throw invalid_argument("edge exists: " + new_edge_id);
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        Edge h = e;
        if (g.incident(e, v)) {
            auto it = assignment.find(e.id);
            if (it == assignment.end())
                throw invalid_argument("expansion: no assignment for edge " + e.id);
            int a = it->second;
            if (e.kind == EdgeKind::Link) {
                if (a == 1) {
                    if (h.u == v) h.u = new_vertex;
                    if (h.v == v) h.v = new_vertex;
                }
            } else if (e.kind == EdgeKind::Loop) {
                if (a == 1) h.u = new_vertex;
                else if (a == 2) {  // loop splits into a link across the cut
                    h.kind = EdgeKind::Link;
                    h.u = v;
                    h.v = new_vertex;
                }
            } else if (e.kind == EdgeKind::HalfEdge) {
                if (a == 1) h.u = new_vertex;
            }
        }
        edges.push_back(h);
    }
    Edge ne;
    ne.id = new_edge_id;
    ne.kind = EdgeKind::Link;
    ne.u = v;
    ne.v = new_vertex;
    ne.sign = +1;
    edges.push_back(ne);
    auto vs = g.vertices();
    vs.push_back(new_vertex);
    SignedGraph out(std::move(vs), std::move(edges));
    if (blocks(out).size() != blocks(g).size())
        throw invalid_argument("expansion: assignment breaks 2-connectivity");
    return out;
}

/// Twist about {u,v}: re-identify the given part's attachments crosswise.
/// `part` must be one side of a 2-separation with attachment vertices u,v.
inline SignedGraph twist(const SignedGraph& g, const std::string& u,
                         const std::string& v, const EdgeSet& part) {
    if (!g.has_vertex(u) || !g.has_vertex(v))
        throw invalid_argument("twist: unknown vertex");
    EdgeSet rest;
    for (const auto& e : g.edges())
        if (!part.count(e.id)) rest.insert(e.id);
    for (const auto& id : part) (void)g.edge(id);
    auto pv = detail::block_vertices(g, part);
    auto rv = detail::block_vertices(g, rest);
    std::set<std::string> shared;
    for (const auto& x : pv)
        if (rv.count(x)) shared.insert(x);
    if (shared != std::set<std::string>{u, v})
        throw invalid_argument("twist: part does not meet the rest exactly in {u,v}");
    // Swap the u/v attachments of the part's edges.
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        Edge h = e;
        if (part.count(e.id)) {
            auto swap_end = [&](std::string& x) {
                if (x == u) x = v;
                else if (x == v) x = u;
            };
            if (h.kind == EdgeKind::Link) {
                swap_end(h.u);
                swap_end(h.v);
            } else if (h.kind != EdgeKind::LooseEdge) {
                swap_end(h.u);
            }
        }
        edges.push_back(h);
    }
    return SignedGraph(g.vertices(), std::move(edges));
}

// ---------------------------------------------------------------------------
// biseparations

struct Biseparation {
    EdgeSet part_a, part_b;
    int k = 0;
    /// Which of the three shared-vertex/balance patterns holds:
    /// k+1 shared & both balanced / k shared & one balanced / k-1 & none.
    int pattern = 0;
    bool vertical = false;
    bool connected_parts = false;
};

namespace detail {

inline std::optional<Biseparation> classify_bipartition(const SignedGraph& g,
                                                        const EdgeSet& A,
                                                        const EdgeSet& B, int k) {
    if (static_cast<int>(std::min(A.size(), B.size())) < k) return std::nullopt;
    auto va = block_vertices(g, A);
    auto vb = block_vertices(g, B);
    int shared = 0;
    for (const auto& x : va)
        if (vb.count(x)) ++shared;
    bool ba = is_balanced_subset(g, A);
    bool bb = is_balanced_subset(g, B);
    Biseparation out;
    out.part_a = A;
    out.part_b = B;
    out.k = k;
    if (shared == k + 1 && ba && bb) out.pattern = 1;
    else if (shared == k && (ba != bb)) out.pattern = 2;
    else if (shared == k - 1 && !ba && !bb) out.pattern = 3;
    else return std::nullopt;
    bool asub = !va.empty() && std::all_of(va.begin(), va.end(),
                                           [&](const std::string& x) { return vb.count(x) > 0; });
    bool bsub = !vb.empty() && std::all_of(vb.begin(), vb.end(),
                                           [&](const std::string& x) { return va.count(x) > 0; });
    out.vertical = !asub && !bsub;
    out.connected_parts = is_connected(restrict_to(g, A)) && is_connected(restrict_to(g, B));
    return out;
}

}  // namespace detail

/// All k-biseparations, by exhaustive bipartition scan (guarded).
inline std::vector<Biseparation> k_biseparations(const SignedGraph& g, int k,
                                                 bool vertical_only = false) {
    if (!is_connected(g)) throw invalid_argument("k_biseparations: input must be connected");
    std::size_t n = g.edge_count();
    check_subset_guard(n, "k_biseparations");
    std::vector<std::string> ids;
    for (const auto& e : g.edges()) ids.push_back(e.id);
    std::vector<Biseparation> out;
    for (std::uint64_t m = 1; m + 1 < (1ull << n); ++m) {
        if (!(m & 1ull)) continue;  // fix element 0 in A: unordered pairs
        EdgeSet A, B;
        for (std::size_t i = 0; i < n; ++i)
            ((m >> i) & 1 ? A : B).insert(ids[i]);
        auto bs = detail::classify_bipartition(g, A, B, k);
        if (bs && (!vertical_only || bs->vertical)) out.push_back(*bs);
    }
    return out;
}

inline bool is_k_biconnected(const SignedGraph& g, int k) {
    for (int l = 0; l < k; ++l)
        if (!k_biseparations(g, l).empty()) return false;
    return true;
}

}  // namespace signet
