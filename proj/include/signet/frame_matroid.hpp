#pragma once

#include <array>
#include <cassert>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "signet/core.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

/// A matroid presented over named elements with a rank callable on index
/// masks. Frame matroids and oracle matroids both export this view.
struct Matroid {
    std::vector<std::string> ground;  // sorted
    std::function<int(std::uint64_t)> rank_mask;

    std::size_t size() const { return ground.size(); }
    std::uint64_t full_mask() const {
        return ground.size() >= 64 ? ~0ull : (1ull << ground.size()) - 1;
    }
    std::size_t index_of(const std::string& id) const {
        auto it = std::lower_bound(ground.begin(), ground.end(), id);
        if (it == ground.end() || *it != id)
            throw invalid_argument("unknown element: " + id);
        return static_cast<std::size_t>(it - ground.begin());
    }
    std::uint64_t mask_of(const EdgeSet& s) const {
        std::uint64_t m = 0;
        for (const auto& id : s) m |= 1ull << index_of(id);
        return m;
    }
    EdgeSet set_of(std::uint64_t m) const {
        EdgeSet out;
        for (std::size_t i = 0; i < ground.size(); ++i)
            if (m >> i & 1) out.insert(ground[i]);
        return out;
    }
    int rank(const EdgeSet& s) const { return rank_mask(mask_of(s)); }
    int rank_all() const { return rank_mask(full_mask()); }
};

namespace detail {

/// Union-find with parity, fixed-size scratch; unbalance marks per root.
struct ParityUF {
    std::array<int, 64> par, rnk, off;
    std::array<bool, 64> unb, used;

    void reset() {
        used.fill(false);
    }
    void add(int v) {
        if (!used[v]) {
            used[v] = true;
            par[v] = v;
            rnk[v] = 0;
            off[v] = 0;
            unb[v] = false;
        }
    }
    std::pair<int, int> find(int v) {
        if (par[v] == v) return {v, 0};
        auto [r, p] = find(par[v]);
        par[v] = r;
        off[v] ^= p;
        return {r, off[v]};
    }
    void mark_unbalanced(int v) {
        add(v);
        unb[find(v).first] = true;
    }
    void join(int u, int v, bool neg) {
        add(u);
        add(v);
        auto [ru, pu] = find(u);
        auto [rv, pv] = find(v);
        if (ru == rv) {
            if ((pu ^ pv) != (neg ? 1 : 0)) unb[ru] = true;
            return;
        }
        if (rnk[ru] < rnk[rv]) {
            std::swap(ru, rv);
            std::swap(pu, pv);
        }
        par[rv] = ru;
        off[rv] = pu ^ pv ^ (neg ? 1 : 0);
        unb[ru] = unb[ru] || unb[rv];
        if (rnk[ru] == rnk[rv]) ++rnk[ru];
    }
};

}  // namespace detail

/// The frame matroid M(Sigma) of a signed graph: rank by the per-component
/// balanced/unbalanced formula, structural circuits and bonds.
class FrameMatroid {
  public:
    explicit FrameMatroid(SignedGraph g) : g_(std::move(g)) {
        if (g_.vertex_count() > 60 || g_.edge_count() > 60)
            throw invalid_argument("FrameMatroid: graph too large for mask machinery");
        for (const auto& e : g_.edges()) ids_.push_back(e.id);
        // ids_ is sorted because SignedGraph sorts edges by id.
        for (const auto& e : g_.edges()) {
            EdgeRec r;
            r.kind = e.kind;
            r.sign = e.sign;
            r.u = vertex_idx(e.u);
            r.v = e.kind == EdgeKind::Link ? vertex_idx(e.v) : -1;
            recs_.push_back(r);
        }
    }

    const SignedGraph& graph() const { return g_; }
    const std::vector<std::string>& ground() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    std::uint64_t full_mask() const { return ids_.size() >= 64 ? ~0ull : (1ull << ids_.size()) - 1; }

    int rank_mask(std::uint64_t mask) const {
        detail::ParityUF uf;
        uf.reset();
        for (std::size_t i = 0; i < recs_.size(); ++i) {
            if (!(mask >> i & 1)) continue;
            const EdgeRec& r = recs_[i];
            switch (r.kind) {
                case EdgeKind::LooseEdge: break;
                case EdgeKind::HalfEdge: uf.mark_unbalanced(r.u); break;
                case EdgeKind::Loop:
                    uf.add(r.u);
                    if (r.sign < 0) uf.mark_unbalanced(r.u);
                    break;
                case EdgeKind::Link: uf.join(r.u, r.v, r.sign < 0); break;
            }
        }
        int rank = 0, nverts = 0, comps = 0;
        for (int v = 0; v < static_cast<int>(vmap_.size()); ++v) {
            if (!uf.used[v]) continue;
            ++nverts;
            auto [root, par] = uf.find(v);
            (void)par;
            if (root == v) {
                ++comps;
                if (uf.unb[v]) ++rank;
            }
        }
        return rank + nverts - comps;
    }

    int rank(const EdgeSet& s) const { return rank_mask(mask_of(s)); }
    int rank_all() const { return rank_mask(full_mask()); }

    std::uint64_t mask_of(const EdgeSet& s) const {
        std::uint64_t m = 0;
        for (const auto& id : s) m |= 1ull << index_of(id);
        return m;
    }
    EdgeSet set_of(std::uint64_t m) const {
        EdgeSet out;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (m >> i & 1) out.insert(ids_[i]);
        return out;
    }
    std::size_t index_of(const std::string& id) const {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it == ids_.end() || *it != id) throw invalid_argument("unknown edge: " + id);
        return static_cast<std::size_t>(it - ids_.begin());
    }

    Matroid matroid() const {
        Matroid m;
        m.ground = ids_;
        FrameMatroid self = *this;
        m.rank_mask = [self](std::uint64_t mask) { return self.rank_mask(mask); };
        return m;
    }

  private:
    int vertex_idx(const std::string& v) {
        auto it = vmap_idx_.find(v);
        if (it != vmap_idx_.end()) return it->second;
        int idx = static_cast<int>(vmap_.size());
        vmap_.push_back(v);
        vmap_idx_[v] = idx;
        return idx;
    }

    struct EdgeRec {
        EdgeKind kind;
        int sign;
        int u, v;
    };

    SignedGraph g_;
    std::vector<std::string> ids_;
    std::vector<EdgeRec> recs_;
    std::vector<std::string> vmap_;
    std::map<std::string, int> vmap_idx_;
};

// ---------------------------------------------------------------------------
// circuits

enum class CircuitShape { PositiveCycle, TightHandcuff, LooseHandcuff, LooseEdge };

struct Circuit {
    EdgeSet edges;
    CircuitShape shape = CircuitShape::PositiveCycle;
};

inline const char* to_string(CircuitShape s) {
    switch (s) {
        case CircuitShape::PositiveCycle: return "positive-cycle";
        case CircuitShape::TightHandcuff: return "tight-handcuff";
        case CircuitShape::LooseHandcuff: return "loose-handcuff";
        case CircuitShape::LooseEdge: return "loose-edge";
    }
    return "?";
}

namespace detail {

/// All simple paths between two disjoint vertex sets, internally avoiding
/// both; returned as edge sets. Link edges only.
inline std::vector<EdgeSet> connecting_paths(const SignedGraph& g,
                                             const std::set<std::string>& A,
                                             const std::set<std::string>& B) {
    std::vector<EdgeSet> out;
    auto adj = link_adjacency(g);
    std::vector<std::size_t> path;
    std::set<std::string> visited;
    std::function<void(const std::string&)> dfs = [&](const std::string& u) {
        for (std::size_t pos : adj.at(u)) {
            const Edge& e = g.edges()[pos];
            if (e.u == e.v) continue;
            std::string w = (e.u == u) ? e.v : e.u;
            if (B.count(w)) {
                EdgeSet p;
                for (auto q : path) p.insert(g.edges()[q].id);
                p.insert(e.id);
                out.push_back(std::move(p));
                continue;
            }
            if (A.count(w) || visited.count(w)) continue;
            visited.insert(w);
            path.push_back(pos);
            dfs(w);
            path.pop_back();
            visited.erase(w);
        }
    };
    for (const auto& a : A) {
        visited = A;
        dfs(a);
    }
    // Paths may be found twice from different A-starts when |A|>1; dedupe.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Structural circuits of M(Sigma): positive cycles, tight handcuffs, loose
/// handcuffs, and single loose edges.
inline std::vector<Circuit> circuits(const FrameMatroid& m) {
    const SignedGraph& g = m.graph();
    std::vector<Circuit> out;
    for (const auto& e : g.edges())
        if (e.kind == EdgeKind::LooseEdge)
            out.push_back({{e.id}, CircuitShape::LooseEdge});
    auto cycles = enumerate_cycles(g);
    std::vector<const Cycle*> neg;
    for (const auto& c : cycles) {
        if (c.sign > 0) out.push_back({c.edges, CircuitShape::PositiveCycle});
        else neg.push_back(&c);
    }
    for (std::size_t i = 0; i < neg.size(); ++i)
        for (std::size_t j = i + 1; j < neg.size(); ++j) {
            std::vector<std::string> common;
            for (const auto& v : neg[i]->vertices)
                if (neg[j]->vertices.count(v)) common.push_back(v);
            bool edge_disjoint = true;
            for (const auto& id : neg[i]->edges)
                if (neg[j]->edges.count(id)) { edge_disjoint = false; break; }
            if (!edge_disjoint) continue;
            if (common.size() == 1) {
                EdgeSet e = neg[i]->edges;
                e.insert(neg[j]->edges.begin(), neg[j]->edges.end());
                out.push_back({std::move(e), CircuitShape::TightHandcuff});
            } else if (common.empty()) {
                for (auto& p : detail::connecting_paths(g, neg[i]->vertices, neg[j]->vertices)) {
                    EdgeSet e = neg[i]->edges;
                    e.insert(neg[j]->edges.begin(), neg[j]->edges.end());
                    e.insert(p.begin(), p.end());
                    out.push_back({std::move(e), CircuitShape::LooseHandcuff});
                }
            }
        }
    std::sort(out.begin(), out.end(),
              [](const Circuit& a, const Circuit& b) { return a.edges < b.edges; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Circuit& a, const Circuit& b) { return a.edges == b.edges; }),
              out.end());
    return out;
}

inline Family circuit_family(const FrameMatroid& m) {
    Family f;
    for (const auto& c : circuits(m)) f.insert(c.edges);
    return f;
}

// ---------------------------------------------------------------------------
// generic cocircuit scan (used by bonds and by the oracle module)

/// Minimal X with rank(ground - X) < rank(ground), ascending by size.
inline std::vector<std::uint64_t> cocircuit_masks(
    const std::function<int(std::uint64_t)>& rank, std::uint64_t ground, int nbits) {
    check_subset_guard(popcount64(ground), "cocircuit enumeration");
    int rE = rank(ground);
    std::vector<int> bits;
    for (int i = 0; i < nbits; ++i)
        if (ground >> i & 1) bits.push_back(i);
    std::vector<std::uint64_t> found;
    int nb = static_cast<int>(bits.size());
    // Size-ascending scan over subsets of `ground` with superset pruning.
    std::vector<int> idx;
    std::function<void(int, int, std::uint64_t)> rec = [&](int start, int want,
                                                           std::uint64_t cur) {
        if (want == 0) {
            for (auto f : found)
                if ((cur & f) == f) return;
            if (rank(ground & ~cur) < rE) found.push_back(cur);
            return;
        }
        for (int i = start; i <= nb - want; ++i) rec(i + 1, want - 1, cur | (1ull << bits[i]));
    };
    for (int size = 1; size <= nb; ++size) rec(0, size, 0);
    return found;
}

/// Minimal dependent subsets of `ground` (circuits), ascending by size.
inline std::vector<std::uint64_t> circuit_masks(
    const std::function<int(std::uint64_t)>& rank, std::uint64_t ground, int nbits) {
    check_subset_guard(popcount64(ground), "circuit enumeration");
    std::vector<int> bits;
    for (int i = 0; i < nbits; ++i)
        if (ground >> i & 1) bits.push_back(i);
    std::vector<std::uint64_t> found;
    int nb = static_cast<int>(bits.size());
    std::function<void(int, int, std::uint64_t)> rec = [&](int start, int want,
                                                           std::uint64_t cur) {
        if (want == 0) {
            for (auto f : found)
                if ((cur & f) == f) return;
            if (rank(cur) < popcount64(cur)) found.push_back(cur);
            return;
        }
        for (int i = start; i <= nb - want; ++i) rec(i + 1, want - 1, cur | (1ull << bits[i]));
    };
    for (int size = 1; size <= nb; ++size) rec(0, size, 0);
    return found;
}

// ---------------------------------------------------------------------------
// bonds

enum class BondClass { Balancing, Star, Unbalancing, Double };

inline const char* to_string(BondClass c) {
    switch (c) {
        case BondClass::Balancing: return "balancing";
        case BondClass::Star: return "star";
        case BondClass::Unbalancing: return "unbalancing";
        case BondClass::Double: return "double";
    }
    return "?";
}

struct Bond {
    EdgeSet edges;
    BondClass klass = BondClass::Balancing;
    EdgeSet unbalancing_part;
    EdgeSet balancing_part;
    bool separating = false;
};

/// Is Y a bond: deleting it increases the number of balanced components and
/// no proper subset does.
inline bool is_bond(const SignedGraph& g, const EdgeSet& Y) {
    if (Y.empty()) return false;
    for (const auto& id : Y) (void)g.edge(id);
    int base = balanced_component_count(g);
    if (balanced_component_count(delete_edges(g, Y)) <= base) return false;
    for (const auto& y : Y) {
        EdgeSet sub = Y;
        sub.erase(y);
        if (balanced_component_count(delete_edges(g, sub)) > base) return false;
    }
    return true;
}

namespace detail {

/// Elementary separators of M via its circuit family plus singletons.
inline std::vector<EdgeSet> separators_from_circuits(const EdgeSet& ground,
                                                     const Family& circuits) {
    std::map<std::string, std::string> par;
    for (const auto& id : ground) par[id] = id;
    std::function<std::string(std::string)> find = [&](std::string x) {
        while (par[x] != x) {
            par[x] = par[par[x]];
            x = par[x];
        }
        return x;
    };
    for (const auto& c : circuits) {
        auto it = c.begin();
        auto a = find(*it);
        for (++it; it != c.end(); ++it) {
            auto b = find(*it);
            if (a != b) par[b] = a;
        }
    }
    std::map<std::string, EdgeSet> comp;
    for (const auto& id : ground) comp[find(id)].insert(id);
    std::vector<EdgeSet> out;
    for (auto& [k, s] : comp) out.push_back(std::move(s));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Classify a given cocircuit of M(Sigma); Sigma must be connected. Errors
/// carry a witness of the failed minimality or deletion condition.
inline Bond classify_bond(const FrameMatroid& m, const EdgeSet& Y) {
    const SignedGraph& g = m.graph();
    if (!is_connected(g))
        throw invalid_argument("classify_bond: Sigma must be connected");
    int base = balanced_component_count(g);
    SignedGraph del = delete_edges(g, Y);
    if (balanced_component_count(del) <= base)
        throw invalid_argument("classify_bond: deleting Y does not increase balanced components");
    for (const auto& y : Y) {
        EdgeSet sub = Y;
        sub.erase(y);
        if (balanced_component_count(delete_edges(g, sub)) > base)
            throw invalid_argument("classify_bond: Y not minimal, " + y + " is redundant");
    }
    Bond b;
    b.edges = Y;
    // Components of Sigma \ Y; exactly one is newly balanced.
    auto comps = components(del);
    std::vector<std::set<std::string>> balanced_comps;
    int comps_with_edges = 0;
    for (const auto& vs : comps) {
        std::vector<Edge> sub;
        for (const auto& e : del.edges())
            if (e.kind != EdgeKind::LooseEdge && vs.count(e.u)) sub.push_back(e);
        bool has_edges = !sub.empty();
        if (has_edges) ++comps_with_edges;
        if (is_balanced(SignedGraph({vs.begin(), vs.end()}, std::move(sub))).balanced)
            balanced_comps.push_back(vs);
    }
    if (comps.size() == 1) {
        b.klass = BondClass::Balancing;
        b.balancing_part = Y;
    } else {
        // The balanced component is unique for a bond of a connected
        // unbalanced graph; with several (balanced Sigma) this is a cut.
        if (is_balanced(g).balanced) {
            b.klass = BondClass::Balancing;
        } else {
            const auto& bal = balanced_comps.front();
            bool bal_has_edges = false;
            for (const auto& e : del.edges())
                if (e.kind != EdgeKind::LooseEdge && bal.count(e.u)) {
                    bal_has_edges = true;
                    break;
                }
            for (const auto& id : Y) {
                const Edge& e = g.edge(id);
                bool bu = e.kind != EdgeKind::LooseEdge && bal.count(e.u);
                bool bv = e.kind == EdgeKind::Link ? bal.count(e.v) > 0 : bu;
                if (bu && bv) b.balancing_part.insert(id);
                else b.unbalancing_part.insert(id);
            }
            if (!bal_has_edges) b.klass = BondClass::Star;
            else if (b.balancing_part.empty()) b.klass = BondClass::Unbalancing;
            else b.klass = BondClass::Double;
        }
    }
    // Separating flag: M(Sigma) \ Y disconnected.
    Family circ;
    FrameMatroid md(del);
    for (const auto& c : circuits(md)) circ.insert(c.edges);
    b.separating = detail::separators_from_circuits(del.edge_ids(), circ).size() > 1;
    return b;
}

/// All bonds of M(Sigma): cocircuit scan on the rank oracle, re-verified
/// structurally. Guarded by ground size.
inline std::vector<Bond> bonds(const FrameMatroid& m) {
    auto masks = cocircuit_masks([&](std::uint64_t x) { return m.rank_mask(x); },
                                 m.full_mask(), static_cast<int>(m.size()));
    std::vector<Bond> out;
    for (auto mk : masks) {
        EdgeSet Y = m.set_of(mk);
        if (!is_bond(m.graph(), Y))
            throw std::logic_error("bond enumeration: oracle/structural disagreement");
        out.push_back(classify_bond(m, Y));
    }
    std::sort(out.begin(), out.end(),
              [](const Bond& a, const Bond& b) { return a.edges < b.edges; });
    return out;
}

// ---------------------------------------------------------------------------
// separators

/// Elementary separators of M(Sigma): outer blocks plus the core, except that
/// a B-necklace core splits into its blocks. Sigma must be connected.
inline std::vector<EdgeSet> separators(const FrameMatroid& m) {
    const SignedGraph& g = m.graph();
    if (!is_connected(g)) throw invalid_argument("separators: Sigma must be connected");
    auto io = inner_outer_blocks(g);
    std::vector<EdgeSet> out = io.outer;
    EdgeSet core_edges;
    for (const auto& blk : io.inner) core_edges.insert(blk.begin(), blk.end());
    if (!core_edges.empty()) {
        SignedGraph core_graph = restrict_to(g, core_edges);
        if (is_b_necklace(core_graph)) {
            for (auto& piece : b_necklace_pieces(core_graph)) out.push_back(piece);
        } else {
            out.push_back(core_edges);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// double bond induces an unbalancing bond

/// For a double bond Y of a jointless connected unbalanced Sigma, construct
/// an unbalancing bond from the edges meeting a balancing-part edge, by the
/// constructive argument: take e = {v1,v2} in the balancing part and split
/// off the component side of a balanced piece.
inline Bond double_bond_induced_unbalancing(const FrameMatroid& m, const Bond& Y) {
    const SignedGraph& g = m.graph();
    if (!g.joints().empty())
        throw invalid_argument("double_bond_induced_unbalancing: Sigma must be jointless");
    if (!is_connected(g) || is_balanced(g).balanced)
        throw invalid_argument("double_bond_induced_unbalancing: Sigma must be connected and unbalanced");
    if (Y.klass != BondClass::Double)
        throw invalid_argument("double_bond_induced_unbalancing: Y is not a double bond");
    const Edge& e = g.edge(*Y.balancing_part.begin());
    std::set<std::string> pair{e.u, e.v};
    // H = all edges with exactly one end in {v1, v2}.
    EdgeSet H;
    for (const auto& f : g.edges()) {
        if (f.kind != EdgeKind::Link) continue;
        bool cu = pair.count(f.u) != 0, cv = pair.count(f.v) != 0;
        if (cu != cv) H.insert(f.id);
    }
    // H is a bond unless the far side splits with a balanced piece; then the
    // sub-cut toward one balanced component is the bond.
    if (is_bond(g, H)) return classify_bond(m, H);
    SignedGraph rest = delete_edges(g, H);
    for (const auto& vs : components(rest)) {
        if (vs.count(e.u) || vs.count(e.v)) continue;
        std::vector<Edge> sub;
        for (const auto& f : rest.edges())
            if (f.kind != EdgeKind::LooseEdge && vs.count(f.u)) sub.push_back(f);
        if (is_balanced(SignedGraph({vs.begin(), vs.end()}, std::move(sub))).balanced) {
            EdgeSet subcut;
            for (const auto& id : H) {
                const Edge& f = g.edge(id);
                if (vs.count(f.u) || vs.count(f.v)) subcut.insert(id);
            }
            if (is_bond(g, subcut)) return classify_bond(m, subcut);
        }
    }
    throw std::logic_error("double_bond_induced_unbalancing: construction failed");
}

}  // namespace signet
