#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "signet/core.hpp"
#include "signet/frame_matroid.hpp"

namespace signet {

/// Rank-function-presented matroid, the independent ground truth. Tabulated
/// below the subset guard, callable above it.
class OracleMatroid {
  public:
    OracleMatroid() = default;

    static OracleMatroid tabulated(std::vector<std::string> ground,
                                   std::vector<std::uint8_t> table,
                                   bool validate_axioms = true) {
        OracleMatroid m;
        std::sort(ground.begin(), ground.end());
        m.ground_ = std::move(ground);
        if (table.size() != (1ull << m.ground_.size()))
            throw invalid_argument("tabulated: table size must be 2^n");
        m.table_ = std::move(table);
        if (validate_axioms) m.validate();
        return m;
    }

    static OracleMatroid from_rank(std::vector<std::string> ground,
                                   std::function<int(std::uint64_t)> rank) {
        std::sort(ground.begin(), ground.end());
        std::size_t n = ground.size();
        if (static_cast<int>(n) <= max_subset_bits()) {
            std::vector<std::uint8_t> table(1ull << n);
            for (std::uint64_t m = 0; m < table.size(); ++m)
                table[m] = static_cast<std::uint8_t>(rank(m));
            return tabulated(std::move(ground), std::move(table), false);
        }
        OracleMatroid m;
        m.ground_ = std::move(ground);
        m.fn_ = std::move(rank);
        return m;
    }

    static OracleMatroid from_frame(const FrameMatroid& f) {
        return from_rank(f.ground(), [f](std::uint64_t m) { return f.rank_mask(m); });
    }

    static OracleMatroid from_graph(const SignedGraph& g) {
        return from_frame(FrameMatroid(g));
    }

    /// Uniform matroid U_{r,n} on elements e1..en.
    static OracleMatroid uniform(int r, int n) {
        std::vector<std::string> ground;
        for (int i = 1; i <= n; ++i) ground.push_back("e" + std::to_string(i));
        return from_rank(std::move(ground), [r](std::uint64_t m) {
            return std::min(r, popcount64(m));
        });
    }

    const std::vector<std::string>& ground() const { return ground_; }
    std::size_t size() const { return ground_.size(); }
    std::uint64_t full_mask() const {
        return ground_.size() >= 64 ? ~0ull : (1ull << ground_.size()) - 1;
    }
    bool tabulated_storage() const { return !table_.empty(); }
    const std::vector<std::uint8_t>& table() const { return table_; }

    int rank_mask(std::uint64_t m) const {
        if (!table_.empty()) return table_[m];
        return fn_(m);
    }
    int rank(const EdgeSet& s) const { return rank_mask(mask_of(s)); }
    int rank_all() const { return rank_mask(full_mask()); }

    std::size_t index_of(const std::string& id) const {
        auto it = std::lower_bound(ground_.begin(), ground_.end(), id);
        if (it == ground_.end() || *it != id)
            throw invalid_argument("unknown element: " + id);
        return static_cast<std::size_t>(it - ground_.begin());
    }
    std::uint64_t mask_of(const EdgeSet& s) const {
        std::uint64_t m = 0;
        for (const auto& id : s) m |= 1ull << index_of(id);
        return m;
    }
    EdgeSet set_of(std::uint64_t m) const {
        EdgeSet out;
        for (std::size_t i = 0; i < ground_.size(); ++i)
            if (m >> i & 1) out.insert(ground_[i]);
        return out;
    }

    Matroid matroid() const {
        Matroid m;
        m.ground = ground_;
        OracleMatroid self = *this;
        m.rank_mask = [self](std::uint64_t mask) { return self.rank_mask(mask); };
        return m;
    }

  private:
    void validate() const {
        if (table_[0] != 0) throw invalid_argument("rank axiom: r(empty) != 0");
        std::size_t n = ground_.size();
        for (std::uint64_t m = 0; m < table_.size(); ++m) {
            for (std::size_t i = 0; i < n; ++i) {
                if (m >> i & 1) continue;
                int d = table_[m | (1ull << i)] - table_[m];
                if (d < 0 || d > 1)
                    throw invalid_argument("rank axiom: unit increase violated");
            }
        }
        // Submodularity, spot-validated on random triples (X, Y, common base).
        std::mt19937_64 rng(7);
        std::uint64_t full = (1ull << n) - 1;
        for (int t = 0; t < 2000; ++t) {
            std::uint64_t a = rng() & full, b = rng() & full;
            if (table_[a] + table_[b] < table_[a | b] + table_[a & b])
                throw invalid_argument("rank axiom: submodularity violated");
        }
    }

    std::vector<std::string> ground_;
    std::vector<std::uint8_t> table_;
    std::function<int(std::uint64_t)> fn_;
};

// ---------------------------------------------------------------------------
// duals and minors

inline OracleMatroid dual(const OracleMatroid& m) {
    std::uint64_t full = m.full_mask();
    int rE = m.rank_all();
    return OracleMatroid::from_rank(m.ground(), [m, full, rE](std::uint64_t s) {
        return popcount64(s) + m.rank_mask(full & ~s) - rE;
    });
}

inline OracleMatroid delete_elements(const OracleMatroid& m, const EdgeSet& X) {
    std::uint64_t xm = m.mask_of(X);
    std::vector<std::string> ground;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!(xm >> i & 1)) {
            ground.push_back(m.ground()[i]);
            keep.push_back(i);
        }
    return OracleMatroid::from_rank(ground, [m, keep](std::uint64_t s) {
        std::uint64_t big = 0;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (s >> j & 1) big |= 1ull << keep[j];
        return m.rank_mask(big);
    });
}

inline OracleMatroid contract_elements(const OracleMatroid& m, const EdgeSet& X) {
    std::uint64_t xm = m.mask_of(X);
    int rx = m.rank_mask(xm);
    std::vector<std::string> ground;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!(xm >> i & 1)) {
            ground.push_back(m.ground()[i]);
            keep.push_back(i);
        }
    return OracleMatroid::from_rank(ground, [m, keep, xm, rx](std::uint64_t s) {
        std::uint64_t big = xm;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (s >> j & 1) big |= 1ull << keep[j];
        return m.rank_mask(big) - rx;
    });
}

inline OracleMatroid restrict_to(const OracleMatroid& m, const EdgeSet& X) {
    EdgeSet co;
    for (const auto& id : m.ground())
        if (!X.count(id)) co.insert(id);
    for (const auto& id : X) (void)m.index_of(id);
    return delete_elements(m, co);
}

inline OracleMatroid contract_to(const OracleMatroid& m, const EdgeSet& X) {
    EdgeSet co;
    for (const auto& id : m.ground())
        if (!X.count(id)) co.insert(id);
    for (const auto& id : X) (void)m.index_of(id);
    return contract_elements(m, co);
}

// ---------------------------------------------------------------------------
// circuits / cocircuits / connectivity

inline Family circuits(const OracleMatroid& m) {
    Family out;
    for (auto mk : circuit_masks([&](std::uint64_t x) { return m.rank_mask(x); },
                                 m.full_mask(), static_cast<int>(m.size())))
        out.insert(m.set_of(mk));
    return out;
}

inline Family cocircuits(const OracleMatroid& m) {
    Family out;
    for (auto mk : cocircuit_masks([&](std::uint64_t x) { return m.rank_mask(x); },
                                   m.full_mask(), static_cast<int>(m.size())))
        out.insert(m.set_of(mk));
    return out;
}

struct Separation {
    EdgeSet part_a, part_b;
    int k = 0;
    bool exact = false;
    /// Only meaningful when a SignedGraph context is attached.
    std::optional<bool> connected_parts;
};

inline std::vector<Separation> k_separations(const OracleMatroid& m, int k,
                                             const SignedGraph* context = nullptr) {
    check_subset_guard(m.size(), "k_separations");
    std::uint64_t full = m.full_mask();
    int rE = m.rank_all();
    std::vector<Separation> out;
    for (std::uint64_t s = 1; s < full; ++s) {
        if (!(s & 1ull)) continue;  // unordered: element 0 stays in part A
        int a = popcount64(s), b = popcount64(full & ~s);
        if (std::min(a, b) < k) continue;
        int ra = m.rank_mask(s), rb = m.rank_mask(full & ~s);
        if (ra + rb <= rE + k - 1) {
            Separation sep;
            sep.part_a = m.set_of(s);
            sep.part_b = m.set_of(full & ~s);
            sep.k = k;
            sep.exact = (ra + rb == rE + k - 1);
            if (context) {
                sep.connected_parts = is_connected(restrict_to(*context, sep.part_a)) &&
                                      is_connected(restrict_to(*context, sep.part_b));
            }
            out.push_back(std::move(sep));
        }
    }
    return out;
}

inline bool has_k_separation(const OracleMatroid& m, int k) {
    check_subset_guard(m.size(), "has_k_separation");
    std::uint64_t full = m.full_mask();
    int rE = m.rank_all();
    for (std::uint64_t s = 1; s < full; ++s) {
        if (!(s & 1ull)) continue;
        int a = popcount64(s), b = popcount64(full & ~s);
        if (std::min(a, b) < k) continue;
        if (m.rank_mask(s) + m.rank_mask(full & ~s) <= rE + k - 1) return true;
    }
    return false;
}

/// lambda(M) = min k with a k-separation; -1 encodes infinity.
inline int connectivity(const OracleMatroid& m) {
    for (int k = 1; k <= static_cast<int>(m.size()) / 2; ++k)
        if (has_k_separation(m, k)) return k;
    return -1;
}

inline bool is_k_connected(const OracleMatroid& m, int k) {
    int lambda = connectivity(m);
    return lambda < 0 || k <= lambda;
}

/// 3-connected, and every exact 3-separation has a side of at most 3 elements.
inline bool is_internally_4_connected(const OracleMatroid& m) {
    if (!is_k_connected(m, 3)) return false;
    std::uint64_t full = m.full_mask();
    int rE = m.rank_all();
    for (std::uint64_t s = 1; s < full; ++s) {
        if (!(s & 1ull)) continue;
        int a = popcount64(s), b = popcount64(full & ~s);
        if (std::min(a, b) <= 3) continue;
        if (m.rank_mask(s) + m.rank_mask(full & ~s) == rE + 2) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// isomorphism

namespace detail {

inline std::vector<std::vector<int>> iso_signatures(const OracleMatroid& m,
                                                    const Family& circs) {
    // Per element: histogram of circuit sizes through it.
    std::map<std::string, std::vector<int>> sig;
    for (const auto& id : m.ground()) sig[id] = std::vector<int>(m.size() + 1, 0);
    for (const auto& c : circs)
        for (const auto& id : c) sig[id][c.size()]++;
    std::vector<std::vector<int>> out;
    for (const auto& id : m.ground()) out.push_back(sig[id]);
    return out;
}

}  // namespace detail

/// Ground-set bijection preserving the rank of every subset, by pruned
/// backtracking on circuit-size signatures.
inline bool are_isomorphic(const OracleMatroid& a, const OracleMatroid& b) {
    if (a.size() != b.size()) return false;
    if (a.rank_all() != b.rank_all()) return false;
    Family ca = circuits(a), cb = circuits(b);
    if (ca.size() != cb.size()) return false;
    std::map<std::size_t, int> ha, hb;
    for (const auto& c : ca) ha[c.size()]++;
    for (const auto& c : cb) hb[c.size()]++;
    if (ha != hb) return false;
    auto sa = detail::iso_signatures(a, ca);
    auto sb = detail::iso_signatures(b, cb);
    std::size_t n = a.size();
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    // Represent circuits as masks for fast checks.
    std::vector<std::uint64_t> camask, cbset;
    for (const auto& c : ca) camask.push_back(a.mask_of(c));
    Family cbfam = cb;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n) {
            // Full check: mapped circuits of a must be circuits of b.
            for (auto cm : camask) {
                EdgeSet mapped;
                for (std::size_t j = 0; j < n; ++j)
                    if (cm >> j & 1) mapped.insert(b.ground()[map[j]]);
                if (!cbfam.count(mapped)) return false;
            }
            return true;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || sa[i] != sb[j]) continue;
            map[i] = static_cast<int>(j);
            used[j] = true;
            // Partial pruning: ranks of mapped prefixes must agree.
            bool ok = true;
            if (i >= 1) {
                std::uint64_t am = 0, bm = 0;
                for (std::size_t t = 0; t <= i; ++t) {
                    am |= 1ull << t;
                    bm |= 1ull << map[t];
                }
                ok = a.rank_mask(am) == b.rank_mask(bm);
            }
            if (ok && rec(i + 1)) return true;
            used[j] = false;
            map[i] = -1;
        }
        return false;
    };
    return rec(0);
}

// ---------------------------------------------------------------------------
// binary / graphic recognition by excluded minors

namespace detail {

/// Does m have a minor isomorphic to target? Enumerates supports of the
/// target size and contraction subsets of the complement.
inline bool has_minor(const OracleMatroid& m, const OracleMatroid& target) {
    std::size_t n = m.size(), k = target.size();
    if (n < k) return false;
    int rt = target.rank_all();
    std::uint64_t full = m.full_mask();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> comb(k);
    std::function<bool(std::size_t, std::size_t)> pick = [&](std::size_t start,
                                                             std::size_t got) -> bool {
        if (got == k) {
            std::uint64_t sm = 0;
            for (auto i : comb) sm |= 1ull << i;
            std::uint64_t rest = full & ~sm;
            // Contraction sets: subsets of rest; z independent suffices.
            std::vector<int> rbits;
            for (std::size_t i = 0; i < n; ++i)
                if (rest >> i & 1) rbits.push_back(static_cast<int>(i));
            std::uint64_t rcount = 1ull << rbits.size();
            for (std::uint64_t zi = 0; zi < rcount; ++zi) {
                std::uint64_t z = 0;
                for (std::size_t t = 0; t < rbits.size(); ++t)
                    if (zi >> t & 1) z |= 1ull << rbits[t];
                int rz = m.rank_mask(z);
                if (rz != popcount64(z)) continue;  // closed under choosing independent z
                if (m.rank_mask(sm | z) - rz != rt) continue;
                // Minor on sm with contraction z: rank'(X) = r(X|z) - r(z).
                std::vector<std::string> ground;
                for (auto i : comb) ground.push_back(m.ground()[i]);
                std::vector<std::uint8_t> table(1ull << k);
                std::vector<int> cb(comb.begin(), comb.end());
                for (std::uint64_t x = 0; x < table.size(); ++x) {
                    std::uint64_t big = z;
                    for (std::size_t t = 0; t < k; ++t)
                        if (x >> t & 1) big |= 1ull << cb[t];
                    table[x] = static_cast<std::uint8_t>(m.rank_mask(big) - rz);
                }
                auto minor = OracleMatroid::tabulated(ground, std::move(table), false);
                if (are_isomorphic(minor, target)) return true;
            }
            return false;
        }
        for (std::size_t i = start; i + (k - got) <= n; ++i) {
            comb[got] = static_cast<int>(i);
            if (pick(i + 1, got + 1)) return true;
        }
        return false;
    };
    return pick(0, 0);
}

}  // namespace detail

// Named small matroids used as excluded minors.

inline OracleMatroid binary_matroid_from_columns(const std::vector<std::string>& ground,
                                                 const std::vector<unsigned>& cols) {
    // rank over GF(2) of the chosen columns
    return OracleMatroid::from_rank(ground, [cols](std::uint64_t s) {
        std::vector<unsigned> basis;
        int r = 0;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (!(s >> i & 1)) continue;
            unsigned v = cols[i];
            for (unsigned b : basis) v = std::min(v, v ^ b);
            if (v) {
                basis.push_back(v);
                ++r;
            }
        }
        return r;
    });
}

inline OracleMatroid fano() {
    std::vector<std::string> g{"f1", "f2", "f3", "f4", "f5", "f6", "f7"};
    // sorted: f1..f7; columns = nonzero GF(2)^3 vectors
    return binary_matroid_from_columns(g, {1, 2, 3, 4, 5, 6, 7});
}

inline OracleMatroid fano_dual() { return dual(fano()); }

inline OracleMatroid cycle_matroid_k5() {
    // K5 edges as pairs over GF(2)^5 incidence (rank 4)
    std::vector<std::string> g;
    std::vector<unsigned> cols;
    int names = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "k%02d", names++);
            g.push_back(buf);
            cols.push_back((1u << i) | (1u << j));
        }
    return binary_matroid_from_columns(g, cols);
}

inline OracleMatroid cycle_matroid_k33() {
    std::vector<std::string> g;
    std::vector<unsigned> cols;
    int names = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "k%02d", names++);
            g.push_back(buf);
            cols.push_back((1u << i) | (1u << (3 + j)));
        }
    return binary_matroid_from_columns(g, cols);
}

inline OracleMatroid dual_k5() { return dual(cycle_matroid_k5()); }
inline OracleMatroid dual_k33() { return dual(cycle_matroid_k33()); }

/// No U_{2,4} minor.
inline bool is_binary(const OracleMatroid& m) {
    if (m.size() > 16) check_subset_guard(m.size(), "is_binary");
    return !detail::has_minor(m, OracleMatroid::uniform(2, 4));
}

/// Binary with none of F7, F7*, M*(K5), M*(K33) as a minor.
inline bool is_graphic(const OracleMatroid& m) {
    if (m.size() > 14)
        throw guard_exceeded("is_graphic: minor search capped at 14 elements");
    if (!is_binary(m)) return false;
    if (detail::has_minor(m, fano())) return false;
    if (detail::has_minor(m, fano_dual())) return false;
    if (detail::has_minor(m, dual_k5())) return false;
    if (detail::has_minor(m, dual_k33())) return false;
    return true;
}

// ---------------------------------------------------------------------------
// 2-sums

/// M1 +2 M2 along z: parallel-connection rank with z deleted.
inline OracleMatroid two_sum(const OracleMatroid& m1, const OracleMatroid& m2,
                             const std::string& z) {
    std::size_t z1 = m1.index_of(z), z2 = m2.index_of(z);
    // z must not be a loop or coloop on either side.
    auto bad = [&](const OracleMatroid& m, std::size_t zi) {
        std::uint64_t zm = 1ull << zi;
        if (m.rank_mask(zm) == 0) return true;  // loop
        if (m.rank_mask(m.full_mask() & ~zm) < m.rank_all()) return true;  // coloop
        return false;
    };
    if (bad(m1, z1) || bad(m2, z2))
        throw invalid_argument("two_sum: z must not be a loop or coloop");
    std::vector<std::string> ground;
    for (const auto& id : m1.ground())
        if (id != z) ground.push_back(id);
    for (const auto& id : m2.ground()) {
        if (id == z) continue;
        if (std::find(ground.begin(), ground.end(), id) != ground.end())
            throw invalid_argument("two_sum: grounds must only share z");
        ground.push_back(id);
    }
    auto r = [m1, m2, z](std::uint64_t s, const std::vector<std::string>& g) {
        EdgeSet s1, s2;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(s >> i & 1)) continue;
            const std::string& id = g[i];
            bool in1 = std::find(m1.ground().begin(), m1.ground().end(), id) !=
                       m1.ground().end();
            (in1 ? s1 : s2).insert(id);
        }
        EdgeSet s1z = s1, s2z = s2;
        s1z.insert(z);
        s2z.insert(z);
        int a = m1.rank(s1z) + m2.rank(s2z) - 1;
        int b = m1.rank(s1) + m2.rank(s2);
        return std::min(a, b);
    };
    std::vector<std::string> gsorted = ground;
    std::sort(gsorted.begin(), gsorted.end());
    return OracleMatroid::from_rank(gsorted, [r, gsorted](std::uint64_t s) {
        return r(s, gsorted);
    });
}

}  // namespace signet
