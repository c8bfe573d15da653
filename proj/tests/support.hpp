#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "fopk/bilinear.hpp"
#include "fopk/blowup.hpp"
#include "fopk/coding.hpp"
#include "fopk/ramsey.hpp"
#include "fopk/tk_model.hpp"
#include "fopk/transposition.hpp"

namespace testsupport {

using namespace fopk;

// All k=2 (or given k) part-size vectors with q+m <= bound, each P_i in 0..bound.
inline std::vector<std::vector<int>> sizes_upto(int k, int bound, bool allow_empty = true) {
    std::vector<std::vector<int>> out;
    for_each_product(k + 1, bound + 1, [&](const Tuple& s) {
        int q = 1;
        for (int i = 0; i < k; ++i) q *= s[i];
        if (q + s[k] > bound) return;
        if (!allow_empty && std::count(s.begin(), s.end(), 0)) return;
        // Q empty: only admit sizes with every P_i <= 1 among P_1..P_k to keep the list finite-ish
        if (q == 0) {
            for (int i = 0; i < k; ++i)
                if (s[i] > 1) return;
        }
        out.push_back(s);
    });
    return out;
}

// Interleavings of the Q-tuples (any order) with the points (numeric order), built without the library.
inline std::vector<TkModel> interleaving_models(int k, const std::vector<int>& sizes) {
    TkModel shape;
    shape.k = k;
    shape.part_sizes = sizes;
    std::vector<Tuple> qs;
    std::vector<int> radix(sizes.begin(), sizes.begin() + k);
    for_each_product(radix, [&](const Tuple& loc) {
        Tuple t(k);
        for (int i = 0; i < k; ++i) t[i] = shape.offset(i) + loc[i];
        qs.push_back(t);
    });
    const int q = static_cast<int>(qs.size()), m = sizes[k];
    std::vector<int> seq;
    for (int i = 0; i < q; ++i) seq.push_back(i);
    for (int j = 0; j < m; ++j) seq.push_back(q);  // point marker
    std::sort(seq.begin(), seq.end());
    std::vector<TkModel> out;
    do {
        TkModel M = shape;
        std::vector<int> before;  // tuples seen so far
        int pt = shape.offset(k);
        for (int x : seq) {
            if (x < q) {
                M.qorder.push_back(qs[x]);
                before.push_back(x);
            } else {
                for (int t : before) M.r.push_back({qs[t], pt});
                ++pt;
            }
        }
        M.normalize();
        out.push_back(M);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

// Axiom (5) checked literally over all quadruples.
inline bool monotone_literal(const TkModel& M) {
    std::map<Tuple, int> pos;
    for (size_t i = 0; i < M.qorder.size(); ++i) pos[M.qorder[i]] = static_cast<int>(i);
    std::set<std::pair<Tuple, int>> R(M.r.begin(), M.r.end());
    int lo = M.offset(M.k), hi = M.size();
    for (const auto& x : M.qorder)
        for (const auto& y : M.qorder)
            for (int w = lo; w < hi; ++w)
                for (int z = w; z < hi; ++z)
                    if (pos[x] <= pos[y] && R.count({y, w}) && !R.count({x, z})) return false;
    return true;
}

// R(a,c) & R(b,d) & !R(a,d) & !R(b,c)
inline bool has_forbidden_configuration(const TkModel& M) {
    std::set<std::pair<Tuple, int>> R(M.r.begin(), M.r.end());
    int lo = M.offset(M.k), hi = M.size();
    for (const auto& a : M.qorder)
        for (const auto& b : M.qorder)
            for (int c = lo; c < hi; ++c)
                for (int d = lo; d < hi; ++d)
                    if (R.count({a, c}) && R.count({b, d}) && !R.count({a, d}) && !R.count({b, c})) return true;
    return false;
}

// Induced substructure on `keep` (sorted global ids), renumbered order-preservingly.
inline TkModel restrict_model(const TkModel& M, const std::vector<int>& keep, std::vector<int>* old_to_new = nullptr) {
    std::vector<int> nid(M.size(), -1);
    TkModel D;
    D.k = M.k;
    D.part_sizes.assign(M.k + 1, 0);
    int c = 0;
    for (int e : keep) {
        nid[e] = c++;
        ++D.part_sizes[M.block_of(e)];
    }
    auto map_t = [&](const Tuple& t, Tuple& out) {
        out.clear();
        for (int e : t) {
            if (nid[e] < 0) return false;
            out.push_back(nid[e]);
        }
        return true;
    };
    Tuple t2;
    for (const auto& t : M.qorder)
        if (map_t(t, t2)) D.qorder.push_back(t2);
    for (const auto& [t, w] : M.r)
        if (nid[w] >= 0 && map_t(t, t2)) D.r.push_back({t2, nid[w]});
    D.normalize();
    if (old_to_new) *old_to_new = nid;
    return D;
}

// ---- witnesses ----

// A random injective array of length len into [0, size).
inline std::vector<int> inj(Rng& rng, int len, int size) {
    std::vector<int> all(size);
    for (int i = 0; i < size; ++i) all[i] = i;
    rng.shuffle(all);
    all.resize(len);
    return all;
}

// Hypergraph making w valid: required edges present, forbidden absent, the rest random.
inline PartiteHypergraph realize(const Witness& w, const std::vector<int>& part_sizes, Rng& rng) {
    PartiteHypergraph E;
    E.k = w.k;
    E.part_sizes = part_sizes;
    std::map<Tuple, bool> need;
    detail::for_each_requirement(E, w, [&](const Tuple& e, bool req) { need[e] = req; });
    for_each_product(part_sizes, [&](const Tuple& e) {
        auto it = need.find(e);
        bool on = it != need.end() ? it->second : rng.below(2) == 1;
        if (on) E.edges.push_back(e);
    });
    check_hypergraph(E);
    return E;
}

struct Instance {
    Witness w;
    PartiteHypergraph E;
};

inline Instance random_instance(WFormat f, Rng& rng) {
    Witness w;
    w.format = f;
    int k = 1 + static_cast<int>(rng.below(2));
    int n = 1 + static_cast<int>(rng.below(2));
    if (f == WFormat::Grid && k == 1) n = 1 + static_cast<int>(rng.below(3));
    w.k = k;
    w.n = n;
    const int pad = static_cast<int>(rng.below(2));
    std::vector<int> sizes(k + 1, n + pad);
    auto tuples = grid_tuples(n, k);
    switch (f) {
        case WFormat::Grid: {
            int cnt = function_count(n, k - 1);
            sizes[0] = cnt + pad;
            w.a = inj(rng, cnt, sizes[0]);
            for (int t = 0; t < k; ++t) w.b.push_back(inj(rng, n, sizes[t + 1]));
            break;
        }
        case WFormat::Array: {
            int cnt = function_count(n, k);
            sizes[0] = n * cnt + pad;
            auto flat = inj(rng, n * cnt, sizes[0]);
            w.arr.assign(n, {});
            for (int j = 0; j < n; ++j) w.arr[j].assign(flat.begin() + j * cnt, flat.begin() + (j + 1) * cnt);
            for (int t = 0; t < k; ++t) w.b.push_back(inj(rng, n, sizes[t + 1]));
            break;
        }
        case WFormat::Order: {
            for (const auto& T : tuples) w.order.push_back(StarItem{T, -1});
            for (int j = 1; j <= n; ++j) w.order.push_back(StarItem{{}, j});
            rng.shuffle(w.order);
            // points must appear in increasing order: re-sort the point slots
            std::vector<size_t> slots;
            for (size_t i = 0; i < w.order.size(); ++i)
                if (w.order[i].is_point()) slots.push_back(i);
            for (size_t j = 0; j < slots.size(); ++j) w.order[slots[j]].point = static_cast<int>(j) + 1;
            for (int t = 0; t <= k; ++t) w.seq.push_back(inj(rng, n, sizes[t]));
            break;
        }
        case WFormat::Partition: {
            w.s = 1 + static_cast<int>(rng.below(3));
            sizes[k] = w.s + pad;
            for (size_t i = 0; i < tuples.size(); ++i) w.labels.push_back(1 + static_cast<int>(rng.below(w.s)));
            for (int t = 0; t < k; ++t) w.seq.push_back(inj(rng, n, sizes[t]));
            w.bpart = inj(rng, w.s, sizes[k]);
            break;
        }
        case WFormat::IpGrid: {
            int cells = ipow(n, k);
            if (cells > 4) {
                n = 1;
                w.n = 1;
                cells = 1;
                std::fill(sizes.begin(), sizes.end(), 1 + pad);
            }
            sizes[0] = (1 << cells) + pad;
            w.a = inj(rng, 1 << cells, sizes[0]);
            for (int t = 0; t < k; ++t) w.b.push_back(inj(rng, n, sizes[t + 1]));
            break;
        }
    }
    return {w, realize(w, sizes, rng)};
}

// ---- forms ----

inline FormSpace random_space(Rng& rng, int p, int dim, int arity, Symmetry sym) {
    FormSpace S;
    S.p = p;
    S.dim = dim;
    S.arity = arity;
    S.symmetry = sym;
    S.tensor.assign(FormSpace::ipow_sat(dim, arity), 0);
    if (arity == 2 && sym != Symmetry::None) {
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                int x = static_cast<int>(rng.below(p));
                if (sym == Symmetry::Alternating) {
                    if (i == j) continue;
                    S.tensor[i * dim + j] = x;
                    S.tensor[j * dim + i] = modp(-x, p);
                } else {
                    S.tensor[i * dim + j] = x;
                    S.tensor[j * dim + i] = x;
                }
            }
    } else {
        for (auto& x : S.tensor) x = static_cast<int>(rng.below(p));
    }
    return S;
}

inline FormSpace random_nondegenerate(Rng& rng, int p, int dim, Symmetry sym) {
    for (;;) {
        FormSpace S = random_space(rng, p, dim, 2, sym);
        if (non_degenerate(S)) return S;
    }
}

inline Vec random_vec(Rng& rng, int p, int dim) {
    Vec v(dim);
    for (auto& x : v) x = static_cast<int>(rng.below(p));
    return v;
}

inline std::vector<Vec> random_independent(Rng& rng, int p, int dim, int m) {
    for (;;) {
        std::vector<Vec> vs;
        for (int i = 0; i < m; ++i) vs.push_back(random_vec(rng, p, dim));
        if (rank_of(vs, p) == m) return vs;
    }
}

// every FnStructure in S_k with the given sizes (total f, numeric order)
inline std::vector<FnStructure> all_sk(int k, const std::vector<int>& sizes) {
    FnStructure shape;
    shape.k = k;
    shape.part_sizes = sizes;
    auto qs = detail::q_tuples_of(shape);
    std::vector<FnStructure> out;
    int m = sizes[k];
    if (m == 0 && !qs.empty()) return out;
    for_each_product(static_cast<int>(qs.size()), m, [&](const Tuple& vals) {
        FnStructure C = shape;
        for (size_t i = 0; i < qs.size(); ++i) C.f.push_back({qs[i], shape.offset(k) + vals[i]});
        C.normalize();
        out.push_back(C);
    });
    return out;
}

}  // namespace testsupport
