#pragma once

#include "tk_model.hpp"

namespace fopk {

// Finite {U,<}-structure: elements 0..n-1 in numeric order, U a subset.
struct BaseStructure {
    int n = 0;
    std::vector<int> u;
    bool operator==(const BaseStructure& o) const { return n == o.n && u == o.u; }
};

struct BlowupSpec {
    BaseStructure base;
    std::vector<int> part_sizes;                // |P_1|..|P_k|
    std::vector<std::pair<Tuple, int>> f;       // Q-tuple (model ids) -> U element
    bool operator==(const BlowupSpec& o) const { return base == o.base && part_sizes == o.part_sizes && f == o.f; }
};

inline void check_base(const BaseStructure& B) {
    if (B.n < 0) throw ParseError("base: negative size");
    for (size_t i = 0; i < B.u.size(); ++i) {
        if (B.u[i] < 0 || B.u[i] >= B.n) throw ParseError("base: U element out of range");
        if (i && B.u[i - 1] >= B.u[i]) throw ParseError("base: U must be strictly increasing");
    }
}

inline TkModel blow_up(const BlowupSpec& S) {
    check_base(S.base);
    const int k = static_cast<int>(S.part_sizes.size());
    if (k < 1) throw ParseError("blowup: need at least one part");
    TkModel M;
    M.k = k;
    M.part_sizes = S.part_sizes;
    std::vector<char> in_u(S.base.n, 0);
    for (int x : S.base.u) in_u[x] = 1;
    M.part_sizes.push_back(S.base.n - static_cast<int>(S.base.u.size()));
    for (int s : M.part_sizes)
        if (s < 0) throw ParseError("blowup: negative part size");
    if (static_cast<size_t>(M.q_count()) != S.base.u.size())
        throw DomainError("blowup: product of part sizes (" + std::to_string(M.q_count()) + ") differs from |U| (" +
                          std::to_string(S.base.u.size()) + ")");
    auto qs = all_q_tuples(M);
    std::map<Tuple, int> f;
    std::set<int> used;
    for (const auto& [t, x] : S.f) {
        if (!std::binary_search(qs.begin(), qs.end(), t)) throw DomainError("blowup: " + tuple_str(t) + " is not in Q");
        if (x < 0 || x >= S.base.n || !in_u[x]) throw DomainError("blowup: image " + std::to_string(x) + " not in U");
        if (!f.emplace(t, x).second) throw DomainError("blowup: tuple mapped twice " + tuple_str(t));
        if (!used.insert(x).second) throw DomainError("blowup: f is not injective at " + std::to_string(x));
    }
    if (f.size() != qs.size()) throw DomainError("blowup: f is not total on Q");
    // P_{k+1} = base \ U, renumbered in base order
    std::vector<int> pt_id(S.base.n, -1);
    int next = M.offset(k);
    for (int x = 0; x < S.base.n; ++x)
        if (!in_u[x]) pt_id[x] = next++;
    std::vector<std::pair<int, Tuple>> by_image;
    for (auto& [t, x] : f) by_image.push_back({x, t});
    std::sort(by_image.begin(), by_image.end());
    for (auto& [x, t] : by_image) M.qorder.push_back(t);
    for (auto& [x, t] : by_image)
        for (int y = x + 1; y < S.base.n; ++y)
            if (!in_u[y]) M.r.push_back({t, pt_id[y]});
    M.normalize();
    return M;
}

inline BlowupSpec recover_base(const TkModel& M) {
    auto star = star_order(M);
    BlowupSpec S;
    S.base.n = static_cast<int>(star.size());
    S.part_sizes.assign(M.part_sizes.begin(), M.part_sizes.begin() + M.k);
    for (int i = 0; i < S.base.n; ++i)
        if (!star[i].is_point()) {
            S.base.u.push_back(i);
            S.f.push_back({star[i].tuple, i});
        }
    std::sort(S.f.begin(), S.f.end());
    return S;
}

struct AmalgamResult {
    TkModel C;
    std::vector<int> f1, f2;  // M -> C, N -> C
};

namespace detail {

// Merge two chains that share a common sub-chain.  `a_old[i]` (resp. b_old) is the shared
// index of a's i-th item or -1 if new.  Items are placed by the gap of shared items they
// fall in; inside one gap the a-side comes first.  Returns, per side, the merged position.
inline std::pair<std::vector<int>, std::vector<int>> merge_chains(const std::vector<int>& a_old, const std::vector<int>& b_old,
                                                                  int shared) {
    auto gaps = [](const std::vector<int>& old) {
        std::vector<int> g(old.size());
        int cur = 0;
        for (size_t i = 0; i < old.size(); ++i) {
            if (old[i] >= 0) {
                g[i] = 2 * old[i] + 1;
                cur = old[i] + 1;
            } else
                g[i] = 2 * cur;
        }
        return g;
    };
    auto ga = gaps(a_old), gb = gaps(b_old);
    // key: (gap, side, index within side); shared items use side 0 from a
    std::vector<std::tuple<int, int, int>> keys;
    for (size_t i = 0; i < a_old.size(); ++i) keys.emplace_back(ga[i], 0, static_cast<int>(i));
    for (size_t i = 0; i < b_old.size(); ++i)
        if (b_old[i] < 0) keys.emplace_back(gb[i], 1, static_cast<int>(i));
    std::sort(keys.begin(), keys.end());
    std::vector<int> pa(a_old.size()), pb(b_old.size());
    std::vector<int> shared_pos(shared, -1);
    for (size_t p = 0; p < keys.size(); ++p) {
        auto [g, side, i] = keys[p];
        if (side == 0) {
            pa[i] = static_cast<int>(p);
            if (a_old[i] >= 0) shared_pos[a_old[i]] = static_cast<int>(p);
        } else
            pb[i] = static_cast<int>(p);
    }
    for (size_t i = 0; i < b_old.size(); ++i)
        if (b_old[i] >= 0) pb[i] = shared_pos[b_old[i]];
    return {pa, pb};
}

}  // namespace detail

inline AmalgamResult amalgamate(const TkModel& D, const TkModel& M, const TkModel& N, const std::vector<int>& emb1,
                                const std::vector<int>& emb2) {
    require_valid(D, "D");
    require_valid(M, "M");
    require_valid(N, "N");
    if (D.k != M.k || D.k != N.k) throw DomainError("amalgamate: k differs");
    std::string why;
    if (!is_embedding(D, M, emb1, &why)) throw DomainError("amalgamate: emb1 is not an embedding: " + why);
    if (!is_embedding(D, N, emb2, &why)) throw DomainError("amalgamate: emb2 is not an embedding: " + why);
    const int k = D.k;
    std::vector<int> invM(M.size(), -1), invN(N.size(), -1);
    for (int d = 0; d < D.size(); ++d) {
        invM[emb1[d]] = d;
        invN[emb2[d]] = d;
    }

    AmalgamResult res;
    TkModel& C = res.C;
    C.k = k;
    C.part_sizes.assign(k + 1, 0);
    res.f1.assign(M.size(), -1);
    res.f2.assign(N.size(), -1);

    // parts P_1..P_k: merge the two orders over D
    std::vector<std::vector<int>> posM(k), posN(k);
    for (int i = 0; i < k; ++i) {
        std::vector<int> a_old, b_old;
        for (int j = 0; j < M.part_sizes[i]; ++j) {
            int d = invM[M.offset(i) + j];
            a_old.push_back(d < 0 ? -1 : d - D.offset(i));
        }
        for (int j = 0; j < N.part_sizes[i]; ++j) {
            int d = invN[N.offset(i) + j];
            b_old.push_back(d < 0 ? -1 : d - D.offset(i));
        }
        auto [pa, pb] = detail::merge_chains(a_old, b_old, D.part_sizes[i]);
        posM[i] = pa;
        posN[i] = pb;
        C.part_sizes[i] = M.part_sizes[i] + N.part_sizes[i] - D.part_sizes[i];
    }
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < M.part_sizes[i]; ++j) res.f1[M.offset(i) + j] = C.offset(i) + posM[i][j];
        for (int j = 0; j < N.part_sizes[i]; ++j) res.f2[N.offset(i) + j] = C.offset(i) + posN[i][j];
    }

    // base amalgam: merge the star orders over D's star order
    auto sD = star_order_unchecked(D), sM = star_order_unchecked(M), sN = star_order_unchecked(N);
    std::map<StarItem, int> idxD;
    for (size_t i = 0; i < sD.size(); ++i) idxD[sD[i]] = static_cast<int>(i);
    auto pull = [&](const StarItem& it, const std::vector<int>& inv) -> int {
        StarItem back;
        if (it.is_point()) {
            if (inv[it.point] < 0) return -1;
            back.point = inv[it.point];
        } else {
            for (int e : it.tuple) {
                if (inv[e] < 0) return -1;
                back.tuple.push_back(inv[e]);
            }
        }
        return idxD.at(back);
    };
    std::vector<int> a_old, b_old;
    for (auto& it : sM) a_old.push_back(pull(it, invM));
    for (auto& it : sN) b_old.push_back(pull(it, invN));
    auto [pa, pb] = detail::merge_chains(a_old, b_old, static_cast<int>(sD.size()));
    const int E = static_cast<int>(sM.size() + sN.size() - sD.size());
    std::vector<StarItem> merged(E);
    std::vector<char> is_pt(E, 0);
    for (size_t i = 0; i < sM.size(); ++i) is_pt[pa[i]] = sM[i].is_point();
    for (size_t i = 0; i < sN.size(); ++i) is_pt[pb[i]] = sN[i].is_point();
    int npts = static_cast<int>(std::count(is_pt.begin(), is_pt.end(), 1));
    C.part_sizes[k] = npts;
    const int top = C.offset(k);
    std::vector<int> pt_id(E, -1);
    for (int p = 0, next = top; p < E; ++p)
        if (is_pt[p]) pt_id[p] = next++;
    for (size_t i = 0; i < sM.size(); ++i) {
        if (sM[i].is_point())
            res.f1[sM[i].point] = pt_id[pa[i]];
    }
    for (size_t i = 0; i < sN.size(); ++i) {
        if (sN[i].is_point())
            res.f2[sN[i].point] = pt_id[pb[i]];
    }
    auto image = [](const Tuple& t, const std::vector<int>& f) {
        Tuple r;
        for (int e : t) r.push_back(f[e]);
        return r;
    };
    for (size_t i = 0; i < sM.size(); ++i)
        if (!sM[i].is_point()) merged[pa[i]].tuple = image(sM[i].tuple, res.f1);
    for (size_t i = 0; i < sN.size(); ++i)
        if (!sN[i].is_point()) merged[pb[i]].tuple = image(sN[i].tuple, res.f2);
    for (int p = 0; p < E; ++p)
        if (is_pt[p]) merged[p].point = pt_id[p];

    // tuples of C_1 x ... x C_k not coming from M or N get fresh U-points at the end
    std::set<Tuple> placed;
    for (auto& it : merged)
        if (!it.is_point()) placed.insert(it.tuple);
    for (auto& t : all_q_tuples(C))
        if (!placed.count(t)) merged.push_back({t, -1});

    res.C = from_star_order(k, C.part_sizes, merged);
    return res;
}

// Extends S to target sizes.  New elements of P_1..P_k go to seeded positions inside their
// part; new points are spread over the cuts of the old star order; new tuples are spread over
// the cuts between points (every cut gets one once there are enough new tuples).
struct ExtendResult {
    TkModel model;
    std::vector<int> map;  // old id -> new id
};

inline ExtendResult generic_extend(const TkModel& S, const std::vector<int>& target_sizes, uint64_t seed) {
    require_valid(S);
    const int k = S.k;
    if (static_cast<int>(target_sizes.size()) != k + 1) throw DomainError("generic_extend: target sizes need k+1 entries");
    for (int i = 0; i <= k; ++i)
        if (target_sizes[i] < S.part_sizes[i]) throw DomainError("generic_extend: target smaller than current size");
    Rng root(seed);
    ExtendResult res;
    res.map.assign(S.size(), -1);
    TkModel shape;
    shape.k = k;
    shape.part_sizes = target_sizes;

    // parts 1..k: choose which new positions the old elements occupy
    for (int i = 0; i < k; ++i) {
        Rng rng = root.split(static_cast<uint64_t>(i));
        int old = S.part_sizes[i], tot = target_sizes[i];
        std::vector<int> slots(tot);
        for (int j = 0; j < tot; ++j) slots[j] = j;
        rng.shuffle(slots);
        std::vector<int> keep(slots.begin(), slots.begin() + old);
        std::sort(keep.begin(), keep.end());
        for (int j = 0; j < old; ++j) res.map[S.offset(i) + j] = shape.offset(i) + keep[j];
    }

    // star order skeleton with new points
    auto star = star_order_unchecked(S);
    const int add_pts = target_sizes[k] - S.part_sizes[k];
    std::vector<int> before_slot;  // new point t goes before star[before_slot[t]] (== size for end)
    {
        const int L = static_cast<int>(star.size()) + 1;
        for (int t = 0; t < add_pts; ++t)
            before_slot.push_back(static_cast<int>((static_cast<int64_t>(2 * t + 1) * L) / (2 * add_pts)));
    }
    std::vector<StarItem> items;  // tuples renamed, points marked with placeholder ids
    std::vector<int> old_pt_seq;  // sequence of point placeholders: >=0 old point id, <0 new
    {
        size_t nt = 0;
        for (size_t pos = 0; pos <= star.size(); ++pos) {
            while (nt < before_slot.size() && before_slot[nt] == static_cast<int>(pos)) {
                items.push_back({{}, -2});
                ++nt;
            }
            if (pos == star.size()) break;
            StarItem it = star[pos];
            if (!it.is_point())
                for (int& e : it.tuple) e = res.map[e];
            items.push_back(it);
        }
    }
    // renumber points in their new order
    int next = shape.offset(k);
    for (auto& it : items)
        if (it.is_point() || it.point == -2) {
            if (it.point >= 0) res.map[it.point] = next;
            it.point = next++;
        }

    // new tuples into cuts between points
    std::set<Tuple> have;
    for (auto& it : items)
        if (!it.is_point()) have.insert(it.tuple);
    std::vector<Tuple> fresh;
    for (auto& t : all_q_tuples(shape))
        if (!have.count(t)) fresh.push_back(t);
    Rng rng = root.split(1000);
    rng.shuffle(fresh);
    const int m = target_sizes[k], T = static_cast<int>(fresh.size());
    const int cuts = m + 1;
    const int rot = static_cast<int>(rng.below(cuts));
    std::vector<std::vector<Tuple>> per_cut(cuts);
    for (int j = 0; j < T; ++j) {
        int c = T >= cuts ? (j + rot) % cuts : static_cast<int>((static_cast<int64_t>(2 * j + 1) * cuts) / (2 * T));
        per_cut[c].push_back(fresh[j]);
    }
    std::vector<StarItem> out;
    int cut = 0;
    auto flush = [&](int c, std::vector<StarItem>& gap) {
        // interleave fresh tuples at seeded positions among the old tuples of this gap
        for (auto& t : per_cut[c]) {
            size_t at = rng.below(gap.size() + 1);
            gap.insert(gap.begin() + static_cast<long>(at), StarItem{t, -1});
        }
        out.insert(out.end(), gap.begin(), gap.end());
    };
    std::vector<StarItem> gap;
    for (auto& it : items) {
        if (it.is_point()) {
            flush(cut, gap);
            gap.clear();
            out.push_back(it);
            ++cut;
        } else
            gap.push_back(it);
    }
    flush(cut, gap);
    res.model = from_star_order(k, target_sizes, out);
    return res;
}

}  // namespace fopk
