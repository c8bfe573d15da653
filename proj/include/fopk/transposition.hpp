#pragma once

#include "tk_model.hpp"

namespace fopk {

enum class TranspositionKind { QP, QQ };

struct TranspositionTag {
    TranspositionKind kind;
    StarItem alpha;  // QP: the tuple; QQ: the tuple first in A1
    StarItem beta;
};

inline std::map<StarItem, int> star_positions(const std::vector<StarItem>& s) {
    std::map<StarItem, int> pos;
    for (size_t i = 0; i < s.size(); ++i) pos[s[i]] = static_cast<int>(i);
    return pos;
}

inline bool same_reduct(const TkModel& A, const TkModel& B) { return A.k == B.k && A.part_sizes == B.part_sizes; }

// map: total A -> C. True iff map is an L''-isomorphism onto its image and preserves the
// relative <_* order of every pair of Q(A) u P_{k+1}(A) items except {alpha, beta}.
inline bool is_deficient_iso(const TkModel& A, const TkModel& C, const std::vector<int>& map, const StarItem& alpha,
                             const StarItem& beta, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (A.k != C.k || static_cast<int>(map.size()) != A.size()) return fail("shape mismatch");
    for (int a = 0; a < A.size(); ++a) {
        if (map[a] < 0 || map[a] >= C.size()) return fail("image out of range");
        if (A.block_of(a) != C.block_of(map[a])) return fail("part not preserved at " + std::to_string(a));
        if (a > 0 && map[a - 1] >= map[a]) return fail("< not preserved at " + std::to_string(a));
    }
    auto sa = star_order_unchecked(A);
    auto pc = star_positions(star_order_unchecked(C));
    auto image = [&](const StarItem& it) {
        StarItem o = it;
        if (o.is_point())
            o.point = map[o.point];
        else
            for (int& e : o.tuple) e = map[e];
        return pc.at(o);
    };
    std::vector<int> img(sa.size());
    for (size_t i = 0; i < sa.size(); ++i) img[i] = image(sa[i]);
    for (size_t i = 0; i < sa.size(); ++i)
        for (size_t j = i + 1; j < sa.size(); ++j) {
            bool excluded = (sa[i] == alpha && sa[j] == beta) || (sa[i] == beta && sa[j] == alpha);
            if (!excluded && img[i] > img[j]) return fail("<_* reversed on " + item_str(sa[i]) + ", " + item_str(sa[j]));
        }
    return true;
}

inline std::optional<TranspositionTag> classify_transposition(const TkModel& A1, const TkModel& A2) {
    require_valid(A1, "A1");
    require_valid(A2, "A2");
    if (!same_reduct(A1, A2)) throw DomainError("transposition: L'' reducts differ");
    auto s1 = star_order_unchecked(A1), s2 = star_order_unchecked(A2);
    std::vector<size_t> diff;
    for (size_t i = 0; i < s1.size(); ++i)
        if (!(s1[i] == s2[i])) diff.push_back(i);
    if (diff.size() != 2 || diff[1] != diff[0] + 1) return std::nullopt;
    size_t i = diff[0];
    if (!(s1[i] == s2[i + 1] && s1[i + 1] == s2[i])) return std::nullopt;
    TranspositionTag tag;
    if (s1[i].is_point() || s1[i + 1].is_point()) {
        tag.kind = TranspositionKind::QP;
        tag.alpha = s1[i].is_point() ? s1[i + 1] : s1[i];
        tag.beta = s1[i].is_point() ? s1[i] : s1[i + 1];
    } else {
        tag.kind = TranspositionKind::QQ;
        tag.alpha = s1[i];
        tag.beta = s1[i + 1];
    }
    std::vector<int> id(A1.size());
    for (int x = 0; x < A1.size(); ++x) id[x] = x;
    std::string why;
    if (!is_deficient_iso(A1, A2, id, tag.alpha, tag.beta, &why))
        throw std::logic_error("transposition: identity is not deficient: " + why);
    return tag;
}

// Adjacent-swap sort of star_order(A) toward star_order(B); one model per swap.
inline std::vector<TkModel> transposition_path(const TkModel& A, const TkModel& B) {
    require_valid(A, "A");
    require_valid(B, "B");
    if (!same_reduct(A, B)) throw DomainError("transposition path: L'' reducts differ");
    auto cur = star_order_unchecked(A);
    auto target = star_positions(star_order_unchecked(B));
    std::vector<TkModel> path{A};
    path.back().normalize();
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (size_t i = 0; i + 1 < cur.size(); ++i)
            if (target.at(cur[i]) > target.at(cur[i + 1])) {
                std::swap(cur[i], cur[i + 1]);
                path.push_back(from_star_order(A.k, A.part_sizes, cur));
                swapped = true;
            }
    }
    return path;
}

inline uint64_t kendall_tau(const std::vector<StarItem>& a, const std::vector<StarItem>& b) {
    auto pb = star_positions(b);
    uint64_t d = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) d += pb.at(a[i]) > pb.at(a[j]);
    return d;
}

// ---------- products ----------

struct ProductResult {
    TkModel C;
    std::vector<int> from_a;  // A id -> C id, -1 for removed elements
    std::vector<int> from_b;  // B id -> C id
    int i_star = -1;          // QQ only, 0-based
    std::vector<std::pair<std::string, bool>> checks;
    bool all_checks() const {
        for (auto& [n, ok] : checks)
            if (!ok) return false;
        return true;
    }
};

namespace detail {

struct Source {
    int side;  // 0 = A, 1 = B
    int id;
};

inline bool adjacent_in_star(const TkModel& A, const StarItem& x, const StarItem& y) {
    auto pos = star_positions(star_order_unchecked(A));
    auto ix = pos.find(x), iy = pos.find(y);
    if (ix == pos.end() || iy == pos.end()) return false;
    return std::abs(ix->second - iy->second) == 1;
}

// Lay out parts from per-part source lists and return id maps.
inline void layout(const std::vector<std::vector<Source>>& parts, const TkModel& A, const TkModel& B, ProductResult& out) {
    out.C.k = A.k;
    out.C.part_sizes.clear();
    out.from_a.assign(A.size(), -1);
    out.from_b.assign(B.size(), -1);
    int id = 0;
    for (const auto& p : parts) {
        out.C.part_sizes.push_back(static_cast<int>(p.size()));
        for (const auto& s : p) (s.side == 0 ? out.from_a : out.from_b)[s.id] = id++;
    }
}

inline std::vector<Tuple> lex_sorted(std::vector<Tuple> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline bool check_partial_from_a(const TkModel& A, const ProductResult& P) {
    return is_partial_embedding(A, P.C, P.from_a);
}

}  // namespace detail

inline ProductResult product_qp(const TkModel& A, const Tuple& e, int v, const TkModel& B) {
    require_valid(A, "A");
    require_valid(B, "B");
    if (A.k != B.k) throw DomainError("product: k differs");
    const int k = A.k;
    StarItem ie{e, -1}, iv{{}, v};
    if (static_cast<int>(e.size()) != k || v < A.offset(k) || v >= A.size() || !detail::adjacent_in_star(A, ie, iv))
        throw DomainError("product_qp: (e,v) is not a <_*-adjacent pair of Q(A) x P_{k+1}(A)");

    std::vector<std::vector<detail::Source>> parts(k + 1);
    for (int i = 0; i <= k; ++i) {
        int ei = i < k ? e[i] : v;
        for (int a = A.offset(i); a < A.offset(i) + A.part_sizes[i]; ++a) {
            if (a == ei)
                for (int b = B.offset(i); b < B.offset(i) + B.part_sizes[i]; ++b) parts[i].push_back({1, b});
            else
                parts[i].push_back({0, a});
        }
    }
    ProductResult out;
    detail::layout(parts, A, B, out);
    TkModel& C = out.C;
    std::vector<int> to_a(C.size(), -1), to_b(C.size(), -1);
    for (int a = 0; a < A.size(); ++a)
        if (out.from_a[a] >= 0) to_a[out.from_a[a]] = a;
    for (int b = 0; b < B.size(); ++b) to_b[out.from_b[b]] = b;

    auto star = [&](const Tuple& c) {
        Tuple s(k);
        for (int i = 0; i < k; ++i) s[i] = to_a[c[i]] >= 0 ? to_a[c[i]] : e[i];
        return s;
    };
    std::map<Tuple, std::vector<Tuple>> X;
    for (const auto& c : all_q_tuples(C)) X[star(c)].push_back(c);
    for (const auto& a : A.qorder) {
        if (a == e) {
            for (const auto& s : B.qorder) {
                Tuple c(k);
                for (int i = 0; i < k; ++i) c[i] = out.from_b[s[i]];
                C.qorder.push_back(c);
            }
        } else {
            for (const auto& c : detail::lex_sorted(X[a])) C.qorder.push_back(c);
        }
    }
    ModelView VA(A), VB(B);
    for (const auto& c : C.qorder) {
        Tuple a = star(c);
        for (int w = C.offset(k); w < C.size(); ++w) {
            bool r;
            if (to_a[w] >= 0)
                r = VA.R(VA.qindex(a), to_a[w] - VA.off[k]);
            else if (a != e)
                r = VA.R(VA.qindex(a), v - VA.off[k]);
            else {
                Tuple s(k);
                for (int i = 0; i < k; ++i) s[i] = to_b[c[i]];
                r = VB.R(VB.qindex(s), to_b[w] - VB.off[k]);
            }
            if (r) C.r.push_back({c, w});
        }
    }
    C.normalize();

    // postconditions
    out.checks.push_back({"a", detail::check_partial_from_a(A, out)});
    out.checks.push_back({"b", is_embedding(B, C, out.from_b)});
    out.checks.push_back({"c", validate_tk(C).ok()});
    bool d = true;
    if (out.checks.back().second) {
        for (const auto& s : all_q_tuples(B))
            for (int t = B.offset(k); t < B.size() && d; ++t) {
                std::vector<int> f = out.from_a;
                for (int i = 0; i < k; ++i) f[e[i]] = out.from_b[s[i]];
                f[v] = out.from_b[t];
                d = is_deficient_iso(A, C, f, ie, iv);
            }
    } else {
        d = false;
    }
    out.checks.push_back({"d", d});
    return out;
}

inline ProductResult product_qq(const TkModel& A, const Tuple& d, const Tuple& e, const TkModel& B) {
    require_valid(A, "A");
    require_valid(B, "B");
    if (A.k != B.k) throw DomainError("product: k differs");
    const int k = A.k;
    ModelView VA(A), VB(B);
    StarItem id{d, -1}, ie{e, -1};
    auto in_q = [&](const Tuple& t) {
        if (static_cast<int>(t.size()) != k) return false;
        for (int i = 0; i < k; ++i)
            if (A.block_of(t[i]) != i) return false;
        return true;
    };
    if (!in_q(d) || !in_q(e) || d == e || !detail::adjacent_in_star(A, id, ie))
        throw DomainError("product_qq: (d,e) is not a <_*-adjacent pair of Q(A) x Q(A)");
    if (VA.rank[VA.qindex(d)] > VA.rank[VA.qindex(e)]) throw DomainError("product_qq: requires d <_k e");
    int is = 0;
    while (d[is] == e[is]) ++is;

    std::vector<std::vector<detail::Source>> parts(k + 1);
    for (int i = 0; i < k; ++i)
        for (int a = A.offset(i); a < A.offset(i) + A.part_sizes[i]; ++a) {
            if (a == d[i])
                for (int b = B.offset(i); b < B.offset(i) + B.part_sizes[i]; ++b) parts[i].push_back({1, b});
            else if (i == is && a == e[i])
                for (int b = B.offset(k); b < B.size(); ++b) parts[i].push_back({1, b});
            else
                parts[i].push_back({0, a});
        }
    for (int a = A.offset(k); a < A.size(); ++a) parts[k].push_back({0, a});
    ProductResult out;
    out.i_star = is;
    detail::layout(parts, A, B, out);
    TkModel& C = out.C;
    std::vector<int> to_a(C.size(), -1), to_b(C.size(), -1);
    for (int a = 0; a < A.size(); ++a)
        if (out.from_a[a] >= 0) to_a[out.from_a[a]] = a;
    for (int b = 0; b < B.size(); ++b) to_b[out.from_b[b]] = b;
    auto from_top_of_b = [&](int c) { return to_b[c] >= 0 && B.block_of(to_b[c]) == k; };

    auto star = [&](const Tuple& c) {
        Tuple s(k);
        for (int i = 0; i < k; ++i) {
            if (to_a[c[i]] >= 0)
                s[i] = to_a[c[i]];
            else
                s[i] = (i == is && from_top_of_b(c[is])) ? e[is] : d[i];
        }
        return s;
    };
    std::map<Tuple, std::vector<Tuple>> X;
    for (const auto& c : all_q_tuples(C)) X[star(c)].push_back(c);
    // X_t(e) for each t in P_{k+1}(B)
    std::map<int, std::vector<Tuple>> Xt;
    for (const auto& c : X[e]) Xt[to_b[c[is]]].push_back(c);
    for (const auto& a : A.qorder) {
        if (a == e) continue;
        if (a == d) {
            for (const auto& it : star_order_unchecked(B)) {
                if (it.is_point()) {
                    for (const auto& c : detail::lex_sorted(Xt[it.point])) C.qorder.push_back(c);
                } else {
                    Tuple c(k);
                    for (int i = 0; i < k; ++i) c[i] = out.from_b[it.tuple[i]];
                    C.qorder.push_back(c);
                }
            }
        } else {
            for (const auto& c : detail::lex_sorted(X[a])) C.qorder.push_back(c);
        }
    }
    for (const auto& c : C.qorder) {
        Tuple a = star(c);
        for (int w = C.offset(k); w < C.size(); ++w)
            if (VA.R(VA.qindex(a), to_a[w] - VA.off[k])) C.r.push_back({c, w});
    }
    C.normalize();

    out.checks.push_back({"a", detail::check_partial_from_a(A, out)});
    ModelView VC(C);
    // (b)(1): L^Q reduct of B via inclusion
    bool b1 = true;
    for (int x = 0; x < B.offset(k); ++x) {
        int c = out.from_b[x];
        if (C.block_of(c) != B.block_of(x) || (x > 0 && out.from_b[x - 1] >= c && B.block_of(x - 1) == B.block_of(x))) b1 = false;
    }
    auto to_c = [&](const Tuple& s) {
        Tuple c(k);
        for (int i = 0; i < k; ++i) c[i] = out.from_b[s[i]];
        return c;
    };
    for (size_t i = 1; i < B.qorder.size() && b1; ++i)
        if (VC.rank[VC.qindex(to_c(B.qorder[i - 1]))] > VC.rank[VC.qindex(to_c(B.qorder[i]))]) b1 = false;
    out.checks.push_back({"b1", b1});
    bool b2 = true;
    for (int t = B.offset(k); t < B.size(); ++t) {
        int c = out.from_b[t];
        if (C.block_of(c) != is || (t > B.offset(k) && out.from_b[t - 1] >= c)) b2 = false;
    }
    out.checks.push_back({"b2", b2});
    // (b)(3): for b in P_{d,e}(B), s in Q(B), t in P_{k+1}(B): R^B(s,t) iff s <_k b(t)
    bool b3 = true;
    {
        std::vector<int> radix(k, 1);
        for (int i = 0; i < k; ++i)
            if (i != is && d[i] == e[i]) radix[i] = B.part_sizes[i];
        for_each_product(radix, [&](const Tuple& loc) {
            for (const auto& s : all_q_tuples(B))
                for (int t = B.offset(k); t < B.size(); ++t) {
                    Tuple bt(k);
                    for (int i = 0; i < k; ++i) {
                        if (i == is)
                            bt[i] = out.from_b[t];
                        else if (d[i] != e[i])
                            bt[i] = out.from_a[e[i]];
                        else
                            bt[i] = out.from_b[B.offset(i) + loc[i]];
                    }
                    bool lhs = VB.R(VB.qindex(s), t - VB.off[k]);
                    bool rhs = VC.rank[VC.qindex(to_c(s))] < VC.rank[VC.qindex(bt)];
                    if (lhs != rhs) b3 = false;
                }
        });
    }
    out.checks.push_back({"b3", b3});
    out.checks.push_back({"c", validate_tk(C).ok()});
    bool dd = out.checks.back().second;
    if (dd)
        for (const auto& s : all_q_tuples(B))
            for (int t = B.offset(k); t < B.size() && dd; ++t) {
                std::vector<int> f = out.from_a;
                for (int i = 0; i < k; ++i) f[d[i]] = out.from_b[s[i]];
                f[e[is]] = out.from_b[t];
                dd = is_deficient_iso(A, C, f, id, ie);
            }
    out.checks.push_back({"d", dd});
    return out;
}

}  // namespace fopk
