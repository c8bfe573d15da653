#pragma once

#include <map>
#include <optional>
#include <set>

#include "common.hpp"

namespace fopk {

// Finite L_k-structure in canonical form: elements 0..N-1, P_i the i-th contiguous block,
// < numeric.  `labels` (1-based part numbers, one per element) is only set on documents that
// spell membership out explicitly; every operation except validate_tk requires it empty or
// equal to the block layout.
struct TkModel {
    int k = 1;
    std::vector<int> part_sizes;
    std::vector<Tuple> qorder;
    std::vector<std::pair<Tuple, int>> r;
    std::vector<int> labels;

    int size() const {
        int n = 0;
        for (int s : part_sizes) n += s;
        return n;
    }
    int offset(int i) const {
        int o = 0;
        for (int j = 0; j < i; ++j) o += part_sizes[j];
        return o;
    }
    // 0-based part index under the block layout
    int block_of(int e) const {
        int o = 0;
        for (int i = 0; i <= k; ++i) {
            if (e < o + part_sizes[i]) return i;
            o += part_sizes[i];
        }
        return -1;
    }
    int q_count() const {
        int q = 1;
        for (int i = 0; i < k; ++i) q *= part_sizes[i];
        return q;
    }
    int m() const { return part_sizes[k]; }

    void normalize() {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    bool has_r(const Tuple& t, int w) const { return std::binary_search(r.begin(), r.end(), std::make_pair(t, w)); }
};

inline bool operator==(const TkModel& a, const TkModel& b) {
    TkModel x = a, y = b;
    x.normalize();
    y.normalize();
    return x.k == y.k && x.part_sizes == y.part_sizes && x.qorder == y.qorder && x.r == y.r && x.labels == y.labels;
}
inline bool operator!=(const TkModel& a, const TkModel& b) { return !(a == b); }

// Structural checks that must pass before axioms are even meaningful.
inline void check_structure(const TkModel& M) {
    if (M.k < 1) throw ParseError("k: must be positive");
    if (static_cast<int>(M.part_sizes.size()) != M.k + 1)
        throw ParseError("part_sizes: expected k+1 = " + std::to_string(M.k + 1) + " entries");
    for (int s : M.part_sizes)
        if (s < 0) throw ParseError("part_sizes: negative size");
    const int N = M.size();
    auto in_range = [&](int e) { return e >= 0 && e < N; };
    for (const auto& t : M.qorder) {
        if (static_cast<int>(t.size()) != M.k) throw ParseError("qorder: tuple of wrong length " + tuple_str(t));
        for (int e : t)
            if (!in_range(e)) throw ParseError("qorder: element id out of range in " + tuple_str(t));
    }
    for (const auto& [t, w] : M.r) {
        if (static_cast<int>(t.size()) != M.k) throw ParseError("R: tuple of wrong length " + tuple_str(t));
        for (int e : t)
            if (!in_range(e)) throw ParseError("R: element id out of range in " + tuple_str(t));
        if (!in_range(w)) throw ParseError("R: element id out of range " + std::to_string(w));
    }
    if (!M.labels.empty() && static_cast<int>(M.labels.size()) != N)
        throw ParseError("labels: expected one label per element");
}

inline bool has_block_labels(const TkModel& M) {
    if (M.labels.empty()) return true;
    for (int e = 0; e < M.size(); ++e)
        if (M.labels[e] != M.block_of(e) + 1) return false;
    return true;
}

// Dense view of a valid canonical model.
class ModelView {
public:
    explicit ModelView(const TkModel& M) : k(M.k), N(M.size()), q(M.q_count()), m(M.m()) {
        for (int i = 0; i <= k; ++i) off.push_back(M.offset(i));
        radix.assign(M.part_sizes.begin(), M.part_sizes.begin() + k);
        rank.assign(q, -1);
        order.reserve(q);
        for (size_t i = 0; i < M.qorder.size() && i < static_cast<size_t>(q); ++i) {
            int idx = qindex(M.qorder[i]);
            rank[idx] = static_cast<int>(i);
            order.push_back(idx);
        }
        rel.assign(static_cast<size_t>(q) * m, 0);
        for (const auto& [t, w] : M.r) rel[static_cast<size_t>(qindex(t)) * m + (w - off[k])] = 1;
        thr.assign(q, m);
        for (int x = 0; x < q; ++x)
            for (int w = 0; w < m; ++w)
                if (rel[static_cast<size_t>(x) * m + w]) {
                    thr[x] = w;
                    break;
                }
    }

    int qindex(const Tuple& t) const {
        int idx = 0;
        for (int i = 0; i < k; ++i) idx = idx * radix[i] + (t[i] - off[i]);
        return idx;
    }
    Tuple qtuple(int idx) const {
        Tuple t(k);
        for (int i = k - 1; i >= 0; --i) {
            t[i] = off[i] + idx % radix[i];
            idx /= radix[i];
        }
        return t;
    }
    bool R(int qidx, int wlocal) const { return rel[static_cast<size_t>(qidx) * m + wlocal] != 0; }
    int point(int wlocal) const { return off[k] + wlocal; }

    int k, N, q, m;
    std::vector<int> off, radix;
    std::vector<int> rank, order, thr;
    std::vector<char> rel;
};

inline std::vector<Tuple> all_q_tuples(const TkModel& M) {
    std::vector<Tuple> out;
    std::vector<int> radix(M.part_sizes.begin(), M.part_sizes.begin() + M.k);
    for_each_product(radix, [&](const Tuple& loc) {
        Tuple t(M.k);
        for (int i = 0; i < M.k; ++i) t[i] = M.offset(i) + loc[i];
        out.push_back(t);
    });
    return out;
}

struct Violation {
    int axiom;
    std::string message;
    std::vector<Tuple> witness;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::set<int> axioms() const {
        std::set<int> s;
        for (const auto& v : violations) s.insert(v.axiom);
        return s;
    }
};

namespace detail {

inline std::optional<Violation> monotone_direct(const TkModel& M, const std::vector<int>& part) {
    const int k = M.k;
    std::vector<int> top;
    for (int e = 0; e < M.size(); ++e)
        if (part[e] == k) top.push_back(e);
    std::set<std::pair<Tuple, int>> rs(M.r.begin(), M.r.end());
    const auto& qo = M.qorder;
    for (size_t i = 0; i < qo.size(); ++i)
        for (size_t j = i; j < qo.size(); ++j)
            for (int w : top) {
                if (!rs.count({qo[j], w})) continue;
                for (auto z = top.rbegin(); z != top.rend() && *z >= w; ++z)
                    if (!rs.count({qo[i], *z}))
                        return Violation{5, "(x <=_k y and R(y,w) and w <= z) but not R(x,z)", {qo[i], qo[j], {w}, {*z}}};
            }
    return std::nullopt;
}

// Threshold formulation: every R-row is an up-set and the least related point is weakly
// increasing along qorder.
inline bool monotone_threshold(const TkModel& M) {
    ModelView V(M);
    for (int x = 0; x < V.q; ++x)
        for (int w = V.thr[x]; w < V.m; ++w)
            if (!V.R(x, w)) return false;
    for (size_t i = 1; i < V.order.size(); ++i)
        if (V.thr[V.order[i - 1]] > V.thr[V.order[i]]) return false;
    return true;
}

}  // namespace detail

inline ValidationReport validate_tk(const TkModel& M0) {
    check_structure(M0);
    TkModel M = M0;
    M.normalize();
    ValidationReport rep;
    const int k = M.k, N = M.size();
    std::vector<int> part(N);
    for (int e = 0; e < N; ++e) part[e] = M.labels.empty() ? M.block_of(e) : M.labels[e] - 1;

    // (1) partition
    for (int e = 0; e < N; ++e)
        if (part[e] < 0 || part[e] > k) {
            rep.violations.push_back({1, "element lies in no part", {{e}}});
            break;
        }
    if (!M.labels.empty()) {
        for (int i = 0; i <= k; ++i) {
            int c = static_cast<int>(std::count(part.begin(), part.end(), i));
            if (c != M.part_sizes[i]) {
                rep.violations.push_back({1, "part " + std::to_string(i + 1) + " size disagrees with part_sizes", {{i + 1}}});
                break;
            }
        }
    }
    auto valid_part = [&](int e) { return part[e] >= 0 && part[e] <= k; };

    // (2) P_1 < ... < P_{k+1}
    [&] {
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b)
                if (valid_part(a) && valid_part(b) && part[a] > part[b]) {
                    rep.violations.push_back({2, "element of a later part precedes one of an earlier part", {{a}, {b}}});
                    return;
                }
    }();

    auto in_q = [&](const Tuple& t) {
        for (int i = 0; i < k; ++i)
            if (part[t[i]] != i) return false;
        return true;
    };

    // (3) R only on Q x P_{k+1}
    bool ok3 = true;
    for (const auto& [t, w] : M.r)
        if (!in_q(t) || part[w] != k) {
            rep.violations.push_back({3, "R holds outside P_1 x ... x P_{k+1}", {t, {w}}});
            ok3 = false;
            break;
        }

    // (4) <_k a linear order on exactly Q
    bool ok4 = true;
    {
        std::set<Tuple> seen;
        for (const auto& t : M.qorder) {
            if (!in_q(t)) {
                rep.violations.push_back({4, "<_k relates a tuple outside Q", {t}});
                ok4 = false;
                break;
            }
            if (!seen.insert(t).second) {
                rep.violations.push_back({4, "tuple listed twice in <_k, so <_k is not irreflexive", {t}});
                ok4 = false;
                break;
            }
        }
        if (ok4) {
            std::vector<std::vector<int>> members(k);
            for (int e = 0; e < N; ++e)
                if (valid_part(e) && part[e] < k) members[part[e]].push_back(e);
            std::vector<int> radix;
            for (auto& v : members) radix.push_back(static_cast<int>(v.size()));
            for_each_product(radix, [&](const Tuple& loc) {
                if (!ok4) return;
                Tuple t(k);
                for (int i = 0; i < k; ++i) t[i] = members[i][loc[i]];
                if (!seen.count(t)) {
                    rep.violations.push_back({4, "<_k does not compare this tuple of Q", {t}});
                    ok4 = false;
                }
            });
        }
    }

    // (5) monotonicity, checked directly and, on canonical documents, via thresholds
    auto v5 = detail::monotone_direct(M, part);
    if (v5) rep.violations.push_back(*v5);
    if (ok3 && ok4 && has_block_labels(M)) {
        bool thr_ok = detail::monotone_threshold(M);
        if (thr_ok == v5.has_value())
            throw std::logic_error("axiom (5): direct and threshold checks disagree");
    }
    return rep;
}

inline void require_valid(const TkModel& M, const char* what = "model") {
    auto rep = validate_tk(M);
    if (!rep.ok()) {
        const auto& v = rep.violations.front();
        throw DomainError(std::string(what) + " violates axiom (" + std::to_string(v.axiom) + "): " + v.message);
    }
    if (!has_block_labels(M)) throw DomainError(std::string(what) + ": labels must follow the block layout");
}

// ---------- star order ----------

struct StarItem {
    Tuple tuple;     // set for a Q-tuple
    int point = -1;  // set for a P_{k+1} element
    bool is_point() const { return point >= 0; }
    bool operator==(const StarItem& o) const { return tuple == o.tuple && point == o.point; }
    bool operator<(const StarItem& o) const { return std::tie(point, tuple) < std::tie(o.point, o.tuple); }
};

inline std::string item_str(const StarItem& it) { return it.is_point() ? std::to_string(it.point) : tuple_str(it.tuple); }

inline std::vector<StarItem> star_order_unchecked(const TkModel& M) {
    ModelView V(M);
    // key: (cut, 0 for tuples / 1 for points, rank)
    std::vector<std::tuple<int, int, int>> keys;
    for (int x = 0; x < V.q; ++x) keys.emplace_back(V.thr[x], 0, V.rank[x]);
    for (int w = 0; w < V.m; ++w) keys.emplace_back(w, 1, w);
    std::sort(keys.begin(), keys.end());
    std::vector<StarItem> out;
    for (auto [cut, kind, r] : keys) {
        if (kind == 0)
            out.push_back({V.qtuple(V.order[r]), -1});
        else
            out.push_back({{}, V.point(cut)});
    }
    return out;
}

inline std::vector<StarItem> star_order(const TkModel& M) {
    require_valid(M);
    return star_order_unchecked(M);
}

inline TkModel from_star_order(int k, const std::vector<int>& part_sizes, const std::vector<StarItem>& ranking) {
    TkModel M;
    M.k = k;
    M.part_sizes = part_sizes;
    check_structure(M);
    const int q = M.q_count(), m = M.m(), top = M.offset(k);
    std::set<Tuple> qs;
    for (auto& t : all_q_tuples(M)) qs.insert(t);
    std::set<Tuple> seen_t;
    int next_point = top;
    for (const auto& it : ranking) {
        if (it.is_point()) {
            if (it.point != next_point)
                throw DomainError("ranking: P_{k+1} elements must appear once each in numeric order (got " +
                                  std::to_string(it.point) + ")");
            ++next_point;
        } else {
            if (!qs.count(it.tuple)) throw DomainError("ranking: " + tuple_str(it.tuple) + " is not in Q");
            if (!seen_t.insert(it.tuple).second) throw DomainError("ranking: duplicate tuple " + tuple_str(it.tuple));
        }
    }
    if (next_point != top + m) throw DomainError("ranking: omits a P_{k+1} element");
    if (static_cast<int>(seen_t.size()) != q) throw DomainError("ranking: omits a tuple of Q");
    std::vector<Tuple> pending;
    for (const auto& it : ranking) {
        if (it.is_point()) {
            for (const auto& t : pending) M.r.push_back({t, it.point});
        } else {
            M.qorder.push_back(it.tuple);
            pending.push_back(it.tuple);
        }
    }
    M.normalize();
    return M;
}

// ---------- quantifier-free types ----------

enum class Lang { L, Lprime, Ldprime, LQ };

inline std::string lang_name(Lang l) {
    switch (l) {
        case Lang::L: return "L";
        case Lang::Lprime: return "L'";
        case Lang::Ldprime: return "L''";
        case Lang::LQ: return "LQ";
    }
    return "?";
}

inline Lang parse_lang(const std::string& s) {
    if (s == "L" || s == "Lk") return Lang::L;
    if (s == "L'" || s == "Lprime" || s == "L'k") return Lang::Lprime;
    if (s == "L''" || s == "Ldprime" || s == "L''k") return Lang::Ldprime;
    if (s == "LQ" || s == "LQk") return Lang::LQ;
    throw ParseError("unknown language tag '" + s + "'");
}

struct QfTypeFingerprint {
    Lang lang;
    std::vector<uint8_t> bytes;
    bool operator==(const QfTypeFingerprint& o) const { return lang == o.lang && bytes == o.bytes; }
    std::string hex() const {
        static const char* d = "0123456789abcdef";
        std::string s;
        for (uint8_t b : bytes) {
            s += d[b >> 4];
            s += d[b & 15];
        }
        return s;
    }
};

inline QfTypeFingerprint qf_type(const TkModel& M, const Tuple& xs, Lang lang) {
    require_valid(M);
    const int n = static_cast<int>(xs.size()), k = M.k, N = M.size();
    for (int e : xs)
        if (e < 0 || e >= N) throw DomainError("qf_type: element id out of range");
    ModelView V(M);
    auto part = [&](int e) { return M.block_of(e); };
    const bool has_top = lang != Lang::LQ, has_ltk = lang != Lang::Ldprime, has_r = lang == Lang::L;

    std::vector<std::vector<uint32_t>> facts;
    for (int a = 0; a < n; ++a) {
        int p = part(xs[a]);
        if (p < k || has_top) facts.push_back({1, static_cast<uint32_t>(p + 1), static_cast<uint32_t>(a)});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (xs[a] == xs[b]) facts.push_back({2, static_cast<uint32_t>(a), static_cast<uint32_t>(b)});
            if (xs[a] < xs[b]) facts.push_back({3, static_cast<uint32_t>(a), static_cast<uint32_t>(b)});
        }
    auto is_q = [&](const Tuple& idx) {
        for (int i = 0; i < k; ++i)
            if (part(xs[idx[i]]) != i) return false;
        return true;
    };
    auto as_q = [&](const Tuple& idx) {
        Tuple t(k);
        for (int i = 0; i < k; ++i) t[i] = xs[idx[i]];
        return V.qindex(t);
    };
    if (has_ltk && n > 0) {
        for_each_product(std::vector<int>(2 * k, n), [&](const Tuple& ab) {
            Tuple a(ab.begin(), ab.begin() + k), b(ab.begin() + k, ab.end());
            if (!is_q(a) || !is_q(b)) return;
            if (V.rank[as_q(a)] < V.rank[as_q(b)]) {
                std::vector<uint32_t> f{4};
                for (int x : ab) f.push_back(static_cast<uint32_t>(x));
                facts.push_back(f);
            }
        });
    }
    if (has_r && n > 0) {
        for_each_product(std::vector<int>(k + 1, n), [&](const Tuple& ab) {
            Tuple a(ab.begin(), ab.begin() + k);
            int w = xs[ab[k]];
            if (!is_q(a) || part(w) != k) return;
            if (V.R(as_q(a), w - V.off[k])) {
                std::vector<uint32_t> f{5};
                for (int x : ab) f.push_back(static_cast<uint32_t>(x));
                facts.push_back(f);
            }
        });
    }
    std::sort(facts.begin(), facts.end());
    QfTypeFingerprint fp{lang, {}};
    auto put = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) fp.bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    };
    put(static_cast<uint32_t>(lang));
    put(static_cast<uint32_t>(n));
    put(static_cast<uint32_t>(facts.size()));
    for (const auto& f : facts) {
        put(static_cast<uint32_t>(f.size()));
        for (uint32_t v : f) put(v);
    }
    return fp;
}

// ---------- embeddings ----------

// Total map A -> C (map[a] = image). Checks injectivity, parts, <, <_k and R exactly.
inline bool is_embedding(const TkModel& A, const TkModel& C, const std::vector<int>& map, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (A.k != C.k) return fail("k differs");
    if (static_cast<int>(map.size()) != A.size()) return fail("map has wrong length");
    for (int a = 0; a < A.size(); ++a) {
        if (map[a] < 0 || map[a] >= C.size()) return fail("image out of range");
        if (A.block_of(a) != C.block_of(map[a])) return fail("part not preserved at " + std::to_string(a));
        if (a > 0 && map[a - 1] >= map[a]) return fail("order not preserved at " + std::to_string(a));
    }
    ModelView VA(A), VC(C);
    auto img = [&](int x) {
        Tuple t = VA.qtuple(x);
        for (int& e : t) e = map[e];
        return VC.qindex(t);
    };
    for (size_t i = 1; i < VA.order.size(); ++i)
        if (VC.rank[img(VA.order[i - 1])] > VC.rank[img(VA.order[i])]) return fail("<_k not preserved");
    for (int x = 0; x < VA.q; ++x) {
        int y = img(x);
        for (int w = 0; w < VA.m; ++w)
            if (VA.R(x, w) != VC.R(y, map[VA.point(w)] - VC.off[C.k])) return fail("R not preserved");
    }
    return true;
}

// Partial map (entries -1 are outside the domain); atomic facts are checked only on tuples
// inside the domain.
inline bool is_partial_embedding(const TkModel& A, const TkModel& C, const std::vector<int>& map, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (A.k != C.k || static_cast<int>(map.size()) != A.size()) return fail("shape mismatch");
    int last = -1;
    for (int a = 0; a < A.size(); ++a) {
        if (map[a] < 0) continue;
        if (map[a] >= C.size()) return fail("image out of range");
        if (A.block_of(a) != C.block_of(map[a])) return fail("part not preserved at " + std::to_string(a));
        if (map[a] <= last) return fail("order not preserved at " + std::to_string(a));
        last = map[a];
    }
    ModelView VA(A), VC(C);
    auto inside = [&](int x) {
        for (int e : VA.qtuple(x))
            if (map[e] < 0) return false;
        return true;
    };
    auto img = [&](int x) {
        Tuple t = VA.qtuple(x);
        for (int& e : t) e = map[e];
        return VC.qindex(t);
    };
    int prev = -1;
    for (int x : VA.order) {
        if (!inside(x)) continue;
        if (prev >= 0 && VC.rank[img(prev)] > VC.rank[img(x)]) return fail("<_k not preserved");
        prev = x;
    }
    for (int x = 0; x < VA.q; ++x) {
        if (!inside(x)) continue;
        for (int w = 0; w < VA.m; ++w) {
            int mw = map[VA.point(w)];
            if (mw < 0) continue;
            if (VA.R(x, w) != VC.R(img(x), mw - VC.off[C.k])) return fail("R not preserved");
        }
    }
    return true;
}

namespace detail {
// all increasing injections [0,a) -> [0,c), lexicographic
inline void combos(int a, int c, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(a);
    for (int i = 0; i < a; ++i) cur[i] = i;
    if (a > c) return;
    while (true) {
        out.push_back(cur);
        int i = a - 1;
        while (i >= 0 && cur[i] == c - a + i) --i;
        if (i < 0) return;
        ++cur[i];
        for (int j = i + 1; j < a; ++j) cur[j] = cur[j - 1] + 1;
    }
}
}  // namespace detail

inline std::vector<std::vector<int>> find_embeddings(const TkModel& A, const TkModel& C) {
    require_valid(A, "A");
    require_valid(C, "C");
    if (A.k != C.k) throw DomainError("find_embeddings: k differs");
    const int k = A.k;
    std::vector<std::vector<std::vector<int>>> per(k + 1);
    for (int i = 0; i <= k; ++i) {
        detail::combos(A.part_sizes[i], C.part_sizes[i], per[i]);
        if (per[i].empty()) return {};
    }
    std::vector<std::vector<int>> out;
    std::vector<int> choice(k + 1, 0), map(A.size());
    while (true) {
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j < A.part_sizes[i]; ++j) map[A.offset(i) + j] = C.offset(i) + per[i][choice[i]][j];
        if (is_embedding(A, C, map)) out.push_back(map);
        int i = k;
        while (i >= 0 && ++choice[i] == static_cast<int>(per[i].size())) choice[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// ---------- enumeration ----------

// Calls fn on every valid model with these sizes: all interleavings of Q among the points.
template <class F>
void for_each_model(int k, const std::vector<int>& part_sizes, F&& fn) {
    TkModel shape;
    shape.k = k;
    shape.part_sizes = part_sizes;
    check_structure(shape);
    auto qs = all_q_tuples(shape);
    const int q = static_cast<int>(qs.size()), m = shape.m(), top = shape.offset(k);
    std::vector<int> perm(q);
    for (int i = 0; i < q; ++i) perm[i] = i;
    do {
        // thresholds: non-decreasing cut index in [0,m] for each position of the permutation
        std::vector<int> cut(q, 0);
        while (true) {
            TkModel M = shape;
            for (int i = 0; i < q; ++i) {
                M.qorder.push_back(qs[perm[i]]);
                for (int w = cut[i]; w < m; ++w) M.r.push_back({qs[perm[i]], top + w});
            }
            M.normalize();
            fn(static_cast<const TkModel&>(M));
            int i = q - 1;
            while (i >= 0 && cut[i] == m) --i;
            if (i < 0) break;
            ++cut[i];
            for (int j = i + 1; j < q; ++j) cut[j] = cut[i];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
}

inline std::vector<TkModel> enumerate_models(int k, const std::vector<int>& part_sizes) {
    std::vector<TkModel> out;
    for_each_model(k, part_sizes, [&](const TkModel& M) { out.push_back(M); });
    return out;
}

inline uint64_t model_count_formula(const std::vector<int>& part_sizes) {
    uint64_t q = 1;
    for (size_t i = 0; i + 1 < part_sizes.size(); ++i) q *= part_sizes[i];
    uint64_t m = part_sizes.back(), r = 1;
    for (uint64_t x = m + 1; x <= q + m; ++x) r *= x;
    return r;
}

// Uniform-ish random valid model: random tuple order, random points cuts.
inline TkModel random_model(int k, const std::vector<int>& part_sizes, Rng& rng) {
    TkModel M;
    M.k = k;
    M.part_sizes = part_sizes;
    check_structure(M);
    auto qs = all_q_tuples(M);
    rng.shuffle(qs);
    const int m = M.m(), top = M.offset(k);
    std::vector<int> cuts(qs.size());
    for (auto& c : cuts) c = static_cast<int>(rng.below(m + 1));
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i < qs.size(); ++i) {
        M.qorder.push_back(qs[i]);
        for (int w = cuts[i]; w < m; ++w) M.r.push_back({qs[i], top + w});
    }
    M.normalize();
    return M;
}

}  // namespace fopk
