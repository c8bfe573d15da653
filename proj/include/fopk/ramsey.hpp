#pragma once

#include <functional>

#include "tk_model.hpp"

namespace fopk {

// L_{f,k}-structure: U_i contiguous blocks, f a partial map given by its graph.
// When ordered, < is numeric order (so U_1 < ... < U_{k+1} holds by layout).
struct FnStructure {
    int k = 1;
    std::vector<int> part_sizes;
    std::vector<std::pair<Tuple, int>> f;
    bool ordered = true;

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
    int block_of(int e) const {
        int o = 0;
        for (int i = 0; i <= k; ++i) {
            if (e < o + part_sizes[i]) return i;
            o += part_sizes[i];
        }
        return -1;
    }
    void normalize() {
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    std::map<Tuple, int> fmap() const {
        std::map<Tuple, int> m;
        for (const auto& [t, y] : f) m[t] = y;
        return m;
    }
    std::set<int> image() const {
        std::set<int> s;
        for (const auto& p : f) s.insert(p.second);
        return s;
    }
};

inline bool operator==(const FnStructure& a, const FnStructure& b) {
    FnStructure x = a, y = b;
    x.normalize();
    y.normalize();
    return x.k == y.k && x.part_sizes == y.part_sizes && x.f == y.f && x.ordered == y.ordered;
}

// L_k-structure whose <_k is a total strict pre-order, given by its classes in increasing order.
struct PreModel {
    int k = 1;
    std::vector<int> part_sizes;
    std::vector<std::vector<Tuple>> blocks;
    std::vector<std::pair<Tuple, int>> r;

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
    int block_of(int e) const {
        int o = 0;
        for (int i = 0; i <= k; ++i) {
            if (e < o + part_sizes[i]) return i;
            o += part_sizes[i];
        }
        return -1;
    }
    void normalize() {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        for (auto& b : blocks) std::sort(b.begin(), b.end());
    }
};

inline bool operator==(const PreModel& a, const PreModel& b) {
    PreModel x = a, y = b;
    x.normalize();
    y.normalize();
    return x.k == y.k && x.part_sizes == y.part_sizes && x.blocks == y.blocks && x.r == y.r;
}

inline PreModel as_pre_model(const TkModel& M) {
    PreModel P;
    P.k = M.k;
    P.part_sizes = M.part_sizes;
    for (const auto& t : M.qorder) P.blocks.push_back({t});
    P.r = M.r;
    P.normalize();
    return P;
}

namespace detail {

template <class S>
void check_shape(const S& X, const char* what) {
    if (X.k < 1) throw ParseError(std::string(what) + ": k must be positive");
    if (static_cast<int>(X.part_sizes.size()) != X.k + 1) throw ParseError(std::string(what) + ": part_sizes needs k+1 entries");
    for (int s : X.part_sizes)
        if (s < 0) throw ParseError(std::string(what) + ": negative part size");
}

template <class S>
std::vector<Tuple> q_tuples_of(const S& X) {
    std::vector<Tuple> out;
    std::vector<int> radix(X.part_sizes.begin(), X.part_sizes.begin() + X.k);
    for_each_product(radix, [&](const Tuple& loc) {
        Tuple t(X.k);
        for (int i = 0; i < X.k; ++i) t[i] = X.offset(i) + loc[i];
        out.push_back(t);
    });
    return out;
}

}  // namespace detail

enum class FnClass { Rk, OrderedRk, Sk };

inline std::string class_name(FnClass c) {
    switch (c) {
        case FnClass::Rk: return "Rk";
        case FnClass::OrderedRk: return "OrderedRk";
        case FnClass::Sk: return "Sk";
    }
    return "?";
}

// Numbering: (1) partition, (2) dom(f) in U_1 x...x U_k and im(f) in U_{k+1} with f single-valued,
// (3) ordered, (4) dom(f) total.
inline ValidationReport validate_fn(const FnStructure& X, FnClass cls) {
    detail::check_shape(X, "lfk_structure");
    const int N = X.size(), k = X.k;
    for (const auto& [t, y] : X.f) {
        if (static_cast<int>(t.size()) != k) throw ParseError("f: tuple of wrong length " + tuple_str(t));
        for (int e : t)
            if (e < 0 || e >= N) throw ParseError("f: element id out of range in " + tuple_str(t));
        if (y < 0 || y >= N) throw ParseError("f: element id out of range " + std::to_string(y));
    }
    ValidationReport rep;
    std::map<Tuple, int> seen;
    for (const auto& [t, y] : X.f) {
        for (int i = 0; i < k; ++i)
            if (X.block_of(t[i]) != i) {
                rep.violations.push_back({2, "dom(f) leaves U_1 x ... x U_k", {t}});
                goto next;
            }
        if (X.block_of(y) != k) {
            rep.violations.push_back({2, "image not in U_{k+1}", {t, {y}}});
            goto next;
        }
        if (auto it = seen.find(t); it != seen.end() && it->second != y) {
            rep.violations.push_back({2, "f is not single-valued", {t, {it->second}, {y}}});
            goto next;
        }
        seen[t] = y;
    next:;
    }
    if (cls != FnClass::Rk && !X.ordered) rep.violations.push_back({3, "structure carries no order", {}});
    if (cls == FnClass::Sk)
        for (const auto& t : detail::q_tuples_of(X))
            if (!seen.count(t)) {
                rep.violations.push_back({4, "dom(f) is not all of U_1 x ... x U_k", {t}});
                break;
            }
    return rep;
}

// Numbering follows the pre-order theory: (3) R placement, (4) <_k placement,
// (5) total strict pre-order on Q, (6) monotone R.
inline ValidationReport validate_pre(const PreModel& X) {
    detail::check_shape(X, "pre_model");
    const int N = X.size(), k = X.k;
    auto in_range = [&](const Tuple& t) {
        for (int e : t)
            if (e < 0 || e >= N) return false;
        return static_cast<int>(t.size()) == k;
    };
    for (const auto& b : X.blocks)
        for (const auto& t : b)
            if (!in_range(t)) throw ParseError("qpreorder: bad tuple " + tuple_str(t));
    for (const auto& [t, w] : X.r)
        if (!in_range(t) || w < 0 || w >= N) throw ParseError("R: bad entry " + tuple_str(t));
    ValidationReport rep;
    auto in_q = [&](const Tuple& t) {
        for (int i = 0; i < k; ++i)
            if (X.block_of(t[i]) != i) return false;
        return true;
    };
    for (const auto& [t, w] : X.r)
        if (!in_q(t) || X.block_of(w) != k) {
            rep.violations.push_back({3, "R holds outside P_1 x ... x P_{k+1}", {t, {w}}});
            break;
        }
    std::map<Tuple, int> blk;
    bool ok45 = true;
    for (size_t i = 0; i < X.blocks.size() && ok45; ++i) {
        if (X.blocks[i].empty()) {
            rep.violations.push_back({5, "empty pre-order class", {}});
            ok45 = false;
        }
        for (const auto& t : X.blocks[i]) {
            if (!in_q(t)) {
                rep.violations.push_back({4, "<_k relates a tuple outside Q", {t}});
                ok45 = false;
                break;
            }
            if (!blk.emplace(t, static_cast<int>(i)).second) {
                rep.violations.push_back({5, "tuple in two pre-order classes", {t}});
                ok45 = false;
                break;
            }
        }
    }
    if (ok45)
        for (const auto& t : detail::q_tuples_of(X))
            if (!blk.count(t)) {
                rep.violations.push_back({5, "<_k is not total: tuple missing", {t}});
                ok45 = false;
                break;
            }
    if (ok45) {
        std::set<std::pair<Tuple, int>> rs(X.r.begin(), X.r.end());
        std::vector<int> top;
        for (int e = X.offset(k); e < N; ++e) top.push_back(e);
        auto qs = detail::q_tuples_of(X);
        [&] {
            for (const auto& x : qs)
                for (const auto& y : qs) {
                    if (blk[x] > blk[y]) continue;
                    for (int w : top) {
                        if (!rs.count({y, w})) continue;
                        for (int z : top)
                            if (z >= w && !rs.count({x, z})) {
                                rep.violations.push_back({6, "(x <=_k y and R(y,w) and w <= z) but not R(x,z)", {x, y, {w}, {z}}});
                                return;
                            }
                    }
                }
        }();
    }
    return rep;
}

inline void require_class(const FnStructure& X, FnClass c, const char* what) {
    auto rep = validate_fn(X, c);
    if (!rep.ok())
        throw DomainError(std::string(what) + " is not in " + class_name(c) + ": " + rep.violations.front().message);
}

inline void require_pre(const PreModel& X, const char* what) {
    auto rep = validate_pre(X);
    if (!rep.ok()) throw DomainError(std::string(what) + " is not in HkPre: " + rep.violations.front().message);
}

// ---------- embeddings ----------

inline bool is_fn_embedding(const FnStructure& M, const FnStructure& N, const std::vector<int>& map, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (M.k != N.k || static_cast<int>(map.size()) != M.size()) return fail("shape mismatch");
    std::set<int> used;
    for (int a = 0; a < M.size(); ++a) {
        if (map[a] < 0 || map[a] >= N.size()) return fail("image out of range");
        if (!used.insert(map[a]).second) return fail("not injective");
        if (M.block_of(a) != N.block_of(map[a])) return fail("part not preserved at " + std::to_string(a));
        if (M.ordered && N.ordered && a > 0 && map[a - 1] >= map[a]) return fail("order not preserved at " + std::to_string(a));
    }
    auto fm = M.fmap(), fn = N.fmap();
    for (const auto& t : detail::q_tuples_of(M)) {
        Tuple u = t;
        for (int& e : u) e = map[e];
        auto im = fm.find(t);
        auto in = fn.find(u);
        if ((im == fm.end()) != (in == fn.end())) return fail("domain of f not preserved at " + tuple_str(t));
        if (im != fm.end() && map[im->second] != in->second) return fail("value of f not preserved at " + tuple_str(t));
    }
    return true;
}

inline bool is_pre_embedding(const PreModel& A, const PreModel& C, const std::vector<int>& map) {
    if (A.k != C.k || static_cast<int>(map.size()) != A.size()) return false;
    for (int a = 0; a < A.size(); ++a) {
        if (map[a] < 0 || map[a] >= C.size() || A.block_of(a) != C.block_of(map[a])) return false;
        if (a > 0 && map[a - 1] >= map[a]) return false;
    }
    std::map<Tuple, int> ba, bc;
    for (size_t i = 0; i < A.blocks.size(); ++i)
        for (const auto& t : A.blocks[i]) ba[t] = static_cast<int>(i);
    for (size_t i = 0; i < C.blocks.size(); ++i)
        for (const auto& t : C.blocks[i]) bc[t] = static_cast<int>(i);
    std::set<std::pair<Tuple, int>> ra(A.r.begin(), A.r.end()), rc(C.r.begin(), C.r.end());
    auto img = [&](Tuple t) {
        for (int& e : t) e = map[e];
        return t;
    };
    auto qs = detail::q_tuples_of(A);
    for (const auto& x : qs)
        for (const auto& y : qs) {
            int sa = (ba.at(x) > ba.at(y)) - (ba.at(x) < ba.at(y));
            int sc = (bc.at(img(x)) > bc.at(img(y))) - (bc.at(img(x)) < bc.at(img(y)));
            if (sa != sc) return false;
        }
    for (const auto& x : qs)
        for (int w = A.offset(A.k); w < A.size(); ++w)
            if (ra.count({x, w}) != rc.count({img(x), map[w]})) return false;
    return true;
}

namespace detail {

template <class S, class Pred>
std::vector<std::vector<int>> blockwise_injections(const S& A, const S& C, Pred&& ok) {
    const int k = A.k;
    if (A.k != C.k) throw DomainError("embeddings: k differs");
    std::vector<std::vector<std::vector<int>>> per(k + 1);
    for (int i = 0; i <= k; ++i) {
        combos(A.part_sizes[i], C.part_sizes[i], per[i]);
        if (per[i].empty()) return {};
    }
    std::vector<std::vector<int>> out;
    std::vector<int> choice(k + 1, 0), map(A.size());
    while (true) {
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j < A.part_sizes[i]; ++j) map[A.offset(i) + j] = C.offset(i) + per[i][choice[i]][j];
        if (ok(map)) out.push_back(map);
        int i = k;
        while (i >= 0 && ++choice[i] == static_cast<int>(per[i].size())) choice[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

}  // namespace detail

// Ordered structures only: embeddings are then increasing on each block.
inline std::vector<std::vector<int>> find_fn_embeddings(const FnStructure& A, const FnStructure& C) {
    if (!A.ordered || !C.ordered) throw DomainError("fn embeddings: unordered structures may have automorphisms; order them first");
    return detail::blockwise_injections(A, C, [&](const std::vector<int>& m) { return is_fn_embedding(A, C, m); });
}

inline std::vector<std::vector<int>> find_pre_embeddings(const PreModel& A, const PreModel& C) {
    return detail::blockwise_injections(A, C, [&](const std::vector<int>& m) { return is_pre_embedding(A, C, m); });
}

// ---------- free amalgamation in R_k ----------

struct FnAmalgam {
    FnStructure C;
    std::vector<int> beta1, beta2;
};

inline FnAmalgam free_amalgamate_rk(const FnStructure& A, const FnStructure& B1, const FnStructure& B2, const std::vector<int>& a1,
                                    const std::vector<int>& a2) {
    require_class(A, FnClass::Rk, "A");
    require_class(B1, FnClass::Rk, "B1");
    require_class(B2, FnClass::Rk, "B2");
    FnStructure Au = A, B1u = B1, B2u = B2;
    Au.ordered = B1u.ordered = B2u.ordered = false;
    std::string why;
    if (!is_fn_embedding(Au, B1u, a1, &why)) throw DomainError("alpha1 is not an embedding: " + why);
    if (!is_fn_embedding(Au, B2u, a2, &why)) throw DomainError("alpha2 is not an embedding: " + why);
    const int k = A.k;
    FnAmalgam out;
    out.C.k = k;
    out.C.ordered = false;
    out.beta1.assign(B1.size(), -1);
    out.beta2.assign(B2.size(), -1);
    std::vector<int> from_a(A.size());
    std::vector<int> inv1(B1.size(), -1), inv2(B2.size(), -1);
    for (int a = 0; a < A.size(); ++a) inv1[a1[a]] = a, inv2[a2[a]] = a;
    int id = 0;
    for (int i = 0; i <= k; ++i) {
        int start = id;
        for (int a = A.offset(i); a < A.offset(i) + A.part_sizes[i]; ++a) from_a[a] = id++;
        for (int b = B1.offset(i); b < B1.offset(i) + B1.part_sizes[i]; ++b)
            out.beta1[b] = inv1[b] >= 0 ? from_a[inv1[b]] : id++;
        for (int b = B2.offset(i); b < B2.offset(i) + B2.part_sizes[i]; ++b)
            out.beta2[b] = inv2[b] >= 0 ? from_a[inv2[b]] : id++;
        out.C.part_sizes.push_back(id - start);
    }
    auto push = [&](const FnStructure& B, const std::vector<int>& beta) {
        for (const auto& [t, y] : B.f) {
            Tuple u = t;
            for (int& e : u) e = beta[e];
            out.C.f.push_back({u, beta[y]});
        }
    };
    push(B1, out.beta1);
    push(B2, out.beta2);
    out.C.normalize();
    return out;
}

// ---------- B_f and C_R ----------

struct FunctionalResult {
    FnStructure C;
    std::vector<int> map;        // B id -> C id
    std::vector<int> block_point;  // block index -> d point in C
};

inline FunctionalResult to_functional(const PreModel& B) {
    require_pre(B, "B");
    const int k = B.k, m = B.part_sizes[k], nb = static_cast<int>(B.blocks.size());
    std::set<std::pair<Tuple, int>> rs(B.r.begin(), B.r.end());
    std::vector<int> thr(nb, m);
    for (int b = 0; b < nb; ++b)
        for (int w = 0; w < m; ++w)
            if (rs.count({B.blocks[b][0], B.offset(k) + w})) {
                thr[b] = w;
                break;
            }
    FunctionalResult out;
    out.C.k = k;
    out.C.ordered = true;
    out.C.part_sizes = B.part_sizes;
    out.C.part_sizes[k] += nb;
    out.map.assign(B.size(), -1);
    out.block_point.assign(nb, -1);
    for (int e = 0; e < B.offset(k); ++e) out.map[e] = e;
    int id = B.offset(k), b = 0;
    for (int w = 0; w <= m; ++w) {
        while (b < nb && thr[b] == w) out.block_point[b++] = id++;
        if (w < m) out.map[B.offset(k) + w] = id++;
    }
    if (b != nb) throw std::logic_error("to_functional: thresholds not monotone on a valid pre-model");
    for (int i = 0; i < nb; ++i)
        for (const auto& t : B.blocks[i]) out.C.f.push_back({t, out.block_point[i]});
    out.C.normalize();
    return out;
}

struct RelationalResult {
    PreModel P;
    std::vector<int> map;  // C id -> P id, -1 on im(f)
};

inline RelationalResult to_relational(const FnStructure& C) {
    require_class(C, FnClass::Sk, "C");
    const int k = C.k;
    auto im = C.image();
    RelationalResult out;
    out.P.k = k;
    out.P.part_sizes = C.part_sizes;
    out.P.part_sizes[k] -= static_cast<int>(im.size());
    out.map.assign(C.size(), -1);
    int id = 0;
    for (int e = 0; e < C.size(); ++e)
        if (!im.count(e)) out.map[e] = id++;
    std::map<int, std::vector<Tuple>> fib;
    for (const auto& [t, y] : C.f) fib[y].push_back(t);
    for (auto& [y, ts] : fib) out.P.blocks.push_back(ts);
    for (const auto& [t, y] : C.f)
        for (int z = y + 1; z < C.size(); ++z)
            if (out.map[z] >= 0 && C.block_of(z) == k) out.P.r.push_back({t, out.map[z]});
    out.P.normalize();
    return out;
}

// ---------- substructures and phi / psi ----------

inline FnStructure fn_substructure(const FnStructure& C, const std::vector<int>& ids) {
    FnStructure D;
    D.k = C.k;
    D.ordered = C.ordered;
    D.part_sizes.assign(C.k + 1, 0);
    std::vector<int> loc(C.size(), -1);
    for (size_t j = 0; j < ids.size(); ++j) {
        loc[ids[j]] = static_cast<int>(j);
        ++D.part_sizes[C.block_of(ids[j])];
    }
    for (const auto& [t, y] : C.f) {
        if (loc[y] < 0) continue;
        Tuple u = t;
        bool in = true;
        for (int& e : u) in = in && (e = loc[e]) >= 0;
        if (in) D.f.push_back({u, loc[y]});
    }
    D.normalize();
    return D;
}

inline PreModel pre_substructure(const PreModel& P, const std::vector<int>& ids) {
    PreModel D;
    D.k = P.k;
    D.part_sizes.assign(P.k + 1, 0);
    std::vector<int> loc(P.size(), -1);
    for (size_t j = 0; j < ids.size(); ++j) {
        loc[ids[j]] = static_cast<int>(j);
        ++D.part_sizes[P.block_of(ids[j])];
    }
    auto conv = [&](Tuple t, bool& in) {
        in = true;
        for (int& e : t) in = in && (e = loc[e]) >= 0;
        return t;
    };
    for (const auto& b : P.blocks) {
        std::vector<Tuple> nb;
        for (const auto& t : b) {
            bool in;
            Tuple u = conv(t, in);
            if (in) nb.push_back(u);
        }
        if (!nb.empty()) D.blocks.push_back(nb);
    }
    for (const auto& [t, w] : P.r) {
        bool in;
        Tuple u = conv(t, in);
        if (in && loc[w] >= 0) D.r.push_back({u, loc[w]});
    }
    D.normalize();
    return D;
}

inline bool is_closed(const FnStructure& C, const std::vector<int>& ids) {
    std::set<int> s(ids.begin(), ids.end());
    for (const auto& [t, y] : C.f) {
        bool in = true;
        for (int e : t) in = in && s.count(e);
        if (in && !s.count(y)) return false;
    }
    return true;
}

// D (sorted C ids) must be f-closed and meet im(f^C) only inside im(f^D); returns ids of C_R.
inline std::vector<int> phi(const FnStructure& C, const std::vector<int>& D) {
    require_class(C, FnClass::Sk, "C");
    for (int e : D)
        if (e < 0 || e >= C.size()) throw DomainError("phi: id out of range");
    if (!is_closed(C, D)) throw DomainError("phi: D is not closed under f");
    std::set<int> s(D.begin(), D.end()), imd;
    for (const auto& [t, y] : C.f) {
        bool in = true;
        for (int e : t) in = in && s.count(e);
        if (in) imd.insert(y);
    }
    auto imc = C.image();
    auto rel = to_relational(C);
    std::vector<int> out;
    for (int e : s) {
        if (imd.count(e)) continue;
        if (imc.count(e))
            throw DomainError("phi: D contains f(" + std::to_string(e) + ") without a preimage in D, so D minus im(f^D) is not inside C_R");
        out.push_back(rel.map[e]);
    }
    return out;
}

inline std::vector<int> psi(const FnStructure& C, const std::vector<int>& W) {
    auto rel = to_relational(C);
    std::vector<int> back(rel.P.size());
    for (int e = 0; e < C.size(); ++e)
        if (rel.map[e] >= 0) back[rel.map[e]] = e;
    std::set<int> w;
    for (int x : W) {
        if (x < 0 || x >= rel.P.size()) throw DomainError("psi: id out of range");
        w.insert(back[x]);
    }
    std::set<int> out = w;
    for (const auto& [t, y] : C.f) {
        bool in = true;
        for (int e : t) in = in && w.count(e);
        if (in) out.insert(y);
    }
    return {out.begin(), out.end()};
}

// ---------- Ramsey arrow ----------

struct ArrowResult {
    bool holds = false;
    std::vector<int> coloring;                 // colour of each embedding of A into C, when !holds
    std::vector<std::vector<int>> a_embeddings;  // A -> C
    uint64_t b_copies = 0;
    uint64_t examined = 0;
    uint64_t space = 0;  // n^|emb(A,C)|, saturated
    std::string method;
};

namespace detail {

inline std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> r(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
    return r;
}

inline bool has_mono_copy(const std::vector<std::vector<int>>& copies, const std::vector<int>& col) {
    for (const auto& c : copies) {
        bool mono = true;
        for (size_t i = 1; i < c.size(); ++i) mono = mono && col[c[i]] == col[c[0]];
        if (mono) return true;
    }
    return false;
}

inline ArrowResult arrow_core(std::vector<std::vector<int>> embAC, const std::vector<std::vector<int>>& embBC,
                              const std::vector<std::vector<int>>& embAB, int n, uint64_t budget) {
    if (n < 1) throw DomainError("ramsey: need at least one colour");
    ArrowResult res;
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < embAC.size(); ++i) index[embAC[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> copies;
    for (const auto& beta : embBC) {
        std::vector<int> c;
        for (const auto& alpha : embAB) c.push_back(index.at(compose(beta, alpha)));
        std::sort(c.begin(), c.end());
        copies.push_back(c);
    }
    res.b_copies = copies.size();
    res.a_embeddings = embAC;
    const int E = static_cast<int>(embAC.size());
    res.space = sat_pow(n, E, UINT64_MAX - 1);
    if (copies.empty()) {
        res.holds = false;
        res.coloring.assign(E, 0);
        res.method = "no-copy";
        return res;
    }
    for (const auto& c : copies)
        if (c.size() <= 1) {
            res.holds = true;
            res.method = "trivial";
            return res;
        }

    const uint64_t space = sat_pow(n, E, uint64_t(1) << 22);
    if (space <= (uint64_t(1) << 22)) {
        // reflected n-ary Gray code; one colour changes per step
        res.method = "gray";
        std::vector<std::vector<int>> cnt(copies.size(), std::vector<int>(n, 0));
        std::vector<std::vector<int>> member(E);
        for (size_t c = 0; c < copies.size(); ++c)
            for (int x : copies[c]) member[x].push_back(static_cast<int>(c));
        std::vector<int> col(E, 0), digits(E);
        int64_t mono = static_cast<int64_t>(copies.size());
        for (size_t c = 0; c < copies.size(); ++c) cnt[c][0] = static_cast<int>(copies[c].size());
        auto gray = [&](uint64_t i) {
            for (int d = E - 1; d >= 0; --d) {
                digits[d] = static_cast<int>(i % n);
                i /= n;
            }
            int parity = 0;
            std::vector<int> g(E);
            for (int d = 0; d < E; ++d) {
                g[d] = parity % 2 ? n - 1 - digits[d] : digits[d];
                parity += digits[d];
            }
            return g;
        };
        for (uint64_t i = 0; i < space; ++i) {
            if (i > 0) {
                auto g = gray(i);
                for (int x = 0; x < E; ++x) {
                    if (g[x] == col[x]) continue;
                    for (int c : member[x]) {
                        int sz = static_cast<int>(copies[c].size());
                        if (cnt[c][col[x]]-- == sz) --mono;
                        if (++cnt[c][g[x]] == sz) ++mono;
                    }
                    col[x] = g[x];
                }
            }
            if (++res.examined > budget) throw BudgetError("ramsey: exceeded budget of " + std::to_string(budget) + " colourings");
            if (mono == 0) {
                if (has_mono_copy(copies, col)) throw std::logic_error("ramsey: incremental count disagrees with direct check");
                res.holds = false;
                res.coloring = col;
                return res;
            }
        }
        res.holds = true;
        return res;
    }

    // backtracking with colour-symmetry breaking; a copy is checked once its last member is coloured
    res.method = "backtrack";
    std::vector<std::vector<int>> closing(E);
    for (size_t c = 0; c < copies.size(); ++c) closing[copies[c].back()].push_back(static_cast<int>(c));
    std::vector<int> col(E, -1);
    std::function<bool(int, int)> go = [&](int x, int used) -> bool {
        if (++res.examined > budget) throw BudgetError("ramsey: exceeded budget of " + std::to_string(budget) + " search nodes");
        if (x == E) return true;
        for (int c = 0; c < std::min(n, used + 1); ++c) {
            col[x] = c;
            bool bad = false;
            for (int cp : closing[x]) {
                bool mono = true;
                for (int y : copies[cp]) mono = mono && col[y] == c;
                if (mono) {
                    bad = true;
                    break;
                }
            }
            if (!bad && go(x + 1, std::max(used, c + 1))) return true;
        }
        col[x] = -1;
        return false;
    };
    if (go(0, 0)) {
        if (has_mono_copy(copies, col)) throw std::logic_error("ramsey: backtracking produced an invalid colouring");
        res.holds = false;
        res.coloring = col;
    } else {
        res.holds = true;
    }
    return res;
}

}  // namespace detail

inline ArrowResult ramsey_arrow(const TkModel& C, const TkModel& B, const TkModel& A, int n, uint64_t budget = 100'000'000) {
    return detail::arrow_core(find_embeddings(A, C), find_embeddings(B, C), find_embeddings(A, B), n, budget);
}

inline ArrowResult ramsey_arrow(const FnStructure& C, const FnStructure& B, const FnStructure& A, int n, uint64_t budget = 100'000'000) {
    for (const auto* X : {&A, &B, &C}) require_class(*X, FnClass::OrderedRk, "ramsey input");
    return detail::arrow_core(find_fn_embeddings(A, C), find_fn_embeddings(B, C), find_fn_embeddings(A, B), n, budget);
}

// k = 1 encoding of an n-element chain: P_1 = chain, P_2 empty.
inline TkModel chain_model(int n) {
    TkModel M;
    M.k = 1;
    M.part_sizes = {n, 0};
    for (int i = 0; i < n; ++i) M.qorder.push_back({i});
    return M;
}

}  // namespace fopk
