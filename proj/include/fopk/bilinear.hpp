#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coding.hpp"
#include "common.hpp"

namespace fopk {

using Vec = std::vector<int>;
using Mat = std::vector<Vec>;

enum class Symmetry { Alternating, Symmetric, None };

inline std::string symmetry_name(Symmetry s) {
    switch (s) {
        case Symmetry::Alternating: return "alternating";
        case Symmetry::Symmetric: return "symmetric";
        default: return "none";
    }
}
inline Symmetry parse_symmetry(const std::string& s) {
    if (s == "alternating") return Symmetry::Alternating;
    if (s == "symmetric") return Symmetry::Symmetric;
    if (s == "none") return Symmetry::None;
    throw ParseError("unknown symmetry '" + s + "'");
}

// ---------- F_p ----------

inline int modp(long long x, int p) {
    long long r = x % p;
    return static_cast<int>(r < 0 ? r + p : r);
}
inline int pow_mod(long long b, long long e, int p) {
    long long r = 1;
    b = modp(b, p);
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<int>(r);
}
inline int inv_mod(int a, int p) {
    a = modp(a, p);
    return a == 0 ? 0 : pow_mod(a, p - 2, p);  // inv(0)=0 by convention
}
inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}
// smallest s with s^2 = a, if any
inline std::optional<int> sqrt_mod(int a, int p) {
    a = modp(a, p);
    for (int s = 0; s < p; ++s)
        if (static_cast<long long>(s) * s % p == a) return s;
    return std::nullopt;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(Mat& m, int p, int ncols = -1) {
    std::vector<int> piv;
    if (m.empty()) return piv;
    int cols = ncols < 0 ? static_cast<int>(m[0].size()) : ncols;
    size_t row = 0;
    for (int c = 0; c < cols && row < m.size(); ++c) {
        size_t sel = row;
        while (sel < m.size() && m[sel][c] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[row]);
        int iv = inv_mod(m[row][c], p);
        for (auto& x : m[row]) x = static_cast<int>(static_cast<long long>(x) * iv % p);
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][c] == 0) continue;
            long long f = m[r][c];
            for (size_t j = 0; j < m[r].size(); ++j) m[r][j] = modp(m[r][j] - f * m[row][j], p);
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

inline int rank_of(const std::vector<Vec>& rows, int p) {
    Mat m = rows;
    return static_cast<int>(rref(m, p).size());
}

struct LinearSolution {
    Vec particular;           // free variables set to 0
    std::vector<Vec> kernel;  // one basis vector per free variable, in column order
};

// Solves A x = b over F_p.
inline std::optional<LinearSolution> solve_linear(const Mat& A, const Vec& b, int nvars, int p) {
    Mat m;
    for (size_t i = 0; i < A.size(); ++i) {
        Vec row = A[i];
        row.push_back(modp(b[i], p));
        m.push_back(std::move(row));
    }
    std::vector<int> piv = rref(m, p, nvars);
    for (size_t r = piv.size(); r < m.size(); ++r)
        if (m[r][nvars] != 0) return std::nullopt;
    LinearSolution s;
    s.particular.assign(nvars, 0);
    std::vector<char> is_piv(nvars, 0);
    for (size_t r = 0; r < piv.size(); ++r) {
        s.particular[piv[r]] = m[r][nvars];
        is_piv[piv[r]] = 1;
    }
    for (int fcol = 0; fcol < nvars; ++fcol) {
        if (is_piv[fcol]) continue;
        Vec k(nvars, 0);
        k[fcol] = 1;
        for (size_t r = 0; r < piv.size(); ++r) k[piv[r]] = modp(-m[r][fcol], p);
        s.kernel.push_back(std::move(k));
    }
    return s;
}

// ---------- form space ----------

struct FormSpace {
    int p = 3;
    int dim = 0;
    int arity = 2;
    std::vector<int> tensor;  // row-major over [dim]^arity
    Symmetry symmetry = Symmetry::None;

    size_t cells() const { return static_cast<size_t>(ipow_sat(dim, arity)); }
    static long long ipow_sat(long long b, int e) {
        long long r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }
    int at(const Tuple& idx) const {
        size_t o = 0;
        for (int i : idx) o = o * dim + i;
        return tensor[o];
    }
};

inline void check_space(const FormSpace& S) {
    if (!is_prime(S.p)) throw DomainError("form space: p=" + std::to_string(S.p) + " is not prime");
    if (S.symmetry == Symmetry::Symmetric && S.p == 2) throw DomainError("form space: symmetric forms need char != 2");
    if (S.arity < 2) throw DomainError("form space: arity must be >= 2");
    if (S.dim < 0) throw DomainError("form space: negative dim");
    if (S.tensor.size() != S.cells())
        throw DomainError("form space: tensor has " + std::to_string(S.tensor.size()) + " entries, expected " +
                          std::to_string(S.cells()));
    for (int x : S.tensor)
        if (x < 0 || x >= S.p) throw DomainError("form space: tensor entry out of range");
    if (S.symmetry == Symmetry::None) return;
    bool ok = true;
    for_each_product(S.arity, S.dim, [&](const Tuple& t) {
        for (int i = 0; i + 1 < S.arity; ++i) {
            Tuple s = t;
            std::swap(s[i], s[i + 1]);
            int a = S.at(t), b = S.at(s);
            if (S.symmetry == Symmetry::Symmetric && a != b) ok = false;
            if (S.symmetry == Symmetry::Alternating) {
                if (t[i] == t[i + 1] && a != 0) ok = false;
                if (modp(a + b, S.p) != 0) ok = false;
            }
        }
        return ok;
    });
    if (!ok) throw DomainError("form space: tensor is not " + symmetry_name(S.symmetry));
}

inline void check_vec(const FormSpace& S, const Vec& v, const char* what) {
    if (static_cast<int>(v.size()) != S.dim)
        throw DomainError(std::string(what) + ": vector length " + std::to_string(v.size()) + " != dim " +
                          std::to_string(S.dim));
    for (int x : v)
        if (x < 0 || x >= S.p) throw DomainError(std::string(what) + ": coordinate out of range");
}

// f(v_1,...,v_k), contracting the tensor one slot at a time
inline int eval_form(const FormSpace& S, const std::vector<Vec>& args) {
    std::vector<long long> cur(S.tensor.begin(), S.tensor.end());
    for (int slot = 0; slot < S.arity; ++slot) {
        size_t rest = cur.size() / S.dim;
        std::vector<long long> nxt(rest, 0);
        const Vec& v = args[slot];
        for (int i = 0; i < S.dim; ++i) {
            if (v[i] == 0) continue;
            for (size_t r = 0; r < rest; ++r) nxt[r] = (nxt[r] + v[i] * cur[i * rest + r]) % S.p;
        }
        cur = std::move(nxt);
    }
    return cur.empty() ? 0 : modp(cur[0], S.p);
}

inline int beta(const FormSpace& S, const Vec& a, const Vec& b) { return eval_form(S, {a, b}); }

inline Vec unit(int dim, int i) {
    Vec e(dim, 0);
    e[i] = 1;
    return e;
}
inline Vec vadd(const Vec& a, const Vec& b, int p) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = modp(a[i] + b[i], p);
    return r;
}
inline Vec vscale(int c, const Vec& a, int p) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = modp(static_cast<long long>(c) * a[i], p);
    return r;
}
inline Vec combo(const std::vector<Vec>& vs, const Vec& coef, int dim, int p) {
    Vec r(dim, 0);
    for (size_t j = 0; j < vs.size(); ++j) r = vadd(r, vscale(coef[j], vs[j], p), p);
    return r;
}

// Gram matrix of a bilinear form on a list of vectors
inline Mat gram(const FormSpace& S, const std::vector<Vec>& vs) {
    Mat g(vs.size(), Vec(vs.size()));
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = 0; j < vs.size(); ++j) g[i][j] = beta(S, vs[i], vs[j]);
    return g;
}

inline bool non_degenerate(const FormSpace& S) {
    if (S.arity != 2) return false;
    Mat m(S.dim, Vec(S.dim));
    for (int i = 0; i < S.dim; ++i)
        for (int j = 0; j < S.dim; ++j) m[i][j] = S.tensor[i * S.dim + j];
    return static_cast<int>(rref(m, S.p).size()) == S.dim;
}

// boldface f over a tuple: values at all index vectors in [n]^k, lexicographic
inline std::vector<int> f_tuple(const FormSpace& S, const std::vector<Vec>& vs) {
    std::vector<int> out;
    for_each_product(S.arity, static_cast<int>(vs.size()), [&](const Tuple& t) {
        std::vector<Vec> args;
        for (int i : t) args.push_back(vs[i]);
        out.push_back(eval_form(S, args));
    });
    return out;
}

// ---------- g_{n,i} ----------

inline Vec g_coords(const FormSpace& S, const std::vector<Vec>& vs, const Vec& w) {
    int n = static_cast<int>(vs.size());
    Vec zero(n, 0);
    if (rank_of(vs, S.p) < n) return zero;
    // columns are the v_j
    Mat A(S.dim, Vec(n));
    for (int i = 0; i < S.dim; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = vs[j][i];
    auto sol = solve_linear(A, w, n, S.p);
    if (!sol) return zero;
    return sol->particular;
}

struct Substructure {
    std::vector<Vec> v_basis;  // RREF rows spanning V-part
    long long v_size = 1;      // p^rank
    int field_size = 0;        // always p
};

inline Substructure generated_substructure(const FormSpace& S, const std::vector<Vec>& vs, const Vec& as) {
    for (const auto& v : vs) check_vec(S, v, "generated_substructure");
    for (int a : as)
        if (a < 0 || a >= S.p) throw DomainError("generated_substructure: field element out of range");
    Substructure r;
    Mat m = vs;
    auto piv = rref(m, S.p, S.dim);
    for (size_t i = 0; i < piv.size(); ++i) r.v_basis.push_back(m[i]);
    for (size_t i = 0; i < piv.size(); ++i) r.v_size *= S.p;
    r.field_size = S.p;
    return r;
}

// ---------- generic-form algorithms ----------

inline void require_bilinear_nondeg(const FormSpace& S, const char* what) {
    if (S.arity != 2) throw DomainError(std::string(what) + ": needs k=2");
    if (!non_degenerate(S)) throw DomainError(std::string(what) + ": degenerate form");
}

// v with beta(v, w_i) = a_i
inline Vec solve_form_values(const FormSpace& S, const std::vector<Vec>& ws, const Vec& as) {
    require_bilinear_nondeg(S, "solve_form_values");
    if (ws.size() != as.size()) throw DomainError("solve_form_values: |w| != |a|");
    for (const auto& w : ws) check_vec(S, w, "solve_form_values");
    if (rank_of(ws, S.p) < static_cast<int>(ws.size())) throw DomainError("solve_form_values: dependent w");
    Mat A(ws.size(), Vec(S.dim, 0));
    for (size_t i = 0; i < ws.size(); ++i)
        for (int a = 0; a < S.dim; ++a) {
            long long s = 0;
            for (int b = 0; b < S.dim; ++b) s += static_cast<long long>(S.tensor[a * S.dim + b]) * ws[i][b];
            A[i][a] = modp(s, S.p);
        }
    Vec rhs(as.size());
    for (size_t i = 0; i < as.size(); ++i) rhs[i] = modp(as[i], S.p);
    auto sol = solve_linear(A, rhs, S.dim, S.p);
    if (!sol) throw DomainError("solve_form_values: no solution");  // unreachable for non-degenerate forms
    for (size_t i = 0; i < ws.size(); ++i)
        if (beta(S, sol->particular, ws[i]) != rhs[i]) throw Error("internal", "solve_form_values: verification failed");
    return sol->particular;
}

inline bool is_standard_generic_tensor(const FormSpace& S) {
    size_t idx = 0;
    bool ok = true;
    for_each_product(S.arity, S.dim, [&](const Tuple& t) {
        bool diag = std::all_of(t.begin(), t.end(), [&](int x) { return x == t[0]; });
        if (S.tensor[idx++] != (diag ? 1 : 0)) ok = false;
    });
    return ok;
}

// v[t][j] with f(v[0][j_1],...,v[k-1][j_k]) = sigma(j_1..j_k); sigma row-major over [n]^k
using GramArrays = std::vector<std::vector<Vec>>;

inline bool gram_realized(const FormSpace& S, const GramArrays& v, int n, const std::vector<int>& sigma) {
    size_t idx = 0;
    bool ok = true;
    for_each_product(S.arity, n, [&](const Tuple& t) {
        std::vector<Vec> args;
        for (int s = 0; s < S.arity; ++s) args.push_back(v[s][t[s]]);
        if (eval_form(S, args) != modp(sigma[idx++], S.p)) ok = false;
        return ok;
    });
    return ok;
}

inline GramArrays realize_gram(const FormSpace& S, int n, const std::vector<int>& sigma) {
    check_space(S);
    if (n < 0) throw DomainError("realize_gram: negative n");
    long long cells = FormSpace::ipow_sat(n, S.arity);
    if (static_cast<long long>(sigma.size()) != cells)
        throw DomainError("realize_gram: sigma has " + std::to_string(sigma.size()) + " entries, expected " +
                          std::to_string(cells));
    int k = S.arity;
    GramArrays v(k, std::vector<Vec>(n, Vec(S.dim, 0)));
    if (k == 2 && non_degenerate(S)) {
        if (S.dim < n) throw CapacityError("realize_gram: dim " + std::to_string(S.dim) + " < n " + std::to_string(n));
        std::vector<Vec> es;
        for (int j = 0; j < n; ++j) es.push_back(unit(S.dim, j));
        v[1] = es;
        for (int i = 0; i < n; ++i) {
            Vec row(sigma.begin() + i * n, sigma.begin() + (i + 1) * n);
            v[0][i] = solve_form_values(S, es, row);
        }
    } else if (is_standard_generic_tensor(S)) {
        // coordinates indexed by (j_2..j_k) in [n]^{k-1}
        long long need = FormSpace::ipow_sat(n, k - 1);
        if (S.dim < need)
            throw CapacityError("realize_gram: diagonal tensor needs dim >= n^(k-1) = " + std::to_string(need));
        long long a = 0;
        for_each_product(k - 1, n, [&](const Tuple& rest) {
            for (int t = 1; t < k; ++t) v[t][rest[t - 1]][a] = 1;
            for (int j1 = 0; j1 < n; ++j1) {
                size_t o = j1;
                for (int x : rest) o = o * n + x;
                v[0][j1][a] = modp(sigma[o], S.p);
            }
            ++a;
        });
    } else if (k == 2) {
        throw DomainError("realize_gram: degenerate form");
    } else {
        throw DomainError("realize_gram: unsupported tensor for k>2 (only the diagonal tensor)");
    }
    if (!gram_realized(S, v, n, sigma)) throw Error("internal", "realize_gram: verification failed");
    return v;
}

// ---------- canonical bases ----------

enum class BasisMode { Symplectic, Orthonormal };

inline BasisMode parse_basis_mode(const std::string& s) {
    if (s == "symplectic") return BasisMode::Symplectic;
    if (s == "orthonormal") return BasisMode::Orthonormal;
    throw ParseError("unknown basis mode '" + s + "'");
}

// symplectic: interleaved (e_1,f_1,e_2,f_2,...) blocks [[0,1],[-1,0]]
inline bool is_standard_gram(const Mat& g, BasisMode mode, int p) {
    size_t n = g.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            int want = 0;
            if (mode == BasisMode::Orthonormal) want = i == j;
            else if (i % 2 == 0 && j == i + 1) want = 1;
            else if (j % 2 == 0 && i == j + 1) want = p - 1;
            if (g[i][j] != want) return false;
        }
    return true;
}

inline bool standard_gram_exact(const FormSpace& S, const std::vector<Vec>& basis, BasisMode mode) {
    return is_standard_gram(gram(S, basis), mode, S.p);
}

inline std::vector<Vec> canonical_basis(const FormSpace& S, BasisMode mode) {
    check_space(S);
    if (S.arity != 2) throw DomainError("canonical_basis: needs k=2");
    if (!non_degenerate(S)) throw DomainError("canonical_basis: degenerate form");
    int p = S.p;
    std::vector<Vec> pool;
    for (int i = 0; i < S.dim; ++i) pool.push_back(unit(S.dim, i));
    std::vector<Vec> out;
    if (mode == BasisMode::Symplectic) {
        if (S.symmetry != Symmetry::Alternating) throw DomainError("canonical_basis: symplectic needs an alternating form");
        if (S.dim % 2) throw DomainError("canonical_basis: odd dimension");
        while (!pool.empty()) {
            Vec e = pool[0];
            size_t partner = 0;
            int c = 0;
            for (size_t j = 1; j < pool.size(); ++j)
                if ((c = beta(S, e, pool[j])) != 0) {
                    partner = j;
                    break;
                }
            if (partner == 0) throw Error("internal", "canonical_basis: no partner in a non-degenerate space");
            Vec f = vscale(inv_mod(c, p), pool[partner], p);
            std::vector<Vec> rest;
            for (size_t j = 1; j < pool.size(); ++j) {
                if (j == partner) continue;
                const Vec& w = pool[j];
                Vec x = vadd(w, vscale(modp(-beta(S, w, f), p), e, p), p);
                x = vadd(x, vscale(beta(S, w, e), f, p), p);
                rest.push_back(x);
            }
            out.push_back(e);
            out.push_back(f);
            pool = std::move(rest);
        }
    } else {
        if (S.symmetry != Symmetry::Symmetric) throw DomainError("canonical_basis: orthonormal needs a symmetric form");
        if (p == 2) throw DomainError("canonical_basis: char 2");
        int nonsq = 2;
        while (sqrt_mod(nonsq, p)) ++nonsq;
        // orthogonal basis with norms 1 or nonsq
        std::vector<Vec> ones, twos;
        while (!pool.empty()) {
            std::optional<Vec> pick;
            for (const auto& x : pool)
                if (beta(S, x, x) != 0) { pick = x; break; }
            for (size_t i = 0; i < pool.size() && !pick; ++i)
                for (size_t j = i + 1; j < pool.size() && !pick; ++j) {
                    Vec x = vadd(pool[i], pool[j], p);
                    if (beta(S, x, x) != 0) pick = x;
                }
            if (!pick) throw Error("internal", "canonical_basis: no anisotropic vector");
            Vec x = *pick;
            int q = beta(S, x, x);
            int iq = inv_mod(q, p);
            Mat proj;
            for (const auto& w : pool) proj.push_back(vadd(w, vscale(modp(-beta(S, w, x) * iq, p), x, p), p));
            std::vector<Vec> rest;
            for (const auto& w : proj) {
                rest.push_back(w);
                if (rank_of(rest, p) < static_cast<int>(rest.size())) rest.pop_back();
            }
            pool = std::move(rest);
            if (auto r = sqrt_mod(q, p)) {
                ones.push_back(vscale(inv_mod(*r, p), x, p));
            } else {
                auto r2 = sqrt_mod(modp(static_cast<long long>(q) * inv_mod(nonsq, p), p), p);
                twos.push_back(vscale(inv_mod(*r2, p), x, p));
            }
        }
        if (twos.size() % 2) throw DomainError("canonical_basis: square root unavailable");
        // a^2 + b^2 = 1/nonsq turns two nonsq entries into two unit entries
        int target = inv_mod(nonsq, p), ca = -1, cb = -1;
        for (int x = 0; x < p && ca < 0; ++x)
            for (int y = 0; y < p; ++y)
                if (modp(x * x + y * y, p) == target) { ca = x; cb = y; break; }
        for (size_t i = 0; i + 1 < twos.size(); i += 2) {
            const Vec &u = twos[i], &v = twos[i + 1];
            ones.push_back(vadd(vscale(ca, u, p), vscale(cb, v, p), p));
            ones.push_back(vadd(vscale(modp(-cb, p), u, p), vscale(ca, v, p), p));
        }
        out = std::move(ones);
    }
    if (!standard_gram_exact(S, out, mode)) throw Error("internal", "canonical_basis: verification failed");
    return out;
}

// ---------- terms ----------

enum class Sort { V, F, Unknown };

struct Term {
    enum Op { Var, Form, AddV, MulV, AddF, MulF, NegF, InvF, ZeroV, ZeroF, OneF, U };
    Op op = Var;
    std::string name;     // Var
    Tuple u;              // U: 1-based indices into the V-variable list
    std::vector<Term> kids;
};

inline std::string op_token(Term::Op op) {
    switch (op) {
        case Term::Form: return "f";
        case Term::AddV: return "+v";
        case Term::MulV: return "*v";
        case Term::AddF: return "+f";
        case Term::MulF: return "*f";
        case Term::NegF: return "-f";
        case Term::InvF: return "inv";
        default: return "";
    }
}

inline std::string u_name(const Tuple& u) {
    std::string s = "u";
    for (int i : u) s += "_" + std::to_string(i);
    return s;
}

inline std::string term_str(const Term& t) {
    switch (t.op) {
        case Term::Var: return t.name;
        case Term::ZeroV: return "0v";
        case Term::ZeroF: return "0f";
        case Term::OneF: return "1f";
        case Term::U: return u_name(t.u);
        default: break;
    }
    std::string s = "(" + op_token(t.op);
    for (const auto& k : t.kids) s += " " + term_str(k);
    return s + ")";
}

namespace detail {

struct TermParser {
    const std::string& s;
    size_t i = 0;
    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    std::string atom() {
        size_t b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')') ++i;
        return s.substr(b, i - b);
    }
    Term parse() {
        ws();
        if (i >= s.size()) throw ParseError("term: unexpected end");
        if (s[i] == ')') throw ParseError("term: unexpected ')'");
        if (s[i] != '(') {
            std::string a = atom();
            Term t;
            if (a == "0v") t.op = Term::ZeroV;
            else if (a == "0f") t.op = Term::ZeroF;
            else if (a == "1f") t.op = Term::OneF;
            else {
                if (a == "f" || a == "+v" || a == "*v" || a == "+f" || a == "*f" || a == "-f" || a == "inv")
                    throw ParseError("term: operator '" + a + "' used as a variable");
                bool ok = !a.empty() && (std::isalpha(static_cast<unsigned char>(a[0])) || a[0] == '_');
                for (char c : a) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
                if (!ok) throw ParseError("term: bad identifier '" + a + "'");
                t.name = a;
            }
            return t;
        }
        ++i;
        ws();
        std::string head = atom();
        static const std::map<std::string, std::pair<Term::Op, int>> ops = {
            {"f", {Term::Form, -1}}, {"+v", {Term::AddV, 2}}, {"*v", {Term::MulV, 2}}, {"+f", {Term::AddF, 2}},
            {"*f", {Term::MulF, 2}}, {"-f", {Term::NegF, 1}}, {"inv", {Term::InvF, 1}}};
        auto it = ops.find(head);
        if (it == ops.end()) throw ParseError("term: unknown operator '" + head + "'");
        Term t;
        t.op = it->second.first;
        for (;;) {
            ws();
            if (i >= s.size()) throw ParseError("term: missing ')'");
            if (s[i] == ')') {
                ++i;
                break;
            }
            t.kids.push_back(parse());
        }
        if (it->second.second >= 0 && static_cast<int>(t.kids.size()) != it->second.second)
            throw ParseError("term: '" + head + "' takes " + std::to_string(it->second.second) + " arguments");
        return t;
    }
};

// natural order: split trailing digits
inline bool natural_less(const std::string& a, const std::string& b) {
    auto split = [](const std::string& s) {
        size_t e = s.size();
        while (e > 0 && std::isdigit(static_cast<unsigned char>(s[e - 1]))) --e;
        std::string num = s.substr(e);
        return std::make_pair(s.substr(0, e), num.empty() ? -1LL : std::stoll(num.substr(0, 17)));
    };
    auto x = split(a), y = split(b);
    if (x != y) return x < y;
    return a < b;
}

inline void assign_sort(std::map<std::string, Sort>& m, const std::string& v, Sort s) {
    auto it = m.find(v);
    if (it == m.end()) m[v] = s;
    else if (it->second != s) throw DomainError("term: ill-sorted, variable '" + v + "' used as both V and F");
}

inline void infer(const Term& t, Sort want, std::map<std::string, Sort>& m, int arity) {
    auto need = [&](Sort got) {
        if (want != Sort::Unknown && want != got)
            throw DomainError("term: ill-sorted at " + term_str(t));
    };
    switch (t.op) {
        case Term::Var:
            if (want != Sort::Unknown) assign_sort(m, t.name, want);
            return;
        case Term::ZeroV: need(Sort::V); return;
        case Term::ZeroF:
        case Term::OneF:
        case Term::U: need(Sort::F); return;
        case Term::Form:
            need(Sort::F);
            if (arity > 0 && static_cast<int>(t.kids.size()) != arity)
                throw DomainError("term: f applied to " + std::to_string(t.kids.size()) + " arguments, arity is " +
                                  std::to_string(arity));
            if (t.kids.empty()) throw DomainError("term: f needs arguments");
            for (const auto& k : t.kids) infer(k, Sort::V, m, arity);
            return;
        case Term::AddV:
            need(Sort::V);
            infer(t.kids[0], Sort::V, m, arity);
            infer(t.kids[1], Sort::V, m, arity);
            return;
        case Term::MulV:
            need(Sort::V);
            infer(t.kids[0], Sort::F, m, arity);
            infer(t.kids[1], Sort::V, m, arity);
            return;
        default:
            need(Sort::F);
            for (const auto& k : t.kids) infer(k, Sort::F, m, arity);
    }
}

inline Sort sort_of(const Term& t, const std::map<std::string, Sort>& m) {
    switch (t.op) {
        case Term::Var: {
            auto it = m.find(t.name);
            return it == m.end() ? Sort::F : it->second;
        }
        case Term::ZeroV:
        case Term::AddV:
        case Term::MulV: return Sort::V;
        default: return Sort::F;
    }
}

}  // namespace detail

inline Term parse_term(const std::string& text) {
    detail::TermParser P{text};
    Term t = P.parse();
    P.ws();
    if (P.i != text.size()) throw ParseError("term: trailing input");
    return t;
}

struct SortedTerm {
    std::map<std::string, Sort> sorts;  // a bare top-level variable with no other use defaults to F
    std::vector<std::string> v_vars;    // natural order
    std::vector<std::string> f_vars;
    Sort sort = Sort::F;
};

inline SortedTerm sort_term(const Term& t, int arity = -1) {
    SortedTerm r;
    detail::infer(t, Sort::Unknown, r.sorts, arity);
    if (t.op == Term::Var && !r.sorts.count(t.name)) r.sorts[t.name] = Sort::F;
    for (const auto& [n, s] : r.sorts) (s == Sort::V ? r.v_vars : r.f_vars).push_back(n);
    std::sort(r.v_vars.begin(), r.v_vars.end(), detail::natural_less);
    std::sort(r.f_vars.begin(), r.f_vars.end(), detail::natural_less);
    r.sort = detail::sort_of(t, r.sorts);
    return r;
}

struct Elimination {
    Term result;
    std::vector<std::string> v_vars;
    // u-name -> V-variable names it stands for
    std::vector<std::pair<std::string, std::vector<std::string>>> u_map;
};

namespace detail {

inline Term mk(Term::Op op, std::vector<Term> kids) {
    Term t;
    t.op = op;
    t.kids = std::move(kids);
    return t;
}

inline Term elim(const Term& t, const std::map<std::string, int>& vidx, std::set<Tuple>& used) {
    if (t.op != Term::Form) {
        Term r = t;
        for (auto& k : r.kids) k = elim(k, vidx, used);
        return r;
    }
    for (const auto& a : t.kids)
        if (a.op == Term::ZeroV) return mk(Term::ZeroF, {});
    for (size_t i = 0; i < t.kids.size(); ++i) {
        const Term& a = t.kids[i];
        if (a.op == Term::Var) continue;
        Term left = t, right = t;
        if (a.op == Term::AddV) {
            left.kids[i] = a.kids[0];
            right.kids[i] = a.kids[1];
            return mk(Term::AddF, {elim(left, vidx, used), elim(right, vidx, used)});
        }
        // *v: scalar comes out
        left.kids[i] = a.kids[1];
        return mk(Term::MulF, {elim(a.kids[0], vidx, used), elim(left, vidx, used)});
    }
    Term u;
    u.op = Term::U;
    for (const auto& a : t.kids) u.u.push_back(vidx.at(a.name) + 1);
    used.insert(u.u);
    return u;
}

}  // namespace detail

inline Elimination eliminate_form_terms(const Term& t, int arity = -1) {
    SortedTerm st = sort_term(t, arity);
    std::map<std::string, int> vidx;
    for (size_t i = 0; i < st.v_vars.size(); ++i) vidx[st.v_vars[i]] = static_cast<int>(i);
    std::set<Tuple> used;
    Elimination e;
    e.result = detail::elim(t, vidx, used);
    e.v_vars = st.v_vars;
    for (const auto& u : used) {
        std::vector<std::string> names;
        for (int i : u) names.push_back(st.v_vars[i - 1]);
        e.u_map.emplace_back(u_name(u), names);
    }
    return e;
}

inline bool contains_form(const Term& t) {
    if (t.op == Term::Form) return true;
    for (const auto& k : t.kids)
        if (contains_form(k)) return true;
    return false;
}

struct Value {
    bool is_vec = false;
    int s = 0;
    Vec v;
    bool operator==(const Value& o) const { return is_vec == o.is_vec && (is_vec ? v == o.v : s == o.s); }
};

struct Assignment {
    std::map<std::string, Vec> vecs;
    std::map<std::string, int> scalars;
    std::map<Tuple, int> u;  // U-leaves
};

inline Value eval_term(const FormSpace& S, const Term& t, const Assignment& a) {
    int p = S.p;
    Value r;
    switch (t.op) {
        case Term::Var: {
            auto iv = a.vecs.find(t.name);
            if (iv != a.vecs.end()) {
                r.is_vec = true;
                r.v = iv->second;
                return r;
            }
            auto is = a.scalars.find(t.name);
            if (is == a.scalars.end()) throw DomainError("eval: unassigned variable '" + t.name + "'");
            r.s = modp(is->second, p);
            return r;
        }
        case Term::ZeroV: r.is_vec = true; r.v.assign(S.dim, 0); return r;
        case Term::ZeroF: return r;
        case Term::OneF: r.s = 1 % p; return r;
        case Term::U: {
            auto it = a.u.find(t.u);
            if (it == a.u.end()) throw DomainError("eval: unassigned " + u_name(t.u));
            r.s = it->second;
            return r;
        }
        case Term::Form: {
            std::vector<Vec> args;
            for (const auto& k : t.kids) args.push_back(eval_term(S, k, a).v);
            r.s = eval_form(S, args);
            return r;
        }
        case Term::AddV:
            r.is_vec = true;
            r.v = vadd(eval_term(S, t.kids[0], a).v, eval_term(S, t.kids[1], a).v, p);
            return r;
        case Term::MulV:
            r.is_vec = true;
            r.v = vscale(eval_term(S, t.kids[0], a).s, eval_term(S, t.kids[1], a).v, p);
            return r;
        case Term::AddF: r.s = modp(eval_term(S, t.kids[0], a).s + eval_term(S, t.kids[1], a).s, p); return r;
        case Term::MulF:
            r.s = modp(static_cast<long long>(eval_term(S, t.kids[0], a).s) * eval_term(S, t.kids[1], a).s, p);
            return r;
        case Term::NegF: r.s = modp(-eval_term(S, t.kids[0], a).s, p); return r;
        case Term::InvF: r.s = inv_mod(eval_term(S, t.kids[0], a).s, p); return r;
    }
    return r;
}

// fills a.u with the boldface f-tuple over the V-variables (every index vector, not only the used ones)
inline void bind_f_tuple(const FormSpace& S, const std::vector<std::string>& v_vars, Assignment& a) {
    std::vector<Vec> vs;
    for (const auto& n : v_vars) vs.push_back(a.vecs.at(n));
    std::vector<int> vals = f_tuple(S, vs);
    size_t i = 0;
    for_each_product(S.arity, static_cast<int>(v_vars.size()), [&](const Tuple& t) {
        Tuple u = t;
        for (auto& x : u) ++x;
        a.u[u] = vals[i++];
    });
}

inline Assignment random_assignment(const FormSpace& S, const SortedTerm& st, Rng& rng) {
    Assignment a;
    for (const auto& n : st.v_vars) {
        Vec v(S.dim);
        for (auto& x : v) x = static_cast<int>(rng.below(S.p));
        a.vecs[n] = v;
    }
    for (const auto& n : st.f_vars) a.scalars[n] = static_cast<int>(rng.below(S.p));
    return a;
}

struct SoundnessReport {
    int checked = 0;
    int mismatches = 0;
};

inline SoundnessReport check_elimination(const FormSpace& S, const Term& t, const Elimination& e, int trials,
                                         uint64_t seed) {
    SoundnessReport r;
    SortedTerm st = sort_term(t, S.arity);
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) {
        Assignment a = random_assignment(S, st, rng);
        Value lhs = eval_term(S, t, a);
        bind_f_tuple(S, e.v_vars, a);
        Value rhs = eval_term(S, e.result, a);
        ++r.checked;
        if (!(lhs == rhs)) ++r.mismatches;
    }
    return r;
}

// Random well-sorted term over V-variables v1..nv and F-variables c1..nf.
inline Term random_term(Rng& rng, Sort sort, int depth, int arity, int nv = 3, int nf = 2) {
    using detail::mk;
    auto leaf = [&]() {
        Term t;
        if (sort == Sort::V) {
            if (rng.below(8) == 0) t.op = Term::ZeroV;
            else t.name = "v" + std::to_string(1 + rng.below(nv));
        } else {
            uint64_t c = rng.below(10);
            if (c == 0) t.op = Term::ZeroF;
            else if (c == 1) t.op = Term::OneF;
            else t.name = "c" + std::to_string(1 + rng.below(nf));
        }
        return t;
    };
    if (depth <= 1 || rng.below(4) == 0) return leaf();
    if (sort == Sort::V) {
        if (rng.below(2)) return mk(Term::AddV, {random_term(rng, Sort::V, depth - 1, arity, nv, nf),
                                                 random_term(rng, Sort::V, depth - 1, arity, nv, nf)});
        return mk(Term::MulV, {random_term(rng, Sort::F, depth - 1, arity, nv, nf),
                               random_term(rng, Sort::V, depth - 1, arity, nv, nf)});
    }
    switch (rng.below(5)) {
        case 0: {
            std::vector<Term> args;
            for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, Sort::V, depth - 1, arity, nv, nf));
            return mk(Term::Form, std::move(args));
        }
        case 1: return mk(Term::AddF, {random_term(rng, Sort::F, depth - 1, arity, nv, nf),
                                       random_term(rng, Sort::F, depth - 1, arity, nv, nf)});
        case 2: return mk(Term::MulF, {random_term(rng, Sort::F, depth - 1, arity, nv, nf),
                                       random_term(rng, Sort::F, depth - 1, arity, nv, nf)});
        case 3: return mk(Term::NegF, {random_term(rng, Sort::F, depth - 1, arity, nv, nf)});
        default: return mk(Term::InvF, {random_term(rng, Sort::F, depth - 1, arity, nv, nf)});
    }
}

// ---------- extension pairs ----------

struct ExtensionPair {
    std::vector<int> gram_w;  // m x m row-major
    std::vector<int> d;       // [f(y,y), f(y,w_1..w_m), f(w_1..w_m,y)]
};

inline constexpr long long kExtensionEnumCap = 1LL << 20;

// pair data for (y, ws) read off actual vectors
inline ExtensionPair pair_of(const FormSpace& S, const Vec& y, const std::vector<Vec>& ws) {
    ExtensionPair e;
    for (const auto& a : ws)
        for (const auto& b : ws) e.gram_w.push_back(beta(S, a, b));
    e.d.push_back(beta(S, y, y));
    for (const auto& w : ws) e.d.push_back(beta(S, y, w));
    for (const auto& w : ws) e.d.push_back(beta(S, w, y));
    return e;
}

inline bool realizes_pair(const FormSpace& S, const ExtensionPair& P, const Vec& y, const std::vector<Vec>& ws) {
    std::vector<Vec> all = ws;
    all.push_back(y);
    if (rank_of(all, S.p) < static_cast<int>(all.size())) return false;
    ExtensionPair q = pair_of(S, y, ws);
    for (size_t i = 0; i < P.d.size(); ++i)
        if (modp(P.d[i], S.p) != q.d[i]) return false;
    return true;
}

inline void check_pair(const FormSpace& S, const ExtensionPair& P, const std::vector<Vec>& ws) {
    size_t m = ws.size();
    if (S.arity != 2) throw DomainError("realize_extension_pair: needs k=2");
    for (const auto& w : ws) check_vec(S, w, "realize_extension_pair");
    if (P.gram_w.size() != m * m) throw DomainError("extension pair: gram_w must have m^2 entries");
    if (P.d.size() != 2 * m + 1) throw DomainError("extension pair: d must have 2m+1 entries");
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            if (modp(P.gram_w[i * m + j], S.p) != beta(S, ws[i], ws[j]))
                throw DomainError("extension pair: gram_w does not match the form on w");
    auto d = [&](size_t i) { return modp(P.d[i], S.p); };
    if (S.symmetry == Symmetry::Alternating) {
        if (d(0) != 0) throw InconsistencyError("extension pair: alternating form forces f(y,y)=0");
        for (size_t i = 0; i < m; ++i)
            if (modp(d(1 + i) + d(1 + m + i), S.p) != 0)
                throw InconsistencyError("extension pair: alternating form forces f(y,w)=-f(w,y)");
    } else if (S.symmetry == Symmetry::Symmetric) {
        for (size_t i = 0; i < m; ++i)
            if (d(1 + i) != d(1 + m + i)) throw InconsistencyError("extension pair: symmetric form forces f(y,w)=f(w,y)");
    }
}

inline std::optional<Vec> realize_extension_pair(const FormSpace& S, const ExtensionPair& P,
                                                 const std::vector<Vec>& ws) {
    check_space(S);
    check_pair(S, P, ws);
    size_t m = ws.size();
    if (rank_of(ws, S.p) < static_cast<int>(m)) throw DomainError("realize_extension_pair: dependent w");
    // linear part: beta(y,w_i), beta(w_i,y)
    Mat A;
    Vec rhs;
    for (size_t i = 0; i < m; ++i) {
        Vec row(S.dim, 0);
        for (int a = 0; a < S.dim; ++a) {
            long long s = 0;
            for (int b = 0; b < S.dim; ++b) s += static_cast<long long>(S.tensor[a * S.dim + b]) * ws[i][b];
            row[a] = modp(s, S.p);
        }
        A.push_back(row);
        rhs.push_back(P.d[1 + i]);
    }
    for (size_t i = 0; i < m; ++i) {
        Vec row(S.dim, 0);
        for (int b = 0; b < S.dim; ++b) {
            long long s = 0;
            for (int a = 0; a < S.dim; ++a) s += static_cast<long long>(ws[i][a]) * S.tensor[a * S.dim + b];
            row[b] = modp(s, S.p);
        }
        A.push_back(row);
        rhs.push_back(P.d[1 + m + i]);
    }
    auto sol = solve_linear(A, rhs, S.dim, S.p);
    if (!sol) return std::nullopt;
    int nk = static_cast<int>(sol->kernel.size());
    long long space = 1;
    for (int i = 0; i < nk; ++i) {
        space *= S.p;
        if (space > kExtensionEnumCap) throw CapacityError("realize_extension_pair: solution space too large to scan");
    }
    std::optional<Vec> found;
    for_each_product(nk, S.p, [&](const Tuple& c) {
        Vec y = vadd(sol->particular, combo(sol->kernel, c, S.dim, S.p), S.p);
        if (realizes_pair(S, P, y, ws)) found = y;
        return !found;
    });
    return found;
}

// exhaustive oracle over F_p^dim
inline std::optional<Vec> realize_extension_pair_brute(const FormSpace& S, const ExtensionPair& P,
                                                       const std::vector<Vec>& ws) {
    std::optional<Vec> found;
    for_each_product(S.dim, S.p, [&](const Tuple& y) {
        if (realizes_pair(S, P, y, ws)) found = y;
        return !found;
    });
    return found;
}

// ---------- field order -> FOP witness data ----------

struct FieldFopResult {
    GramArrays c;                  // c[t][i]
    std::vector<int> d;            // d_j = j (0-based indices into b)
    std::vector<int> labels;       // per cell of [N]^k, 1..s
    int N = 0, s = 0, k = 2;
    std::vector<std::vector<bool>> psi;
};

// psi(j, x): x = b_u for some u with j <= u
inline bool field_psi(const std::vector<int>& b, const std::vector<std::vector<bool>>& psi, int j, int x) {
    for (size_t u = 0; u < b.size(); ++u)
        if (b[u] == x) return psi[j][u];
    return false;
}

inline bool verify_field_fop(const FormSpace& S, const std::vector<int>& b, const FieldFopResult& r) {
    size_t idx = 0;
    bool ok = true;
    for_each_product(S.arity, r.N, [&](const Tuple& t) {
        std::vector<Vec> args;
        for (int i = 0; i < S.arity; ++i) args.push_back(r.c[i][t[i]]);
        int x = eval_form(S, args);
        int lab = r.labels[idx++];
        for (int j = 0; j < r.s; ++j)
            if (field_psi(b, r.psi, j, x) != (lab >= j + 1)) ok = false;
        return ok;
    });
    return ok;
}

inline FieldFopResult fop_from_field_order(const FormSpace& S, const std::vector<int>& b, int N,
                                           const std::vector<int>& labels,
                                           const std::vector<std::vector<bool>>& psi) {
    check_space(S);
    int s = static_cast<int>(b.size());
    if (s < 1) throw DomainError("fop_from_field_order: need s >= 1");
    std::set<int> seen;
    for (int x : b) {
        if (x < 0 || x >= S.p) throw DomainError("fop_from_field_order: b value out of range");
        if (!seen.insert(x).second) throw DomainError("fop_from_field_order: b values must be distinct");
    }
    if (static_cast<long long>(labels.size()) != FormSpace::ipow_sat(N, S.arity))
        throw DomainError("fop_from_field_order: labels must cover [N]^k");
    for (int l : labels)
        if (l < 1 || l > s) throw DomainError("fop_from_field_order: label out of 1..s");
    if (static_cast<int>(psi.size()) != s) throw DomainError("fop_from_field_order: psi_table must be s x s");
    for (int j = 0; j < s; ++j) {
        if (static_cast<int>(psi[j].size()) != s) throw DomainError("fop_from_field_order: psi_table must be s x s");
        for (int u = 0; u < s; ++u)
            if (psi[j][u] != (j <= u)) throw DomainError("fop_from_field_order: psi_table must satisfy psi(j,u) <=> j<=u");
    }
    std::vector<int> sigma;
    for (int l : labels) sigma.push_back(b[l - 1]);
    FieldFopResult r;
    r.c = realize_gram(S, N, sigma);
    r.N = N;
    r.s = s;
    r.k = S.arity;
    r.labels = labels;
    r.psi = psi;
    for (int j = 0; j < s; ++j) r.d.push_back(j);
    if (!verify_field_fop(S, b, r)) throw Error("internal", "fop_from_field_order: verification failed");
    return r;
}

// Hypergraph on X_t = the N vectors c^t (t <= k) and X_{k+1} = the s indices d_j,
// with an edge exactly when psi(d_j, f(c^1_{i_1},...,c^k_{i_k})).
inline PartiteHypergraph field_fop_hypergraph(const FormSpace& S, const std::vector<int>& b, const FieldFopResult& r) {
    PartiteHypergraph E;
    E.k = r.k;
    E.part_sizes.assign(r.k, r.N);
    E.part_sizes.push_back(r.s);
    for_each_product(r.k, r.N, [&](const Tuple& t) {
        std::vector<Vec> args;
        for (int i = 0; i < r.k; ++i) args.push_back(r.c[i][t[i]]);
        int x = eval_form(S, args);
        for (int j = 0; j < r.s; ++j)
            if (field_psi(b, r.psi, j, x)) {
                Tuple e = t;
                e.push_back(j);
                E.edges.push_back(e);
            }
    });
    check_hypergraph(E);
    return E;
}

inline Witness field_fop_witness(const FieldFopResult& r) {
    Witness w;
    w.format = WFormat::Partition;
    w.k = r.k;
    w.n = r.N;
    w.s = r.s;
    w.labels = r.labels;
    std::vector<int> id(r.N);
    for (int i = 0; i < r.N; ++i) id[i] = i;
    w.seq.assign(r.k, id);
    w.bpart = r.d;
    return w;
}

// ---------- induced maps ----------

// sum a_i v_i -> sum a_i w_i preserves f on all of span(v)^k (exhaustive)
inline bool induced_map_preserves_form(const FormSpace& S1, const FormSpace& S2, const std::vector<Vec>& vs,
                                       const std::vector<Vec>& ws) {
    if (S1.p != S2.p || S1.arity != S2.arity || vs.size() != ws.size()) return false;
    int n = static_cast<int>(vs.size());
    int p = S1.p, k = S1.arity;
    std::vector<Vec> coefs;
    for_each_product(n, p, [&](const Tuple& c) { coefs.push_back(c); });
    std::vector<Vec> img1, img2;
    for (const auto& c : coefs) {
        img1.push_back(combo(vs, c, S1.dim, p));
        img2.push_back(combo(ws, c, S2.dim, p));
    }
    bool ok = true;
    for_each_product(k, static_cast<int>(coefs.size()), [&](const Tuple& t) {
        std::vector<Vec> a1, a2;
        for (int i : t) {
            a1.push_back(img1[i]);
            a2.push_back(img2[i]);
        }
        if (eval_form(S1, a1) != eval_form(S2, a2)) ok = false;
        return ok;
    });
    return ok;
}

}  // namespace fopk
