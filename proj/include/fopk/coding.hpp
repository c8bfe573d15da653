#pragma once

#include <functional>

#include "tk_model.hpp"

namespace fopk {

struct PartiteHypergraph {
    int k = 1;
    std::vector<int> part_sizes;  // |X_1|..|X_{k+1}|
    std::vector<Tuple> edges;     // part-local indices
};

inline void check_hypergraph(PartiteHypergraph& E) {
    if (E.k < 1) throw ParseError("hypergraph: k must be positive");
    if (static_cast<int>(E.part_sizes.size()) != E.k + 1) throw ParseError("hypergraph: part_sizes needs k+1 entries");
    for (int s : E.part_sizes)
        if (s < 0) throw ParseError("hypergraph: negative part size");
    for (const auto& e : E.edges) {
        if (static_cast<int>(e.size()) != E.k + 1) throw ParseError("hypergraph: edge of wrong arity " + tuple_str(e));
        for (int i = 0; i <= E.k; ++i)
            if (e[i] < 0 || e[i] >= E.part_sizes[i]) throw ParseError("hypergraph: edge coordinate out of range " + tuple_str(e));
    }
    std::sort(E.edges.begin(), E.edges.end());
    if (std::adjacent_find(E.edges.begin(), E.edges.end()) != E.edges.end()) throw ParseError("hypergraph: duplicate edge");
}

// Membership oracle; dense when the product of part sizes is small.
class EdgeIndex {
public:
    explicit EdgeIndex(const PartiteHypergraph& E) : sizes_(E.part_sizes) {
        uint64_t prod = 1;
        for (int s : sizes_) prod = std::min<uint64_t>(prod * static_cast<uint64_t>(std::max(s, 1)), uint64_t(1) << 40);
        dense_ = prod <= (uint64_t(1) << 26);
        if (dense_) {
            bits_.assign(prod, 0);
            for (const auto& e : E.edges) bits_[flat(e)] = 1;
        } else {
            sorted_ = E.edges;
            std::sort(sorted_.begin(), sorted_.end());
        }
    }
    bool has(const Tuple& e) const {
        if (dense_) return bits_[flat(e)] != 0;
        return std::binary_search(sorted_.begin(), sorted_.end(), e);
    }

private:
    uint64_t flat(const Tuple& e) const {
        uint64_t x = 0;
        for (size_t i = 0; i < e.size(); ++i) x = x * static_cast<uint64_t>(std::max(sizes_[i], 1)) + static_cast<uint64_t>(e[i]);
        return x;
    }
    std::vector<int> sizes_;
    bool dense_ = true;
    std::vector<char> bits_;
    std::vector<Tuple> sorted_;
};

inline PartiteHypergraph model_hypergraph(const TkModel& M) {
    require_valid(M);
    PartiteHypergraph E;
    E.k = M.k;
    E.part_sizes = M.part_sizes;
    for (const auto& [t, w] : M.r) {
        Tuple e;
        for (int i = 0; i < M.k; ++i) e.push_back(t[i] - M.offset(i));
        e.push_back(w - M.offset(M.k));
        E.edges.push_back(e);
    }
    std::sort(E.edges.begin(), E.edges.end());
    return E;
}

inline PartiteHypergraph complement_hypergraph(const PartiteHypergraph& E) {
    PartiteHypergraph C;
    C.k = E.k;
    C.part_sizes = E.part_sizes;
    EdgeIndex idx(E);
    for_each_product(E.part_sizes, [&](const Tuple& t) {
        if (!idx.has(t)) C.edges.push_back(t);
    });
    return C;
}

// ---------- R-coding ----------

// a[h] = vertex of X_{part(h)+1} assigned to element h of the target model.
using CodingAssignment = std::vector<int>;

inline bool verify_r_coding(const TkModel& H, const PartiteHypergraph& E, const CodingAssignment& a, std::string* why = nullptr) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (H.k != E.k) throw DomainError("r-coding: k differs");
    if (static_cast<int>(a.size()) != H.size()) return fail("assignment has wrong length");
    for (int h = 0; h < H.size(); ++h) {
        int p = H.block_of(h);
        if (a[h] < 0 || a[h] >= E.part_sizes[p]) return fail("element " + std::to_string(h) + " assigned outside X_" + std::to_string(p + 1));
    }
    ModelView V(H);
    EdgeIndex idx(E);
    Tuple e(H.k + 1);
    for (int x = 0; x < V.q; ++x) {
        Tuple t = V.qtuple(x);
        for (int i = 0; i < H.k; ++i) e[i] = a[t[i]];
        for (int w = 0; w < V.m; ++w) {
            e[H.k] = a[V.point(w)];
            if (idx.has(e) != V.R(x, w)) return fail("biconditional fails at " + tuple_str(t) + "," + std::to_string(V.point(w)));
        }
    }
    return true;
}

inline std::optional<CodingAssignment> find_r_coding(const TkModel& H, const PartiteHypergraph& E, uint64_t budget = 50'000'000,
                                                     uint64_t* nodes_out = nullptr) {
    require_valid(H, "H");
    if (H.k != E.k) throw DomainError("r-coding: k differs");
    const int k = H.k, N = H.size();
    ModelView V(H);
    EdgeIndex idx(E);
    std::vector<int> part(N);
    for (int h = 0; h < N; ++h) part[h] = H.block_of(h);
    for (int h = 0; h < N; ++h)
        if (E.part_sizes[part[h]] == 0) return std::nullopt;

    std::vector<int> a(N, -1);
    uint64_t nodes = 0;

    // constraint tuples through both u (taking value val) and the just-assigned v, others assigned
    auto compatible = [&](int u, int val, int v) {
        const int pu = part[u], pv = part[v];
        if (pu == pv) return true;
        std::vector<int> radix(k + 1);
        for (int i = 0; i <= k; ++i) radix[i] = (i == pu || i == pv) ? 1 : H.part_sizes[i];
        bool ok = true;
        Tuple e(k + 1), t(k);
        for_each_product(radix, [&](const Tuple& loc) {
            if (!ok) return;
            int w = -1;
            for (int i = 0; i <= k; ++i) {
                int h = i == pu ? u : i == pv ? v : H.offset(i) + loc[i];
                int x = h == u ? val : a[h];
                if (x < 0) return;
                e[i] = x;
                if (i < k)
                    t[i] = h;
                else
                    w = h;
            }
            if (idx.has(e) != V.R(V.qindex(t), w - V.off[k])) ok = false;
        });
        return ok;
    };

    using Domains = std::vector<std::vector<char>>;
    std::function<bool(Domains&, int)> search = [&](Domains& dom, int assigned) -> bool {
        if (++nodes > budget) throw BudgetError("r-coding search exceeded budget of " + std::to_string(budget) + " nodes");
        if (assigned == N) return verify_r_coding(H, E, a);
        int best = -1, best_size = INT32_MAX;
        for (int h = 0; h < N; ++h) {
            if (a[h] >= 0) continue;
            int c = static_cast<int>(std::count(dom[h].begin(), dom[h].end(), 1));
            if (c < best_size) best = h, best_size = c;
        }
        for (int val = 0; val < static_cast<int>(dom[best].size()); ++val) {
            if (!dom[best][val]) continue;
            a[best] = val;
            Domains next = dom;
            bool wiped = false;
            for (int u = 0; u < N && !wiped; ++u) {
                if (a[u] >= 0) continue;
                bool any = false;
                for (int x = 0; x < static_cast<int>(next[u].size()); ++x) {
                    if (next[u][x] && !compatible(u, x, best)) next[u][x] = 0;
                    any = any || next[u][x];
                }
                wiped = !any;
            }
            if (!wiped && search(next, assigned + 1)) return true;
            a[best] = -1;
        }
        return false;
    };
    Domains dom(N);
    for (int h = 0; h < N; ++h) dom[h].assign(E.part_sizes[part[h]], 1);
    bool found = N == 0 ? verify_r_coding(H, E, a) : search(dom, 0);
    if (nodes_out) *nodes_out = nodes;
    if (!found) return std::nullopt;
    return a;
}

// ---------- witnesses ----------

enum class WFormat { Grid, Array, Order, Partition, IpGrid };

inline std::string format_name(WFormat f) {
    switch (f) {
        case WFormat::Grid: return "grid";
        case WFormat::Array: return "array";
        case WFormat::Order: return "order";
        case WFormat::Partition: return "partition";
        case WFormat::IpGrid: return "ip_grid";
    }
    return "?";
}

inline WFormat parse_format(const std::string& s) {
    if (s == "grid") return WFormat::Grid;
    if (s == "array") return WFormat::Array;
    if (s == "order") return WFormat::Order;
    if (s == "partition") return WFormat::Partition;
    if (s == "ip_grid" || s == "ip-grid") return WFormat::IpGrid;
    throw ParseError("unknown witness format '" + s + "'");
}

// Index conventions (all 1-based inside the index space, 0-based into X_t):
//   functions g: [n]^d -> [n] are numbered by their value vector over [n]^d in lexicographic
//   argument order, read as a base-n numeral with the first value most significant;
//   subsets X of [n]^k are bitmasks over the lexicographic index of their members.
struct Witness {
    WFormat format = WFormat::Grid;
    int k = 1;
    int n = 0;
    std::vector<int> a;                  // grid: a[g]; ip_grid: a[mask]
    std::vector<std::vector<int>> arr;   // array: arr[j-1][g]
    std::vector<std::vector<int>> b;     // grid/array/ip_grid: b[t-1][i-1] in X_{t+1}
    std::vector<StarItem> order;         // order: tuples in [n]^k, points in [n]
    std::vector<std::vector<int>> seq;   // order: k+1 arrays a^t; partition: k arrays a^t
    int s = 0;                           // partition
    std::vector<int> labels;             // partition: label in [s] of each tuple of [n]^k, lexicographic
    std::vector<int> bpart;              // partition: b[j-1] in X_{k+1}
};

inline constexpr uint64_t kFunctionCap = 4096;

inline int ipow(int n, int e) {
    uint64_t r = sat_pow(static_cast<uint64_t>(n), static_cast<uint64_t>(e), INT32_MAX);
    if (r > static_cast<uint64_t>(INT32_MAX)) throw CapacityError("index space too large");
    return static_cast<int>(r);
}

// number of functions [n]^d -> [n], capped
inline int function_count(int n, int d) {
    int args = ipow(n, d);
    uint64_t c = sat_pow(static_cast<uint64_t>(n), static_cast<uint64_t>(args), kFunctionCap);
    if (c > kFunctionCap)
        throw CapacityError("functions [" + std::to_string(n) + "]^" + std::to_string(d) + "->[" + std::to_string(n) + "] exceed cap " +
                            std::to_string(kFunctionCap));
    return static_cast<int>(c);
}

inline std::vector<int> function_values(int idx, int n, int args) {
    std::vector<int> v(args);
    for (int i = args - 1; i >= 0; --i) {
        v[i] = idx % n + 1;
        idx /= n;
    }
    return v;
}

inline int function_index(const std::vector<int>& values, int n) {
    int idx = 0;
    for (int v : values) idx = idx * n + (v - 1);
    return idx;
}

// lexicographic index of a 1-based tuple in [n]^d
inline int grid_index(const Tuple& t, int n, size_t from = 0, size_t to = SIZE_MAX) {
    int idx = 0;
    for (size_t i = from; i < std::min(to, t.size()); ++i) idx = idx * n + (t[i] - 1);
    return idx;
}

inline std::vector<Tuple> grid_tuples(int n, int d) {
    std::vector<Tuple> out;
    for_each_product(std::vector<int>(d, n), [&](const Tuple& t) {
        Tuple u(t);
        for (int& x : u) ++x;
        out.push_back(u);
    });
    return out;
}

namespace detail {

inline void need(bool c, const std::string& msg) {
    if (!c) throw DomainError("witness: " + msg);
}

inline void check_vertex_array(const std::vector<int>& v, size_t len, int part_size, const std::string& what) {
    need(v.size() == len, what + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(len));
    for (int x : v) need(x >= 0 && x < part_size, what + " entry " + std::to_string(x) + " outside its part");
}

inline void check_b(const PartiteHypergraph& E, const Witness& w) {
    need(static_cast<int>(w.b.size()) == w.k, "b needs k arrays");
    for (int t = 0; t < w.k; ++t) check_vertex_array(w.b[t], w.n, E.part_sizes[t + 1], "b^" + std::to_string(t + 1));
}

inline std::map<StarItem, int> order_positions(const Witness& w) {
    std::map<StarItem, int> pos;
    for (size_t i = 0; i < w.order.size(); ++i) {
        const auto& it = w.order[i];
        if (it.is_point()) {
            need(it.tuple.empty() && it.point >= 1 && it.point <= w.n, "order point out of range");
        } else {
            need(static_cast<int>(it.tuple.size()) == w.k, "order tuple of wrong length");
            for (int x : it.tuple) need(x >= 1 && x <= w.n, "order tuple out of range");
        }
        need(pos.emplace(it, static_cast<int>(i)).second, "order lists an item twice");
    }
    need(pos.size() == static_cast<size_t>(ipow(w.n, w.k) + w.n), "order must list every tuple of [n]^k and every point of [n]");
    return pos;
}

// Calls fn(edge, required) for every index tuple of the witness's defining biconditional.
template <class F>
void for_each_requirement(const PartiteHypergraph& E, const Witness& w, F&& fn) {
    const int k = w.k, n = w.n;
    need(k == E.k, "k differs from hypergraph");
    need(n >= 0, "negative n");
    Tuple e(k + 1);
    auto tuples_k = grid_tuples(n, k);
    switch (w.format) {
        case WFormat::Grid: {
            const int args = ipow(n, k - 1), cnt = function_count(n, k - 1);
            check_vertex_array(w.a, cnt, E.part_sizes[0], "a");
            check_b(E, w);
            for (int g = 0; g < cnt; ++g) {
                auto vals = function_values(g, n, args);
                e[0] = w.a[g];
                for (const auto& T : tuples_k) {
                    for (int t = 0; t < k; ++t) e[t + 1] = w.b[t][T[t] - 1];
                    fn(e, T[k - 1] <= vals[grid_index(T, n, 0, k - 1)]);
                }
            }
            break;
        }
        case WFormat::Array: {
            const int args = ipow(n, k), cnt = function_count(n, k);
            need(static_cast<int>(w.arr.size()) == n, "array needs n rows");
            for (int j = 0; j < n; ++j) check_vertex_array(w.arr[j], cnt, E.part_sizes[0], "array row " + std::to_string(j + 1));
            check_b(E, w);
            for (int g = 0; g < cnt; ++g) {
                auto vals = function_values(g, n, args);
                for (int j = 1; j <= n; ++j) {
                    e[0] = w.arr[j - 1][g];
                    for (const auto& T : tuples_k) {
                        for (int t = 0; t < k; ++t) e[t + 1] = w.b[t][T[t] - 1];
                        // f(j, i_1..i_{k-1})
                        int arg = (j - 1) * ipow(n, k - 1) + grid_index(T, n, 0, k - 1);
                        fn(e, T[k - 1] <= vals[arg]);
                    }
                }
            }
            break;
        }
        case WFormat::Order: {
            auto pos = order_positions(w);
            need(static_cast<int>(w.seq.size()) == k + 1, "order witness needs k+1 sequences");
            for (int t = 0; t <= k; ++t) check_vertex_array(w.seq[t], n, E.part_sizes[t], "a^" + std::to_string(t + 1));
            for (const auto& T : tuples_k) {
                for (int t = 0; t < k; ++t) e[t] = w.seq[t][T[t] - 1];
                int pt = pos.at(StarItem{T, -1});
                for (int j = 1; j <= n; ++j) {
                    e[k] = w.seq[k][j - 1];
                    fn(e, pt < pos.at(StarItem{{}, j}));
                }
            }
            break;
        }
        case WFormat::Partition: {
            need(w.s >= 1, "partition needs s >= 1");
            need(w.labels.size() == tuples_k.size(), "partition labels must cover [n]^k");
            for (int l : w.labels) need(l >= 1 && l <= w.s, "partition label out of range");
            need(static_cast<int>(w.seq.size()) == k, "partition witness needs k sequences");
            for (int t = 0; t < k; ++t) check_vertex_array(w.seq[t], n, E.part_sizes[t], "a^" + std::to_string(t + 1));
            check_vertex_array(w.bpart, w.s, E.part_sizes[k], "b");
            for (size_t x = 0; x < tuples_k.size(); ++x) {
                const auto& T = tuples_k[x];
                for (int t = 0; t < k; ++t) e[t] = w.seq[t][T[t] - 1];
                for (int j = 1; j <= w.s; ++j) {
                    e[k] = w.bpart[j - 1];
                    fn(e, w.labels[x] >= j);
                }
            }
            break;
        }
        case WFormat::IpGrid: {
            const int cells = ipow(n, k);
            if (cells > 20) throw CapacityError("ip_grid: n^k exceeds 20");
            const int cnt = 1 << cells;
            check_vertex_array(w.a, cnt, E.part_sizes[0], "a");
            check_b(E, w);
            for (int X = 0; X < cnt; ++X) {
                e[0] = w.a[X];
                for (int x = 0; x < cells; ++x) {
                    const auto& T = tuples_k[x];
                    for (int t = 0; t < k; ++t) e[t + 1] = w.b[t][T[t] - 1];
                    fn(e, ((X >> x) & 1) != 0);
                }
            }
            break;
        }
    }
}

}  // namespace detail

inline bool fop_witness_check(const PartiteHypergraph& E, const Witness& w, std::string* why = nullptr) {
    EdgeIndex idx(E);
    bool ok = true;
    detail::for_each_requirement(E, w, [&](const Tuple& e, bool required) {
        if (ok && idx.has(e) != required) {
            ok = false;
            if (why) *why = "edge " + tuple_str(e) + (required ? " required but absent" : " present but forbidden");
        }
    });
    return ok;
}

// ---------- conversions ----------

namespace detail {

inline Witness grid_to_array(const Witness& w) {
    const int n = w.n, k = w.k;
    const int cnt = function_count(n, k), args = ipow(n, k), sub = ipow(n, k - 1);
    function_count(n, k - 1);
    Witness o;
    o.format = WFormat::Array;
    o.k = k;
    o.n = n;
    o.b = w.b;
    o.arr.assign(n, std::vector<int>(cnt));
    for (int g = 0; g < cnt; ++g) {
        auto vals = function_values(g, n, args);
        for (int j = 0; j < n; ++j) {
            std::vector<int> slice(vals.begin() + j * sub, vals.begin() + (j + 1) * sub);
            o.arr[j][g] = w.a[function_index(slice, n)];
        }
    }
    return o;
}

inline Witness array_to_grid(const Witness& w) {
    const int n = w.n, k = w.k;
    const int cnt = function_count(n, k - 1), args = ipow(n, k - 1);
    function_count(n, k);
    Witness o;
    o.format = WFormat::Grid;
    o.k = k;
    o.n = n;
    o.b = w.b;
    o.a.resize(cnt);
    for (int g = 0; g < cnt; ++g) {
        auto vals = function_values(g, n, args);
        std::vector<int> lifted;
        for (int j = 0; j < n; ++j) lifted.insert(lifted.end(), vals.begin(), vals.end());
        o.a[g] = n == 0 ? 0 : w.arr[0][function_index(lifted, n)];
    }
    return o;
}

// target: optional order on [n]^k u [n]; default puts tuple (i,rest) just below point n+1-f_i(rest),
// with f_i the i-th function in index order.
inline Witness grid_to_order(const Witness& w, const std::vector<StarItem>* target) {
    const int n = w.n, k = w.k;
    const int cnt = function_count(n, k - 1), args = ipow(n, k - 1);
    Witness o;
    o.format = WFormat::Order;
    o.k = k;
    o.n = n;
    auto tuples = grid_tuples(n, k);
    std::vector<int> fidx(n);
    std::vector<int> point_rank(n + 1);
    if (!target) {
        need(n <= cnt, "grid has fewer functions than n");
        std::vector<std::vector<Tuple>> below(n + 1);  // below[j]: tuples in the gap just under point j
        for (int i = 1; i <= n; ++i) fidx[i - 1] = i - 1;
        for (const auto& T : tuples) {
            auto vals = function_values(fidx[T[0] - 1], n, args);
            int f = vals[grid_index(T, n, 1)];
            below[n + 1 - f].push_back(T);
        }
        for (int j = 1; j <= n; ++j) {
            for (auto& T : below[j]) o.order.push_back({T, -1});
            o.order.push_back({{}, j});
            point_rank[j] = j;
        }
    } else {
        Witness probe = w;
        probe.order = *target;
        auto pos = order_positions(probe);
        o.order = *target;
        std::vector<std::pair<int, int>> pts;
        for (int j = 1; j <= n; ++j) pts.push_back({pos.at(StarItem{{}, j}), j});
        std::sort(pts.begin(), pts.end());
        for (int r = 0; r < n; ++r) point_rank[pts[r].second] = r + 1;
        std::vector<std::vector<int>> fv(n, std::vector<int>(args, 0));
        for (const auto& T : tuples) {
            int p = pos.at(StarItem{T, -1}), c = 0;
            for (auto& [pp, j] : pts) c += pp < p;
            need(c < n, "target order puts tuple " + tuple_str(T) + " above every point");
            fv[T[0] - 1][grid_index(T, n, 1)] = n - c;
        }
        for (int i = 0; i < n; ++i) fidx[i] = function_index(fv[i], n);
    }
    o.seq.assign(k + 1, {});
    for (int i = 0; i < n; ++i) o.seq[0].push_back(w.a[fidx[i]]);
    for (int t = 1; t < k; ++t) o.seq[t] = w.b[t - 1];
    for (int j = 1; j <= n; ++j) o.seq[k].push_back(w.b[k - 1][n - point_rank[j]]);
    return o;
}

// Output n' = #first coordinates whose tuples all lie below some point; s = n.
inline Witness order_to_partition(const Witness& w) {
    const int n = w.n, k = w.k;
    auto pos = order_positions(w);
    std::vector<std::pair<int, int>> pts;
    for (int j = 1; j <= n; ++j) pts.push_back({pos.at(StarItem{{}, j}), j});
    std::sort(pts.rbegin(), pts.rend());  // p_1 highest
    auto label = [&](const Tuple& T) {
        int p = pos.at(StarItem{T, -1}), l = 0;
        for (int j = 0; j < n; ++j)
            if (p < pts[j].first) l = j + 1;
        return l;
    };
    auto tuples = grid_tuples(n, k);
    std::vector<int> keep;
    for (int i = 1; i <= n; ++i) {
        bool all = true;
        for (const auto& T : tuples)
            if (T[0] == i && label(T) == 0) all = false;
        if (all) keep.push_back(i);
    }
    const int m = static_cast<int>(keep.size());
    Witness o;
    o.format = WFormat::Partition;
    o.k = k;
    o.n = m;
    o.s = n;
    o.seq.assign(k, {});
    for (int r = 0; r < m; ++r) o.seq[0].push_back(w.seq[0][keep[r] - 1]);
    for (int t = 1; t < k; ++t) o.seq[t].assign(w.seq[t].begin(), w.seq[t].begin() + m);
    for (int j = 0; j < n; ++j) o.bpart.push_back(w.seq[k][pts[j].second - 1]);
    for (const auto& T : grid_tuples(m, k)) {
        Tuple U = T;
        U[0] = keep[T[0] - 1];
        o.labels.push_back(label(U));
    }
    return o;
}

// Largest m <= min(n,s) such that every g: [m]^{k-1} -> [m] is min(label(i,.), m) for some i.
inline Witness partition_to_grid(const Witness& w) {
    const int n = w.n, k = w.k;
    auto lab = [&](const Tuple& T) { return w.labels[grid_index(T, n)]; };
    for (int m = std::min(n, w.s); m >= 1; --m) {
        uint64_t c = sat_pow(m, sat_pow(m, k - 1, 64), kFunctionCap);
        if (c > kFunctionCap) continue;
        const int cnt = static_cast<int>(c), args = ipow(m, k - 1);
        auto rests = grid_tuples(m, k - 1);
        std::map<std::vector<int>, int> first_row;  // value vector -> first i realizing it
        for (int i = n; i >= 1; --i) {
            std::vector<int> vals;
            for (const auto& r : rests) {
                Tuple T{i};
                T.insert(T.end(), r.begin(), r.end());
                vals.push_back(std::min(lab(T), m));
            }
            first_row[vals] = i;
        }
        std::vector<int> a(cnt);
        bool ok = true;
        for (int g = 0; g < cnt && ok; ++g) {
            auto it = first_row.find(function_values(g, m, args));
            if (it == first_row.end())
                ok = false;
            else
                a[g] = w.seq[0][it->second - 1];
        }
        if (!ok) continue;
        Witness o;
        o.format = WFormat::Grid;
        o.k = k;
        o.n = m;
        o.a = a;
        for (int t = 1; t < k; ++t) o.b.emplace_back(w.seq[t].begin(), w.seq[t].begin() + m);
        o.b.emplace_back(w.bpart.begin(), w.bpart.begin() + m);
        return o;
    }
    Witness o;
    o.format = WFormat::Grid;
    o.k = k;
    o.n = 0;
    o.a = {};
    o.b.assign(k, {});
    function_count(0, k - 1);
    o.a.assign(function_count(0, k - 1), 0);
    return o;
}

inline Witness ipgrid_to_grid(const Witness& w) {
    const int n = w.n, k = w.k;
    const int cnt = function_count(n, k - 1), args = ipow(n, k - 1);
    auto tuples = grid_tuples(n, k);
    Witness o;
    o.format = WFormat::Grid;
    o.k = k;
    o.n = n;
    o.b = w.b;
    o.a.resize(cnt);
    for (int g = 0; g < cnt; ++g) {
        auto vals = function_values(g, n, args);
        int mask = 0;
        for (size_t x = 0; x < tuples.size(); ++x)
            if (tuples[x][k - 1] <= vals[grid_index(tuples[x], n, 0, k - 1)]) mask |= 1 << x;
        o.a[g] = w.a[mask];
    }
    return o;
}

}  // namespace detail

inline Witness convert_witness(const Witness& w, WFormat to, const std::vector<StarItem>* target_order = nullptr) {
    using F = WFormat;
    if (w.k < 1) throw DomainError("witness: k must be positive");
    if (w.format == F::Grid && to == F::Array) return detail::grid_to_array(w);
    if (w.format == F::Array && to == F::Grid) return detail::array_to_grid(w);
    if (w.format == F::Grid && to == F::Order) return detail::grid_to_order(w, target_order);
    if (w.format == F::Order && to == F::Partition) return detail::order_to_partition(w);
    if (w.format == F::Partition && to == F::Grid) return detail::partition_to_grid(w);
    if (w.format == F::IpGrid && to == F::Grid) return detail::ipgrid_to_grid(w);
    throw DomainError("conversion " + format_name(w.format) + " -> " + format_name(to) + " is not defined");
}

// Order witness for the complement hypergraph.
inline Witness reverse_order_witness(const Witness& w) {
    if (w.format != WFormat::Order) throw DomainError("reverse_order_witness: needs an order witness");
    Witness o = w;
    std::reverse(o.order.begin(), o.order.end());
    return o;
}

// ---------- IP_k search ----------

inline std::optional<Witness> find_ip_grid(const PartiteHypergraph& E, int n, uint64_t budget = 50'000'000) {
    const int k = E.k;
    if (n < 0) throw DomainError("ip search: negative n");
    const int cells = ipow(n, k);
    if (cells > 20) throw CapacityError("ip search: n^k exceeds 20");
    const uint64_t need_masks = uint64_t(1) << cells;
    if (need_masks > static_cast<uint64_t>(E.part_sizes[0])) return std::nullopt;
    for (int t = 1; t <= k; ++t)
        if (n > 0 && E.part_sizes[t] == 0) return std::nullopt;
    EdgeIndex idx(E);
    auto tuples = grid_tuples(n, k);
    std::vector<int> radix;
    for (int t = 1; t <= k; ++t)
        for (int i = 0; i < n; ++i) radix.push_back(E.part_sizes[t]);
    uint64_t tried = 0;
    std::optional<Witness> found;
    std::vector<int> a(need_masks);
    std::vector<char> seen(need_masks);
    Tuple e(k + 1);
    auto body = [&](const Tuple& bs) -> bool {
        if (++tried > budget) throw BudgetError("ip search exceeded budget of " + std::to_string(budget) + " b-assignments");
        std::fill(seen.begin(), seen.end(), 0);
        uint64_t distinct = 0;
        for (int x = 0; x < E.part_sizes[0] && distinct < need_masks; ++x) {
            e[0] = x;
            uint32_t mask = 0;
            for (int c = 0; c < cells; ++c) {
                for (int t = 0; t < k; ++t) e[t + 1] = bs[t * n + tuples[c][t] - 1];
                if (idx.has(e)) mask |= 1u << c;
            }
            if (!seen[mask]) {
                seen[mask] = 1;
                a[mask] = x;
                ++distinct;
            }
        }
        if (distinct == need_masks) {
            Witness w;
            w.format = WFormat::IpGrid;
            w.k = k;
            w.n = n;
            w.a = a;
            for (int t = 0; t < k; ++t) w.b.emplace_back(bs.begin() + t * n, bs.begin() + (t + 1) * n);
            found = w;
        }
        return !found;
    };
    if (radix.empty())
        body(Tuple{});
    else
        for_each_product(radix, body);
    return found;
}

}  // namespace fopk
