#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fopk {

using Tuple = std::vector<int>;

// Error taxonomy; the CLI maps these onto exit status 1 with kind() in the error document.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg) : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("parse", m) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("domain", m) {}
};
struct CapacityError : Error {
    explicit CapacityError(const std::string& m) : Error("capacity", m) {}
};
struct BudgetError : Error {
    explicit BudgetError(const std::string& m) : Error("budget", m) {}
};
struct InconsistencyError : Error {
    explicit InconsistencyError(const std::string& m) : Error("inconsistent", m) {}
};

inline std::string tuple_str(const Tuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

// splitmix64 step; used to derive independent child streams from one seed
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic across platforms: std::mt19937_64 output is fixed by the standard,
// distributions are not, so bounded draws are done by hand.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(mix64(seed)) {}
    Rng split(uint64_t stream) const { return Rng(mix64(state_ ^ mix64(stream + 0x51ed27ULL))); }
    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do x = next();
        while (x >= lim);
        return x % n;
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    uint64_t state_;
};

// n^e with saturation at limit+1 so callers can test capacity without overflow
inline uint64_t sat_pow(uint64_t n, uint64_t e, uint64_t limit) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < e; ++i) {
        if (n != 0 && r > limit / n) return limit + 1;
        r *= n;
    }
    return r;
}

// Iterate all tuples of [0,radix_0) x ... x [0,radix_{k-1}) in lexicographic order.
// A callback returning bool stops the walk by returning false.
template <class F>
void for_each_product(const std::vector<int>& radix, F&& fn) {
    for (int r : radix)
        if (r <= 0) return;
    Tuple t(radix.size(), 0);
    while (true) {
        if constexpr (std::is_same_v<decltype(fn(static_cast<const Tuple&>(t))), bool>) {
            if (!fn(static_cast<const Tuple&>(t))) return;
        } else {
            fn(static_cast<const Tuple&>(t));
        }
        int i = static_cast<int>(t.size()) - 1;
        while (i >= 0 && ++t[i] == radix[i]) t[i--] = 0;
        if (i < 0) return;
    }
}

// [0,base)^len
template <class F>
void for_each_product(int len, int base, F&& fn) {
    for_each_product(std::vector<int>(std::max(len, 0), base), std::forward<F>(fn));
}

}  // namespace fopk
