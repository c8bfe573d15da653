#include <gtest/gtest.h>

#include "support.hpp"

using namespace fopk;

namespace {

TkModel mk(int k, std::vector<int> sizes, std::vector<Tuple> q, std::vector<std::pair<Tuple, int>> r) {
    TkModel M;
    M.k = k;
    M.part_sizes = std::move(sizes);
    M.qorder = std::move(q);
    M.r = std::move(r);
    M.normalize();
    return M;
}

// inversions between two rankings of the same items, by position lookup in a plain vector
uint64_t inversions(const std::vector<StarItem>& a, const std::vector<StarItem>& b) {
    auto at = [&](const StarItem& x) { return std::find(b.begin(), b.end(), x) - b.begin(); };
    uint64_t n = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (at(a[i]) > at(a[j])) ++n;
    return n;
}

std::vector<TkModel> models_upto(int k, int bound) {
    std::vector<TkModel> out;
    for (const auto& s : testsupport::sizes_upto(k, bound))
        for (auto& M : enumerate_models(k, s)) out.push_back(std::move(M));
    return out;
}

}  // namespace

TEST(Classify, QpAndQq) {
    auto A1 = mk(2, {1, 1, 1}, {{0, 1}}, {{{0, 1}, 2}});
    auto A2 = mk(2, {1, 1, 1}, {{0, 1}}, {});
    auto t = classify_transposition(A1, A2);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(t->kind, TranspositionKind::QP);
    EXPECT_EQ(t->alpha, (StarItem{{0, 1}, -1}));
    EXPECT_EQ(t->beta, (StarItem{{}, 2}));

    auto B1 = mk(2, {1, 2, 0}, {{0, 1}, {0, 2}}, {});
    auto B2 = mk(2, {1, 2, 0}, {{0, 2}, {0, 1}}, {});
    auto u = classify_transposition(B1, B2);
    ASSERT_TRUE(u.has_value());
    EXPECT_EQ(u->kind, TranspositionKind::QQ);
    EXPECT_EQ(u->alpha, (StarItem{{0, 1}, -1}));
}

TEST(Classify, NotATransposition) {
    auto A = mk(2, {1, 1, 1}, {{0, 1}}, {});
    EXPECT_FALSE(classify_transposition(A, A).has_value());
    auto B1 = mk(2, {1, 2, 1}, {{0, 1}, {0, 2}}, {{{0, 1}, 3}, {{0, 2}, 3}});
    auto B2 = mk(2, {1, 2, 1}, {{0, 2}, {0, 1}}, {});
    EXPECT_FALSE(classify_transposition(B1, B2).has_value());
    EXPECT_THROW(classify_transposition(A, B1), DomainError);
}

TEST(Classify, EveryAdjacentSwapIsATransposition) {
    for (const auto& A : models_upto(2, 5)) {
        auto st = star_order(A);
        for (size_t i = 0; i + 1 < st.size(); ++i) {
            if (st[i].is_point() && st[i + 1].is_point()) continue;
            auto sw = st;
            std::swap(sw[i], sw[i + 1]);
            auto B = from_star_order(A.k, A.part_sizes, sw);
            auto t = classify_transposition(A, B);
            ASSERT_TRUE(t.has_value());
            bool qp = st[i].is_point() || st[i + 1].is_point();
            EXPECT_EQ(t->kind, qp ? TranspositionKind::QP : TranspositionKind::QQ);
        }
    }
}

TEST(Path, ShortestAndMadeOfTranspositions) {
    for (int k : {1, 2}) {
        std::map<std::vector<int>, std::vector<TkModel>> by_shape;
        for (auto& M : models_upto(k, 5)) by_shape[M.part_sizes].push_back(M);
        for (const auto& [shape, ms] : by_shape)
            for (const auto& A : ms)
                for (const auto& B : ms) {
                    auto path = transposition_path(A, B);
                    uint64_t d = inversions(star_order(A), star_order(B));
                    EXPECT_EQ(kendall_tau(star_order(A), star_order(B)), d);
                    ASSERT_EQ(path.size(), d + 1);
                    EXPECT_EQ(path.front(), A);
                    EXPECT_EQ(path.back(), B);
                    for (size_t i = 0; i + 1 < path.size(); ++i) {
                        EXPECT_TRUE(validate_tk(path[i + 1]).ok());
                        EXPECT_TRUE(classify_transposition(path[i], path[i + 1]).has_value());
                    }
                }
    }
}

TEST(Product, QpExample) {
    auto A = mk(2, {1, 1, 1}, {{0, 1}}, {{{0, 1}, 2}});
    auto B = mk(2, {1, 1, 1}, {{0, 1}}, {});
    auto P = product_qp(A, {0, 1}, 2, B);
    EXPECT_TRUE(P.all_checks());
    EXPECT_EQ(P.C, B);
    EXPECT_EQ(P.from_a, (std::vector<int>{-1, -1, -1}));
}

TEST(Product, QqExample) {
    auto A = mk(2, {1, 2, 1}, {{0, 1}, {0, 2}}, {{{0, 1}, 3}, {{0, 2}, 3}});
    auto B = mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 3}});
    auto P = product_qq(A, {0, 1}, {0, 2}, B);
    EXPECT_TRUE(P.all_checks());
    EXPECT_EQ(P.i_star, 1);
    EXPECT_EQ(P.C.part_sizes, (std::vector<int>{1, 3, 1}));
}

TEST(Product, RejectsNonAdjacentPairs) {
    auto A = mk(2, {1, 2, 1}, {{0, 1}, {0, 2}}, {{{0, 1}, 3}, {{0, 2}, 3}});
    auto B = mk(2, {1, 1, 1}, {{0, 1}}, {});
    EXPECT_THROW(product_qp(A, {0, 1}, 3, B), DomainError);
    EXPECT_THROW(product_qq(A, {0, 2}, {0, 1}, B), DomainError);
    EXPECT_THROW(product_qq(A, {0, 1}, {0, 1}, B), DomainError);
}

TEST(Product, AllSmallInputs) {
    for (int k : {1, 2}) {
        auto As = models_upto(k, 5);
        auto Bs = models_upto(k, 4);
        for (const auto& A : As) {
            auto st = star_order(A);
            for (size_t i = 0; i + 1 < st.size(); ++i) {
                const auto &x = st[i], &y = st[i + 1];
                if (x.is_point() && y.is_point()) continue;
                for (const auto& B : Bs) {
                    ProductResult P;
                    if (x.is_point() || y.is_point()) {
                        const auto& t = x.is_point() ? y : x;
                        int v = x.is_point() ? x.point : y.point;
                        P = product_qp(A, t.tuple, v, B);
                        for (int j = 0; j <= k; ++j) EXPECT_EQ(P.C.part_sizes[j], A.part_sizes[j] - 1 + B.part_sizes[j]);
                    } else {
                        P = product_qq(A, x.tuple, y.tuple, B);
                    }
                    EXPECT_TRUE(validate_tk(P.C).ok());
                    for (const auto& [name, ok] : P.checks) EXPECT_TRUE(ok) << name;
                }
            }
        }
    }
}
