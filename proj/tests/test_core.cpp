#include <gtest/gtest.h>

#include "support.hpp"

using namespace fopk;
using testsupport::interleaving_models;

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

StarItem T(Tuple t) { return StarItem{std::move(t), -1}; }
StarItem P(int p) { return StarItem{{}, p}; }

}  // namespace

TEST(Validate, TrivialModelIsValid) {
    EXPECT_TRUE(validate_tk(mk(2, {1, 1, 1}, {{0, 1}}, {})).ok());
}

TEST(Validate, MonotonicityWitness) {
    auto rep = validate_tk(mk(2, {1, 2, 2}, {{0, 1}, {0, 2}}, {{{0, 2}, 3}}));
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].axiom, 5);
    std::vector<Tuple> want = {{0, 1}, {0, 2}, {3}, {4}};
    EXPECT_EQ(rep.violations[0].witness, want);
}

TEST(Validate, UpSetOnSingleTuple) {
    EXPECT_TRUE(validate_tk(mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 2}, {{0, 1}, 3}})).ok());
}

TEST(Validate, MalformedDocumentIsParseError) {
    TkModel M = mk(2, {1, 1}, {}, {});
    EXPECT_THROW(validate_tk(M), ParseError);
    TkModel B = mk(2, {1, 1, 1}, {{0, 7}}, {});
    EXPECT_THROW(validate_tk(B), ParseError);
}

TEST(Validate, MissingAndOutsideTuples) {
    EXPECT_EQ(validate_tk(mk(2, {1, 2, 0}, {{0, 1}}, {})).axioms(), std::set<int>{4});
    EXPECT_EQ(validate_tk(mk(2, {1, 1, 1}, {{0, 1}}, {{{0, 1}, 1}})).axioms(), std::set<int>{3});
}

TEST(StarOrder, Examples) {
    EXPECT_EQ(star_order(mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 3}})), (std::vector<StarItem>{P(2), T({0, 1}), P(3)}));
    EXPECT_EQ(star_order(mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 2}, {{0, 1}, 3}})),
              (std::vector<StarItem>{T({0, 1}), P(2), P(3)}));
    EXPECT_EQ(star_order(mk(2, {1, 1, 1}, {{0, 1}}, {})), (std::vector<StarItem>{P(2), T({0, 1})}));
}

TEST(StarOrder, FromStarExamples) {
    auto A = from_star_order(2, {1, 2, 1}, {T({0, 1}), T({0, 2}), P(3)});
    EXPECT_EQ(A, mk(2, {1, 2, 1}, {{0, 1}, {0, 2}}, {{{0, 1}, 3}, {{0, 2}, 3}}));
    auto B = from_star_order(2, {1, 2, 1}, {P(3), T({0, 1}), T({0, 2})});
    EXPECT_TRUE(B.r.empty());
    EXPECT_EQ(B.qorder, (std::vector<Tuple>{{0, 1}, {0, 2}}));
}

TEST(StarOrder, FromStarRejectsBadRankings) {
    EXPECT_THROW(from_star_order(2, {1, 2, 1}, {T({0, 1}), P(3)}), Error);
    EXPECT_THROW(from_star_order(2, {1, 2, 1}, {T({0, 1}), T({0, 1}), T({0, 2}), P(3)}), Error);
    EXPECT_THROW(from_star_order(2, {1, 1, 2}, {P(3), T({0, 1}), P(2)}), Error);
}

TEST(StarOrder, RoundTripOnAllSmallModels) {
    for (const auto& s : testsupport::sizes_upto(2, 5))
        for (const auto& M : enumerate_models(2, s)) {
            auto st = star_order(M);
            auto back = from_star_order(2, s, st);
            EXPECT_EQ(back, M);
            EXPECT_EQ(star_order(back), st);
        }
}

TEST(QfType, Examples) {
    auto M = mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 3}});
    EXPECT_EQ(qf_type(M, {0, 1, 2}, Lang::Ldprime), qf_type(M, {0, 1, 3}, Lang::Ldprime));
    EXPECT_FALSE(qf_type(M, {0, 1, 2}, Lang::L) == qf_type(M, {0, 1, 3}, Lang::L));
    EXPECT_EQ(qf_type(M, {1, 0, 3}, Lang::L), qf_type(M, {1, 0, 3}, Lang::L));
}

TEST(QfType, InvariantUnderOrderPreservingRenaming) {
    // the (1,1,1) model sits inside the (1,1,2) model on {0,1,3}
    auto small = mk(2, {1, 1, 1}, {{0, 1}}, {{{0, 1}, 2}});
    auto big = mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 3}});
    for (Lang l : {Lang::L, Lang::Lprime, Lang::Ldprime, Lang::LQ})
        EXPECT_EQ(qf_type(small, {0, 1, 2}, l), qf_type(big, {0, 1, 3}, l));
}

TEST(Embeddings, Examples) {
    auto A = mk(2, {1, 1, 1}, {{0, 1}}, {{{0, 1}, 2}});
    EXPECT_EQ(find_embeddings(A, A), (std::vector<std::vector<int>>{{0, 1, 2}}));
    auto A0 = mk(2, {1, 1, 1}, {{0, 1}}, {});
    auto C = mk(2, {1, 1, 2}, {{0, 1}}, {{{0, 1}, 3}});
    EXPECT_EQ(find_embeddings(A0, C), (std::vector<std::vector<int>>{{0, 1, 2}}));
    auto C0 = mk(2, {1, 1, 2}, {{0, 1}}, {});
    EXPECT_TRUE(find_embeddings(A, C0).empty());
}

TEST(Enumerate, FrozenCounts) {
    EXPECT_EQ(enumerate_models(2, {1, 1, 2}).size(), 3u);
    EXPECT_EQ(enumerate_models(2, {1, 2, 2}).size(), 12u);
    EXPECT_EQ(enumerate_models(2, {2, 2, 2}).size(), 360u);
    EXPECT_EQ(model_count_formula({2, 2, 2}), 360u);
}

TEST(Enumerate, MatchesInterleavingOracle) {
    for (const auto& s : testsupport::sizes_upto(2, 6)) {
        auto got = enumerate_models(2, s);
        auto want = interleaving_models(2, s);
        ASSERT_EQ(got.size(), want.size()) << tuple_str(s);
        auto key = [](const TkModel& M) {
            std::string s;
            for (const auto& it : star_order_unchecked(M)) s += item_str(it) + " ";
            return s;
        };
        std::set<std::string> kg, kw;
        for (const auto& M : got) kg.insert(key(M));
        for (const auto& M : want) kw.insert(key(M));
        EXPECT_EQ(kg, kw) << tuple_str(s);
        EXPECT_EQ(kg.size(), got.size());
    }
}

TEST(Properties, RDefinesTheTupleOrder) {
    for (const auto& s : testsupport::sizes_upto(2, 5))
        for (const auto& M : enumerate_models(2, s)) {
            std::map<Tuple, int> pos;
            for (size_t i = 0; i < M.qorder.size(); ++i) pos[M.qorder[i]] = static_cast<int>(i);
            for (const auto& x : M.qorder)
                for (const auto& y : M.qorder)
                    for (int z = M.offset(2); z < M.size(); ++z)
                        if (M.has_r(x, z) && !M.has_r(y, z)) {
                            EXPECT_LT(pos[x], pos[y]);
                        }
        }
}

TEST(Properties, NoForbiddenConfiguration) {
    for (const auto& s : testsupport::sizes_upto(2, 6))
        for (const auto& M : enumerate_models(2, s)) EXPECT_FALSE(testsupport::has_forbidden_configuration(M));
}

TEST(Properties, RandomModelsAreValid) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        std::vector<int> s = {1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)),
                              static_cast<int>(rng.below(4))};
        auto M = random_model(2, s, rng);
        EXPECT_TRUE(validate_tk(M).ok());
        EXPECT_TRUE(testsupport::monotone_literal(M));
    }
}

TEST(Properties, ReductEqualModelsHaveOneCandidateMap) {
    // distinct models with equal sizes: the identity is the only order-preserving bijection, and it fails
    auto ms = enumerate_models(2, {1, 2, 1});
    for (const auto& A : ms)
        for (const auto& B : ms) {
            auto e = find_embeddings(A, B);
            if (A == B) {
                EXPECT_EQ(e.size(), 1u);
            } else {
                EXPECT_TRUE(e.empty());
            }
        }
}
