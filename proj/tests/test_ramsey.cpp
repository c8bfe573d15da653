#include <gtest/gtest.h>

#include "support.hpp"

using namespace fopk;
using testsupport::all_sk;

namespace {

FnStructure fn(int k, std::vector<int> sizes, std::vector<std::pair<Tuple, int>> f, bool ordered = true) {
    FnStructure X;
    X.k = k;
    X.part_sizes = std::move(sizes);
    X.f = std::move(f);
    X.ordered = ordered;
    X.normalize();
    return X;
}

// every colouring, every copy: the arrow holds iff no colouring avoids a monochromatic copy
bool arrow_oracle(const TkModel& C, const TkModel& B, const TkModel& A, int n) {
    auto ac = find_embeddings(A, C), bc = find_embeddings(B, C), ab = find_embeddings(A, B);
    if (bc.empty()) return false;
    std::vector<std::vector<int>> copies;
    for (const auto& beta : bc) {
        std::vector<int> ids;
        for (const auto& alpha : ab) {
            std::vector<int> comp(alpha.size());
            for (size_t i = 0; i < alpha.size(); ++i) comp[i] = beta[alpha[i]];
            ids.push_back(static_cast<int>(std::find(ac.begin(), ac.end(), comp) - ac.begin()));
        }
        copies.push_back(ids);
    }
    bool all_forced = true;
    for_each_product(static_cast<int>(ac.size()), n, [&](const Tuple& col) {
        bool mono = false;
        for (const auto& c : copies) {
            bool same = true;
            for (int x : c) same = same && col[x] == col[c[0]];
            mono = mono || same;
        }
        if (!mono) all_forced = false;
        return all_forced;
    });
    return all_forced;
}

}  // namespace

TEST(ValidateFn, Classes) {
    auto sk = fn(1, {2, 3}, {{{0}, 2}, {{1}, 3}});
    EXPECT_TRUE(validate_fn(sk, FnClass::Sk).ok());
    auto partial = fn(1, {2, 3}, {{{0}, 2}});
    EXPECT_TRUE(validate_fn(partial, FnClass::Rk).ok());
    EXPECT_EQ(validate_fn(partial, FnClass::Sk).axioms(), std::set<int>{4});
    auto unordered = fn(1, {2, 3}, {{{0}, 2}}, false);
    EXPECT_TRUE(validate_fn(unordered, FnClass::Rk).ok());
    EXPECT_EQ(validate_fn(unordered, FnClass::OrderedRk).axioms(), std::set<int>{3});
    auto bad = fn(1, {2, 3}, {{{0}, 1}});
    EXPECT_EQ(validate_fn(bad, FnClass::Rk).axioms(), std::set<int>{2});
    auto multi = fn(1, {2, 3}, {{{0}, 2}, {{0}, 3}});
    EXPECT_EQ(validate_fn(multi, FnClass::Rk).axioms(), std::set<int>{2});
    EXPECT_THROW(validate_fn(fn(1, {2, 3}, {{{0}, 9}}), FnClass::Rk), ParseError);
}

TEST(ValidatePre, Examples) {
    PreModel P;
    P.k = 1;
    P.part_sizes = {2, 1};
    P.blocks = {{{0}, {1}}};
    P.r = {{{0}, 2}, {{1}, 2}};
    EXPECT_TRUE(validate_pre(P).ok());
    PreModel Q = P;
    Q.r = {{{0}, 2}};
    EXPECT_EQ(validate_pre(Q).axioms(), std::set<int>{6});
    PreModel M = P;
    M.blocks = {{{0}}};
    EXPECT_EQ(validate_pre(M).axioms(), std::set<int>{5});
    PreModel O = P;
    O.r.push_back({{0}, 1});
    EXPECT_TRUE(validate_pre(O).axioms().count(3));
}

TEST(ValidatePre, EveryTkModelIsAPreModel) {
    for (const auto& s : testsupport::sizes_upto(2, 5))
        for (const auto& M : enumerate_models(2, s)) EXPECT_TRUE(validate_pre(as_pre_model(M)).ok());
}

TEST(Functional, Example) {
    PreModel P;
    P.k = 1;
    P.part_sizes = {2, 1};
    P.blocks = {{{0}, {1}}};
    P.r = {{{0}, 2}, {{1}, 2}};
    auto F = to_functional(P);
    // the class sits below its threshold point
    EXPECT_EQ(F.C, fn(1, {2, 2}, {{{0}, 2}, {{1}, 2}}));
    EXPECT_EQ(F.map, (std::vector<int>{0, 1, 3}));
    EXPECT_TRUE(validate_fn(F.C, FnClass::Sk).ok());
    auto R = to_relational(F.C);
    EXPECT_EQ(R.P, P);
}

TEST(Functional, RoundTripFromSk) {
    for (int k : {1, 2})
        for (const auto& s : testsupport::sizes_upto(k, 6))
            for (const auto& C : all_sk(k, s)) {
                auto R = to_relational(C);
                ASSERT_TRUE(validate_pre(R.P).ok());
                EXPECT_EQ(to_functional(R.P).C, C);
            }
}

TEST(Functional, RoundTripFromPre) {
    for (const auto& s : testsupport::sizes_upto(2, 5))
        for (const auto& M : enumerate_models(2, s)) {
            auto P = as_pre_model(M);
            auto F = to_functional(P);
            EXPECT_EQ(to_relational(F.C).P, P);
        }
}

TEST(PhiPsi, InverseOnAdmissibleSets) {
    for (const auto& s : testsupport::sizes_upto(1, 5))
        for (const auto& C : all_sk(1, s)) {
            auto imc = C.image();
            for (uint32_t mask = 0; mask < (1u << C.size()); ++mask) {
                std::vector<int> D;
                for (int e = 0; e < C.size(); ++e)
                    if (mask >> e & 1) D.push_back(e);
                if (!is_closed(C, D)) continue;
                bool admissible = true;
                std::set<int> Ds(D.begin(), D.end()), imd;
                for (const auto& [t, y] : C.f)
                    if (Ds.count(t[0])) imd.insert(y);
                for (int e : D) admissible = admissible && (!imc.count(e) || imd.count(e));
                if (!admissible) {
                    EXPECT_THROW(phi(C, D), DomainError);
                    continue;
                }
                EXPECT_EQ(psi(C, phi(C, D)), D);
            }
        }
}

TEST(FreeAmalgam, Commutes) {
    auto A = fn(1, {1, 1}, {{{0}, 1}}, false);
    auto B1 = fn(1, {2, 1}, {{{0}, 2}, {{1}, 2}}, false);
    auto B2 = fn(1, {1, 2}, {{{0}, 1}}, false);
    auto r = free_amalgamate_rk(A, B1, B2, {0, 2}, {0, 1});
    EXPECT_EQ(r.C.part_sizes, (std::vector<int>{2, 2}));
    EXPECT_TRUE(validate_fn(r.C, FnClass::Rk).ok());
    EXPECT_TRUE(is_fn_embedding(B1, r.C, r.beta1));
    EXPECT_TRUE(is_fn_embedding(B2, r.C, r.beta2));
    EXPECT_EQ(r.beta1[0], r.beta2[0]);
    EXPECT_EQ(r.beta1[2], r.beta2[1]);
    // {1,2} is also an embedding; {0,1} sends the U_2 point into U_1
    EXPECT_NO_THROW(free_amalgamate_rk(A, B1, B2, {1, 2}, {0, 1}));
    EXPECT_THROW(free_amalgamate_rk(A, B1, B2, {0, 1}, {0, 1}), DomainError);
}

TEST(Arrow, Chains) {
    auto h = ramsey_arrow(chain_model(6), chain_model(3), chain_model(2), 2);
    EXPECT_TRUE(h.holds);
    EXPECT_EQ(h.space, 32768u);
    auto f = ramsey_arrow(chain_model(5), chain_model(3), chain_model(2), 2);
    EXPECT_FALSE(f.holds);
    EXPECT_EQ(f.space, 1024u);
    ASSERT_EQ(f.coloring.size(), 10u);
}

TEST(Arrow, AgreesWithBruteForce) {
    std::vector<TkModel> small;
    for (const auto& s : testsupport::sizes_upto(1, 4))
        for (auto& M : enumerate_models(1, s)) small.push_back(M);
    int checked = 0;
    for (const auto& C : small)
        for (const auto& B : small)
            for (const auto& A : small) {
                if (A.size() > B.size() || B.size() > C.size()) continue;
                if (find_embeddings(A, C).size() > 12) continue;
                for (int n : {1, 2}) {
                    EXPECT_EQ(ramsey_arrow(C, B, A, n).holds, arrow_oracle(C, B, A, n));
                    ++checked;
                }
            }
    EXPECT_GT(checked, 100);
}

TEST(Arrow, FunctionalInputsAndErrors) {
    auto A = fn(1, {1, 0}, {});
    auto B = fn(1, {2, 0}, {});
    auto C = fn(1, {3, 0}, {});
    EXPECT_TRUE(ramsey_arrow(C, B, A, 1).holds);
    EXPECT_TRUE(ramsey_arrow(C, B, A, 2).holds);  // pigeonhole
    EXPECT_FALSE(ramsey_arrow(C, B, A, 3).holds);
    EXPECT_FALSE(ramsey_arrow(B, B, A, 2).holds);
    EXPECT_THROW(ramsey_arrow(C, B, fn(1, {1, 0}, {}, false), 2), DomainError);
    EXPECT_THROW(ramsey_arrow(chain_model(3), chain_model(2), chain_model(1), 0), DomainError);
    EXPECT_THROW(ramsey_arrow(chain_model(8), chain_model(3), chain_model(2), 2, 10), BudgetError);
}
