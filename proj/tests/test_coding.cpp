#include <gtest/gtest.h>

#include "support.hpp"

using namespace fopk;
using testsupport::random_instance;

namespace {

PartiteHypergraph hg(int k, std::vector<int> sizes, std::vector<Tuple> edges) {
    PartiteHypergraph E;
    E.k = k;
    E.part_sizes = std::move(sizes);
    E.edges = std::move(edges);
    check_hypergraph(E);
    return E;
}

Witness grid(int k, int n, std::vector<int> a, std::vector<std::vector<int>> b) {
    Witness w;
    w.format = WFormat::Grid;
    w.k = k;
    w.n = n;
    w.a = std::move(a);
    w.b = std::move(b);
    return w;
}

// E(a_g, b_i) iff i <= g, checked by hand for k = 1
bool half_graph_oracle(const PartiteHypergraph& E, const Witness& w) {
    std::set<Tuple> ed(E.edges.begin(), E.edges.end());
    for (int g = 1; g <= w.n; ++g)
        for (int i = 1; i <= w.n; ++i)
            if (ed.count({w.a[g - 1], w.b[0][i - 1]}) != (i <= g ? 1u : 0u)) return false;
    return true;
}

}  // namespace

TEST(Hypergraph, CheckRejectsBadInput) {
    EXPECT_THROW(hg(2, {1, 1}, {}), ParseError);
    EXPECT_THROW(hg(2, {1, 1, 1}, {{0, 0, 1}}), ParseError);
    EXPECT_THROW(hg(2, {1, 1, 1}, {{0, 0, 0}, {0, 0, 0}}), ParseError);
    EXPECT_THROW(hg(1, {2, 2}, {{0, 0, 0}}), ParseError);
}

TEST(Hypergraph, ComplementIsAnInvolution) {
    Rng rng(2);
    for (int it = 0; it < 50; ++it) {
        PartiteHypergraph E;
        E.k = 2;
        E.part_sizes = {1 + int(rng.below(3)), 1 + int(rng.below(3)), 1 + int(rng.below(3))};
        for_each_product(E.part_sizes, [&](const Tuple& e) {
            if (rng.below(2)) E.edges.push_back(e);
        });
        auto C = complement_hypergraph(E);
        size_t total = size_t(E.part_sizes[0]) * E.part_sizes[1] * E.part_sizes[2];
        EXPECT_EQ(C.edges.size() + E.edges.size(), total);
        EXPECT_EQ(complement_hypergraph(C).edges, E.edges);
    }
}

TEST(RCoding, ModelCodesItself) {
    for (const auto& s : testsupport::sizes_upto(2, 5))
        for (const auto& M : enumerate_models(2, s)) {
            auto E = model_hypergraph(M);
            CodingAssignment id(M.size());
            for (int h = 0; h < M.size(); ++h) id[h] = h - M.offset(M.block_of(h));
            EXPECT_TRUE(verify_r_coding(M, E, id));
            auto got = find_r_coding(M, E);
            ASSERT_TRUE(got.has_value());
            EXPECT_TRUE(verify_r_coding(M, E, *got));
        }
}

TEST(RCoding, Examples) {
    TkModel H;
    H.k = 2;
    H.part_sizes = {1, 1, 1};
    H.qorder = {{0, 1}};
    H.r = {{{0, 1}, 2}};
    auto E = hg(2, {1, 1, 2}, {{0, 0, 0}});
    std::string why;
    EXPECT_TRUE(verify_r_coding(H, E, {0, 0, 0}));
    EXPECT_FALSE(verify_r_coding(H, E, {0, 0, 1}, &why));
    EXPECT_FALSE(why.empty());
    EXPECT_FALSE(verify_r_coding(H, E, {0, 0}));
    EXPECT_TRUE(find_r_coding(H, E).has_value());
    // H needs a non-edge and an edge over the same tuple; a single-edge E has only one X_3 vertex
    TkModel H2 = H;
    H2.part_sizes = {1, 1, 2};
    H2.r = {{{0, 1}, 3}};
    EXPECT_FALSE(find_r_coding(H2, hg(2, {1, 1, 1}, {{0, 0, 0}})).has_value());
}

TEST(RCoding, CodesIntoExtensions) {
    Rng rng(17);
    for (int it = 0; it < 100; ++it) {
        std::vector<int> s = {1 + int(rng.below(2)), 1 + int(rng.below(2)), int(rng.below(3))};
        auto H = random_model(2, s, rng);
        std::vector<int> big = s;
        for (auto& x : big) x += int(rng.below(2));
        auto ext = generic_extend(H, big, rng.next());
        auto E = model_hypergraph(ext.model);
        auto got = find_r_coding(H, E);
        ASSERT_TRUE(got.has_value());
        EXPECT_TRUE(verify_r_coding(H, E, *got));
    }
}

TEST(Witness, GridExamples) {
    auto E = hg(2, {1, 1, 2}, {{0, 0, 0}});
    EXPECT_TRUE(fop_witness_check(E, grid(2, 1, {0}, {{0}, {0}})));
    std::string why;
    EXPECT_FALSE(fop_witness_check(E, grid(2, 1, {0}, {{0}, {1}}), &why));
    EXPECT_NE(why.find("required"), std::string::npos);
    EXPECT_THROW(fop_witness_check(E, grid(2, 1, {0}, {{0}})), DomainError);
    EXPECT_THROW(fop_witness_check(E, grid(2, 1, {3}, {{0}, {0}})), DomainError);
}

TEST(Witness, HalfGraphAgainstOracle) {
    // k = 1 grid: E(a_g, b_i) iff i <= g
    Rng rng(8);
    for (int it = 0; it < 300; ++it) {
        int n = 1 + int(rng.below(3));
        PartiteHypergraph E;
        E.k = 1;
        E.part_sizes = {n + 1, n + 1};
        for_each_product(E.part_sizes, [&](const Tuple& e) {
            if (rng.below(2)) E.edges.push_back(e);
        });
        auto w = grid(1, n, testsupport::inj(rng, n, n + 1), {testsupport::inj(rng, n, n + 1)});
        EXPECT_EQ(fop_witness_check(E, w), half_graph_oracle(E, w));
    }
}

TEST(Witness, OrderExampleAndReversal) {
    auto E = hg(2, {1, 1, 1}, {{0, 0, 0}});
    Witness w;
    w.format = WFormat::Order;
    w.k = 2;
    w.n = 1;
    w.order = {StarItem{{1, 1}, -1}, StarItem{{}, 1}};
    w.seq = {{0}, {0}, {0}};
    EXPECT_TRUE(fop_witness_check(E, w));
    EXPECT_FALSE(fop_witness_check(E, reverse_order_witness(w)));
    EXPECT_TRUE(fop_witness_check(complement_hypergraph(E), reverse_order_witness(w)));
}

TEST(Witness, ReversalOnRandomInstances) {
    Rng rng(21);
    for (int it = 0; it < 200; ++it) {
        auto in = random_instance(WFormat::Order, rng);
        ASSERT_TRUE(fop_witness_check(in.E, in.w));
        EXPECT_TRUE(fop_witness_check(complement_hypergraph(in.E), reverse_order_witness(in.w)));
    }
}

TEST(Convert, PreservesValidity) {
    Rng rng(3);
    const std::pair<WFormat, WFormat> dirs[] = {
        {WFormat::Grid, WFormat::Array},     {WFormat::Array, WFormat::Grid},
        {WFormat::Grid, WFormat::Order},     {WFormat::Order, WFormat::Partition},
        {WFormat::Partition, WFormat::Grid}, {WFormat::IpGrid, WFormat::Grid},
    };
    for (auto [from, to] : dirs)
        for (int it = 0; it < 150; ++it) {
            auto in = random_instance(from, rng);
            ASSERT_TRUE(fop_witness_check(in.E, in.w));
            auto out = convert_witness(in.w, to);
            EXPECT_EQ(out.format, to);
            std::string why;
            EXPECT_TRUE(fop_witness_check(in.E, out, &why)) << format_name(from) << "->" << format_name(to) << ": " << why;
        }
}

TEST(Convert, GridToArrayKeepsN) {
    auto w = grid(1, 2, {0, 1}, {{0, 1}});
    auto a = convert_witness(w, WFormat::Array);
    EXPECT_EQ(a.n, 2);
    EXPECT_EQ(a.arr.size(), 2u);
}

TEST(Convert, PartitionWithOneLabel) {
    // every tuple gets label 1: a grid of size 1 survives
    Witness w;
    w.format = WFormat::Partition;
    w.k = 1;
    w.n = 2;
    w.s = 1;
    w.labels = {1, 1};
    w.seq = {{0, 1}};
    w.bpart = {0};
    auto E = hg(1, {2, 1}, {{0, 0}, {1, 0}});
    ASSERT_TRUE(fop_witness_check(E, w));
    auto g = convert_witness(w, WFormat::Grid);
    EXPECT_EQ(g.n, 1);
    EXPECT_TRUE(fop_witness_check(E, g));
}

TEST(Convert, UndefinedDirections) {
    auto w = grid(1, 1, {0}, {{0}});
    EXPECT_THROW(convert_witness(w, WFormat::IpGrid), DomainError);
    EXPECT_THROW(convert_witness(w, WFormat::Partition), DomainError);
}

TEST(IpSearch, FindsPlantedGrid) {
    Rng rng(4);
    for (int it = 0; it < 60; ++it) {
        auto in = random_instance(WFormat::IpGrid, rng);
        auto got = find_ip_grid(in.E, in.w.n);
        ASSERT_TRUE(got.has_value());
        EXPECT_TRUE(fop_witness_check(in.E, *got));
    }
}

TEST(IpSearch, Examples) {
    auto E = hg(2, {2, 1, 1}, {{1, 0, 0}});
    auto w = find_ip_grid(E, 1);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->a, (std::vector<int>{0, 1}));
    EXPECT_FALSE(find_ip_grid(hg(2, {1, 1, 1}, {{0, 0, 0}}), 1).has_value());
    EXPECT_FALSE(find_ip_grid(hg(2, {2, 1, 1}, {}), 1).has_value());
    EXPECT_THROW(find_ip_grid(E, 1, 0), BudgetError);
    EXPECT_THROW(find_ip_grid(hg(2, {2, 5, 5}, {}), 5), CapacityError);
}
