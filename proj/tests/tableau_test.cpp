#include "iqml/semantics.hpp"
#include "iqml/tableau.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace iqml {
namespace {

Formula f(const char* text) { return parse_formula(text); }

FormulaSet label(std::initializer_list<const char*> items) {
    FormulaSet s;
    for (const char* t : items) s.insert(f(t));
    return s;
}

TEST(WitnessIndexSet, Examples) {
    WitnessIndexSet plain = witness_index_set(f("p"));
    EXPECT_EQ(plain.all(), std::vector<std::string>{"j"});

    WitnessIndexSet both = witness_index_set(f("<E>p & [E]q"));
    EXPECT_EQ(both.c_witnesses.at(f("p")), "c1");
    EXPECT_EQ(both.d_witnesses.at(f("q")), "d1");
    EXPECT_EQ(both.all(), (std::vector<std::string>{"c1", "d1", "j"}));

    // ~[E]p becomes <A>~p: no existential-index modality is left
    EXPECT_EQ(witness_index_set(f("~[E]p")).all(), std::vector<std::string>{"j"});
    // and ~<A>p becomes [E]~p
    EXPECT_EQ(witness_index_set(f("~<A>p")).d_witnesses.at(f("~p")), "d1");
}

TEST(ApplyBr, DiamondWitness) {
    WitnessIndexSet idx = witness_index_set(f("<E>p"));
    auto kids = apply_br(label({"<E>p"}), idx);
    EXPECT_EQ(kids, (std::vector<BrChild>{{"c1", label({"p"})}}));
}

TEST(ApplyBr, BoxWithUniversalDiamond) {
    WitnessIndexSet idx = witness_index_set(f("[E]p & <A>~p"));
    auto kids = apply_br(label({"[E]p", "<A>~p"}), idx);
    EXPECT_EQ(kids, (std::vector<BrChild>{{"d1", label({"p", "~p"})}, {"j", label({"~p"})}}));
}

TEST(ApplyBr, EveryIndexGetsUniversalWitness) {
    WitnessIndexSet idx = witness_index_set(f("<E>p & <A>~p & [A]q"));
    auto kids = apply_br(label({"<E>p", "<A>~p", "[A]q"}), idx);
    EXPECT_EQ(kids, (std::vector<BrChild>{{"c1", label({"p", "q"})}, {"c1", label({"~p", "q"})}, {"j", label({"~p", "q"})}}));
}

TEST(ApplyBr, BoxesAloneHaveNoChildren) {
    WitnessIndexSet idx = witness_index_set(f("[E]p & [A]q"));
    EXPECT_TRUE(apply_br(label({"[E]p", "[A]q", "r"}), idx).empty());
}

TEST(ApplyBr, RejectsUnsaturatedOrClosed) {
    WitnessIndexSet idx = witness_index_set(f("p"));
    EXPECT_THROW(apply_br(label({"p & q"}), idx), std::invalid_argument);
    EXPECT_THROW(apply_br(label({"p", "~p"}), idx), std::invalid_argument);
}

TEST(DecideSat, Examples) {
    EXPECT_FALSE(decide_sat(f("p & ~p")).sat());
    EXPECT_FALSE(decide_sat(f("[E]p & <A>~p")).sat());

    Verdict box = decide_sat(f("[E]false"));
    ASSERT_TRUE(box.sat());
    EXPECT_EQ(box.witness->model.model.world_count(), 1u);
    EXPECT_EQ(box.witness->model.model.edge_count(), 0u);

    Verdict split = decide_sat(f("<E>p & <A>~p"));
    ASSERT_TRUE(split.sat());
    EXPECT_TRUE(holds(split.witness->model.model, split.witness->model.point, f("<E>p & <A>~p")));
}

TEST(DecideSat, RenderedVerdict) {
    EXPECT_EQ(render_verdict(decide_sat(f("p & ~p"))), "UNSAT\n");
    const std::string sat = render_verdict(decide_sat(f("<E>p")));
    EXPECT_EQ(sat.rfind("SAT\n", 0), 0u);
    KripkeModel back = validate_model(parse_model(sat.substr(4)));
    EXPECT_TRUE(holds(back, "w", f("<E>p")));
}

TEST(ExtractModel, Examples) {
    WitnessIndexSet idx = witness_index_set(f("<E>p"));
    TableauNode root{"w", label({"p"}), std::nullopt, {}};
    PointedModel single = extract_model(root, idx);
    EXPECT_EQ(single.model.world_count(), 1u);
    EXPECT_EQ(single.model.valuation(single.point), std::vector<std::string>{"p"});
    EXPECT_EQ(single.model.indices(), (std::vector<std::string>{"c1", "j"}));

    TableauNode parent{"w", label({"<E>p"}), std::nullopt, {TableauNode{"w_0", label({"p"}), "c1", {}}}};
    PointedModel two = extract_model(parent, idx);
    EXPECT_EQ(two.model.world_count(), 2u);
    EXPECT_TRUE(two.model.has_edge(two.model.world("w"), two.model.index("c1"), two.model.world("w_0")));

    TableauNode closed{"w", label({"p", "~p"}), std::nullopt, {}};
    EXPECT_THROW(extract_model(closed, idx), std::invalid_argument);
}

TEST(DecideSat, SoundnessAndShape) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Formula g = random_formula(seed, 3, {"p", "q", "r"});
        Verdict v = decide_sat(g);
        if (!v.sat()) continue;
        const auto& w = *v.witness;
        ASSERT_TRUE(holds(w.model.model, w.model.point, g)) << render_formula(g);
        ASSERT_LE(w.tableau.depth(), modal_depth(g));
        const double sf = static_cast<double>(subformulas(to_nnf(g)).size());
        const double ni = static_cast<double>(witness_index_set(g).all().size());
        ASSERT_LE(static_cast<double>(w.model.model.world_count()), std::pow(sf * (sf + ni), modal_depth(g)));
    }
}

TEST(DecideSat, AgreesWithBoundedOracle) {
    int sat = 0, unsat = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Formula g = random_formula(seed + 40000, 2, {"p", "q"});
        const bool tableau = decide_sat(g).sat();
        const bool oracle = sat_oracle(g, {3, 2, {"p", "q"}}).has_value();
        if (oracle) ASSERT_TRUE(tableau) << render_formula(g);
        if (!tableau) ASSERT_FALSE(oracle) << render_formula(g);
        (tableau ? sat : unsat)++;
    }
    EXPECT_GT(sat, 0);
    EXPECT_GT(unsat, 0);
}

TEST(Validity, AxiomInstances) {
    EXPECT_TRUE(is_valid(f("[A](p -> q) -> ([A]p -> [A]q)")));
    EXPECT_TRUE(is_valid(f("[A](p -> q) -> (<A>p -> <A>q)")));
    EXPECT_TRUE(is_valid(f("[A](p -> q) -> ([E]p -> [E]q)")));
    EXPECT_TRUE(is_valid(f("[A](p -> q) -> (<E>p -> <E>q)")));
    EXPECT_TRUE(is_valid(f("([A]p & [A]q) -> [A](p & q)")));
    EXPECT_FALSE(is_valid(f("[E]p -> <E>p")));
    EXPECT_FALSE(is_valid(f("[E]p -> [A]p")));
    EXPECT_TRUE(is_valid(f("<A>p -> <E>p")));
}

} // namespace
} // namespace iqml
