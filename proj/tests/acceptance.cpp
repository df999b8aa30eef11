// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "fo_gen.hpp"
#include "iqml/bisim.hpp"
#include "iqml/fo.hpp"
#include "iqml/proof.hpp"
#include "iqml/semantics.hpp"
#include "iqml/tableau.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace iqml;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Shared by criteria 1, 2 and 9.
struct TableauStats {
    long runs = 0;
    long depth_violations = 0;
    long size_violations = 0;
    long assertion_failures = 0; // invariant checks thrown from inside decide_sat
};

TableauStats g_tableau;

std::optional<Verdict> checked_decide(const Formula& f) {
    ++g_tableau.runs;
    Verdict v;
    try {
        v = decide_sat(f);
    } catch (const std::logic_error&) {
        ++g_tableau.assertion_failures;
        return std::nullopt;
    }
    if (v.sat()) {
        const auto& w = *v.witness;
        if (w.tableau.depth() > f.modal_depth()) ++g_tableau.depth_violations;
        const double sf = static_cast<double>(subformulas(to_nnf(f)).size());
        const double ni = static_cast<double>(witness_index_set(f).all().size());
        if (static_cast<double>(w.model.model.world_count()) > std::pow(sf * (sf + ni), f.modal_depth()))
            ++g_tableau.size_violations;
    }
    return v;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// Criterion 1
Outcome tableau_soundness() {
    const std::vector<std::string> props{"p", "q", "r"};
    long sat = 0, bad = 0, errors = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Formula f = random_formula(seed, 3, props);
        auto v = checked_decide(f);
        if (!v) {
            ++errors;
            continue;
        }
        if (!v->sat()) continue;
        ++sat;
        if (!holds(v->witness->model.model, v->witness->model.point, f)) ++bad;
    }
    return {bad == 0 && errors == 0,
            fmt("1000 formulas, %ld sat, %ld models failing their formula, %ld aborted runs", sat, bad, errors)};
}

// Criterion 2
Outcome oracle_agreement() {
    const std::vector<std::string> props{"p", "q"};
    long disagreements = 0, sat = 0, unsat = 0, beyond_bounds = 0, errors = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Formula f = random_formula(seed + 100000, 2, props);
        auto v = checked_decide(f);
        if (!v) {
            ++errors;
            continue;
        }
        const bool oracle = sat_oracle(f, {3, 2, props}).has_value();
        if (oracle && !v->sat()) ++disagreements;
        if (v->sat() && !oracle) ++beyond_bounds;
        (v->sat() ? sat : unsat)++;
    }
    return {disagreements == 0 && errors == 0,
            fmt("500 formulas (%ld sat, %ld unsat), %ld disagreements, %ld sat only beyond bounds (3,2)", sat, unsat,
                disagreements, beyond_bounds)};
}

// Criterion 3
Outcome axiom_soundness() {
    long a1_bad = 0, a2_bad = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Formula a = random_formula(seed, 1, {"p", "q"});
        Formula b = random_formula(seed + 5000, 1, {"p", "q"});
        Formula pre = Formula::box_a(Formula::imp(a, b));
        Formula a1 = Formula::imp(pre, Formula::imp(Formula::box_a(a), Formula::box_a(b)));
        Formula a2 = Formula::imp(pre, Formula::imp(Formula::dia_a(a), Formula::dia_a(b)));
        if (match_axiom(a1) != Axiom::A1 || !is_valid(a1)) ++a1_bad;
        if (match_axiom(a2) != Axiom::A2 || !is_valid(a2)) ++a2_bad;
    }

    long sampled = 0, nec_bad = 0;
    for (std::uint64_t seed = 0; seed < 50000 && sampled < 50; ++seed) {
        Formula f = random_formula(seed, 2, {"p", "q"});
        if (!is_valid(f)) continue;
        ++sampled;
        if (!is_valid(Formula::box_a(f)) || !is_valid(Formula::box_e(f))) ++nec_bad;
    }

    Proof pr = load_proof(IQML_DATA_DIR "/box_conjunction.proof");
    ProofResult r = check_proof(pr);
    const Formula goal = parse_formula("([A]p & [A]q) -> [A](p & q)");
    const bool derivation_ok = r.accepted && pr.lines.back().formula == goal && is_valid(goal);

    return {a1_bad == 0 && a2_bad == 0 && sampled >= 50 && nec_bad == 0 && derivation_ok,
            fmt("A1 %ld/100 bad, A2 %ld/100 bad, Nec on %ld valid formulas with %ld failures, derivation (%zu lines) %s",
                a1_bad, a2_bad, sampled, nec_bad, pr.lines.size(), derivation_ok ? "accepted and valid" : "FAILED")};
}

// Criterion 4
Outcome translation_preservation() {
    long triples = 0, bad = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        KripkeModel m = random_model(seed, 4, 3, {"p", "q"});
        fo::FOStructure s = fo::to_fo_structure(m);
        Formula f = random_formula(seed * 31 + 7, 3, {"p", "q"});
        fo::FOFormula tr = fo::translate(f);
        for (int w = 0; w < static_cast<int>(m.world_count()); ++w, ++triples)
            if (holds(m, w, f) != fo::fo_eval(s, {{fo::world_var("x"), m.worlds()[w]}}, tr)) ++bad;
    }
    return {triples >= 500 && bad == 0, fmt("%ld triples, %ld disagreements", triples, bad)};
}

// Acyclic models: unravelling to depth |W| is then complete.
KripkeModel random_dag(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int k = 2 + static_cast<int>(rng() % 3);
    const int j = 1 + static_cast<int>(rng() % 2);
    ModelSpec spec;
    for (int a = 0; a < k; ++a) {
        std::vector<std::string> val;
        if (rng() % 2) val.push_back("p");
        if (rng() % 2) val.push_back("q");
        spec.worlds.push_back({"v" + std::to_string(a), val});
    }
    for (int i = 0; i < j; ++i) spec.indices.push_back("i" + std::to_string(i));
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            for (int i = 0; i < j; ++i)
                if (rng() % 100 < 45) spec.edges.push_back({spec.worlds[a].name, spec.indices[i], spec.worlds[b].name});
    return validate_model(spec);
}

// Criterion 5
Outcome bisimulation_invariance() {
    struct Pair {
        KripkeModel m1;
        int w1;
        KripkeModel m2;
        int w2;
    };
    std::vector<Pair> pairs;
    for (std::uint64_t seed = 0; pairs.size() < 60; ++seed) {
        KripkeModel m = random_dag(seed);
        const int w = static_cast<int>(seed % m.world_count());
        switch (seed % 3) {
        case 0: {
            KripkeModel d = duplicate_index(m, m.indices()[0], "dup");
            pairs.push_back({m, w, d, d.world(m.worlds()[w])});
            break;
        }
        case 1: {
            PointedModel t = unravel(m, w, static_cast<int>(m.world_count()));
            pairs.push_back({m, w, t.model, t.point});
            break;
        }
        default: {
            KripkeModel u = disjoint_union(m, m);
            pairs.push_back({u, u.world("a_" + m.worlds()[w]), u, u.world("b_" + m.worlds()[w])});
            break;
        }
        }
    }
    long not_bisimilar = 0, disagreements = 0, checks = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const Pair& p = pairs[k];
        if (!bisimilar(p.m1, p.w1, p.m2, p.w2)) ++not_bisimilar;
        for (std::uint64_t s = 0; s < 100; ++s, ++checks) {
            Formula f = random_formula(k * 1000 + s, 3, {"p", "q"});
            if (holds(p.m1, p.w1, f) != holds(p.m2, p.w2, f)) ++disagreements;
        }
    }
    return {not_bisimilar == 0 && disagreements == 0,
            fmt("%zu pairs (index duplication, unravelling, disjoint union), %ld not bisimilar, %ld disagreements in %ld "
                "checks",
                pairs.size(), not_bisimilar, disagreements, checks)};
}

// Criterion 6
Outcome characteristic_formulas() {
    std::vector<KripkeModel> models;
    for (auto e = enumerate_models(2, 2, {"p"}); auto m = e.next();) models.push_back(*m);
    long checks = 0, exceptions = 0;
    for (const auto& m1 : models) {
        CharContext ctx(m1, {"p"}, 2);
        std::vector<std::vector<CompiledFormula>> chi; // [w1][n]
        for (int w1 = 0; w1 < static_cast<int>(m1.world_count()); ++w1) {
            chi.emplace_back();
            for (int n = 0; n <= 2; ++n) chi.back().emplace_back(ctx.chi(w1, n));
        }
        for (const auto& m2 : models) {
            NBisimulation nb(m1, m2);
            for (int w1 = 0; w1 < static_cast<int>(m1.world_count()); ++w1)
                for (int n = 0; n <= 2; ++n) {
                    auto truth = chi[w1][n].truth_set(m2);
                    for (int w2 = 0; w2 < static_cast<int>(m2.world_count()); ++w2, ++checks)
                        if (truth[w2] != nb(w1, w2, n)) ++exceptions;
                }
        }
    }
    return {exceptions == 0,
            fmt("%zu models, %ld (pair, n) checks, %ld exceptions", models.size(), checks, exceptions)};
}

// Criterion 7
Outcome tree_restriction() {
    long checks = 0, exceptions = 0, positives = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        KripkeModel m1 = random_model(seed, 3, 2, {"p"});
        // every third pair is related by construction to get positive cases
        KripkeModel m2 = seed % 3 == 0 ? duplicate_index(m1, m1.indices()[0], "dup")
                                       : random_model(seed + 5151, 3, 2, {"p"});
        PointedModel t1 = unravel(m1, 0, 3);
        PointedModel t2 = unravel(m2, seed % 3 == 0 ? m2.world(m1.worlds()[0]) : 0, 3);
        NBisimulation nb(t1.model, t2.model);
        for (int n = 0; n <= 3; ++n, ++checks) {
            PointedModel r1 = restrict(t1, n);
            PointedModel r2 = restrict(t2, n);
            const bool want = nb(t1.point, t2.point, n);
            if (want) ++positives;
            if (bisimilar(r1.model, r1.point, r2.model, r2.point) != want) ++exceptions;
        }
    }
    return {exceptions == 0,
            fmt("120 tree pairs x n in 0..3 = %ld checks (%ld n-bisimilar), %ld exceptions", checks, positives,
                exceptions)};
}

// Criterion 8
Outcome ef_game_link() {
    long dup_pairs = 0, fo_checks = 0, fo_disagreements = 0;
    long distinguished = 0, not_spoiler = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        KripkeModel m1 = random_model(seed, 3, 2, {"p"});
        KripkeModel m2 = seed % 2 == 0 ? duplicate_index(m1, m1.indices()[0], "dup")
                                       : random_model(seed + 777, 3, 2, {"p"});
        fo::FOStructure s1 = fo::to_fo_structure(m1);
        fo::FOStructure s2 = fo::to_fo_structure(m2);
        for (int w1 = 0; w1 < static_cast<int>(m1.world_count()); ++w1)
            for (int w2 = 0; w2 < static_cast<int>(m2.world_count()); ++w2) {
                fo::GameConfig cfg{s1, {{fo::Sort::World, w1}}, s2, {{fo::Sort::World, w2}}, 2, 1};
                const bool dup = fo::ef_winner(cfg) == fo::Player::Duplicator;
                const fo::Assignment e1{{fo::world_var("x"), m1.worlds()[w1]}};
                const fo::Assignment e2{{fo::world_var("x"), m2.worlds()[w2]}};

                // depth-1 IQML formulas: the characteristic one plus random samples
                std::vector<Formula> depth_one;
                if (auto g = distinguishing_formula(m1, w1, m2, w2, 1)) depth_one.push_back(*g);
                for (int k = 0; k < 10; ++k)
                    depth_one.push_back(random_formula(seed * 97 + w1 * 11 + w2 * 3 + k, 1, {"p"}));
                bool separated = false;
                for (const auto& g : depth_one) {
                    fo::FOFormula t = fo::translate(g);
                    if (fo::fo_eval(s1, e1, t) != fo::fo_eval(s2, e2, t)) separated = true;
                }
                if (separated) {
                    ++distinguished;
                    if (dup) ++not_spoiler;
                }

                if (!dup) continue;
                ++dup_pairs;
                iqml::testing::RandomFO gen(seed * 1009 + w1 * 31 + w2, {"p"});
                for (int k = 0; k < 100; ++k, ++fo_checks) {
                    fo::FOFormula a = gen(2, 1);
                    if (fo::fo_eval(s1, e1, a) != fo::fo_eval(s2, e2, a)) ++fo_disagreements;
                }
            }
    }
    return {dup_pairs >= 50 && fo_disagreements == 0 && not_spoiler == 0,
            fmt("%ld Duplicator configurations, %ld FO disagreements in %ld checks; %ld pairs separated at depth 1, "
                "%ld not won by Spoiler",
                dup_pairs, fo_disagreements, fo_checks, distinguished, not_spoiler)};
}

// Criterion 9
Outcome termination_bounds() {
    const auto& s = g_tableau;
    return {s.runs >= 1500 && s.depth_violations == 0 && s.size_violations == 0 && s.assertion_failures == 0,
            fmt("%ld tableau runs, %ld depth violations, %ld size-bound violations, %ld assertion failures", s.runs,
                s.depth_violations, s.size_violations, s.assertion_failures)};
}

// Criterion 10
Outcome round_trip_and_nnf() {
    std::vector<KripkeModel> models;
    for (std::uint64_t seed = 0; seed < 20; ++seed) models.push_back(random_model(seed + 300, 4, 3, {"p", "q", "r"}));
    long round_trip = 0, nnf = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Formula f = random_formula(seed + 777777, 3, {"p", "q", "r"});
        try {
            if (parse_formula(render_formula(f)) != f) ++round_trip;
        } catch (const std::exception&) {
            ++round_trip;
        }
        Formula n = to_nnf(f);
        for (const auto& m : models)
            if (truth_set(m, f) != truth_set(m, n)) {
                ++nnf;
                break;
            }
    }
    return {round_trip == 0 && nnf == 0,
            fmt("1000 formulas, %ld round-trip failures, %ld NNF mismatches over 20 models", round_trip, nnf)};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget_seconds;
    };
    const std::vector<Criterion> criteria{
        {1, "tableau soundness", tableau_soundness, 60},
        {2, "tableau/oracle agreement", oracle_agreement, 300},
        {3, "axiom-system soundness", axiom_soundness, 0},
        {4, "translation preservation", translation_preservation, 0},
        {5, "bisimulation invariance", bisimulation_invariance, 0},
        {6, "characteristic-formula lemma", characteristic_formulas, 300},
        {7, "tree-restriction equivalence", tree_restriction, 0},
        {8, "EF game and logic", ef_game_link, 0},
        {9, "termination and size bounds", termination_bounds, 0},
        {10, "round trip and NNF", round_trip_and_nnf, 0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && secs > c.budget_seconds) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s runtime target", c.budget_seconds);
        }
        std::printf("criterion %2d %s  %s: %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
