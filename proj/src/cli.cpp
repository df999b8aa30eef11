#include "iqml/cli.hpp"

#include "iqml/bisim.hpp"
#include "iqml/error.hpp"
#include "iqml/fo.hpp"
#include "iqml/proof.hpp"
#include "iqml/semantics.hpp"
#include "iqml/tableau.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>

namespace iqml::cli {

namespace {

using nlohmann::json;

struct Result {
    int code = 0;
    std::string verdict;
    std::vector<std::string> lines; // plain-text body
    std::optional<std::string> model;
    json value; // structured payload for --format json
};

Result affirm(bool yes, std::string verdict, std::string line) {
    Result r;
    r.code = yes ? 0 : 1;
    r.verdict = std::move(verdict);
    r.lines.push_back(std::move(line));
    return r;
}

int world_of(const KripkeModel& m, const std::string& name) { return m.world(name); }

int oracle_guard_bits() {
    const char* env = std::getenv("IQML_ORACLE_GUARD");
    if (!env || !*env) return kDefaultGuardBits;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0 || v > 63)
        throw std::invalid_argument(std::string("IQML_ORACLE_GUARD must be an integer in 1..63, got '") + env + "'");
    return static_cast<int>(v);
}

std::vector<std::string> union_props(const std::set<std::string>& a, const std::vector<std::string>& b) {
    std::set<std::string> all(a.begin(), a.end());
    all.insert(b.begin(), b.end());
    return {all.begin(), all.end()};
}

// Two pointed models named on the command line.
struct PairArgs {
    std::string model1, world1, model2, world2;

    void bind(CLI::App* sub) {
        sub->add_option("model1", model1, "first model file")->required();
        sub->add_option("world1", world1, "world of the first model")->required();
        sub->add_option("model2", model2, "second model file")->required();
        sub->add_option("world2", world2, "world of the second model")->required();
    }
};

const char* kFormatHelp = R"(Formula syntax: atoms are lower-case identifiers; true, false; ~ & | ->;
modalities [E] [A] <E> <A>. Binding: prefix operators > & > | > ->, with ->
right-associative. First-order output uses EXISTS-W/FORALL-W for world
quantifiers, EXISTS-I/FORALL-I for index quantifiers, Qp(x) and R(x,t,y).)";

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Implicitly quantified modal logic toolkit", "iqml"};
    app.footer(kFormatHelp);
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "plain";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"plain", "json"}));

    std::function<Result()> action;
    std::string command;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->callback([&command, name] { command = name; });
        return s;
    };

    // check <model> <world> <formula>
    std::string model_path, world_name, formula_text;
    CLI::App* check = sub("check", "evaluate a formula at a world of a model");
    check->add_option("model", model_path, "model file")->required();
    check->add_option("world", world_name, "world name")->required();
    check->add_option("formula", formula_text, "formula")->required();

    CLI::App* sat = sub("sat", "decide satisfiability with the tableau");
    sat->add_option("formula", formula_text, "formula")->required();

    CLI::App* valid = sub("valid", "decide validity with the tableau");
    valid->add_option("formula", formula_text, "formula")->required();

    int worlds = 3, indices = 2;
    std::vector<std::string> extra_props;
    CLI::App* oracle = sub("oracle", "search all models within the bounds for a satisfying one");
    oracle->add_option("formula", formula_text, "formula")->required();
    oracle->add_option("--worlds", worlds, "maximum number of worlds")->check(CLI::PositiveNumber);
    oracle->add_option("--indices", indices, "maximum number of indices")->check(CLI::PositiveNumber);
    oracle->add_option("--props", extra_props, "additional propositions")->delimiter(',');

    PairArgs pair;
    bool explain = false;
    CLI::App* bisim = sub("bisim", "decide bisimilarity of two pointed models");
    pair.bind(bisim);
    bisim->add_flag("--explain", explain, "print a distinguishing formula when not bisimilar");

    int n = 1;
    CLI::App* nbisim = sub("nbisim", "decide n-bisimilarity of two pointed models");
    pair.bind(nbisim);
    nbisim->add_option("--n", n, "depth")->check(CLI::NonNegativeNumber);

    int max_n = 3;
    CLI::App* distinguish = sub("distinguish", "find a characteristic formula separating two pointed models");
    pair.bind(distinguish);
    distinguish->add_option("--max-n", max_n, "largest depth to try")->check(CLI::NonNegativeNumber);

    std::vector<std::string> props;
    CLI::App* charform = sub("charform", "print the depth-n characteristic formula of a pointed model");
    charform->add_option("model", model_path, "model file")->required();
    charform->add_option("world", world_name, "world name")->required();
    charform->add_option("--n", n, "depth")->check(CLI::NonNegativeNumber);
    charform->add_option("--props", props, "proposition set (default: those of the model)")->delimiter(',');

    std::string var = "x";
    CLI::App* translate = sub("translate", "translate into two-sorted first-order logic");
    translate->add_option("formula", formula_text, "formula")->required();
    translate->add_option("--var", var, "free world variable")->check(CLI::IsMember({"x", "y"}));

    int qx = 1, qt = 1;
    CLI::App* ef = sub("ef", "solve the Ehrenfeucht-Fraisse game from (world1; world2)");
    pair.bind(ef);
    ef->add_option("--qx", qx, "world pebbles")->check(CLI::NonNegativeNumber);
    ef->add_option("--qt", qt, "index pebbles")->check(CLI::NonNegativeNumber);

    std::string proof_path;
    CLI::App* prove = sub("prove", "check a Hilbert-style derivation");
    prove->add_option("proof", proof_path, "proof file")->required();

    std::uint64_t seed = 0;
    int depth = 2;
    std::vector<std::string> gen_props{"p", "q"};
    CLI::App* gen_formula = sub("gen-formula", "print a random formula");
    gen_formula->add_option("--seed", seed, "random seed");
    gen_formula->add_option("--depth", depth, "maximum modal depth")->check(CLI::NonNegativeNumber);
    gen_formula->add_option("--props", gen_props, "propositions")->delimiter(',');

    CLI::App* gen_model = sub("gen-model", "print a random model");
    gen_model->add_option("--seed", seed, "random seed");
    gen_model->add_option("--worlds", worlds, "maximum number of worlds")->check(CLI::PositiveNumber);
    gen_model->add_option("--indices", indices, "maximum number of indices")->check(CLI::PositiveNumber);
    gen_model->add_option("--props", gen_props, "propositions")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto emit_error = [&](const std::string& msg) {
        err << "error: " << msg << "\n";
        if (format == "json")
            out << json{{"command", command}, {"verdict", "error"}, {"diagnostics", json::array({msg})}}.dump() << "\n";
        return 2;
    };

    Result r;
    try {
        if (command == "check") {
            KripkeModel m = load_model(model_path);
            const bool v = holds(m, world_name, parse_formula(formula_text));
            r = affirm(v, v ? "true" : "false", v ? "true" : "false");
        } else if (command == "sat") {
            Verdict v = decide_sat(parse_formula(formula_text));
            r = affirm(v.sat(), v.sat() ? "sat" : "unsat", v.sat() ? "SAT" : "UNSAT");
            if (v.sat()) r.model = render_model(v.witness->model.model, v.witness->model.point);
        } else if (command == "valid") {
            const Formula f = parse_formula(formula_text);
            Verdict v = decide_sat(Formula::neg(f));
            r = affirm(!v.sat(), v.sat() ? "not valid" : "valid", v.sat() ? "NOT VALID" : "VALID");
            if (v.sat()) {
                r.lines.push_back("countermodel:");
                r.model = render_model(v.witness->model.model, v.witness->model.point);
            }
        } else if (command == "oracle") {
            const Formula f = parse_formula(formula_text);
            OracleBounds b{worlds, indices, union_props(propositions(f), extra_props), oracle_guard_bits()};
            auto hit = sat_oracle(f, b);
            r = affirm(hit.has_value(), hit ? "sat" : "unsat",
                       hit ? "SAT" : "UNSAT within " + std::to_string(worlds) + " worlds and " + std::to_string(indices) + " indices");
            if (hit) r.model = render_model(hit->model, hit->point);
        } else if (command == "bisim") {
            KripkeModel m1 = load_model(pair.model1), m2 = load_model(pair.model2);
            const int w1 = world_of(m1, pair.world1), w2 = world_of(m2, pair.world2);
            const bool v = bisimilar(m1, w1, m2, w2);
            r = affirm(v, v ? "bisimilar" : "not bisimilar", v ? "BISIMILAR" : "NOT BISIMILAR");
            if (!v && explain) {
                const int bound = static_cast<int>(m1.world_count() * m2.world_count());
                try {
                    if (auto g = distinguishing_formula(m1, w1, m2, w2, bound)) {
                        r.lines.push_back("distinguishing formula: " + render_formula(*g));
                        r.value = {{"distinguishing_formula", render_formula(*g)}};
                    }
                } catch (const GuardError& e) {
                    r.lines.push_back(std::string("distinguishing formula unavailable: ") + e.what());
                }
            }
        } else if (command == "nbisim") {
            KripkeModel m1 = load_model(pair.model1), m2 = load_model(pair.model2);
            const bool v = n_bisimilar(m1, world_of(m1, pair.world1), m2, world_of(m2, pair.world2), n);
            const std::string label = std::to_string(n) + "-BISIMILAR";
            r = affirm(v, v ? "bisimilar" : "not bisimilar", v ? label : "NOT " + label);
            r.value = {{"n", n}};
        } else if (command == "distinguish") {
            KripkeModel m1 = load_model(pair.model1), m2 = load_model(pair.model2);
            auto g = distinguishing_formula(m1, world_of(m1, pair.world1), m2, world_of(m2, pair.world2), max_n);
            r = affirm(g.has_value(), g ? "found" : "none",
                       g ? render_formula(*g) : "NONE up to depth " + std::to_string(max_n));
            if (g) r.value = {{"formula", render_formula(*g)}, {"depth", modal_depth(*g)}};
        } else if (command == "charform") {
            KripkeModel m = load_model(model_path);
            CharContext ctx(m, props.empty() ? m.propositions() : props, n);
            const std::string text = render_formula(char_formula(ctx, world_of(m, world_name), n));
            r = affirm(true, "formula", text);
            r.value = {{"formula", text}};
        } else if (command == "translate") {
            fo::FOFormula t = fo::translate(parse_formula(formula_text), fo::world_var(var));
            fo::Ranks ranks = fo::quantifier_ranks(t);
            r = affirm(true, "formula", fo::render(t));
            r.value = {{"formula", fo::render(t)}, {"rank_world", ranks.world}, {"rank_index", ranks.index}};
        } else if (command == "ef") {
            KripkeModel m1 = load_model(pair.model1), m2 = load_model(pair.model2);
            fo::GameConfig cfg{fo::to_fo_structure(m1), {{fo::Sort::World, world_of(m1, pair.world1)}},
                               fo::to_fo_structure(m2), {{fo::Sort::World, world_of(m2, pair.world2)}}, qx, qt};
            const bool dup = fo::ef_winner(cfg) == fo::Player::Duplicator;
            r = affirm(dup, dup ? "duplicator" : "spoiler", dup ? "DUPLICATOR" : "SPOILER");
        } else if (command == "prove") {
            Proof pr = load_proof(proof_path);
            ProofResult res = check_proof(pr);
            r = affirm(res.accepted, res.accepted ? "accepted" : "rejected",
                       res.accepted ? "ACCEPTED" : "REJECTED line " + std::to_string(res.line) + ": " + res.reason);
            if (res.accepted)
                r.lines.push_back("proves: " + render_formula(pr.lines.back().formula));
            else
                r.value = {{"line", res.line}, {"reason", res.reason}};
        } else if (command == "gen-formula") {
            const std::string text = render_formula(random_formula(seed, depth, gen_props));
            r = affirm(true, "formula", text);
            r.value = {{"formula", text}, {"seed", seed}};
        } else if (command == "gen-model") {
            r = affirm(true, "model", "");
            r.lines.clear();
            r.model = render_model(random_model(seed, worlds, indices, gen_props));
        }
    } catch (const ParseError& e) {
        return emit_error(e.what());
    } catch (const ModelError& e) {
        return emit_error(std::string("invalid model: ") + e.what());
    } catch (const std::exception& e) {
        return emit_error(e.what());
    }

    if (format == "json") {
        json j{{"command", command}, {"verdict", r.verdict}, {"diagnostics", json::array()}};
        if (!r.value.is_null()) j["value"] = r.value;
        if (r.model) j["model"] = *r.model;
        if (!r.lines.empty()) j["text"] = r.lines;
        out << j.dump() << "\n";
    } else {
        for (const auto& line : r.lines) out << line << "\n";
        if (r.model) out << *r.model;
    }
    return r.code;
}

} // namespace iqml::cli
