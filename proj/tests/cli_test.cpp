#include "iqml/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <sstream>

namespace iqml {
namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kData = IQML_DATA_DIR;

TEST(Cli, SatAndValid) {
    Invocation unsat = run({"sat", "p & ~p"});
    EXPECT_EQ(unsat.code, 1);
    EXPECT_EQ(unsat.out, "UNSAT\n");

    Invocation sat = run({"sat", "<E>p & <A>~p"});
    EXPECT_EQ(sat.code, 0);
    EXPECT_EQ(sat.out.rfind("SAT\nworld w\n", 0), 0u);

    Invocation valid = run({"valid", "[A](p->q) -> (<A>p -> <A>q)"});
    EXPECT_EQ(valid.code, 0);
    EXPECT_EQ(valid.out, "VALID\n");

    Invocation invalid = run({"valid", "[E]p -> [A]p"});
    EXPECT_EQ(invalid.code, 1);
    EXPECT_NE(invalid.out.find("NOT VALID"), std::string::npos);
}

TEST(Cli, Check) {
    Invocation r = run({"check", kData + "/two_index.kmodel", "w1", "[E]p"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "true\n");
    EXPECT_EQ(run({"check", kData + "/two_index.kmodel", "w1", "[A]p"}).code, 1);
    EXPECT_EQ(run({"check", kData + "/two_index.kmodel", "nowhere", "p"}).code, 2);
}

TEST(Cli, JsonFormat) {
    Invocation r = run({"--format", "json", "sat", "<E>p"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "sat");
    EXPECT_EQ(j["verdict"], "sat");
    EXPECT_TRUE(j["model"].is_string());

    // the format flag may also follow the subcommand
    Invocation after = run({"sat", "p & ~p", "--format", "json"});
    EXPECT_EQ(after.code, 1);
    EXPECT_EQ(nlohmann::json::parse(after.out)["verdict"], "unsat");

    Invocation bad = run({"--format", "json", "sat", "p &"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(nlohmann::json::parse(bad.out)["verdict"], "error");
    EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, BisimulationCommands) {
    const std::string l = kData + "/ep_left.kmodel", r = kData + "/ep_right.kmodel";
    Invocation plain = run({"bisim", l, "w1", r, "w2"});
    EXPECT_EQ(plain.code, 1);
    EXPECT_EQ(plain.out, "NOT BISIMILAR\n");
    Invocation explained = run({"bisim", l, "w1", r, "w2", "--explain"});
    EXPECT_NE(explained.out.find("distinguishing formula: "), std::string::npos);

    EXPECT_EQ(run({"bisim", l, "w1", l, "w1"}).code, 0);
    EXPECT_EQ(run({"nbisim", l, "w1", r, "w2", "--n", "0"}).code, 0);
    EXPECT_EQ(run({"nbisim", l, "w1", r, "w2", "--n", "1"}).code, 1);
    EXPECT_EQ(run({"distinguish", l, "w1", r, "w2", "--max-n", "2"}).code, 0);
    EXPECT_EQ(run({"distinguish", l, "w1", l, "w1", "--max-n", "2"}).code, 1);

    Invocation chi = run({"charform", l, "b", "--n", "0", "--props", "p"});
    EXPECT_EQ(chi.code, 0);
    EXPECT_EQ(chi.out, "~p\n");
}

TEST(Cli, FirstOrderCommands) {
    Invocation t = run({"translate", "[E]p"});
    EXPECT_EQ(t.code, 0);
    EXPECT_EQ(t.out, "EXISTS-I t FORALL-W y (R(x,t,y) -> Qp(y))\n");

    const std::string l = kData + "/ep_left.kmodel", r = kData + "/ep_right.kmodel";
    Invocation spoiler = run({"ef", l, "w1", r, "w2", "--qx", "2", "--qt", "1"});
    EXPECT_EQ(spoiler.code, 1);
    EXPECT_EQ(spoiler.out, "SPOILER\n");
    EXPECT_EQ(run({"ef", l, "w1", r, "w2", "--qx", "2", "--qt", "0"}).code, 0);
}

TEST(Cli, ProveAndOracle) {
    Invocation ok = run({"prove", kData + "/box_conjunction.proof"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out.rfind("ACCEPTED\n", 0), 0u);
    EXPECT_EQ(run({"prove", kData + "/missing.proof"}).code, 2);

    Invocation found = run({"oracle", "<E>p & <A>~p", "--worlds", "3", "--indices", "2"});
    EXPECT_EQ(found.code, 0);
    EXPECT_EQ(run({"oracle", "[E]p & <A>~p", "--worlds", "3", "--indices", "2"}).code, 1);
}

TEST(Cli, OracleGuardFromEnvironment) {
    ::setenv("IQML_ORACLE_GUARD", "4", 1);
    Invocation r = run({"oracle", "p", "--worlds", "3", "--indices", "2"});
    ::unsetenv("IQML_ORACLE_GUARD");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, UsageErrorsAndDeterminism) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"sat"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "sat", "p"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);

    Invocation a = run({"gen-formula", "--seed", "7", "--depth", "3"});
    Invocation b = run({"gen-formula", "--seed", "7", "--depth", "3"});
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run({"gen-model", "--seed", "3"}).out, run({"gen-model", "--seed", "3"}).out);
    EXPECT_EQ(run({"sat", "<E>p & [A]q"}).out, run({"sat", "<E>p & [A]q"}).out);
}

} // namespace
} // namespace iqml
