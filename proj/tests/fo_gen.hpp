#pragma once

// Random two-sorted FO formulas for sampling-based tests.

#include "iqml/fo.hpp"

#include <random>

namespace iqml::testing {

class RandomFO {
public:
    RandomFO(std::uint64_t seed, std::vector<std::string> props) : rng_(seed), props_(std::move(props)) {}

    /// A formula whose only free variable is the world variable x and whose
    /// quantifier ranks are at most (qw, qi).
    fo::FOFormula operator()(int qw, int qi) {
        std::vector<fo::Var> scope{fo::world_var("x")};
        return gen(qw, qi, scope, 0);
    }

private:
    int roll(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

    const fo::Var* pick(const std::vector<fo::Var>& scope, fo::Sort sort) {
        std::vector<const fo::Var*> c;
        for (const auto& v : scope)
            if (v.sort == sort) c.push_back(&v);
        return c.empty() ? nullptr : c[roll(static_cast<int>(c.size()))];
    }

    fo::FOFormula atom(const std::vector<fo::Var>& scope) {
        const fo::Var* t = pick(scope, fo::Sort::Index);
        if (t && roll(2) == 0) {
            const fo::Var* a = pick(scope, fo::Sort::World);
            const fo::Var* b = pick(scope, fo::Sort::World);
            return fo::FOFormula::r(*a, *t, *b);
        }
        if (props_.empty()) return roll(2) ? fo::FOFormula::top() : fo::FOFormula::bot();
        return fo::FOFormula::q(props_[roll(static_cast<int>(props_.size()))], *pick(scope, fo::Sort::World));
    }

    fo::FOFormula gen(int qw, int qi, std::vector<fo::Var>& scope, int size) {
        if (size > 6 || roll(10) < 2) return atom(scope);
        switch (roll(6)) {
        case 0: return fo::FOFormula::neg(gen(qw, qi, scope, size + 1));
        case 1: return fo::FOFormula::conj(gen(qw, qi, scope, size + 1), gen(qw, qi, scope, size + 2));
        case 2: return fo::FOFormula::disj(gen(qw, qi, scope, size + 1), gen(qw, qi, scope, size + 2));
        case 3: return fo::FOFormula::imp(gen(qw, qi, scope, size + 1), gen(qw, qi, scope, size + 2));
        default: {
            const bool world = (qw > 0 && qi > 0) ? roll(2) == 0 : qw > 0;
            if (qw == 0 && qi == 0) return atom(scope);
            fo::Var v = world ? fo::world_var(roll(2) ? "x" : "y") : fo::index_var(roll(2) ? "t" : "s");
            scope.push_back(v);
            auto body = gen(world ? qw - 1 : qw, world ? qi : qi - 1, scope, size + 1);
            scope.pop_back();
            return roll(2) ? fo::FOFormula::exists(v, body) : fo::FOFormula::forall(v, body);
        }
        }
    }

    std::mt19937_64 rng_;
    std::vector<std::string> props_;
};

} // namespace iqml::testing
