#pragma once

#include "iqml/formula.hpp"
#include "iqml/kripke.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iqml {

/// A formula flattened into a DAG of distinct subformulas in bottom-up
/// order, so one pass over the ops evaluates every subformula at every world.
class CompiledFormula {
public:
    struct Instr {
        Op op;
        int lhs = -1;
        int rhs = -1;
        int prop = -1; // into props()
    };

    explicit CompiledFormula(const Formula& f);

    const std::vector<Instr>& program() const noexcept { return program_; }
    const std::vector<std::string>& props() const noexcept { return props_; }
    /// Program slot of the whole formula (always the last one).
    int root() const noexcept { return static_cast<int>(program_.size()) - 1; }

    /// Worlds of `m` where the formula holds.
    std::vector<bool> truth_set(const KripkeModel& m) const;

private:
    std::vector<Instr> program_;
    std::vector<std::string> props_;
};

/// M, w |= f.
bool holds(const KripkeModel& m, int world, const Formula& f);
bool holds(const KripkeModel& m, std::string_view world, const Formula& f);
std::vector<bool> truth_set(const KripkeModel& m, const Formula& f);

/// f holds at every world of m.
bool valid_on_model(const KripkeModel& m, const Formula& f);

struct OracleBounds {
    int max_worlds = 3;
    int max_indices = 2;
    std::vector<std::string> props;
    int guard_bits = kDefaultGuardBits;
};

/// First pointed model in enumerate_models order (then world order) that
/// satisfies f, or nullopt when none exists within the bounds. Candidate
/// models are checked 64 edge configurations at a time with bit-sliced
/// evaluation.
std::optional<PointedModel> sat_oracle(const Formula& f, const OracleBounds& b);

} // namespace iqml
