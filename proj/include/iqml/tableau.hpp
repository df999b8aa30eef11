#pragma once

#include "iqml/formula.hpp"
#include "iqml/kripke.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace iqml {

/// Index names available to the extracted model: one c-witness per <E>alpha
/// and one d-witness per [E]beta in SF(nnf(f)), plus a default index.
/// Witnesses are named c1, c2, ... and d1, d2, ... in formula order.
struct WitnessIndexSet {
    std::map<Formula, std::string> c_witnesses;
    std::map<Formula, std::string> d_witnesses;
    std::string default_index = "j";

    /// c-witnesses, then d-witnesses, then the default.
    std::vector<std::string> all() const;
};

WitnessIndexSet witness_index_set(const Formula& f);

/// One successor obligation produced by the modal rule.
struct BrChild {
    std::string index;
    FormulaSet label;
    bool operator==(const BrChild&) const = default;
};

/// The modal rule on a propositionally saturated, open NNF label. Children
/// come out in the order: <E> witnesses, then [E]/<A> pairs on d-witnesses,
/// then <A> obligations on the remaining indices. Throws std::invalid_argument
/// on an unsaturated or closed label.
std::vector<BrChild> apply_br(const FormulaSet& label, const WitnessIndexSet& idx);

/// Whether a label holds Bot or both p and ~p for some atom.
bool is_closed(const FormulaSet& label);

struct TableauNode {
    std::string id; // "w", "w_0", "w_0_3", ...
    FormulaSet label; // the saturated label the modal rule was applied to
    std::optional<std::string> incoming;
    std::vector<TableauNode> children;

    int depth() const;
    std::size_t node_count() const;
};

struct SatWitness {
    PointedModel model;
    TableauNode tableau;
};

struct Verdict {
    std::optional<SatWitness> witness; // empty for Unsat

    bool sat() const noexcept { return witness.has_value(); }
};

/// Tableau decision procedure: depth-first AND-OR search, OR-branches in
/// formula order, first open resolution wins.
Verdict decide_sat(const Formula& f);

/// decide_sat(~f) is Unsat.
bool is_valid(const Formula& f);

/// Worlds are tableau nodes, indices are idx.all(), edges follow the child
/// links, and each world's valuation is the positive atoms of its label.
/// Throws std::invalid_argument on a closed node.
PointedModel extract_model(const TableauNode& root, const WitnessIndexSet& idx);

/// "UNSAT", or "SAT" followed by the extracted model in the text format.
std::string render_verdict(const Verdict& v);

} // namespace iqml
