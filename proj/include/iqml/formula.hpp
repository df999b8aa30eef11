#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace iqml {

enum class Op : std::uint8_t {
    Atom,
    Top,
    Bot,
    Not,
    And,
    Or,
    Imp,
    BoxE, // [E]
    BoxA, // [A]
    DiaE, // <E>
    DiaA, // <A>
};

bool is_modal(Op op) noexcept;
bool is_binary(Op op) noexcept;

/// Immutable IQML formula. Subtrees are shared, so copies are cheap and
/// formulas may be passed around by value.
class Formula {
public:
    struct Node;

    static Formula atom(std::string name);
    static Formula top();
    static Formula bot();
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    static Formula box_e(Formula f);
    static Formula box_a(Formula f);
    static Formula dia_e(Formula f);
    static Formula dia_a(Formula f);
    static Formula unary(Op op, Formula f);
    static Formula binary(Op op, Formula a, Formula b);

    Op op() const noexcept;
    /// Proposition name; empty for non-atoms.
    const std::string& name() const noexcept;
    /// Sole operand of a unary node, left operand of a binary node.
    const Formula& lhs() const;
    const Formula& rhs() const;
    const Formula& operand() const { return lhs(); }

    std::size_t hash() const noexcept;
    int modal_depth() const noexcept;
    std::size_t size() const noexcept;
    const Node* node() const noexcept { return node_.get(); }

    bool is_literal() const noexcept;

    friend bool operator==(const Formula& a, const Formula& b) noexcept;
    friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Op op;
    std::string name;
    std::vector<Formula> kids;
    std::size_t hash;
    int depth;
    std::size_t size;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using FormulaSet = std::set<Formula>;

/// Grammar (whitespace-insensitive):
///   formula := imp
///   imp     := or ("->" imp)?
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := "~" unary | "[E]" unary | "[A]" unary | "<E>" unary | "<A>" unary | atom
///   atom    := "true" | "false" | IDENT | "(" formula ")"
/// Throws ParseError carrying the character offset of the first bad token.
Formula parse_formula(std::string_view text);

/// Canonical text: binary nodes fully parenthesized, unary operators prefix.
std::string render_formula(const Formula& f);

/// True iff `s` matches [a-z][a-zA-Z0-9_]* and is not a keyword.
bool is_identifier(std::string_view s) noexcept;

FormulaSet subformulas(const Formula& f);
int modal_depth(const Formula& f);
std::set<std::string> propositions(const Formula& f);

/// Negation normal form: no Imp, Not only directly above an Atom.
Formula to_nnf(const Formula& f);

struct RandomFormulaOptions {
    /// Upper bound on connective nodes (atoms and constants excluded).
    int max_connectives = 10;
    /// Percent chance that a leaf is `true`/`false` rather than an atom.
    int constant_percent = 8;
};

/// Deterministic in `seed`; modal depth ≤ max_depth; atoms drawn from `props`.
Formula random_formula(std::uint64_t seed, int max_depth, const std::vector<std::string>& props,
                       const RandomFormulaOptions& opts = {});

/// Left-folded conjunction/disjunction with true/false absorption.
/// Empty conjunction is `true`, empty disjunction is `false`.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

} // namespace iqml

template <>
struct std::hash<iqml::Formula> {
    std::size_t operator()(const iqml::Formula& f) const noexcept { return f.hash(); }
};
