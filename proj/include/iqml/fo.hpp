#pragma once

#include "iqml/formula.hpp"
#include "iqml/kripke.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace iqml::fo {

enum class Sort : std::uint8_t { World, Index };

struct Var {
    Sort sort;
    std::string name;
    auto operator<=>(const Var&) const = default;
};

inline Var world_var(std::string name) { return {Sort::World, std::move(name)}; }
inline Var index_var(std::string name) { return {Sort::Index, std::move(name)}; }

enum class FOOp : std::uint8_t {
    Top,
    Bot,
    PredQ, // Q_p(x)
    PredR, // R(x, t, y)
    Not,
    And,
    Or,
    Imp,
    ExistsW,
    ExistsI,
    ForallW,
    ForallI,
};

/// Immutable two-sorted first-order formula over the unary predicates Q_p
/// and the ternary accessibility predicate R.
class FOFormula {
public:
    struct Node {
        FOOp op;
        std::string prop;
        std::vector<Var> vars; // PredQ: {x}; PredR: {x, t, y}; quantifiers: {bound}
        std::vector<FOFormula> kids;
    };

    static FOFormula top();
    static FOFormula bot();
    static FOFormula q(std::string prop, Var x);
    static FOFormula r(Var x, Var t, Var y);
    static FOFormula neg(FOFormula f);
    static FOFormula conj(FOFormula a, FOFormula b);
    static FOFormula disj(FOFormula a, FOFormula b);
    static FOFormula imp(FOFormula a, FOFormula b);
    /// ExistsW/ExistsI or ForallW/ForallI depending on the variable's sort.
    static FOFormula exists(Var v, FOFormula body);
    static FOFormula forall(Var v, FOFormula body);

    FOOp op() const noexcept { return node_->op; }
    const std::string& prop() const noexcept { return node_->prop; }
    const std::vector<Var>& vars() const noexcept { return node_->vars; }
    const FOFormula& lhs() const { return node_->kids.at(0); }
    const FOFormula& rhs() const { return node_->kids.at(1); }
    const FOFormula& body() const { return node_->kids.at(0); }

    friend bool operator==(const FOFormula& a, const FOFormula& b);

private:
    explicit FOFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Parenthesized ASCII form, e.g. EXISTS-I t FORALL-W y (R(x,t,y) -> Qp(y)).
std::string render(const FOFormula& f);

/// Two-sorted structure [(W, I), (R, rho)].
class FOStructure {
public:
    FOStructure(std::vector<std::string> worlds, std::vector<std::string> indices);

    const std::vector<std::string>& worlds() const noexcept { return worlds_; }
    const std::vector<std::string>& indices() const noexcept { return indices_; }
    std::size_t size(Sort s) const { return s == Sort::World ? worlds_.size() : indices_.size(); }

    void add_triple(int w, int i, int v);
    bool related(int w, int i, int v) const { return r_[(w * indices_.size() + i) * worlds_.size() + v] != 0; }
    std::size_t triple_count() const;

    void add_prop(int w, const std::string& p) { q_.at(w).insert(p); }
    bool has_prop(int w, const std::string& p) const { return q_.at(w).contains(p); }
    const std::set<std::string>& props(int w) const { return q_.at(w); }

private:
    std::vector<std::string> worlds_;
    std::vector<std::string> indices_;
    std::vector<char> r_;
    std::vector<std::set<std::string>> q_;
};

/// (w, i, v) in R iff (w, v) in R_i; Q_p at w iff p in rho(w).
FOStructure to_fo_structure(const KripkeModel& m);

/// Element names keyed by sorted variable.
using Assignment = std::map<Var, std::string>;

/// Tarskian truth. Throws std::invalid_argument on an unbound free variable or
/// on a binding that names no element of the variable's sort.
bool fo_eval(const FOStructure& s, const Assignment& env, const FOFormula& f);

/// Standard translation Tr(f : x). Modal steps alternate between two world
/// variables (x and y) and reuse a single index variable t.
FOFormula translate(const Formula& f, const Var& x = world_var("x"));

struct Ranks {
    int world = 0;
    int index = 0;
    auto operator<=>(const Ranks&) const = default;
};

/// Maximum nesting of world-sort and of index-sort quantifiers.
Ranks quantifier_ranks(const FOFormula& f);

std::set<Var> free_variables(const FOFormula& f);

// ---------------------------------------------------------------------------
// Ehrenfeucht-Fraisse game

struct Element {
    Sort sort;
    int id;
    auto operator<=>(const Element&) const = default;
};

struct GameConfig {
    FOStructure left;
    std::vector<Element> left_pebbles;
    FOStructure right;
    std::vector<Element> right_pebbles;
    int budget_world = 0;
    int budget_index = 0;
};

enum class Player { Spoiler, Duplicator };

/// Whether s_k -> t_k is a partial isomorphism between the pebbled elements.
bool partial_isomorphism(const FOStructure& left, const std::vector<Element>& s, const FOStructure& right,
                         const std::vector<Element>& t);

/// Winner of the (budget_world, budget_index) game under optimal play.
/// Spoiler may interleave sorts in any order.
Player ef_winner(const GameConfig& cfg);

} // namespace iqml::fo
