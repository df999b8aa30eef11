#pragma once

#include "iqml/formula.hpp"
#include "iqml/kripke.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace iqml {

/// A relation between the worlds of two models, stored as a dense matrix.
class BisimRelation {
public:
    BisimRelation(std::size_t left, std::size_t right) : right_(right), cells_(left * right, 0) {}

    bool contains(int w1, int w2) const { return cells_[w1 * right_ + w2] != 0; }
    void set(int w1, int w2, bool in) { cells_[w1 * right_ + w2] = in; }
    std::size_t size() const;
    std::vector<std::pair<int, int>> pairs() const;

private:
    std::size_t right_;
    std::vector<char> cells_;
};

/// Whether (w1, w2) satisfies Val and the four back-and-forth clauses with
/// successor pairs judged by `related`.
template <typename Related>
bool bisim_step_holds(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2, Related&& related);

/// Greatest bisimulation: start from all valuation-agreeing pairs and delete
/// pairs that violate a clause until nothing changes.
BisimRelation max_bisimulation(const KripkeModel& m1, const KripkeModel& m2);

/// Whether `g` is closed under all five bisimulation conditions.
bool is_bisimulation(const KripkeModel& m1, const KripkeModel& m2, const BisimRelation& g);

bool bisimilar(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2);
bool bisimilar(const KripkeModel& m1, std::string_view w1, const KripkeModel& m2, std::string_view w2);

/// Memoized n-bisimilarity between two fixed models. Reusable across queries.
class NBisimulation {
public:
    NBisimulation(const KripkeModel& m1, const KripkeModel& m2);

    bool operator()(int w1, int w2, int n);

private:
    const KripkeModel& m1_;
    const KripkeModel& m2_;
    std::vector<std::vector<signed char>> memo_; // [n][w1 * |W2| + w2]
};

bool n_bisimilar(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2, int n);

inline constexpr std::size_t kDefaultGammaGuard = 12;

/// Characteristic formulas chi^k of every world of a model for k ≤ depth,
/// over a fixed finite proposition set.
class CharContext {
public:
    /// Throws GuardError when some Gamma^k has more than `gamma_guard` members,
    /// and std::invalid_argument when a valuation leaves `props`.
    CharContext(const KripkeModel& m, std::vector<std::string> props, int depth,
                std::size_t gamma_guard = kDefaultGammaGuard);

    const KripkeModel& model() const noexcept { return model_; }
    const std::vector<std::string>& props() const noexcept { return props_; }
    int depth() const noexcept { return depth_; }
    const Formula& chi(int world, int k) const { return table_.at(k).at(world); }
    /// Distinct chi^k formulas, sorted.
    const std::vector<Formula>& gamma(int k) const { return gamma_.at(k); }

private:
    Formula literal_conjunction(int w) const;
    Formula next_level(int w, int k) const;

    KripkeModel model_;
    std::vector<std::string> props_;
    int depth_;
    std::vector<std::vector<Formula>> table_; // [k][world]
    std::vector<std::vector<Formula>> gamma_;
};

Formula char_formula(const CharContext& ctx, int world, int n);

/// chi^n of (m1, w1) for the least n ≤ max_n at which the pair stops being
/// n-bisimilar; the formula holds at (m1, w1) and fails at (m2, w2).
std::optional<Formula> distinguishing_formula(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2,
                                              int max_n, std::size_t gamma_guard = kDefaultGammaGuard);

// ---------------------------------------------------------------------------

template <typename Related>
bool bisim_step_holds(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2, Related&& related) {
    if (m1.valuation(w1) != m2.valuation(w2)) return false;
    const int n1 = static_cast<int>(m1.index_count());
    const int n2 = static_cast<int>(m2.index_count());

    // every right-hand successor is related to some left-hand one
    auto covered_by_left = [&](std::span<const int> left, std::span<const int> right) {
        for (int u2 : right) {
            bool hit = false;
            for (int u1 : left)
                if (related(u1, u2)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    };
    // every left-hand successor is related to some right-hand one
    auto covered_by_right = [&](std::span<const int> left, std::span<const int> right) {
        for (int u1 : left) {
            bool hit = false;
            for (int u2 : right)
                if (related(u1, u2)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    };

    // [E]forth: each i has a j whose successors are all matched among i's
    for (int i = 0; i < n1; ++i) {
        bool ok = false;
        for (int j = 0; j < n2 && !ok; ++j) ok = covered_by_left(m1.successors(i, w1), m2.successors(j, w2));
        if (!ok) return false;
    }
    // [E]back
    for (int j = 0; j < n2; ++j) {
        bool ok = false;
        for (int i = 0; i < n1 && !ok; ++i) ok = covered_by_right(m1.successors(i, w1), m2.successors(j, w2));
        if (!ok) return false;
    }
    // <E>forth / <E>back: index-blind successor matching
    const auto all1 = m1.all_successors(w1);
    const auto all2 = m2.all_successors(w2);
    return covered_by_right(all1, all2) && covered_by_left(all1, all2);
}

} // namespace iqml
