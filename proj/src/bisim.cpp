#include "iqml/bisim.hpp"

#include "iqml/error.hpp"

#include <algorithm>
#include <set>

namespace iqml {

std::size_t BisimRelation::size() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::vector<std::pair<int, int>> BisimRelation::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t c = 0; c < cells_.size(); ++c)
        if (cells_[c]) out.emplace_back(static_cast<int>(c / right_), static_cast<int>(c % right_));
    return out;
}

BisimRelation max_bisimulation(const KripkeModel& m1, const KripkeModel& m2) {
    const int n1 = static_cast<int>(m1.world_count());
    const int n2 = static_cast<int>(m2.world_count());
    BisimRelation g(n1, n2);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) g.set(a, b, m1.valuation(a) == m2.valuation(b));

    auto related = [&](int u1, int u2) { return g.contains(u1, u2); };
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b)
                if (g.contains(a, b) && !bisim_step_holds(m1, a, m2, b, related)) {
                    g.set(a, b, false);
                    changed = true;
                }
    }
    return g;
}

bool is_bisimulation(const KripkeModel& m1, const KripkeModel& m2, const BisimRelation& g) {
    auto related = [&](int u1, int u2) { return g.contains(u1, u2); };
    for (auto [a, b] : g.pairs())
        if (!bisim_step_holds(m1, a, m2, b, related)) return false;
    return true;
}

bool bisimilar(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2) {
    if (w1 < 0 || w1 >= static_cast<int>(m1.world_count()) || w2 < 0 ||
        w2 >= static_cast<int>(m2.world_count()))
        throw LookupError("bisimilar: unknown world");
    return max_bisimulation(m1, m2).contains(w1, w2);
}

bool bisimilar(const KripkeModel& m1, std::string_view w1, const KripkeModel& m2, std::string_view w2) {
    return bisimilar(m1, m1.world(w1), m2, m2.world(w2));
}

NBisimulation::NBisimulation(const KripkeModel& m1, const KripkeModel& m2) : m1_(m1), m2_(m2) {}

bool NBisimulation::operator()(int w1, int w2, int n) {
    if (n <= 0) return m1_.valuation(w1) == m2_.valuation(w2);
    if (static_cast<int>(memo_.size()) <= n)
        memo_.resize(n + 1, std::vector<signed char>(m1_.world_count() * m2_.world_count(), -1));
    auto& slot = memo_[n][w1 * m2_.world_count() + w2];
    if (slot < 0) {
        slot = bisim_step_holds(m1_, w1, m2_, w2, [&](int u1, int u2) { return (*this)(u1, u2, n - 1); });
    }
    return slot != 0;
}

bool n_bisimilar(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2, int n) {
    if (w1 < 0 || w1 >= static_cast<int>(m1.world_count()) || w2 < 0 ||
        w2 >= static_cast<int>(m2.world_count()))
        throw LookupError("n_bisimilar: unknown world");
    return NBisimulation(m1, m2)(w1, w2, n);
}

// ---------------------------------------------------------------------------
// Characteristic formulas

namespace {

Formula box_a(const Formula& f) { return f.op() == Op::Top ? f : Formula::box_a(f); }
Formula box_e(const Formula& f) { return f.op() == Op::Top ? f : Formula::box_e(f); }
Formula dia_e(const Formula& f) { return f.op() == Op::Bot ? f : Formula::dia_e(f); }

Formula implies(const Formula& a, const Formula& b) {
    if (a.op() == Op::Bot || b.op() == Op::Top) return Formula::top();
    if (a.op() == Op::Top) return b;
    return Formula::imp(a, b);
}

// Distinct formulas in first-occurrence order.
std::vector<Formula> distinct(std::vector<Formula> fs) {
    std::vector<Formula> out;
    std::set<Formula> seen;
    for (auto& f : fs)
        if (seen.insert(f).second) out.push_back(std::move(f));
    return out;
}

} // namespace

CharContext::CharContext(const KripkeModel& m, std::vector<std::string> props, int depth,
                         std::size_t gamma_guard)
    : model_(m), props_(std::move(props)), depth_(depth) {
    if (depth < 0) throw std::invalid_argument("CharContext: negative depth");
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
    for (const auto& p : m.propositions())
        if (!std::binary_search(props_.begin(), props_.end(), p))
            throw std::invalid_argument("CharContext: proposition '" + p + "' missing from the proposition set");

    const int n = static_cast<int>(m.world_count());
    for (int k = 0; k <= depth; ++k) {
        if (k > 0 && gamma_[k - 1].size() > gamma_guard)
            throw GuardError("characteristic formula: |Gamma^" + std::to_string(k - 1) + "| = " +
                             std::to_string(gamma_[k - 1].size()) + " exceeds the subset guard of " +
                             std::to_string(gamma_guard));
        std::vector<Formula> level;
        level.reserve(n);
        for (int w = 0; w < n; ++w) level.push_back(k == 0 ? literal_conjunction(w) : next_level(w, k));
        std::vector<Formula> gamma(level);
        std::sort(gamma.begin(), gamma.end());
        gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
        table_.push_back(std::move(level));
        gamma_.push_back(std::move(gamma));
    }
}

Formula CharContext::literal_conjunction(int w) const {
    std::vector<Formula> lits;
    for (const auto& p : props_)
        lits.push_back(model_.satisfies(w, p) ? Formula::atom(p) : Formula::neg(Formula::atom(p)));
    return conj_all(lits);
}

Formula CharContext::next_level(int w, int k) const {
    const auto& prev = table_[k - 1];
    const auto& gamma = gamma_[k - 1];
    const int indices = static_cast<int>(model_.index_count());
    std::vector<Formula> parts{table_[0][w]};

    auto chis = [&](auto worlds) {
        std::vector<Formula> out;
        for (int u : worlds) out.push_back(prev[u]);
        return distinct(std::move(out));
    };

    // forth: every index is matched by one whose successors stay inside its classes
    for (int i = 0; i < indices; ++i) parts.push_back(box_e(disj_all(chis(model_.successors(i, w)))));

    // back: for every S with [E](\/S), some index has all successor classes inside S
    const std::size_t subsets = std::size_t{1} << gamma.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<Formula> members;
        for (std::size_t b = 0; b < gamma.size(); ++b)
            if ((mask >> b) & 1U) members.push_back(gamma[b]);
        const Formula any_of_s = disj_all(members);
        std::vector<Formula> options;
        for (int i = 0; i < indices; ++i) {
            std::vector<Formula> guards;
            for (const auto& chi_u : chis(model_.successors(i, w))) guards.push_back(box_a(implies(chi_u, any_of_s)));
            options.push_back(conj_all(guards));
        }
        parts.push_back(implies(box_e(any_of_s), disj_all(options)));
    }

    const auto reachable = chis(model_.all_successors(w));
    for (const auto& chi_u : reachable) parts.push_back(dia_e(chi_u));
    parts.push_back(box_a(disj_all(reachable)));
    return conj_all(parts);
}

Formula char_formula(const CharContext& ctx, int world, int n) {
    if (n < 0 || n > ctx.depth()) throw std::invalid_argument("char_formula: depth outside the context");
    if (world < 0 || world >= static_cast<int>(ctx.model().world_count()))
        throw LookupError("char_formula: unknown world");
    return ctx.chi(world, n);
}

std::optional<Formula> distinguishing_formula(const KripkeModel& m1, int w1, const KripkeModel& m2, int w2,
                                              int max_n, std::size_t gamma_guard) {
    NBisimulation nb(m1, m2);
    for (int n = 0; n <= max_n; ++n) {
        if (nb(w1, w2, n)) continue;
        std::set<std::string> props;
        for (const auto& p : m1.propositions()) props.insert(p);
        for (const auto& p : m2.propositions()) props.insert(p);
        CharContext ctx(m1, {props.begin(), props.end()}, n, gamma_guard);
        return ctx.chi(w1, n);
    }
    return std::nullopt;
}

} // namespace iqml
