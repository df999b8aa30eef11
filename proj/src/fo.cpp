#include "iqml/fo.hpp"

#include <algorithm>
#include <stdexcept>

namespace iqml::fo {

FOFormula FOFormula::top() { return FOFormula(std::make_shared<const Node>(Node{FOOp::Top, {}, {}, {}})); }
FOFormula FOFormula::bot() { return FOFormula(std::make_shared<const Node>(Node{FOOp::Bot, {}, {}, {}})); }

FOFormula FOFormula::q(std::string prop, Var x) {
    if (x.sort != Sort::World) throw std::invalid_argument("Q_p takes a world-sort variable");
    return FOFormula(std::make_shared<const Node>(Node{FOOp::PredQ, std::move(prop), {std::move(x)}, {}}));
}

FOFormula FOFormula::r(Var x, Var t, Var y) {
    if (x.sort != Sort::World || t.sort != Sort::Index || y.sort != Sort::World)
        throw std::invalid_argument("R takes (world, index, world) variables");
    return FOFormula(std::make_shared<const Node>(Node{FOOp::PredR, {}, {std::move(x), std::move(t), std::move(y)}, {}}));
}

FOFormula FOFormula::neg(FOFormula f) {
    return FOFormula(std::make_shared<const Node>(Node{FOOp::Not, {}, {}, {std::move(f)}}));
}

FOFormula FOFormula::conj(FOFormula a, FOFormula b) {
    return FOFormula(std::make_shared<const Node>(Node{FOOp::And, {}, {}, {std::move(a), std::move(b)}}));
}

FOFormula FOFormula::disj(FOFormula a, FOFormula b) {
    return FOFormula(std::make_shared<const Node>(Node{FOOp::Or, {}, {}, {std::move(a), std::move(b)}}));
}

FOFormula FOFormula::imp(FOFormula a, FOFormula b) {
    return FOFormula(std::make_shared<const Node>(Node{FOOp::Imp, {}, {}, {std::move(a), std::move(b)}}));
}

FOFormula FOFormula::exists(Var v, FOFormula body) {
    const FOOp op = v.sort == Sort::World ? FOOp::ExistsW : FOOp::ExistsI;
    return FOFormula(std::make_shared<const Node>(Node{op, {}, {std::move(v)}, {std::move(body)}}));
}

FOFormula FOFormula::forall(Var v, FOFormula body) {
    const FOOp op = v.sort == Sort::World ? FOOp::ForallW : FOOp::ForallI;
    return FOFormula(std::make_shared<const Node>(Node{op, {}, {std::move(v)}, {std::move(body)}}));
}

bool operator==(const FOFormula& a, const FOFormula& b) {
    if (a.node_ == b.node_) return true;
    return a.node_->op == b.node_->op && a.node_->prop == b.node_->prop && a.node_->vars == b.node_->vars &&
           a.node_->kids == b.node_->kids;
}

namespace {

bool is_quantifier(FOOp op) {
    return op == FOOp::ExistsW || op == FOOp::ExistsI || op == FOOp::ForallW || op == FOOp::ForallI;
}

void render_into(const FOFormula& f, std::string& out) {
    switch (f.op()) {
    case FOOp::Top: out += "TRUE"; return;
    case FOOp::Bot: out += "FALSE"; return;
    case FOOp::PredQ: out += "Q" + f.prop() + "(" + f.vars()[0].name + ")"; return;
    case FOOp::PredR:
        out += "R(" + f.vars()[0].name + "," + f.vars()[1].name + "," + f.vars()[2].name + ")";
        return;
    case FOOp::Not:
        out += "~";
        render_into(f.body(), out);
        return;
    case FOOp::And:
    case FOOp::Or:
    case FOOp::Imp: {
        const char* sep = f.op() == FOOp::And ? " & " : f.op() == FOOp::Or ? " | " : " -> ";
        out += "(";
        render_into(f.lhs(), out);
        out += sep;
        render_into(f.rhs(), out);
        out += ")";
        return;
    }
    default: {
        static const char* names[] = {"EXISTS-W ", "EXISTS-I ", "FORALL-W ", "FORALL-I "};
        out += names[static_cast<int>(f.op()) - static_cast<int>(FOOp::ExistsW)];
        out += f.vars()[0].name + " ";
        const bool wrap = !is_quantifier(f.body().op()) && f.body().op() != FOOp::And &&
                          f.body().op() != FOOp::Or && f.body().op() != FOOp::Imp;
        if (wrap) out += "(";
        render_into(f.body(), out);
        if (wrap) out += ")";
        return;
    }
    }
}

} // namespace

std::string render(const FOFormula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

// ---------------------------------------------------------------------------

FOStructure::FOStructure(std::vector<std::string> worlds, std::vector<std::string> indices)
    : worlds_(std::move(worlds)), indices_(std::move(indices)),
      r_(worlds_.size() * indices_.size() * worlds_.size(), 0), q_(worlds_.size()) {
    if (worlds_.empty() || indices_.empty()) throw std::invalid_argument("FOStructure: both sorts must be nonempty");
}

void FOStructure::add_triple(int w, int i, int v) {
    r_.at((w * indices_.size() + i) * worlds_.size() + v) = 1;
}

std::size_t FOStructure::triple_count() const {
    return static_cast<std::size_t>(std::count(r_.begin(), r_.end(), 1));
}

FOStructure to_fo_structure(const KripkeModel& m) {
    FOStructure s(m.worlds(), m.indices());
    for (const auto& e : m.edges()) s.add_triple(e.src, e.index, e.dst);
    for (int w = 0; w < static_cast<int>(m.world_count()); ++w)
        for (const auto& p : m.valuation(w)) s.add_prop(w, p);
    return s;
}

namespace {

class Evaluator {
public:
    explicit Evaluator(const FOStructure& s) : s_(s) {}

    void bind(const Var& v, int element) { env_.emplace_back(v, element); }

    bool eval(const FOFormula& f) {
        switch (f.op()) {
        case FOOp::Top: return true;
        case FOOp::Bot: return false;
        case FOOp::PredQ: return s_.has_prop(lookup(f.vars()[0]), f.prop());
        case FOOp::PredR: return s_.related(lookup(f.vars()[0]), lookup(f.vars()[1]), lookup(f.vars()[2]));
        case FOOp::Not: return !eval(f.body());
        case FOOp::And: return eval(f.lhs()) && eval(f.rhs());
        case FOOp::Or: return eval(f.lhs()) || eval(f.rhs());
        case FOOp::Imp: return !eval(f.lhs()) || eval(f.rhs());
        case FOOp::ExistsW:
        case FOOp::ExistsI:
        case FOOp::ForallW:
        case FOOp::ForallI: {
            const bool exists = f.op() == FOOp::ExistsW || f.op() == FOOp::ExistsI;
            const Var& v = f.vars()[0];
            const int n = static_cast<int>(s_.size(v.sort));
            bool result = !exists;
            for (int e = 0; e < n && result == !exists; ++e) {
                env_.emplace_back(v, e);
                const bool b = eval(f.body());
                env_.pop_back();
                if (b == exists) result = exists;
            }
            return result;
        }
        }
        throw std::logic_error("unreachable");
    }

private:
    int lookup(const Var& v) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == v) return it->second;
        throw std::invalid_argument("fo_eval: unbound variable '" + v.name + "'");
    }

    const FOStructure& s_;
    std::vector<std::pair<Var, int>> env_;
};

} // namespace

bool fo_eval(const FOStructure& s, const Assignment& env, const FOFormula& f) {
    Evaluator ev(s);
    for (const auto& [v, name] : env) {
        const auto& domain = v.sort == Sort::World ? s.worlds() : s.indices();
        auto it = std::find(domain.begin(), domain.end(), name);
        if (it == domain.end())
            throw std::invalid_argument("fo_eval: '" + name + "' is not a " +
                                        (v.sort == Sort::World ? "world" : "index") + " element (variable '" +
                                        v.name + "')");
        ev.bind(v, static_cast<int>(it - domain.begin()));
    }
    return ev.eval(f);
}

// ---------------------------------------------------------------------------

namespace {

Var other_world_var(const Var& x) { return world_var(x.name == "x" ? "y" : "x"); }

FOFormula tr(const Formula& f, const Var& x) {
    const Var t = index_var("t");
    switch (f.op()) {
    case Op::Atom: return FOFormula::q(f.name(), x);
    case Op::Top: return FOFormula::top();
    case Op::Bot: return FOFormula::bot();
    case Op::Not: return FOFormula::neg(tr(f.operand(), x));
    case Op::And: return FOFormula::conj(tr(f.lhs(), x), tr(f.rhs(), x));
    case Op::Or: return FOFormula::disj(tr(f.lhs(), x), tr(f.rhs(), x));
    case Op::Imp: return FOFormula::imp(tr(f.lhs(), x), tr(f.rhs(), x));
    case Op::BoxE:
    case Op::BoxA: {
        const Var y = other_world_var(x);
        auto inner = FOFormula::forall(y, FOFormula::imp(FOFormula::r(x, t, y), tr(f.operand(), y)));
        return f.op() == Op::BoxE ? FOFormula::exists(t, inner) : FOFormula::forall(t, inner);
    }
    case Op::DiaE:
    case Op::DiaA: {
        const Var y = other_world_var(x);
        auto inner = FOFormula::exists(y, FOFormula::conj(FOFormula::r(x, t, y), tr(f.operand(), y)));
        return f.op() == Op::DiaE ? FOFormula::exists(t, inner) : FOFormula::forall(t, inner);
    }
    }
    throw std::logic_error("unreachable");
}

void collect_free(const FOFormula& f, std::vector<Var>& bound, std::set<Var>& out) {
    switch (f.op()) {
    case FOOp::PredQ:
    case FOOp::PredR:
        for (const auto& v : f.vars())
            if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
        return;
    case FOOp::Top:
    case FOOp::Bot: return;
    case FOOp::Not: collect_free(f.body(), bound, out); return;
    case FOOp::And:
    case FOOp::Or:
    case FOOp::Imp:
        collect_free(f.lhs(), bound, out);
        collect_free(f.rhs(), bound, out);
        return;
    default:
        bound.push_back(f.vars()[0]);
        collect_free(f.body(), bound, out);
        bound.pop_back();
        return;
    }
}

} // namespace

FOFormula translate(const Formula& f, const Var& x) {
    if (x.sort != Sort::World) throw std::invalid_argument("translate: parameter must be a world variable");
    return tr(f, x);
}

Ranks quantifier_ranks(const FOFormula& f) {
    switch (f.op()) {
    case FOOp::Top:
    case FOOp::Bot:
    case FOOp::PredQ:
    case FOOp::PredR: return {};
    case FOOp::Not: return quantifier_ranks(f.body());
    case FOOp::And:
    case FOOp::Or:
    case FOOp::Imp: {
        Ranks a = quantifier_ranks(f.lhs());
        Ranks b = quantifier_ranks(f.rhs());
        return {std::max(a.world, b.world), std::max(a.index, b.index)};
    }
    case FOOp::ExistsW:
    case FOOp::ForallW: {
        Ranks r = quantifier_ranks(f.body());
        ++r.world;
        return r;
    }
    case FOOp::ExistsI:
    case FOOp::ForallI: {
        Ranks r = quantifier_ranks(f.body());
        ++r.index;
        return r;
    }
    }
    throw std::logic_error("unreachable");
}

std::set<Var> free_variables(const FOFormula& f) {
    std::vector<Var> bound;
    std::set<Var> out;
    collect_free(f, bound, out);
    return out;
}

// ---------------------------------------------------------------------------
// EF game

bool partial_isomorphism(const FOStructure& left, const std::vector<Element>& s, const FOStructure& right,
                         const std::vector<Element>& t) {
    if (s.size() != t.size()) return false;
    const std::size_t n = s.size();
    for (std::size_t a = 0; a < n; ++a) {
        if (s[a].sort != t[a].sort) return false;
        if (s[a].sort == Sort::World && left.props(s[a].id) != right.props(t[a].id)) return false;
        for (std::size_t b = 0; b < n; ++b)
            if (s[b].sort == s[a].sort && ((s[a].id == s[b].id) != (t[a].id == t[b].id))) return false;
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (s[a].sort != Sort::World) continue;
        for (std::size_t c = 0; c < n; ++c) {
            if (s[c].sort != Sort::Index) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (s[b].sort != Sort::World) continue;
                if (left.related(s[a].id, s[c].id, s[b].id) != right.related(t[a].id, t[c].id, t[b].id))
                    return false;
            }
        }
    }
    return true;
}

namespace {

class GameSolver {
public:
    explicit GameSolver(const GameConfig& cfg) : cfg_(cfg), s_(cfg.left_pebbles), t_(cfg.right_pebbles) {}

    // Duplicator wins from the current pebbling with the given budgets left.
    // The pebbling is assumed to be a partial isomorphism already.
    bool duplicator_wins(int bw, int bi) {
        if (bw == 0 && bi == 0) return true;
        auto key = memo_key(bw, bi);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        bool dup = true;
        for (Sort sort : {Sort::World, Sort::Index}) {
            const int budget = sort == Sort::World ? bw : bi;
            if (budget == 0) continue;
            const int nbw = sort == Sort::World ? bw - 1 : bw;
            const int nbi = sort == Sort::Index ? bi - 1 : bi;
            for (bool spoiler_left : {true, false}) {
                const FOStructure& here = spoiler_left ? cfg_.left : cfg_.right;
                const FOStructure& there = spoiler_left ? cfg_.right : cfg_.left;
                for (int e = 0; e < static_cast<int>(here.size(sort)) && dup; ++e) {
                    bool answered = false;
                    for (int r = 0; r < static_cast<int>(there.size(sort)) && !answered; ++r) {
                        const Element l{sort, spoiler_left ? e : r};
                        const Element rr{sort, spoiler_left ? r : e};
                        s_.push_back(l);
                        t_.push_back(rr);
                        if (extends_isomorphism()) answered = duplicator_wins(nbw, nbi);
                        s_.pop_back();
                        t_.pop_back();
                    }
                    if (!answered) dup = false;
                }
            }
        }
        memo_.emplace(std::move(key), dup);
        return dup;
    }

    bool initial_ok() const { return partial_isomorphism(cfg_.left, s_, cfg_.right, t_); }

private:
    // Checks only the constraints that involve the newest pebble pair.
    bool extends_isomorphism() const {
        const std::size_t z = s_.size() - 1;
        const Element& a = s_[z];
        const Element& b = t_[z];
        if (a.sort == Sort::World && cfg_.left.props(a.id) != cfg_.right.props(b.id)) return false;
        for (std::size_t k = 0; k < z; ++k)
            if (s_[k].sort == a.sort && ((s_[k].id == a.id) != (t_[k].id == b.id))) return false;
        for (std::size_t x = 0; x <= z; ++x) {
            if (s_[x].sort != Sort::World) continue;
            for (std::size_t c = 0; c <= z; ++c) {
                if (s_[c].sort != Sort::Index) continue;
                for (std::size_t y = 0; y <= z; ++y) {
                    if (s_[y].sort != Sort::World) continue;
                    if (x != z && c != z && y != z) continue;
                    if (cfg_.left.related(s_[x].id, s_[c].id, s_[y].id) !=
                        cfg_.right.related(t_[x].id, t_[c].id, t_[y].id))
                        return false;
                }
            }
        }
        return true;
    }

    std::vector<int> memo_key(int bw, int bi) const {
        std::vector<std::tuple<int, int, int>> pairs;
        for (std::size_t k = 0; k < s_.size(); ++k)
            pairs.emplace_back(static_cast<int>(s_[k].sort), s_[k].id, t_[k].id);
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        std::vector<int> key{bw, bi};
        for (auto [sort, l, r] : pairs) {
            key.push_back(sort);
            key.push_back(l);
            key.push_back(r);
        }
        return key;
    }

    const GameConfig& cfg_;
    std::vector<Element> s_;
    std::vector<Element> t_;
    std::map<std::vector<int>, bool> memo_;
};

} // namespace

Player ef_winner(const GameConfig& cfg) {
    if (cfg.left_pebbles.size() != cfg.right_pebbles.size())
        throw std::invalid_argument("ef_winner: pebble sequences differ in length");
    for (std::size_t k = 0; k < cfg.left_pebbles.size(); ++k) {
        const auto& a = cfg.left_pebbles[k];
        const auto& b = cfg.right_pebbles[k];
        if (a.sort != b.sort) throw std::invalid_argument("ef_winner: pebble sorts differ");
        if (a.id < 0 || a.id >= static_cast<int>(cfg.left.size(a.sort)) || b.id < 0 ||
            b.id >= static_cast<int>(cfg.right.size(b.sort)))
            throw std::invalid_argument("ef_winner: pebble outside its structure");
    }
    if (cfg.budget_world < 0 || cfg.budget_index < 0) throw std::invalid_argument("ef_winner: negative budget");
    GameSolver solver(cfg);
    if (!solver.initial_ok()) return Player::Spoiler;
    return solver.duplicator_wins(cfg.budget_world, cfg.budget_index) ? Player::Duplicator : Player::Spoiler;
}

} // namespace iqml::fo
