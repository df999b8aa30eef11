#include "iqml/tableau.hpp"

#include "iqml/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace iqml {

std::vector<std::string> WitnessIndexSet::all() const {
    std::vector<std::string> out;
    for (const auto& [f, name] : c_witnesses) out.push_back(name);
    for (const auto& [f, name] : d_witnesses) out.push_back(name);
    out.push_back(default_index);
    return out;
}

WitnessIndexSet witness_index_set(const Formula& f) {
    WitnessIndexSet idx;
    for (const auto& g : subformulas(to_nnf(f))) {
        if (g.op() == Op::DiaE) idx.c_witnesses.emplace(g.operand(), "c" + std::to_string(idx.c_witnesses.size() + 1));
        if (g.op() == Op::BoxE) idx.d_witnesses.emplace(g.operand(), "d" + std::to_string(idx.d_witnesses.size() + 1));
    }
    return idx;
}

bool is_closed(const FormulaSet& label) {
    for (const auto& g : label) {
        if (g.op() == Op::Bot) return true;
        if (g.op() == Op::Not && label.contains(g.operand())) return true;
    }
    return false;
}

namespace {

bool is_saturated_member(const Formula& g) {
    return g.op() == Op::Atom || (g.op() == Op::Not && g.operand().op() == Op::Atom) || is_modal(g.op());
}

int label_depth(const FormulaSet& label) {
    int d = 0;
    for (const auto& g : label) d = std::max(d, g.modal_depth());
    return d;
}

} // namespace

std::vector<BrChild> apply_br(const FormulaSet& label, const WitnessIndexSet& idx) {
    std::vector<Formula> a, b, c;
    std::vector<Formula> d_prime;
    for (const auto& g : label) {
        if (!is_saturated_member(g))
            throw std::invalid_argument("apply_br: label is not saturated: " + render_formula(g));
        switch (g.op()) {
        case Op::DiaE: a.push_back(g.operand()); break;
        case Op::BoxE: b.push_back(g.operand()); break;
        case Op::DiaA: c.push_back(g.operand()); break;
        case Op::BoxA: d_prime.push_back(g.operand()); break;
        default: break;
        }
    }
    if (is_closed(label)) throw std::invalid_argument("apply_br: label is closed");

    auto with_d = [&](std::initializer_list<Formula> extra) {
        FormulaSet s(d_prime.begin(), d_prime.end());
        s.insert(extra.begin(), extra.end());
        return s;
    };
    auto lookup = [](const std::map<Formula, std::string>& m, const Formula& key) {
        auto it = m.find(key);
        if (it == m.end()) throw std::invalid_argument("apply_br: no witness index for " + render_formula(key));
        return it->second;
    };

    std::vector<BrChild> out;
    for (const auto& alpha : a) out.push_back({lookup(idx.c_witnesses, alpha), with_d({alpha})});

    std::set<std::string> active_d;
    for (const auto& beta : b) {
        const std::string name = lookup(idx.d_witnesses, beta);
        active_d.insert(name);
        for (const auto& phi : c) out.push_back({name, with_d({beta, phi})});
    }
    const auto indices = idx.all();
    for (const auto& phi : c)
        for (const auto& e : indices)
            if (!active_d.contains(e)) out.push_back({e, with_d({phi})});
    return out;
}

int TableauNode::depth() const {
    int d = 0;
    for (const auto& ch : children) d = std::max(d, 1 + ch.depth());
    return d;
}

std::size_t TableauNode::node_count() const {
    std::size_t n = 1;
    for (const auto& ch : children) n += ch.node_count();
    return n;
}

namespace {

// An open resolution of one label: the chosen saturated branch and the
// resolutions of all its modal children. Shared between equal labels.
struct Resolution {
    FormulaSet saturated;
    std::vector<std::pair<std::string, std::shared_ptr<const Resolution>>> children;
};

using ResolutionPtr = std::shared_ptr<const Resolution>;

class Solver {
public:
    explicit Solver(WitnessIndexSet idx) : idx_(std::move(idx)) {}

    ResolutionPtr solve(const FormulaSet& label) {
        if (auto it = memo_.find(label); it != memo_.end()) return it->second;
        ResolutionPtr found;
        auto visit = [&](const FormulaSet& sat) {
            found = resolve_saturated(sat);
            return found != nullptr;
        };
        expand(label, visit);
        memo_.emplace(label, found);
        return found;
    }

private:
    // Enumerates the open saturated branches of `s` in canonical order until
    // `visit` accepts one.
    template <typename Visit>
    bool expand(FormulaSet s, Visit& visit) {
        if (is_closed(s)) return false;
        for (const auto& g : s) {
            switch (g.op()) {
            case Op::Top: {
                s.erase(Formula::top());
                return expand(std::move(s), visit);
            }
            case Op::And: {
                Formula h = g;
                s.erase(h);
                s.insert(h.lhs());
                s.insert(h.rhs());
                return expand(std::move(s), visit);
            }
            case Op::Or: {
                Formula h = g;
                s.erase(h);
                FormulaSet left = s;
                left.insert(h.lhs());
                if (expand(std::move(left), visit)) return true;
                s.insert(h.rhs());
                return expand(std::move(s), visit);
            }
            case Op::Imp:
            case Op::Not:
                if (g.op() == Op::Imp || g.operand().op() != Op::Atom)
                    throw std::logic_error("tableau: label is not in negation normal form");
                break;
            default: break;
            }
        }
        return visit(s);
    }

    ResolutionPtr resolve_saturated(const FormulaSet& sat) {
        auto node = std::make_shared<Resolution>();
        node->saturated = sat;
        const int depth = label_depth(sat);
        for (auto& child : apply_br(sat, idx_)) {
            if (label_depth(child.label) >= depth) throw std::logic_error("tableau: modal depth did not decrease");
            ResolutionPtr sub = solve(child.label);
            if (!sub) return nullptr;
            node->children.emplace_back(std::move(child.index), std::move(sub));
        }
        return node;
    }

    WitnessIndexSet idx_;
    std::map<FormulaSet, ResolutionPtr> memo_;
};

TableauNode materialize(const Resolution& r, std::string id, std::optional<std::string> incoming) {
    TableauNode node{std::move(id), r.saturated, std::move(incoming), {}};
    node.children.reserve(r.children.size());
    for (std::size_t k = 0; k < r.children.size(); ++k)
        node.children.push_back(materialize(*r.children[k].second, node.id + "_" + std::to_string(k), r.children[k].first));
    return node;
}

void collect_worlds(const TableauNode& n, ModelSpec& spec) {
    if (is_closed(n.label)) throw std::invalid_argument("extract_model: closed node " + n.id);
    std::vector<std::string> props;
    for (const auto& g : n.label)
        if (g.op() == Op::Atom) props.push_back(g.name());
    spec.worlds.push_back({n.id, props});
    for (const auto& ch : n.children) {
        if (!ch.incoming) throw std::invalid_argument("extract_model: child without an incoming index");
        spec.edges.push_back({n.id, *ch.incoming, ch.id});
        collect_worlds(ch, spec);
    }
}

} // namespace

PointedModel extract_model(const TableauNode& root, const WitnessIndexSet& idx) {
    ModelSpec spec;
    spec.indices = idx.all();
    collect_worlds(root, spec);
    KripkeModel m = validate_model(spec);
    const int point = *m.find_world(root.id);
    return PointedModel{std::move(m), point};
}

Verdict decide_sat(const Formula& f) {
    const Formula n = to_nnf(f);
    WitnessIndexSet idx = witness_index_set(f);
    Solver solver(idx);
    ResolutionPtr r = solver.solve(FormulaSet{n});
    if (!r) return Verdict{};

    TableauNode root = materialize(*r, "w", std::nullopt);
    const int md = f.modal_depth();
    if (root.depth() > md) throw std::logic_error("tableau: tree deeper than the modal depth");

    PointedModel pm = extract_model(root, idx);
    const double sf = static_cast<double>(subformulas(n).size());
    const double bound = std::pow(sf * (sf + static_cast<double>(idx.all().size())), md);
    if (static_cast<double>(pm.model.world_count()) > bound)
        throw std::logic_error("tableau: extracted model exceeds the size bound");
    if (!holds(pm.model, pm.point, f)) throw std::logic_error("tableau: extracted model fails the formula");
    return Verdict{SatWitness{std::move(pm), std::move(root)}};
}

bool is_valid(const Formula& f) { return !decide_sat(Formula::neg(f)).sat(); }

std::string render_verdict(const Verdict& v) {
    if (!v.sat()) return "UNSAT\n";
    return "SAT\n" + render_model(v.witness->model.model, v.witness->model.point);
}

} // namespace iqml
