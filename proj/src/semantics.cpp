#include "iqml/semantics.hpp"

#include "iqml/error.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace iqml {

namespace {

class Compiler {
public:
    Compiler(std::vector<CompiledFormula::Instr>& program, std::vector<std::string>& props)
        : program_(program), props_(props) {}

    int emit(const Formula& f) {
        if (auto it = slots_.find(f); it != slots_.end()) return it->second;
        CompiledFormula::Instr ins{f.op()};
        switch (f.op()) {
        case Op::Atom: ins.prop = prop_slot(f.name()); break;
        case Op::Top:
        case Op::Bot: break;
        case Op::And:
        case Op::Or:
        case Op::Imp:
            ins.lhs = emit(f.lhs());
            ins.rhs = emit(f.rhs());
            break;
        default: ins.lhs = emit(f.operand()); break;
        }
        program_.push_back(ins);
        const int slot = static_cast<int>(program_.size()) - 1;
        slots_.emplace(f, slot);
        return slot;
    }

private:
    int prop_slot(const std::string& name) {
        auto it = std::find(props_.begin(), props_.end(), name);
        if (it != props_.end()) return static_cast<int>(it - props_.begin());
        props_.push_back(name);
        return static_cast<int>(props_.size()) - 1;
    }

    std::vector<CompiledFormula::Instr>& program_;
    std::vector<std::string>& props_;
    std::unordered_map<Formula, int, FormulaHash> slots_;
};

} // namespace

CompiledFormula::CompiledFormula(const Formula& f) {
    Compiler(program_, props_).emit(f);
}

std::vector<bool> CompiledFormula::truth_set(const KripkeModel& m) const {
    const int n = static_cast<int>(m.world_count());
    const int idx = static_cast<int>(m.index_count());
    // val[slot * n + w]
    std::vector<char> val(program_.size() * n, 0);
    auto at = [&](int slot, int w) -> char& { return val[static_cast<std::size_t>(slot) * n + w]; };

    for (int s = 0; s < static_cast<int>(program_.size()); ++s) {
        const Instr& ins = program_[s];
        for (int w = 0; w < n; ++w) {
            bool r = false;
            switch (ins.op) {
            case Op::Atom: r = m.satisfies(w, props_[ins.prop]); break;
            case Op::Top: r = true; break;
            case Op::Bot: r = false; break;
            case Op::Not: r = !at(ins.lhs, w); break;
            case Op::And: r = at(ins.lhs, w) && at(ins.rhs, w); break;
            case Op::Or: r = at(ins.lhs, w) || at(ins.rhs, w); break;
            case Op::Imp: r = !at(ins.lhs, w) || at(ins.rhs, w); break;
            case Op::BoxE:
                // some index all of whose successors satisfy the body
                for (int i = 0; i < idx && !r; ++i) {
                    auto succ = m.successors(i, w);
                    r = std::all_of(succ.begin(), succ.end(), [&](int u) { return at(ins.lhs, u) != 0; });
                }
                break;
            case Op::BoxA:
                r = true;
                for (int i = 0; i < idx && r; ++i) {
                    auto succ = m.successors(i, w);
                    r = std::all_of(succ.begin(), succ.end(), [&](int u) { return at(ins.lhs, u) != 0; });
                }
                break;
            case Op::DiaE:
                for (int i = 0; i < idx && !r; ++i) {
                    auto succ = m.successors(i, w);
                    r = std::any_of(succ.begin(), succ.end(), [&](int u) { return at(ins.lhs, u) != 0; });
                }
                break;
            case Op::DiaA:
                // every index has some successor satisfying the body
                r = true;
                for (int i = 0; i < idx && r; ++i) {
                    auto succ = m.successors(i, w);
                    r = std::any_of(succ.begin(), succ.end(), [&](int u) { return at(ins.lhs, u) != 0; });
                }
                break;
            }
            at(s, w) = r;
        }
    }
    std::vector<bool> out(n);
    for (int w = 0; w < n; ++w) out[w] = at(root(), w);
    return out;
}

std::vector<bool> truth_set(const KripkeModel& m, const Formula& f) {
    return CompiledFormula(f).truth_set(m);
}

bool holds(const KripkeModel& m, int world, const Formula& f) {
    if (world < 0 || world >= static_cast<int>(m.world_count())) throw LookupError("holds: unknown world");
    return truth_set(m, f)[world];
}

bool holds(const KripkeModel& m, std::string_view world, const Formula& f) {
    return holds(m, m.world(world), f);
}

bool valid_on_model(const KripkeModel& m, const Formula& f) {
    auto t = truth_set(m, f);
    return std::all_of(t.begin(), t.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Bounded oracle

namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

// Evaluates one compiled formula over every model with a fixed world and index
// count. Each uint64 carries one truth bit per candidate edge configuration.
class SlicedSearch {
public:
    SlicedSearch(const CompiledFormula& cf, int worlds, int indices, const std::vector<std::string>& props)
        : cf_(cf), k_(worlds), j_(indices), edge_bits_(worlds * worlds * indices) {
        lane_bits_ = std::min(edge_bits_, 6);
        all_ = lane_bits_ == 6 ? ~0ULL : ((1ULL << (1U << lane_bits_)) - 1);
        for (const auto& name : cf.props()) {
            auto it = std::find(props.begin(), props.end(), name);
            prop_pos_.push_back(it == props.end() ? -1 : static_cast<int>(it - props.begin()));
        }
        np_ = static_cast<int>(props.size());
        edge_.resize(static_cast<std::size_t>(edge_bits_));
        truth_.resize(cf.program().size() * k_);
    }

    struct Hit {
        std::uint64_t edge_code;
        int world;
    };

    std::optional<Hit> search(std::uint64_t val_code) {
        const std::uint64_t batches = 1ULL << (edge_bits_ - lane_bits_);
        for (int pos = 0; pos < lane_bits_; ++pos) edge_[pos] = kLanePattern[pos] & all_;
        for (std::uint64_t batch = 0; batch < batches; ++batch) {
            for (int pos = lane_bits_; pos < edge_bits_; ++pos)
                edge_[pos] = ((batch >> (pos - lane_bits_)) & 1U) ? all_ : 0;
            run(val_code);
            std::uint64_t any = 0;
            const int root = cf_.root();
            for (int w = 0; w < k_; ++w) any |= t(root, w);
            if (any == 0) continue;
            const int lane = std::countr_zero(any);
            for (int w = 0; w < k_; ++w)
                if ((t(root, w) >> lane) & 1U) return Hit{(batch << lane_bits_) | static_cast<std::uint64_t>(lane), w};
        }
        return std::nullopt;
    }

private:
    std::uint64_t& t(int slot, int w) { return truth_[static_cast<std::size_t>(slot) * k_ + w]; }
    std::uint64_t edge(int i, int a, int b) const { return edge_[(i * k_ + a) * k_ + b]; }

    void run(std::uint64_t val_code) {
        const auto& prog = cf_.program();
        for (int s = 0; s < static_cast<int>(prog.size()); ++s) {
            const auto& ins = prog[s];
            for (int w = 0; w < k_; ++w) {
                std::uint64_t r = 0;
                switch (ins.op) {
                case Op::Atom: {
                    const int q = prop_pos_[ins.prop];
                    r = (q >= 0 && ((val_code >> (w * np_ + q)) & 1U)) ? all_ : 0;
                    break;
                }
                case Op::Top: r = all_; break;
                case Op::Bot: r = 0; break;
                case Op::Not: r = ~t(ins.lhs, w) & all_; break;
                case Op::And: r = t(ins.lhs, w) & t(ins.rhs, w); break;
                case Op::Or: r = t(ins.lhs, w) | t(ins.rhs, w); break;
                case Op::Imp: r = (~t(ins.lhs, w) | t(ins.rhs, w)) & all_; break;
                case Op::BoxE:
                case Op::BoxA: {
                    const bool exists = ins.op == Op::BoxE;
                    r = exists ? 0 : all_;
                    for (int i = 0; i < j_; ++i) {
                        std::uint64_t box = all_;
                        for (int u = 0; u < k_; ++u) box &= ~edge(i, w, u) | t(ins.lhs, u);
                        r = exists ? (r | box) : (r & box);
                    }
                    break;
                }
                case Op::DiaE:
                case Op::DiaA: {
                    const bool exists = ins.op == Op::DiaE;
                    r = exists ? 0 : all_;
                    for (int i = 0; i < j_; ++i) {
                        std::uint64_t dia = 0;
                        for (int u = 0; u < k_; ++u) dia |= edge(i, w, u) & t(ins.lhs, u);
                        r = exists ? (r | dia) : (r & dia);
                    }
                    break;
                }
                }
                t(s, w) = r & all_;
            }
        }
    }

    const CompiledFormula& cf_;
    int k_;
    int j_;
    int edge_bits_;
    int lane_bits_;
    int np_;
    std::uint64_t all_;
    std::vector<int> prop_pos_;
    std::vector<std::uint64_t> edge_;
    std::vector<std::uint64_t> truth_;
};

} // namespace

std::optional<PointedModel> sat_oracle(const Formula& f, const OracleBounds& b) {
    check_enumeration_guard(b.max_worlds, b.max_indices, b.props.size(), b.guard_bits);
    for (const auto& p : propositions(f))
        if (std::find(b.props.begin(), b.props.end(), p) == b.props.end())
            throw std::invalid_argument("sat_oracle: proposition '" + p + "' missing from the bounds");

    const CompiledFormula cf(f);
    const int np = static_cast<int>(b.props.size());
    for (int k = 1; k <= b.max_worlds; ++k)
        for (int j = 1; j <= b.max_indices; ++j) {
            SlicedSearch search(cf, k, j, b.props);
            const std::uint64_t vals = 1ULL << (k * np);
            for (std::uint64_t v = 0; v < vals; ++v)
                if (auto hit = search.search(v)) {
                    KripkeModel m = decode_model(k, j, b.props, v, hit->edge_code);
                    const int point = m.world("w" + std::to_string(hit->world + 1));
                    return PointedModel{std::move(m), point};
                }
        }
    return std::nullopt;
}

} // namespace iqml
