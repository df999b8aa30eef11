#include "iqml/proof.hpp"

#include "iqml/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace iqml {

namespace {

// Assigns a variable slot to every atom and outermost modal subformula.
void collect_skeleton_atoms(const Formula& f, std::map<Formula, int>& slots) {
    switch (f.op()) {
    case Op::Top:
    case Op::Bot: return;
    case Op::Not: collect_skeleton_atoms(f.operand(), slots); return;
    case Op::And:
    case Op::Or:
    case Op::Imp:
        collect_skeleton_atoms(f.lhs(), slots);
        collect_skeleton_atoms(f.rhs(), slots);
        return;
    default: slots.emplace(f, static_cast<int>(slots.size())); return;
    }
}

bool eval_skeleton(const Formula& f, const std::map<Formula, int>& slots, std::uint32_t row) {
    switch (f.op()) {
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !eval_skeleton(f.operand(), slots, row);
    case Op::And: return eval_skeleton(f.lhs(), slots, row) && eval_skeleton(f.rhs(), slots, row);
    case Op::Or: return eval_skeleton(f.lhs(), slots, row) || eval_skeleton(f.rhs(), slots, row);
    case Op::Imp: return !eval_skeleton(f.lhs(), slots, row) || eval_skeleton(f.rhs(), slots, row);
    default: return (row >> slots.at(f)) & 1u;
    }
}

} // namespace

bool is_tautology_instance(const Formula& f, std::size_t max_width) {
    std::map<Formula, int> slots;
    collect_skeleton_atoms(f, slots);
    if (slots.size() > max_width || slots.size() > 31)
        throw GuardError("propositional skeleton has " + std::to_string(slots.size()) + " atoms (limit " +
                         std::to_string(max_width) + ")");
    const std::uint32_t rows = 1u << slots.size();
    for (std::uint32_t row = 0; row < rows; ++row)
        if (!eval_skeleton(f, slots, row)) return false;
    return true;
}

std::optional<Axiom> match_axiom(const Formula& f) {
    // [A](a -> b) -> (M a -> M b) with M = [A] (A1) or <A> (A2)
    if (f.op() != Op::Imp) return std::nullopt;
    const Formula& premise = f.lhs();
    const Formula& conclusion = f.rhs();
    if (premise.op() != Op::BoxA || premise.operand().op() != Op::Imp) return std::nullopt;
    if (conclusion.op() != Op::Imp) return std::nullopt;
    const Formula& a = premise.operand().lhs();
    const Formula& b = premise.operand().rhs();
    const Op m = conclusion.lhs().op();
    if (m != Op::BoxA && m != Op::DiaA) return std::nullopt;
    if (conclusion.rhs().op() != m) return std::nullopt;
    if (conclusion.lhs().operand() != a || conclusion.rhs().operand() != b) return std::nullopt;
    return m == Op::BoxA ? Axiom::A1 : Axiom::A2;
}

ProofResult check_proof(const Proof& pr) {
    auto reject = [](int line, std::string reason) { return ProofResult{false, line, std::move(reason)}; };
    if (pr.lines.empty()) return reject(0, "empty proof");
    for (std::size_t k = 0; k < pr.lines.size(); ++k) {
        const ProofLine& ln = pr.lines[k];
        const int n = static_cast<int>(k) + 1;
        if (ln.index != n) return reject(ln.index, "expected line number " + std::to_string(n));
        auto earlier = [&](int i) -> const Formula* {
            return (i >= 1 && i < n) ? &pr.lines[i - 1].formula : nullptr;
        };
        const Justification& j = ln.just;
        switch (j.rule) {
        case Rule::Ax0: {
            bool ok = false;
            try {
                ok = is_tautology_instance(ln.formula);
            } catch (const GuardError& e) {
                return reject(n, e.what());
            }
            if (!ok) return reject(n, "not an instance of a propositional tautology");
            break;
        }
        case Rule::Ax1:
        case Rule::Ax2: {
            const Axiom want = j.rule == Rule::Ax1 ? Axiom::A1 : Axiom::A2;
            if (match_axiom(ln.formula) != want)
                return reject(n, std::string("not an instance of ") + (want == Axiom::A1 ? "A1" : "A2"));
            break;
        }
        case Rule::MP: {
            const Formula* imp = earlier(j.a);
            const Formula* ante = earlier(j.b);
            if (!imp || !ante) return reject(n, "MP references a line that is not earlier");
            if (imp->op() != Op::Imp || imp->lhs() != *ante || imp->rhs() != ln.formula)
                return reject(n, "line " + std::to_string(j.a) + " is not (line " + std::to_string(j.b) +
                                     " -> this line)");
            break;
        }
        case Rule::NecA:
        case Rule::NecE: {
            const Formula* prem = earlier(j.a);
            if (!prem) return reject(n, "necessitation references a line that is not earlier");
            const Op box = j.rule == Rule::NecA ? Op::BoxA : Op::BoxE;
            if (ln.formula.op() != box || ln.formula.operand() != *prem)
                return reject(n, std::string("expected ") + (box == Op::BoxA ? "[A]" : "[E]") + " applied to line " +
                                     std::to_string(j.a));
            break;
        }
        }
    }
    return {};
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<int> to_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
}

Justification parse_justification(std::string_view text, std::size_t line_no) {
    auto w = words(text);
    auto fail = [&]() -> Justification {
        throw ParseError(line_no, "line " + std::to_string(line_no) + ": bad justification '" + std::string(text) + "'");
    };
    if (w.empty()) return fail();
    auto arg = [&](std::size_t k) {
        auto v = to_int(w[k]);
        if (!v) fail();
        return *v;
    };
    if (w[0] == "A0" && w.size() == 1) return {Rule::Ax0};
    if (w[0] == "A1" && w.size() == 1) return {Rule::Ax1};
    if (w[0] == "A2" && w.size() == 1) return {Rule::Ax2};
    if (w[0] == "MP" && w.size() == 3) return {Rule::MP, arg(1), arg(2)};
    if (w[0] == "NecA" && w.size() == 2) return {Rule::NecA, arg(1)};
    if (w[0] == "NecE" && w.size() == 2) return {Rule::NecE, arg(1)};
    return fail();
}

} // namespace

Proof parse_proof(std::string_view text) {
    Proof pr;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto colon = line.find(':');
        const auto semi = line.rfind(';');
        if (colon == std::string_view::npos || semi == std::string_view::npos || semi < colon)
            throw ParseError(line_no, "line " + std::to_string(line_no) + ": expected '<n>: <formula> ; <justification>'");
        auto n = to_int(trim(line.substr(0, colon)));
        if (!n) throw ParseError(line_no, "line " + std::to_string(line_no) + ": bad line number");
        Formula f = Formula::top();
        try {
            f = parse_formula(trim(line.substr(colon + 1, semi - colon - 1)));
        } catch (const ParseError& e) {
            throw ParseError(line_no, "line " + std::to_string(line_no) + ": " + e.what());
        }
        pr.lines.push_back({*n, f, parse_justification(trim(line.substr(semi + 1)), line_no)});
    }
    return pr;
}

Proof load_proof(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read proof file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_proof(buf.str());
}

std::string render_justification(const Justification& j) {
    switch (j.rule) {
    case Rule::Ax0: return "A0";
    case Rule::Ax1: return "A1";
    case Rule::Ax2: return "A2";
    case Rule::MP: return "MP " + std::to_string(j.a) + " " + std::to_string(j.b);
    case Rule::NecA: return "NecA " + std::to_string(j.a);
    case Rule::NecE: return "NecE " + std::to_string(j.a);
    }
    return {};
}

std::string render_proof(const Proof& pr) {
    std::string out;
    for (const auto& ln : pr.lines)
        out += std::to_string(ln.index) + ": " + render_formula(ln.formula) + " ; " + render_justification(ln.just) + "\n";
    return out;
}

} // namespace iqml
