#include "iqml/formula.hpp"

#include "iqml/error.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <stdexcept>

namespace iqml {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Formula::Node make_node(Op op, std::string name, std::vector<Formula> kids) {
    std::size_t h = mix(0x51ed2701, static_cast<std::size_t>(op));
    h = mix(h, std::hash<std::string>{}(name));
    int depth = 0;
    std::size_t size = 1;
    for (const auto& k : kids) {
        h = mix(h, k.hash());
        depth = std::max(depth, k.modal_depth());
        size += k.size();
    }
    if (is_modal(op)) ++depth;
    return Formula::Node{op, std::move(name), std::move(kids), h, depth, size};
}

} // namespace

bool is_modal(Op op) noexcept {
    return op == Op::BoxE || op == Op::BoxA || op == Op::DiaE || op == Op::DiaA;
}

bool is_binary(Op op) noexcept {
    return op == Op::And || op == Op::Or || op == Op::Imp;
}

Formula Formula::atom(std::string name) {
    return Formula(std::make_shared<const Node>(make_node(Op::Atom, std::move(name), {})));
}

Formula Formula::top() {
    static const Formula t(std::make_shared<const Node>(make_node(Op::Top, {}, {})));
    return t;
}

Formula Formula::bot() {
    static const Formula b(std::make_shared<const Node>(make_node(Op::Bot, {}, {})));
    return b;
}

Formula Formula::unary(Op op, Formula f) {
    if (op != Op::Not && !is_modal(op)) throw std::invalid_argument("not a unary operator");
    return Formula(std::make_shared<const Node>(make_node(op, {}, {std::move(f)})));
}

Formula Formula::binary(Op op, Formula a, Formula b) {
    if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
    return Formula(std::make_shared<const Node>(make_node(op, {}, {std::move(a), std::move(b)})));
}

Formula Formula::neg(Formula f) { return unary(Op::Not, std::move(f)); }
Formula Formula::conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return binary(Op::Imp, std::move(a), std::move(b)); }
Formula Formula::box_e(Formula f) { return unary(Op::BoxE, std::move(f)); }
Formula Formula::box_a(Formula f) { return unary(Op::BoxA, std::move(f)); }
Formula Formula::dia_e(Formula f) { return unary(Op::DiaE, std::move(f)); }
Formula Formula::dia_a(Formula f) { return unary(Op::DiaA, std::move(f)); }

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }

const Formula& Formula::lhs() const {
    if (node_->kids.empty()) throw std::logic_error("formula has no operand");
    return node_->kids[0];
}

const Formula& Formula::rhs() const {
    if (node_->kids.size() < 2) throw std::logic_error("formula has no right operand");
    return node_->kids[1];
}

std::size_t Formula::hash() const noexcept { return node_->hash; }
int Formula::modal_depth() const noexcept { return node_->depth; }
std::size_t Formula::size() const noexcept { return node_->size; }

bool Formula::is_literal() const noexcept {
    return op() == Op::Atom || (op() == Op::Not && node_->kids[0].op() == Op::Atom);
}

bool operator==(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op ||
        a.node_->size != b.node_->size || a.node_->name != b.node_->name)
        return false;
    const auto& ka = a.node_->kids;
    const auto& kb = b.node_->kids;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (!(ka[i] == kb[i])) return false;
    return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.node_->op <=> b.node_->op; c != 0) return c;
    if (auto c = a.node_->name.compare(b.node_->name); c != 0)
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    const auto& ka = a.node_->kids;
    const auto& kb = b.node_->kids;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (auto c = ka[i] <=> kb[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Parsing

bool is_identifier(std::string_view s) noexcept {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return s != "true" && s != "false";
}

namespace {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = parse_imp();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(pos_, "parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    Formula parse_imp() {
        Formula lhs = parse_or();
        if (accept("->")) return Formula::imp(lhs, parse_imp());
        return lhs;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (accept("|")) f = Formula::disj(f, parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (accept("&")) f = Formula::conj(f, parse_unary());
        return f;
    }

    Formula parse_unary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '~') {
            ++pos_;
            return Formula::neg(parse_unary());
        }
        if (c == '[' || c == '<') {
            const char close = c == '[' ? ']' : '>';
            ++pos_;
            if (pos_ >= text_.size() || (text_[pos_] != 'E' && text_[pos_] != 'A'))
                fail("expected 'E' or 'A'");
            const bool exists = text_[pos_] == 'E';
            ++pos_;
            expect(close);
            Formula body = parse_unary();
            if (c == '[') return exists ? Formula::box_e(body) : Formula::box_a(body);
            return exists ? Formula::dia_e(body) : Formula::dia_a(body);
        }
        return parse_atom();
    }

    Formula parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            ++pos_;
            Formula f = parse_imp();
            skip_ws();
            expect(')');
            return f;
        }
        if (!(text_[pos_] >= 'a' && text_[pos_] <= 'z')) fail("expected a formula");
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view word = text_.substr(start, pos_ - start);
        if (word == "true") return Formula::top();
        if (word == "false") return Formula::bot();
        return Formula::atom(std::string(word));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

const char* op_prefix(Op op) {
    switch (op) {
    case Op::Not: return "~";
    case Op::BoxE: return "[E]";
    case Op::BoxA: return "[A]";
    case Op::DiaE: return "<E>";
    case Op::DiaA: return "<A>";
    default: return "";
    }
}

const char* op_infix(Op op) {
    switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Imp: return " -> ";
    default: return "";
    }
}

void render_into(const Formula& f, std::string& out) {
    switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Top: out += "true"; return;
    case Op::Bot: out += "false"; return;
    case Op::And:
    case Op::Or:
    case Op::Imp:
        out += '(';
        render_into(f.lhs(), out);
        out += op_infix(f.op());
        render_into(f.rhs(), out);
        out += ')';
        return;
    default:
        out += op_prefix(f.op());
        render_into(f.operand(), out);
        return;
    }
}

void collect_subformulas(const Formula& f, FormulaSet& out) {
    if (!out.insert(f).second) return;
    if (f.op() == Op::Atom || f.op() == Op::Top || f.op() == Op::Bot) return;
    collect_subformulas(f.lhs(), out);
    if (is_binary(f.op())) collect_subformulas(f.rhs(), out);
}

void collect_props(const Formula& f, std::set<std::string>& out) {
    switch (f.op()) {
    case Op::Atom: out.insert(f.name()); return;
    case Op::Top:
    case Op::Bot: return;
    default:
        collect_props(f.lhs(), out);
        if (is_binary(f.op())) collect_props(f.rhs(), out);
    }
}

Formula nnf(const Formula& f, bool negated) {
    switch (f.op()) {
    case Op::Atom: return negated ? Formula::neg(f) : f;
    case Op::Top: return negated ? Formula::bot() : f;
    case Op::Bot: return negated ? Formula::top() : f;
    case Op::Not: return nnf(f.operand(), !negated);
    case Op::And:
        return negated ? Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : Formula::conj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Or:
        return negated ? Formula::conj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : Formula::disj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Imp:
        return negated ? Formula::conj(nnf(f.lhs(), false), nnf(f.rhs(), true))
                       : Formula::disj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::BoxE:
        return negated ? Formula::dia_a(nnf(f.operand(), true)) : Formula::box_e(nnf(f.operand(), false));
    case Op::BoxA:
        return negated ? Formula::dia_e(nnf(f.operand(), true)) : Formula::box_a(nnf(f.operand(), false));
    case Op::DiaE:
        return negated ? Formula::box_a(nnf(f.operand(), true)) : Formula::dia_e(nnf(f.operand(), false));
    case Op::DiaA:
        return negated ? Formula::box_e(nnf(f.operand(), true)) : Formula::dia_a(nnf(f.operand(), false));
    }
    throw std::logic_error("unreachable");
}

class FormulaGenerator {
public:
    FormulaGenerator(std::uint64_t seed, const std::vector<std::string>& props,
                     const RandomFormulaOptions& opts)
        : rng_(seed), props_(props), opts_(opts), budget_(opts.max_connectives) {}

    Formula generate(int depth, bool root) {
        const bool leaf = budget_ <= 0 || (!root && pick(100) < 30);
        if (leaf) {
            if (static_cast<int>(pick(100)) < opts_.constant_percent)
                return pick(2) == 0 ? Formula::top() : Formula::bot();
            return Formula::atom(props_[pick(props_.size())]);
        }
        --budget_;
        static constexpr Op boolean_ops[] = {Op::Not, Op::And, Op::Or, Op::Imp};
        static constexpr Op all_ops[] = {Op::Not,  Op::And,  Op::Or,   Op::Imp,
                                         Op::BoxE, Op::BoxA, Op::DiaE, Op::DiaA};
        const Op op = depth > 0 ? all_ops[pick(8)] : boolean_ops[pick(4)];
        if (is_modal(op)) return Formula::unary(op, generate(depth - 1, false));
        if (op == Op::Not) return Formula::neg(generate(depth, false));
        Formula a = generate(depth, false);
        Formula b = generate(depth, false);
        return Formula::binary(op, a, b);
    }

private:
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    std::mt19937_64 rng_;
    const std::vector<std::string>& props_;
    RandomFormulaOptions opts_;
    int budget_;
};

} // namespace

Formula parse_formula(std::string_view text) {
    return FormulaParser(text).parse();
}

std::string render_formula(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

FormulaSet subformulas(const Formula& f) {
    FormulaSet out;
    collect_subformulas(f, out);
    return out;
}

int modal_depth(const Formula& f) { return f.modal_depth(); }

std::set<std::string> propositions(const Formula& f) {
    std::set<std::string> out;
    collect_props(f, out);
    return out;
}

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula random_formula(std::uint64_t seed, int max_depth, const std::vector<std::string>& props,
                       const RandomFormulaOptions& opts) {
    if (props.empty()) throw std::invalid_argument("random_formula: proposition list is empty");
    if (max_depth < 0) throw std::invalid_argument("random_formula: negative depth");
    return FormulaGenerator(seed, props, opts).generate(max_depth, true);
}

Formula conj_all(const std::vector<Formula>& fs) {
    std::optional<Formula> acc;
    for (const auto& f : fs) {
        if (f.op() == Op::Bot) return Formula::bot();
        if (f.op() == Op::Top) continue;
        acc = acc ? Formula::conj(*acc, f) : f;
    }
    return acc ? *acc : Formula::top();
}

Formula disj_all(const std::vector<Formula>& fs) {
    std::optional<Formula> acc;
    for (const auto& f : fs) {
        if (f.op() == Op::Top) return Formula::top();
        if (f.op() == Op::Bot) continue;
        acc = acc ? Formula::disj(*acc, f) : f;
    }
    return acc ? *acc : Formula::bot();
}

} // namespace iqml
