#pragma once

#include "iqml/formula.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iqml {

enum class Rule { Ax0, Ax1, Ax2, MP, NecA, NecE };

/// MP(a, b): line a is (line b -> this line). Nec rules use `a` only.
struct Justification {
    Rule rule = Rule::Ax0;
    int a = 0;
    int b = 0;
    bool operator==(const Justification&) const = default;
};

struct ProofLine {
    int index;
    Formula formula;
    Justification just;
};

struct Proof {
    std::vector<ProofLine> lines;
};

inline constexpr std::size_t kMaxSkeletonWidth = 20;

/// Propositional tautology check with every modal subformula (outermost
/// occurrences only) treated as an opaque atom. Throws GuardError when the
/// skeleton has more than `max_width` distinct atoms.
bool is_tautology_instance(const Formula& f, std::size_t max_width = kMaxSkeletonWidth);

enum class Axiom { A1, A2 };

/// A1: [A](f -> g) -> ([A]f -> [A]g);  A2: [A](f -> g) -> (<A>f -> <A>g).
std::optional<Axiom> match_axiom(const Formula& f);

struct ProofResult {
    bool accepted = true;
    int line = 0; // first failing line when rejected
    std::string reason;
};

ProofResult check_proof(const Proof& pr);

/// Lines of the form "<n>: <formula> ; <just>" with just one of A0, A1, A2,
/// "MP i j", "NecA i", "NecE i". Blank lines and '#' comments are skipped.
/// ParseError carries the 1-based line number.
Proof parse_proof(std::string_view text);
Proof load_proof(const std::string& path);

std::string render_justification(const Justification& j);
std::string render_proof(const Proof& pr);

} // namespace iqml
