#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iqml {

/// Unchecked model description, as read from a file or assembled by hand.
struct ModelSpec {
    struct World {
        std::string name;
        std::vector<std::string> props;
    };
    struct Edge {
        std::string src;
        std::string index;
        std::string dst;
    };

    std::vector<World> worlds;
    std::vector<std::string> indices;
    std::vector<Edge> edges;
};

/// Finite IQML structure (W, R_I, rho). Worlds and indices are kept in
/// lexicographic order and addressed internally by their rank in that order.
class KripkeModel {
public:
    struct Edge {
        int src;
        int index;
        int dst;
        auto operator<=>(const Edge&) const = default;
    };

    std::size_t world_count() const noexcept { return worlds_.size(); }
    std::size_t index_count() const noexcept { return indices_.size(); }
    const std::vector<std::string>& worlds() const noexcept { return worlds_; }
    const std::vector<std::string>& indices() const noexcept { return indices_; }

    std::optional<int> find_world(std::string_view name) const;
    std::optional<int> find_index(std::string_view name) const;
    /// Throw LookupError on unknown names.
    int world(std::string_view name) const;
    int index(std::string_view name) const;

    /// Sorted i-successors of w.
    std::span<const int> successors(int index, int world) const;
    bool has_edge(int src, int index, int dst) const;
    /// Successors of w under any index, sorted and deduplicated.
    std::vector<int> all_successors(int world) const;
    std::vector<Edge> edges() const;
    std::size_t edge_count() const noexcept;

    /// Sorted proposition names true at w.
    const std::vector<std::string>& valuation(int world) const { return valuation_.at(world); }
    bool satisfies(int world, std::string_view prop) const;
    /// Every proposition mentioned by the valuation, sorted.
    std::vector<std::string> propositions() const;

    ModelSpec to_spec() const;

    friend bool operator==(const KripkeModel&, const KripkeModel&) = default;

private:
    friend KripkeModel validate_model(const ModelSpec&);
    KripkeModel() = default;

    std::vector<std::string> worlds_;
    std::vector<std::string> indices_;
    std::vector<std::vector<std::vector<int>>> succ_; // [index][world]
    std::vector<std::vector<std::string>> valuation_;
};

struct PointedModel {
    KripkeModel model;
    int point;

    const std::string& point_name() const { return model.worlds().at(point); }
};

/// Name-to-successors query: N^i(w).
std::set<std::string> successors(const KripkeModel& m, std::string_view world, std::string_view index);

/// Structural violations of `spec`; empty when the description is a valid model.
std::vector<std::string> check_model(const ModelSpec& spec);

/// Throws ModelError listing every violation. Duplicate edge lines collapse.
KripkeModel validate_model(const ModelSpec& spec);

/// Line-based model file:
///   world <id> [<prop> ...]
///   index <id>
///   edge <src> <idx> <dst>
/// '#' starts a comment. Throws ParseError with a 1-based line number.
ModelSpec parse_model(std::string_view text);
KripkeModel load_model(const std::string& path);

/// Canonical model text. When `root` is given that world is listed first.
std::string render_model(const KripkeModel& m, std::optional<int> root = std::nullopt);

/// Tree of index-labelled paths from `world` of length ≤ depth. World names
/// encode the path as r_<index rank>_<world rank>... so the root is "r".
PointedModel unravel(const KripkeModel& m, int world, int depth);

/// True when every world other than the point has exactly one incoming edge,
/// the point has none, and everything is reachable from the point.
bool is_tree(const PointedModel& pm);

/// Drop every world deeper than n. Throws ModelError on non-tree input.
PointedModel restrict(const PointedModel& tree, int n);

/// Copy of m with a fresh index whose edges duplicate those of `index`.
KripkeModel duplicate_index(const KripkeModel& m, std::string_view index, const std::string& fresh);

/// Disjoint union of two models over the same index set. Worlds are renamed
/// to a_<name> and b_<name>.
KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b);

/// Model with 1..max_worlds worlds w1.., 1..max_indices indices i1.. and
/// random edges/valuation over `props`. Deterministic in `seed`.
KripkeModel random_model(std::uint64_t seed, int max_worlds, int max_indices,
                         const std::vector<std::string>& props, int edge_percent = 35);

inline constexpr int kDefaultGuardBits = 24;

/// Bits of free choice in a model with k worlds, j indices and p propositions.
int enumeration_bits(int worlds, int indices, int props);

/// Model with worlds w1..wk and indices i1..ij. Edge (a, i, b) is present iff
/// bit (i*k + a)*k + b of `edge_code` is set; proposition q holds at world a
/// iff bit a*|props| + q of `val_code` is set (all positions 0-based).
KripkeModel decode_model(int worlds, int indices, const std::vector<std::string>& props,
                         std::uint64_t val_code, std::uint64_t edge_code);

/// Streams every model with 1..max_worlds worlds and 1..max_indices indices,
/// ordered by world count, index count, valuation code, edge code.
class ModelEnumerator {
public:
    ModelEnumerator(int max_worlds, int max_indices, std::vector<std::string> props,
                    int guard_bits = kDefaultGuardBits);

    std::optional<KripkeModel> next();

    /// Closed-form number of models the stream yields.
    static std::uint64_t count(int max_worlds, int max_indices, std::size_t props);

private:
    int max_worlds_;
    int max_indices_;
    std::vector<std::string> props_;
    int worlds_ = 1;
    int indices_ = 1;
    std::uint64_t val_code_ = 0;
    std::uint64_t edge_code_ = 0;
    bool done_ = false;
};

/// Throws GuardError when a (k, j, props) enumeration exceeds `guard_bits`.
void check_enumeration_guard(int max_worlds, int max_indices, std::size_t props, int guard_bits);

inline ModelEnumerator enumerate_models(int max_worlds, int max_indices, std::vector<std::string> props,
                                        int guard_bits = kDefaultGuardBits) {
    return ModelEnumerator(max_worlds, max_indices, std::move(props), guard_bits);
}

} // namespace iqml
