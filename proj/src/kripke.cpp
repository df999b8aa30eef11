#include "iqml/kripke.hpp"

#include "iqml/error.hpp"
#include "iqml/formula.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace iqml {

namespace {

std::optional<int> rank_of(const std::vector<std::string>& sorted, std::string_view name) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), name);
    if (it == sorted.end() || *it != name) return std::nullopt;
    return static_cast<int>(it - sorted.begin());
}

} // namespace

std::optional<int> KripkeModel::find_world(std::string_view name) const { return rank_of(worlds_, name); }
std::optional<int> KripkeModel::find_index(std::string_view name) const { return rank_of(indices_, name); }

int KripkeModel::world(std::string_view name) const {
    if (auto w = find_world(name)) return *w;
    throw LookupError("unknown world '" + std::string(name) + "'");
}

int KripkeModel::index(std::string_view name) const {
    if (auto i = find_index(name)) return *i;
    throw LookupError("unknown index '" + std::string(name) + "'");
}

std::span<const int> KripkeModel::successors(int index, int world) const {
    return succ_.at(index).at(world);
}

bool KripkeModel::has_edge(int src, int index, int dst) const {
    const auto& s = succ_.at(index).at(src);
    return std::binary_search(s.begin(), s.end(), dst);
}

std::vector<int> KripkeModel::all_successors(int world) const {
    std::vector<int> out;
    for (const auto& per_index : succ_)
        out.insert(out.end(), per_index[world].begin(), per_index[world].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<KripkeModel::Edge> KripkeModel::edges() const {
    std::vector<Edge> out;
    for (int w = 0; w < static_cast<int>(worlds_.size()); ++w)
        for (int i = 0; i < static_cast<int>(indices_.size()); ++i)
            for (int v : succ_[i][w]) out.push_back({w, i, v});
    return out;
}

std::size_t KripkeModel::edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& per_index : succ_)
        for (const auto& s : per_index) n += s.size();
    return n;
}

bool KripkeModel::satisfies(int world, std::string_view prop) const {
    const auto& v = valuation_.at(world);
    return std::binary_search(v.begin(), v.end(), prop);
}

std::vector<std::string> KripkeModel::propositions() const {
    std::set<std::string> all;
    for (const auto& v : valuation_) all.insert(v.begin(), v.end());
    return {all.begin(), all.end()};
}

ModelSpec KripkeModel::to_spec() const {
    ModelSpec spec;
    for (std::size_t w = 0; w < worlds_.size(); ++w) spec.worlds.push_back({worlds_[w], valuation_[w]});
    spec.indices = indices_;
    for (const auto& e : edges()) spec.edges.push_back({worlds_[e.src], indices_[e.index], worlds_[e.dst]});
    return spec;
}

std::set<std::string> successors(const KripkeModel& m, std::string_view world, std::string_view index) {
    std::set<std::string> out;
    for (int v : m.successors(m.index(index), m.world(world))) out.insert(m.worlds()[v]);
    return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> check_model(const ModelSpec& spec) {
    std::vector<std::string> errs;
    if (spec.worlds.empty()) errs.push_back("empty world set");
    if (spec.indices.empty()) errs.push_back("empty index set");

    std::set<std::string> worlds;
    std::set<std::string> indices;
    for (const auto& w : spec.worlds) {
        if (!is_identifier(w.name)) errs.push_back("invalid world identifier '" + w.name + "'");
        if (!worlds.insert(w.name).second) errs.push_back("duplicate world '" + w.name + "'");
        for (const auto& p : w.props)
            if (!is_identifier(p)) errs.push_back("invalid proposition '" + p + "' at world '" + w.name + "'");
    }
    for (const auto& i : spec.indices) {
        if (!is_identifier(i)) errs.push_back("invalid index identifier '" + i + "'");
        if (!indices.insert(i).second) errs.push_back("duplicate index '" + i + "'");
    }
    for (const auto& e : spec.edges) {
        if (!worlds.contains(e.src)) errs.push_back("edge source '" + e.src + "' is not a declared world");
        if (!indices.contains(e.index)) errs.push_back("edge label '" + e.index + "' is not a declared index");
        if (!worlds.contains(e.dst)) errs.push_back("edge target '" + e.dst + "' is not a declared world");
    }
    return errs;
}

KripkeModel validate_model(const ModelSpec& spec) {
    if (auto errs = check_model(spec); !errs.empty()) throw ModelError(std::move(errs));

    KripkeModel m;
    for (const auto& w : spec.worlds) m.worlds_.push_back(w.name);
    std::sort(m.worlds_.begin(), m.worlds_.end());
    m.indices_ = spec.indices;
    std::sort(m.indices_.begin(), m.indices_.end());

    m.valuation_.resize(m.worlds_.size());
    for (const auto& w : spec.worlds) {
        auto& v = m.valuation_[*m.find_world(w.name)];
        v = w.props;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    m.succ_.assign(m.indices_.size(), std::vector<std::vector<int>>(m.worlds_.size()));
    for (const auto& e : spec.edges)
        m.succ_[*m.find_index(e.index)][*m.find_world(e.src)].push_back(*m.find_world(e.dst));
    for (auto& per_index : m.succ_)
        for (auto& s : per_index) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
    return m;
}

// ---------------------------------------------------------------------------
// File format

ModelSpec parse_model(std::string_view text) {
    ModelSpec spec;
    bool seen_edge = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> toks;
        for (std::string t; words >> t;) toks.push_back(t);
        if (toks.empty()) continue;

        auto fail = [&](const std::string& msg) -> void {
            throw ParseError(line_no, "line " + std::to_string(line_no) + ": " + msg);
        };
        for (std::size_t k = 1; k < toks.size(); ++k)
            if (!is_identifier(toks[k])) fail("invalid identifier '" + toks[k] + "'");

        if (toks[0] == "world") {
            if (toks.size() < 2) fail("'world' needs an identifier");
            if (seen_edge) fail("world declarations must precede edges");
            spec.worlds.push_back({toks[1], {toks.begin() + 2, toks.end()}});
        } else if (toks[0] == "index") {
            if (toks.size() != 2) fail("'index' takes exactly one identifier");
            if (seen_edge) fail("index declarations must precede edges");
            spec.indices.push_back(toks[1]);
        } else if (toks[0] == "edge") {
            if (toks.size() != 4) fail("'edge' takes <src> <index> <dst>");
            seen_edge = true;
            spec.edges.push_back({toks[1], toks[2], toks[3]});
        } else {
            fail("unknown keyword '" + toks[0] + "'");
        }
    }
    return spec;
}

KripkeModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return validate_model(parse_model(buf.str()));
}

std::string render_model(const KripkeModel& m, std::optional<int> root) {
    std::string out;
    auto world_line = [&](int w) {
        out += "world " + m.worlds()[w];
        for (const auto& p : m.valuation(w)) out += " " + p;
        out += "\n";
    };
    if (root) world_line(*root);
    for (int w = 0; w < static_cast<int>(m.world_count()); ++w)
        if (!root || w != *root) world_line(w);
    for (const auto& i : m.indices()) out += "index " + i + "\n";
    for (const auto& e : m.edges())
        out += "edge " + m.worlds()[e.src] + " " + m.indices()[e.index] + " " + m.worlds()[e.dst] + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Trees

PointedModel unravel(const KripkeModel& m, int world, int depth) {
    if (world < 0 || world >= static_cast<int>(m.world_count()))
        throw LookupError("unravel: unknown world");
    struct Pending {
        std::string name;
        int last;
        int level;
    };
    ModelSpec spec;
    spec.indices = m.indices();
    std::deque<Pending> queue{{"r", world, 0}};
    while (!queue.empty()) {
        Pending p = queue.front();
        queue.pop_front();
        spec.worlds.push_back({p.name, m.valuation(p.last)});
        if (p.level == depth) continue;
        for (int i = 0; i < static_cast<int>(m.index_count()); ++i)
            for (int v : m.successors(i, p.last)) {
                std::string child = p.name + "_" + std::to_string(i) + "_" + std::to_string(v);
                spec.edges.push_back({p.name, m.indices()[i], child});
                queue.push_back({child, v, p.level + 1});
            }
    }
    KripkeModel tree = validate_model(spec);
    int root = *tree.find_world("r");
    return {std::move(tree), root};
}

namespace {

// Depth of each world below the point, or nullopt when not a tree.
std::optional<std::vector<int>> tree_depths(const PointedModel& pm) {
    const auto& m = pm.model;
    const std::size_t n = m.world_count();
    std::vector<int> incoming(n, 0);
    for (const auto& e : m.edges()) ++incoming[e.dst];
    if (incoming[pm.point] != 0) return std::nullopt;
    for (std::size_t w = 0; w < n; ++w)
        if (static_cast<int>(w) != pm.point && incoming[w] != 1) return std::nullopt;

    std::vector<int> depth(n, -1);
    depth[pm.point] = 0;
    std::deque<int> queue{pm.point};
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        for (int v : m.all_successors(w)) {
            if (depth[v] >= 0) return std::nullopt;
            depth[v] = depth[w] + 1;
            queue.push_back(v);
        }
    }
    if (std::find(depth.begin(), depth.end(), -1) != depth.end()) return std::nullopt;
    return depth;
}

} // namespace

bool is_tree(const PointedModel& pm) { return tree_depths(pm).has_value(); }

PointedModel restrict(const PointedModel& tree, int n) {
    auto depth = tree_depths(tree);
    if (!depth) throw ModelError({"restrict: model is not a tree rooted at '" + tree.point_name() + "'"});
    const auto& m = tree.model;
    ModelSpec spec;
    spec.indices = m.indices();
    for (int w = 0; w < static_cast<int>(m.world_count()); ++w)
        if ((*depth)[w] <= n) spec.worlds.push_back({m.worlds()[w], m.valuation(w)});
    for (const auto& e : m.edges())
        if ((*depth)[e.dst] <= n)
            spec.edges.push_back({m.worlds()[e.src], m.indices()[e.index], m.worlds()[e.dst]});
    KripkeModel out = validate_model(spec);
    int root = *out.find_world(tree.point_name());
    return {std::move(out), root};
}

KripkeModel duplicate_index(const KripkeModel& m, std::string_view index, const std::string& fresh) {
    const int src = m.index(index);
    ModelSpec spec = m.to_spec();
    spec.indices.push_back(fresh);
    for (const auto& e : m.edges())
        if (e.index == src) spec.edges.push_back({m.worlds()[e.src], fresh, m.worlds()[e.dst]});
    return validate_model(spec);
}

KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b) {
    if (a.indices() != b.indices()) throw std::invalid_argument("disjoint_union: index sets differ");
    ModelSpec spec;
    spec.indices = a.indices();
    // by position, not address: a and b may be the same object
    const std::pair<const KripkeModel*, const char*> parts[] = {{&a, "a_"}, {&b, "b_"}};
    for (const auto& [part, prefix] : parts) {
        for (int w = 0; w < static_cast<int>(part->world_count()); ++w)
            spec.worlds.push_back({prefix + part->worlds()[w], part->valuation(w)});
        for (const auto& e : part->edges())
            spec.edges.push_back({prefix + part->worlds()[e.src], part->indices()[e.index],
                                  prefix + part->worlds()[e.dst]});
    }
    return validate_model(spec);
}

// ---------------------------------------------------------------------------
// Generation

KripkeModel random_model(std::uint64_t seed, int max_worlds, int max_indices,
                         const std::vector<std::string>& props, int edge_percent) {
    if (max_worlds < 1 || max_indices < 1) throw std::invalid_argument("random_model: bounds must be >= 1");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint64_t n) { return rng() % n; };
    const int k = 1 + static_cast<int>(pick(max_worlds));
    const int j = 1 + static_cast<int>(pick(max_indices));
    ModelSpec spec;
    for (int w = 1; w <= k; ++w) {
        ModelSpec::World world{"w" + std::to_string(w), {}};
        for (const auto& p : props)
            if (pick(2) == 1) world.props.push_back(p);
        spec.worlds.push_back(std::move(world));
    }
    for (int i = 1; i <= j; ++i) spec.indices.push_back("i" + std::to_string(i));
    for (int a = 1; a <= k; ++a)
        for (int i = 1; i <= j; ++i)
            for (int b = 1; b <= k; ++b)
                if (static_cast<int>(pick(100)) < edge_percent)
                    spec.edges.push_back({"w" + std::to_string(a), "i" + std::to_string(i), "w" + std::to_string(b)});
    return validate_model(spec);
}

int enumeration_bits(int worlds, int indices, int props) {
    return worlds * worlds * indices + worlds * props;
}

void check_enumeration_guard(int max_worlds, int max_indices, std::size_t props, int guard_bits) {
    if (max_worlds < 1 || max_indices < 1) throw std::invalid_argument("enumeration bounds must be >= 1");
    const int bits = enumeration_bits(max_worlds, max_indices, static_cast<int>(props));
    if (bits > guard_bits || bits > 62)
        throw GuardError("enumeration needs " + std::to_string(bits) + " bits of choice, guard is " +
                         std::to_string(std::min(guard_bits, 62)));
}

KripkeModel decode_model(int worlds, int indices, const std::vector<std::string>& props,
                         std::uint64_t val_code, std::uint64_t edge_code) {
    ModelSpec spec;
    const int np = static_cast<int>(props.size());
    for (int a = 0; a < worlds; ++a) {
        ModelSpec::World w{"w" + std::to_string(a + 1), {}};
        for (int q = 0; q < np; ++q)
            if ((val_code >> (a * np + q)) & 1U) w.props.push_back(props[q]);
        spec.worlds.push_back(std::move(w));
    }
    for (int i = 0; i < indices; ++i) spec.indices.push_back("i" + std::to_string(i + 1));
    for (int i = 0; i < indices; ++i)
        for (int a = 0; a < worlds; ++a)
            for (int b = 0; b < worlds; ++b)
                if ((edge_code >> ((i * worlds + a) * worlds + b)) & 1U)
                    spec.edges.push_back({spec.worlds[a].name, spec.indices[i], spec.worlds[b].name});
    return validate_model(spec);
}

ModelEnumerator::ModelEnumerator(int max_worlds, int max_indices, std::vector<std::string> props,
                                 int guard_bits)
    : max_worlds_(max_worlds), max_indices_(max_indices), props_(std::move(props)) {
    check_enumeration_guard(max_worlds, max_indices, props_.size(), guard_bits);
}

std::optional<KripkeModel> ModelEnumerator::next() {
    if (done_) return std::nullopt;
    KripkeModel m = decode_model(worlds_, indices_, props_, val_code_, edge_code_);

    const int np = static_cast<int>(props_.size());
    const std::uint64_t edge_limit = 1ULL << (worlds_ * worlds_ * indices_);
    const std::uint64_t val_limit = 1ULL << (worlds_ * np);
    if (++edge_code_ == edge_limit) {
        edge_code_ = 0;
        if (++val_code_ == val_limit) {
            val_code_ = 0;
            if (++indices_ > max_indices_) {
                indices_ = 1;
                if (++worlds_ > max_worlds_) done_ = true;
            }
        }
    }
    return m;
}

std::uint64_t ModelEnumerator::count(int max_worlds, int max_indices, std::size_t props) {
    std::uint64_t total = 0;
    for (int k = 1; k <= max_worlds; ++k)
        for (int j = 1; j <= max_indices; ++j)
            total += 1ULL << enumeration_bits(k, j, static_cast<int>(props));
    return total;
}

} // namespace iqml
