#include "mmphflab/graphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mmphflab::graphs {

Vertex::Vertex(std::initializer_list<long> e) {
    elements.reserve(e.size());
    for (long x : e) {
        elements.emplace_back(x);
    }
}

std::string Vertex::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i != 0) {
            out += ",";
        }
        out += elements[i].get_str();
    }
    return out + ")";
}

bool operator<(const Vertex& a, const Vertex& b) {
    return std::lexicographical_compare(a.elements.begin(), a.elements.end(), b.elements.begin(),
                                        b.elements.end());
}

std::string GraphSpec::tag() const {
    struct Visitor {
        std::string operator()(const ConflictSpec& c) const { return c.offset == 0 ? "conflict" : "offset-conflict"; }
        std::string operator()(const ShiftSpec&) const { return "shift"; }
        std::string operator()(const ProductSpec&) const { return "product"; }
        std::string operator()(const ExplicitSpec&) const { return "explicit"; }
    };
    return std::visit(Visitor{}, variant);
}

GraphSpec conflict(unsigned m, std::uint64_t width, const BigInt& offset) {
    if (m < 1) {
        throw InvalidInput("conflict graph needs m >= 1");
    }
    if (width < m) {
        throw InvalidInput("conflict graph needs M >= m");
    }
    if (offset < 0) {
        throw InvalidInput("conflict graph offset must be non-negative");
    }
    return GraphSpec{ConflictSpec{m, width, offset}};
}

GraphSpec shift(unsigned n, std::uint64_t u) {
    if (n < 1 || u < n) {
        throw InvalidInput("shift graph needs 1 <= n <= u");
    }
    return GraphSpec{ShiftSpec{n, u}};
}

GraphSpec product(const GraphSpec& left, const GraphSpec& right) {
    return GraphSpec{ProductSpec{std::make_shared<const GraphSpec>(left), std::make_shared<const GraphSpec>(right)}};
}

GraphSpec explicit_graph(std::vector<Vertex> vertices,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    if (vertices.empty()) {
        throw InvalidInput("explicit graph needs at least one vertex");
    }
    const std::size_t width = vertices.front().size();
    std::vector<std::size_t> order(vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
        const auto& e = vertices[i].elements;
        if (e.size() != width || e.empty()) {
            throw InvalidInput("explicit graph vertices must share one non-zero tuple size");
        }
        if (!std::is_sorted(e.begin(), e.end()) || std::adjacent_find(e.begin(), e.end()) != e.end()) {
            throw InvalidInput("explicit graph vertex not strictly increasing: " + vertices[i].str());
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vertices[a] < vertices[b]; });
    std::vector<std::size_t> rank(order.size());
    ExplicitSpec out;
    out.vertices.reserve(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        out.vertices.push_back(vertices[order[r]]);
        if (r > 0 && out.vertices[r] == out.vertices[r - 1]) {
            throw InvalidInput("explicit graph has duplicate vertex " + out.vertices[r].str());
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> normalized;
    for (auto [a, b] : edges) {
        if (a >= vertices.size() || b >= vertices.size()) {
            throw InvalidInput("explicit graph edge references a missing vertex");
        }
        if (a == b) {
            throw InvalidInput("explicit graph edge is a self loop");
        }
        auto ra = rank[a];
        auto rb = rank[b];
        normalized.emplace(std::min(ra, rb), std::max(ra, rb));
    }
    out.edges.assign(normalized.begin(), normalized.end());
    return GraphSpec{std::move(out)};
}

GraphSpec complete(std::size_t n) {
    std::vector<Vertex> vs;
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < n; ++i) {
        vs.emplace_back(std::vector<BigInt>{BigInt(static_cast<unsigned long>(i + 1))});
        for (std::size_t j = 0; j < i; ++j) {
            es.emplace_back(j, i);
        }
    }
    return explicit_graph(std::move(vs), es);
}

GraphSpec cycle(std::size_t n) {
    if (n < 3) {
        throw InvalidInput("cycle needs at least 3 vertices");
    }
    std::vector<Vertex> vs;
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < n; ++i) {
        vs.emplace_back(std::vector<BigInt>{BigInt(static_cast<unsigned long>(i + 1))});
        es.emplace_back(i, (i + 1) % n);
    }
    return explicit_graph(std::move(vs), es);
}

GraphSpec kfold_conflict(unsigned m, std::uint64_t width, unsigned k) {
    if (k < 1) {
        throw InvalidInput("k-fold conflict graph needs k >= 1");
    }
    GraphSpec out = conflict(m, width, 0);
    for (unsigned j = 1; j < k; ++j) {
        BigInt offset = BigInt(std::to_string(width)) * j;
        out = product(out, conflict(m, width, offset));
    }
    return out;
}

std::size_t tuple_size(const GraphSpec& spec) {
    struct Visitor {
        std::size_t operator()(const ConflictSpec& c) const { return c.m; }
        std::size_t operator()(const ShiftSpec& s) const { return s.n; }
        std::size_t operator()(const ProductSpec& p) const { return tuple_size(*p.left) + tuple_size(*p.right); }
        std::size_t operator()(const ExplicitSpec& e) const { return e.vertices.front().size(); }
    };
    return std::visit(Visitor{}, spec.variant);
}

BigInt vertex_count(const GraphSpec& spec) {
    struct Visitor {
        BigInt operator()(const ConflictSpec& c) const { return binomial(c.width, c.m); }
        BigInt operator()(const ShiftSpec& s) const { return binomial(s.u, s.n); }
        BigInt operator()(const ProductSpec& p) const { return vertex_count(*p.left) * vertex_count(*p.right); }
        BigInt operator()(const ExplicitSpec& e) const { return BigInt(std::to_string(e.vertices.size())); }
    };
    return std::visit(Visitor{}, spec.variant);
}

namespace {

bool strictly_increasing_within(const std::vector<BigInt>& e, std::size_t from, std::size_t to, const BigInt& lo,
                                const BigInt& hi) {
    for (std::size_t i = from; i < to; ++i) {
        if (e[i] < lo || e[i] > hi) {
            return false;
        }
        if (i > from && e[i] <= e[i - 1]) {
            return false;
        }
    }
    return true;
}

Vertex slice(const Vertex& v, std::size_t from, std::size_t to) {
    return Vertex(std::vector<BigInt>(v.elements.begin() + static_cast<std::ptrdiff_t>(from),
                                      v.elements.begin() + static_cast<std::ptrdiff_t>(to)));
}

std::size_t explicit_index(const ExplicitSpec& e, const Vertex& v) {
    auto it = std::lower_bound(e.vertices.begin(), e.vertices.end(), v);
    if (it == e.vertices.end() || !(*it == v)) {
        return e.vertices.size();
    }
    return static_cast<std::size_t>(it - e.vertices.begin());
}

bool conflict_adjacent(const Vertex& v, const Vertex& w) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (i != j && v.elements[i] == w.elements[j]) {
                return true;
            }
        }
    }
    return false;
}

// w is the successor shift of v: (v2..vn) == (w1..w(n-1)) and v1 < wn.
bool shifts_to(const Vertex& v, const Vertex& w) {
    const std::size_t n = v.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (v.elements[i] != w.elements[i - 1]) {
            return false;
        }
    }
    return v.elements.front() < w.elements.back();
}

}  // namespace

bool is_vertex(const GraphSpec& spec, const Vertex& v) {
    struct Visitor {
        const Vertex& v;
        bool operator()(const ConflictSpec& c) const {
            return v.size() == c.m &&
                   strictly_increasing_within(v.elements, 0, v.size(), c.offset + 1,
                                              c.offset + BigInt(std::to_string(c.width)));
        }
        bool operator()(const ShiftSpec& s) const {
            return v.size() == s.n &&
                   strictly_increasing_within(v.elements, 0, v.size(), 1, BigInt(std::to_string(s.u)));
        }
        bool operator()(const ProductSpec& p) const {
            const std::size_t split = tuple_size(*p.left);
            if (v.size() != split + tuple_size(*p.right)) {
                return false;
            }
            return is_vertex(*p.left, slice(v, 0, split)) && is_vertex(*p.right, slice(v, split, v.size()));
        }
        bool operator()(const ExplicitSpec& e) const { return explicit_index(e, v) != e.vertices.size(); }
    };
    return std::visit(Visitor{v}, spec.variant);
}

bool adjacent(const GraphSpec& spec, const Vertex& v, const Vertex& w) {
    if (!is_vertex(spec, v)) {
        throw InvalidVertex("not a vertex of " + spec.tag() + " graph: " + v.str());
    }
    if (!is_vertex(spec, w)) {
        throw InvalidVertex("not a vertex of " + spec.tag() + " graph: " + w.str());
    }
    struct Visitor {
        const Vertex& v;
        const Vertex& w;
        bool operator()(const ConflictSpec&) const { return conflict_adjacent(v, w); }
        bool operator()(const ShiftSpec&) const { return shifts_to(v, w) || shifts_to(w, v); }
        bool operator()(const ProductSpec& p) const {
            const std::size_t split = tuple_size(*p.left);
            return adjacent(*p.left, slice(v, 0, split), slice(w, 0, split)) ||
                   adjacent(*p.right, slice(v, split, v.size()), slice(w, split, w.size()));
        }
        bool operator()(const ExplicitSpec& e) const {
            std::size_t a = explicit_index(e, v);
            std::size_t b = explicit_index(e, w);
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            return std::binary_search(e.edges.begin(), e.edges.end(), key);
        }
    };
    return std::visit(Visitor{v, w}, spec.variant);
}

namespace {

void combinations(const BigInt& first, std::uint64_t count, unsigned size, std::vector<Vertex>& out) {
    std::vector<std::uint64_t> pick(size);
    for (unsigned i = 0; i < size; ++i) {
        pick[i] = i;
    }
    for (;;) {
        std::vector<BigInt> e(size);
        for (unsigned i = 0; i < size; ++i) {
            e[i] = first + BigInt(std::to_string(pick[i]));
        }
        out.emplace_back(std::move(e));
        int i = static_cast<int>(size) - 1;
        while (i >= 0 && pick[static_cast<unsigned>(i)] == count - size + static_cast<unsigned>(i)) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++pick[static_cast<unsigned>(i)];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < size; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

}  // namespace

std::vector<Vertex> enumerate_vertices(const GraphSpec& spec, const EnumerationCaps& caps) {
    check_cap("max_vertices", vertex_count(spec), caps.max_vertices);
    struct Visitor {
        const EnumerationCaps& caps;
        std::vector<Vertex> operator()(const ConflictSpec& c) const {
            std::vector<Vertex> out;
            combinations(c.offset + 1, c.width, c.m, out);
            return out;
        }
        std::vector<Vertex> operator()(const ShiftSpec& s) const {
            std::vector<Vertex> out;
            combinations(1, s.u, s.n, out);
            return out;
        }
        std::vector<Vertex> operator()(const ProductSpec& p) const {
            auto left = enumerate_vertices(*p.left, caps);
            auto right = enumerate_vertices(*p.right, caps);
            std::vector<Vertex> out;
            out.reserve(left.size() * right.size());
            for (const auto& a : left) {
                for (const auto& b : right) {
                    Vertex v = a;
                    v.elements.insert(v.elements.end(), b.elements.begin(), b.elements.end());
                    out.push_back(std::move(v));
                }
            }
            return out;
        }
        std::vector<Vertex> operator()(const ExplicitSpec& e) const { return e.vertices; }
    };
    return std::visit(Visitor{caps}, spec.variant);
}

ExplicitGraph::ExplicitGraph(std::vector<Vertex> vertices,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : vertices_(std::move(vertices)), adjacency_(vertices_.size(), Bitset(vertices_.size())) {
    for (auto [a, b] : edges) {
        if (a >= size() || b >= size() || a == b) {
            throw InvalidInput("invalid edge in explicit graph");
        }
        adjacency_[a].set(b);
        adjacency_[b].set(a);
    }
    for (const auto& row : adjacency_) {
        edge_count_ += row.count();
    }
    edge_count_ /= 2;
}

std::vector<std::pair<std::size_t, std::size_t>> ExplicitGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(edge_count_);
    for (std::size_t a = 0; a < size(); ++a) {
        for (auto b = adjacency_[a].find_next(a); b != Bitset::npos; b = adjacency_[a].find_next(b)) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

std::size_t ExplicitGraph::index_of(const Vertex& v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || !(*it == v)) {
        return size();
    }
    return static_cast<std::size_t>(it - vertices_.begin());
}

bool ExplicitGraph::is_independent(const IndexSet& set) const {
    Bitset members(size());
    for (auto v : set) {
        if (v >= size()) {
            return false;
        }
        members.set(v);
    }
    for (auto v : set) {
        if (adjacency_[v].intersects(members)) {
            return false;
        }
    }
    return true;
}

bool ExplicitGraph::is_maximal_independent(const IndexSet& set) const {
    if (!is_independent(set)) {
        return false;
    }
    Bitset covered(size());
    for (auto v : set) {
        covered.set(v);
        covered |= adjacency_[v];
    }
    return covered.all();
}

ExplicitGraph build_graph(const GraphSpec& spec, const EnumerationCaps& caps) {
    std::vector<Vertex> vertices = enumerate_vertices(spec, caps);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (const auto* c = std::get_if<ConflictSpec>(&spec.variant)) {
        // Bucket vertices by element; conflicts only arise inside a bucket.
        std::map<BigInt, std::vector<std::pair<unsigned, std::size_t>>> by_element;
        for (std::size_t idx = 0; idx < vertices.size(); ++idx) {
            for (unsigned pos = 0; pos < c->m; ++pos) {
                by_element[vertices[idx].elements[pos]].emplace_back(pos, idx);
            }
        }
        std::set<std::pair<std::size_t, std::size_t>> unique;
        for (const auto& [element, holders] : by_element) {
            for (std::size_t a = 0; a < holders.size(); ++a) {
                for (std::size_t b = a + 1; b < holders.size(); ++b) {
                    if (holders[a].first != holders[b].first) {
                        auto x = holders[a].second;
                        auto y = holders[b].second;
                        unique.emplace(std::min(x, y), std::max(x, y));
                    }
                }
            }
        }
        edges.assign(unique.begin(), unique.end());
    } else if (const auto* p = std::get_if<ProductSpec>(&spec.variant)) {
        ExplicitGraph left = build_graph(*p->left, caps);
        ExplicitGraph right = build_graph(*p->right, caps);
        const std::size_t n2 = right.size();
        for (std::size_t a = 0; a < vertices.size(); ++a) {
            for (std::size_t b = a + 1; b < vertices.size(); ++b) {
                if (left.adjacent(a / n2, b / n2) || right.adjacent(a % n2, b % n2)) {
                    edges.emplace_back(a, b);
                }
            }
        }
    } else if (const auto* e = std::get_if<ExplicitSpec>(&spec.variant)) {
        edges = e->edges;
    } else {
        for (std::size_t a = 0; a < vertices.size(); ++a) {
            for (std::size_t b = a + 1; b < vertices.size(); ++b) {
                if (adjacent(spec, vertices[a], vertices[b])) {
                    edges.emplace_back(a, b);
                }
            }
        }
    }
    return ExplicitGraph(std::move(vertices), edges);
}

std::string to_dimacs(const ExplicitGraph& graph) {
    std::ostringstream out;
    out << "p edge " << graph.size() << ' ' << graph.edge_count() << '\n';
    for (auto [a, b] : graph.edges()) {
        out << "e " << a + 1 << ' ' << b + 1 << '\n';
    }
    return out.str();
}

ExplicitGraph from_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    bool have_header = false;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string kind;
        if (!(fields >> kind) || kind == "c") {
            continue;
        }
        if (kind == "p") {
            std::string format;
            std::size_t m = 0;
            if (!(fields >> format >> n >> m) || (format != "edge" && format != "col")) {
                throw InvalidInput("malformed DIMACS problem line: " + line);
            }
            have_header = true;
        } else if (kind == "e") {
            std::size_t a = 0;
            std::size_t b = 0;
            if (!have_header || !(fields >> a >> b) || a < 1 || b < 1 || a > n || b > n) {
                throw InvalidInput("malformed DIMACS edge line: " + line);
            }
            if (a != b) {
                edges.emplace_back(std::min(a, b) - 1, std::max(a, b) - 1);
            }
        }
    }
    if (!have_header) {
        throw InvalidInput("DIMACS input has no problem line");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < n; ++i) {
        vertices.emplace_back(std::vector<BigInt>{BigInt(static_cast<unsigned long>(i + 1))});
    }
    return ExplicitGraph(std::move(vertices), edges);
}

unsigned LabelFunction::at(const BigInt& element) const {
    BigInt pos = element - offset - 1;
    if (pos < 0 || pos >= BigInt(std::to_string(labels.size()))) {
        throw InvalidInput("label function undefined at " + element.get_str());
    }
    return labels[pos.get_ui()];
}

unsigned LabelFunction::at(std::uint64_t element) const {
    if (offset == 0) {
        if (element < 1 || element > labels.size()) {
            throw InvalidInput("label function undefined at " + std::to_string(element));
        }
        return labels[element - 1];
    }
    return at(BigInt(std::to_string(element)));
}

LabelFunction label_function_from_index(unsigned m, std::uint64_t width, std::uint64_t index, const BigInt& offset) {
    LabelFunction f;
    f.offset = offset;
    f.labels.assign(width, 1);
    for (std::uint64_t p = width; p-- > 0;) {
        f.labels[p] = static_cast<unsigned>(index % m) + 1;
        index /= m;
    }
    return f;
}

std::vector<Vertex> independent_set_of(const LabelFunction& f, const GraphSpec& spec, const EnumerationCaps& caps) {
    const auto* c = std::get_if<ConflictSpec>(&spec.variant);
    if (c == nullptr) {
        throw InvalidInput("independent_set_of needs a conflict-family graph");
    }
    if (f.offset != c->offset || f.width() != c->width) {
        throw InvalidInput("label function universe does not match the conflict graph universe");
    }
    check_cap("max_vertices", vertex_count(spec), caps.max_vertices);
    for (unsigned label : f.labels) {
        if (label < 1 || label > c->m) {
            throw InvalidInput("label outside [1, m]");
        }
    }
    std::vector<Vertex> out;
    std::vector<std::uint64_t> chosen(c->m);
    // Positions are filled in order; each must exceed the previous one.
    std::function<void(unsigned, std::uint64_t)> extend = [&](unsigned position, std::uint64_t from) {
        if (position == c->m) {
            std::vector<BigInt> e(c->m);
            for (unsigned i = 0; i < c->m; ++i) {
                e[i] = c->offset + 1 + BigInt(std::to_string(chosen[i]));
            }
            out.emplace_back(std::move(e));
            return;
        }
        for (std::uint64_t p = from; p < c->width; ++p) {
            if (f.labels[p] == position + 1) {
                chosen[position] = p;
                extend(position + 1, p + 1);
            }
        }
    };
    extend(0, 0);
    return out;
}

namespace {

struct BronKerbosch {
    const std::vector<Bitset>& non_neighbours;
    std::vector<IndexSet>& out;

    void run(IndexSet& chosen, Bitset candidates, Bitset excluded) {
        if (candidates.none() && excluded.none()) {
            IndexSet set = chosen;
            std::sort(set.begin(), set.end());
            out.push_back(std::move(set));
            return;
        }
        // Pivot maximising |candidates & N(pivot)| in the complement graph.
        Bitset pool = candidates | excluded;
        std::size_t pivot = pool.find_first();
        std::size_t best = 0;
        for (auto u = pool.find_first(); u != Bitset::npos; u = pool.find_next(u)) {
            std::size_t c = (candidates & non_neighbours[u]).count();
            if (c > best || u == pool.find_first()) {
                best = c;
                pivot = u;
            }
        }
        Bitset branch = candidates - non_neighbours[pivot];
        for (auto v = branch.find_first(); v != Bitset::npos; v = branch.find_next(v)) {
            chosen.push_back(static_cast<std::uint32_t>(v));
            run(chosen, candidates & non_neighbours[v], excluded & non_neighbours[v]);
            chosen.pop_back();
            candidates.reset(v);
            excluded.set(v);
        }
    }
};

}  // namespace

std::vector<IndexSet> maximal_independent_sets_generic(const ExplicitGraph& graph) {
    const std::size_t n = graph.size();
    std::vector<Bitset> non_neighbours(n);
    for (std::size_t v = 0; v < n; ++v) {
        non_neighbours[v] = ~graph.neighbours(v);
        non_neighbours[v].reset(v);
    }
    std::vector<IndexSet> out;
    IndexSet chosen;
    Bitset all(n);
    all.set();
    BronKerbosch{non_neighbours, out}.run(chosen, all, Bitset(n));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IndexSet> maximal_independent_sets_by_labels(const GraphSpec& spec, const ExplicitGraph& graph,
                                                         const EnumerationCaps& caps) {
    const auto* c = std::get_if<ConflictSpec>(&spec.variant);
    if (c == nullptr) {
        throw InvalidInput("label-function enumeration needs a conflict-family graph");
    }
    const BigInt total = pow_big(c->m, c->width);
    check_cap("max_label_functions", total, caps.max_label_functions);
    std::set<IndexSet> unique;
    const std::uint64_t count = to_u64(total);
    for (std::uint64_t index = 0; index < count; ++index) {
        LabelFunction f = label_function_from_index(c->m, c->width, index, c->offset);
        IndexSet set;
        for (const auto& v : independent_set_of(f, spec, caps)) {
            set.push_back(static_cast<std::uint32_t>(graph.index_of(v)));
        }
        std::sort(set.begin(), set.end());
        if (!set.empty() && graph.is_maximal_independent(set)) {
            unique.insert(std::move(set));
        }
    }
    return {unique.begin(), unique.end()};
}

std::vector<IndexSet> maximal_independent_sets(const GraphSpec& spec, const ExplicitGraph& graph,
                                               const EnumerationCaps& caps) {
    if (std::holds_alternative<ConflictSpec>(spec.variant)) {
        return maximal_independent_sets_by_labels(spec, graph, caps);
    }
    return maximal_independent_sets_generic(graph);
}

std::vector<std::vector<Vertex>> maximal_independent_sets(const GraphSpec& spec, const EnumerationCaps& caps) {
    ExplicitGraph graph = build_graph(spec, caps);
    std::vector<std::vector<Vertex>> out;
    for (const auto& set : maximal_independent_sets(spec, graph, caps)) {
        std::vector<Vertex> vs;
        for (auto idx : set) {
            vs.push_back(graph.vertex(idx));
        }
        out.push_back(std::move(vs));
    }
    return out;
}

}  // namespace mmphflab::graphs
