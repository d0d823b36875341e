#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mmphflab/common.hpp"

namespace mmphflab::graphs {

/// Strictly increasing tuple of universe positions. Product vertices are the
/// concatenation of their coordinates' tuples.
struct Vertex {
    std::vector<BigInt> elements;

    Vertex() = default;
    explicit Vertex(std::vector<BigInt> e) : elements(std::move(e)) {}
    Vertex(std::initializer_list<long> e);

    std::size_t size() const noexcept { return elements.size(); }
    std::string str() const;

    friend bool operator==(const Vertex& a, const Vertex& b) { return a.elements == b.elements; }
    friend bool operator<(const Vertex& a, const Vertex& b);
};

class InvalidVertex : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

struct GraphSpec;

/// G(m, offset): m-subsets of [offset+1, offset+width], edge iff some element
/// sits at different positions in the two tuples.
struct ConflictSpec {
    unsigned m = 1;
    std::uint64_t width = 1;
    BigInt offset = 0;
};

/// Shift graph on n-subsets of [u]: (a1..an) ~ (a2..an+1).
struct ShiftSpec {
    unsigned n = 1;
    std::uint64_t u = 1;
};

/// G1 v G2: Cartesian product, edge iff edge in either coordinate.
struct ProductSpec {
    std::shared_ptr<const GraphSpec> left;
    std::shared_ptr<const GraphSpec> right;
};

/// Arbitrary graph; vertices kept in canonical (lexicographic) order, edges
/// as pairs of indices into that order.
struct ExplicitSpec {
    std::vector<Vertex> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct GraphSpec {
    std::variant<ConflictSpec, ShiftSpec, ProductSpec, ExplicitSpec> variant;

    /// "conflict", "offset-conflict", "shift", "product" or "explicit".
    std::string tag() const;
};

GraphSpec conflict(unsigned m, std::uint64_t width, const BigInt& offset = 0);
GraphSpec shift(unsigned n, std::uint64_t u);
GraphSpec product(const GraphSpec& left, const GraphSpec& right);
/// Sorts the vertices canonically and remaps edges accordingly.
GraphSpec explicit_graph(std::vector<Vertex> vertices,
                         const std::vector<std::pair<std::size_t, std::size_t>>& edges);
GraphSpec complete(std::size_t n);
GraphSpec cycle(std::size_t n);
/// k-fold conflict graph: product of conflict(m, width) over the disjoint
/// ranges with offsets 0, width, ..., (k-1)*width.
GraphSpec kfold_conflict(unsigned m, std::uint64_t width, unsigned k);

std::size_t tuple_size(const GraphSpec& spec);
BigInt vertex_count(const GraphSpec& spec);
bool is_vertex(const GraphSpec& spec, const Vertex& v);

bool adjacent(const GraphSpec& spec, const Vertex& v, const Vertex& w);

/// All vertices in canonical order.
std::vector<Vertex> enumerate_vertices(const GraphSpec& spec, const EnumerationCaps& caps = {});

using Bitset = boost::dynamic_bitset<std::uint64_t>;
/// Sorted vertex indices.
using IndexSet = std::vector<std::uint32_t>;

class ExplicitGraph {
public:
    ExplicitGraph() = default;
    ExplicitGraph(std::vector<Vertex> vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t size() const noexcept { return vertices_.size(); }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const Vertex& vertex(std::size_t i) const { return vertices_.at(i); }
    bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a].test(b); }
    const Bitset& neighbours(std::size_t a) const { return adjacency_[a]; }
    std::size_t degree(std::size_t a) const { return adjacency_[a].count(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    /// Edges (a, b) with a < b in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    /// Index of v, or size() when absent.
    std::size_t index_of(const Vertex& v) const;

    bool is_independent(const IndexSet& set) const;
    bool is_maximal_independent(const IndexSet& set) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Bitset> adjacency_;
    std::size_t edge_count_ = 0;
};

ExplicitGraph build_graph(const GraphSpec& spec, const EnumerationCaps& caps = {});

/// DIMACS edge format, 1-based ids in canonical order.
std::string to_dimacs(const ExplicitGraph& graph);
ExplicitGraph from_dimacs(const std::string& text);

/// Total map from the universe [offset+1, offset+labels.size()] to indices
/// 1..m. Encodes a maximal independent set of a conflict graph.
struct LabelFunction {
    BigInt offset = 0;
    std::vector<unsigned> labels;

    unsigned at(const BigInt& element) const;
    unsigned at(std::uint64_t element) const;
    std::uint64_t width() const noexcept { return labels.size(); }
};

/// The `index`-th label function in lexicographic order (labels[0] most
/// significant), index < m^width.
LabelFunction label_function_from_index(unsigned m, std::uint64_t width, std::uint64_t index,
                                        const BigInt& offset = 0);

/// I(f) = { v : f(v_i) = i for every position i }, canonical order.
std::vector<Vertex> independent_set_of(const LabelFunction& f, const GraphSpec& spec,
                                       const EnumerationCaps& caps = {});

/// Generic enumerator: Bron-Kerbosch with pivoting over the complement.
std::vector<IndexSet> maximal_independent_sets_generic(const ExplicitGraph& graph);

/// Conflict family: maps every label function through independent_set_of,
/// keeps maximal sets, deduplicates. Indices refer to `graph`, which must be
/// build_graph(spec).
std::vector<IndexSet> maximal_independent_sets_by_labels(const GraphSpec& spec, const ExplicitGraph& graph,
                                                         const EnumerationCaps& caps = {});

/// Label-function route for conflict specs, generic route otherwise. Output
/// sorted lexicographically by index list.
std::vector<IndexSet> maximal_independent_sets(const GraphSpec& spec, const ExplicitGraph& graph,
                                               const EnumerationCaps& caps = {});
std::vector<std::vector<Vertex>> maximal_independent_sets(const GraphSpec& spec,
                                                          const EnumerationCaps& caps = {});

}  // namespace mmphflab::graphs
