#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mmphflab/graphs.hpp"

namespace mmphflab::coloring {

using graphs::ExplicitGraph;
using graphs::IndexSet;

class InfeasibleCertificate : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

struct ChromaticResult {
    unsigned chi = 0;
    std::vector<unsigned> coloring;  // colour per vertex, 0-based
    /// Search nodes spent proving that chi - 1 colours are not enough.
    std::uint64_t exhaustion_nodes = 0;
};

/// Exact chi by iterative deepening on the colour count. Deterministic.
ChromaticResult chromatic_number(const ExplicitGraph& graph, const EnumerationCaps& caps = {});

/// Whether a proper k-colouring exists; fills `coloring` when it does.
bool is_colorable(const ExplicitGraph& graph, unsigned k, std::vector<unsigned>* coloring = nullptr,
                  std::uint64_t* nodes = nullptr);

bool is_proper_coloring(const ExplicitGraph& graph, const std::vector<unsigned>& coloring);

struct FractionalColoring {
    std::vector<std::pair<IndexSet, Rational>> entries;

    Rational value() const;
};

/// Dual LP solution y (packing form) or a probability distribution mu.
struct DualWitness {
    std::vector<Rational> weights;

    Rational value() const;
};

struct ChiReport {
    unsigned chi = 0;
    Rational chi_f;
    FractionalColoring primal;
    DualWitness dual;
    std::vector<unsigned> coloring;
    std::uint64_t maximal_sets = 0;
    std::uint64_t lp_pivots = 0;
};

/// Reasons a certificate fails; empty when it verifies.
std::vector<std::string> check_primal(const ExplicitGraph& graph, const FractionalColoring& x);
/// Dual feasibility needs every maximal independent set of the graph.
std::vector<std::string> check_dual(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets,
                                    const DualWitness& y);

struct FractionalResult {
    Rational chi_f;
    FractionalColoring primal;
    DualWitness dual;
    std::uint64_t pivots = 0;
};

/// Exact chi_f over the given maximal independent sets (columns).
FractionalResult fractional_chromatic_number(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets);
FractionalResult fractional_chromatic_number(const ExplicitGraph& graph);

/// chi, chi_f and both certificates; certificates are verified before return.
ChiReport analyze(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets,
                  const EnumerationCaps& caps = {});
ChiReport analyze(const graphs::GraphSpec& spec, const EnumerationCaps& caps = {});

/// (max over maximal independent sets of mu-mass)^-1. mu must sum to 1.
Rational evaluate_dual_witness(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets,
                               const DualWitness& mu);

/// mu(v) = y_v / sum(y).
DualWitness distribution_from_dual(const DualWitness& y);

/// y(u1, u2) = y1(u1) * y2(u2); product vertex (a, b) has index a*|V2| + b.
DualWitness compose_product_dual(const ExplicitGraph& g1, const std::vector<IndexSet>& sets1, const DualWitness& y1,
                                 const ExplicitGraph& g2, const std::vector<IndexSet>& sets2, const DualWitness& y2);

/// x(I1 x I2) = x1(I1) * x2(I2).
FractionalColoring compose_product_primal(const ExplicitGraph& g1, const FractionalColoring& x1,
                                          const ExplicitGraph& g2, const FractionalColoring& x2);

nlohmann::json to_json(const FractionalColoring& x);
nlohmann::json to_json(const DualWitness& y);
nlohmann::json to_json(const ChiReport& report);

}  // namespace mmphflab::coloring
