#include "mmphflab/coloring.hpp"

#include <algorithm>
#include <numeric>

#include "mmphflab/lp.hpp"

namespace mmphflab::coloring {

namespace {

// DSATUR backtracking for a fixed colour budget.
class ColoringSearch {
public:
    ColoringSearch(const ExplicitGraph& graph, unsigned budget)
        : graph_(graph), budget_(budget), colour_(graph.size(), kUncoloured),
          neighbour_colours_(graph.size(), std::vector<unsigned>(budget, 0)), saturation_(graph.size(), 0) {}

    bool run() { return extend(0, 0); }

    std::vector<unsigned> colouring() const { return {colour_.begin(), colour_.end()}; }
    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    static constexpr unsigned kUncoloured = static_cast<unsigned>(-1);

    // Highest saturation, then highest degree, then lowest index.
    std::size_t pick() const {
        std::size_t best = graph_.size();
        for (std::size_t v = 0; v < graph_.size(); ++v) {
            if (colour_[v] != kUncoloured) {
                continue;
            }
            if (best == graph_.size() || saturation_[v] > saturation_[best] ||
                (saturation_[v] == saturation_[best] && graph_.degree(v) > graph_.degree(best))) {
                best = v;
            }
        }
        return best;
    }

    void assign(std::size_t v, unsigned c) {
        colour_[v] = c;
        const auto& nb = graph_.neighbours(v);
        for (auto w = nb.find_first(); w != graphs::Bitset::npos; w = nb.find_next(w)) {
            if (neighbour_colours_[w][c]++ == 0) {
                ++saturation_[w];
            }
        }
    }

    void unassign(std::size_t v) {
        const unsigned c = colour_[v];
        const auto& nb = graph_.neighbours(v);
        for (auto w = nb.find_first(); w != graphs::Bitset::npos; w = nb.find_next(w)) {
            if (--neighbour_colours_[w][c] == 0) {
                --saturation_[w];
            }
        }
        colour_[v] = kUncoloured;
    }

    bool extend(std::size_t coloured, unsigned used) {
        ++nodes_;
        if (coloured == graph_.size()) {
            return true;
        }
        const std::size_t v = pick();
        // A fresh colour is interchangeable with every other unused one.
        const unsigned limit = std::min(budget_, used + 1);
        for (unsigned c = 0; c < limit; ++c) {
            if (neighbour_colours_[v][c] != 0) {
                continue;
            }
            assign(v, c);
            if (extend(coloured + 1, std::max(used, c + 1))) {
                return true;
            }
            unassign(v);
        }
        return false;
    }

    const ExplicitGraph& graph_;
    unsigned budget_;
    std::vector<unsigned> colour_;
    std::vector<std::vector<unsigned>> neighbour_colours_;
    std::vector<unsigned> saturation_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

bool is_colorable(const ExplicitGraph& graph, unsigned k, std::vector<unsigned>* coloring, std::uint64_t* nodes) {
    if (graph.size() == 0) {
        return true;
    }
    if (k == 0) {
        return false;
    }
    ColoringSearch search(graph, k);
    const bool ok = search.run();
    if (ok && coloring != nullptr) {
        *coloring = search.colouring();
    }
    if (nodes != nullptr) {
        *nodes = search.nodes();
    }
    return ok;
}

bool is_proper_coloring(const ExplicitGraph& graph, const std::vector<unsigned>& coloring) {
    if (coloring.size() != graph.size()) {
        return false;
    }
    for (auto [a, b] : graph.edges()) {
        if (coloring[a] == coloring[b]) {
            return false;
        }
    }
    return true;
}

ChromaticResult chromatic_number(const ExplicitGraph& graph, const EnumerationCaps& caps) {
    if (graph.size() == 0) {
        throw InvalidInput("chromatic number of the empty graph is undefined");
    }
    check_cap("max_vertices", BigInt(std::to_string(graph.size())), caps.max_vertices);
    ChromaticResult out;
    for (unsigned k = 1;; ++k) {
        std::uint64_t nodes = 0;
        if (is_colorable(graph, k, &out.coloring, &nodes)) {
            out.chi = k;
            return out;
        }
        out.exhaustion_nodes = nodes;
    }
}

Rational FractionalColoring::value() const {
    Rational total = 0;
    for (const auto& [set, weight] : entries) {
        total += weight;
    }
    return total;
}

Rational DualWitness::value() const {
    Rational total = 0;
    for (const auto& w : weights) {
        total += w;
    }
    return total;
}

std::vector<std::string> check_primal(const ExplicitGraph& graph, const FractionalColoring& x) {
    std::vector<std::string> problems;
    std::vector<Rational> cover(graph.size(), Rational(0));
    for (std::size_t e = 0; e < x.entries.size(); ++e) {
        const auto& [set, weight] = x.entries[e];
        if (weight < 0) {
            problems.push_back("entry " + std::to_string(e) + " has negative weight");
        }
        if (!graph.is_independent(set)) {
            problems.push_back("entry " + std::to_string(e) + " is not an independent set");
            continue;
        }
        for (auto v : set) {
            cover[v] += weight;
        }
    }
    for (std::size_t v = 0; v < graph.size(); ++v) {
        if (cover[v] < 1) {
            problems.push_back("vertex " + std::to_string(v) + " covered with weight " + fraction_string(cover[v]));
        }
    }
    return problems;
}

std::vector<std::string> check_dual(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets,
                                    const DualWitness& y) {
    std::vector<std::string> problems;
    if (y.weights.size() != graph.size()) {
        problems.push_back("dual witness has " + std::to_string(y.weights.size()) + " weights for " +
                           std::to_string(graph.size()) + " vertices");
        return problems;
    }
    for (std::size_t v = 0; v < y.weights.size(); ++v) {
        if (y.weights[v] < 0) {
            problems.push_back("vertex " + std::to_string(v) + " has negative weight");
        }
    }
    for (std::size_t s = 0; s < maximal_sets.size(); ++s) {
        Rational mass = 0;
        for (auto v : maximal_sets[s]) {
            mass += y.weights[v];
        }
        if (mass > 1) {
            problems.push_back("independent set " + std::to_string(s) + " has weight " + fraction_string(mass));
        }
    }
    return problems;
}

FractionalResult fractional_chromatic_number(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets) {
    if (graph.size() == 0) {
        throw InvalidInput("fractional chromatic number of the empty graph is undefined");
    }
    // Dual (packing) form: max sum(y) s.t. y(I) <= 1 for every maximal I.
    // Its LP dual is the covering LP whose optimum is the fractional colouring.
    const auto solution = lp::maximize_packing(maximal_sets, graph.size());
    if (solution.status != lp::Solution::Status::optimal) {
        throw InternalError("packing LP reported unbounded; maximal independent sets do not cover the graph");
    }
    FractionalResult out;
    out.chi_f = solution.value;
    out.pivots = solution.pivots;
    out.dual.weights = solution.primal;
    for (std::size_t s = 0; s < maximal_sets.size(); ++s) {
        if (sgn(solution.dual[s]) != 0) {
            out.primal.entries.emplace_back(maximal_sets[s], solution.dual[s]);
        }
    }
    return out;
}

FractionalResult fractional_chromatic_number(const ExplicitGraph& graph) {
    return fractional_chromatic_number(graph, graphs::maximal_independent_sets_generic(graph));
}

ChiReport analyze(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets, const EnumerationCaps& caps) {
    auto fractional = fractional_chromatic_number(graph, maximal_sets);
    auto primal_problems = check_primal(graph, fractional.primal);
    auto dual_problems = check_dual(graph, maximal_sets, fractional.dual);
    if (!primal_problems.empty() || !dual_problems.empty() || fractional.primal.value() != fractional.chi_f ||
        fractional.dual.value() != fractional.chi_f) {
        throw InternalError("fractional colouring certificates failed verification");
    }
    auto chromatic = chromatic_number(graph, caps);
    if (fractional.chi_f > chromatic.chi) {
        throw InternalError("chi_f exceeds chi");
    }
    ChiReport out;
    out.chi = chromatic.chi;
    out.chi_f = fractional.chi_f;
    out.primal = std::move(fractional.primal);
    out.dual = std::move(fractional.dual);
    out.coloring = std::move(chromatic.coloring);
    out.maximal_sets = maximal_sets.size();
    out.lp_pivots = fractional.pivots;
    return out;
}

ChiReport analyze(const graphs::GraphSpec& spec, const EnumerationCaps& caps) {
    auto graph = graphs::build_graph(spec, caps);
    auto sets = graphs::maximal_independent_sets(spec, graph, caps);
    return analyze(graph, sets, caps);
}

Rational evaluate_dual_witness(const ExplicitGraph& graph, const std::vector<IndexSet>& maximal_sets,
                               const DualWitness& mu) {
    if (mu.weights.size() != graph.size()) {
        throw InvalidInput("distribution size does not match the graph");
    }
    for (const auto& w : mu.weights) {
        if (w < 0) {
            throw InvalidInput("distribution has a negative mass");
        }
    }
    if (mu.value() != 1) {
        throw InvalidInput("distribution is not normalized (sums to " + fraction_string(mu.value()) + ")");
    }
    Rational best = 0;
    for (const auto& set : maximal_sets) {
        Rational mass = 0;
        for (auto v : set) {
            mass += mu.weights[v];
        }
        best = std::max(best, mass);
    }
    if (best == 0) {
        throw InternalError("no maximal independent set carries mass");
    }
    return 1 / best;
}

DualWitness distribution_from_dual(const DualWitness& y) {
    const Rational total = y.value();
    if (total <= 0) {
        throw InvalidInput("dual witness has no mass");
    }
    DualWitness mu;
    mu.weights.reserve(y.weights.size());
    for (const auto& w : y.weights) {
        mu.weights.push_back(w / total);
    }
    return mu;
}

DualWitness compose_product_dual(const ExplicitGraph& g1, const std::vector<IndexSet>& sets1, const DualWitness& y1,
                                 const ExplicitGraph& g2, const std::vector<IndexSet>& sets2, const DualWitness& y2) {
    if (!check_dual(g1, sets1, y1).empty()) {
        throw InfeasibleCertificate("first dual witness is infeasible");
    }
    if (!check_dual(g2, sets2, y2).empty()) {
        throw InfeasibleCertificate("second dual witness is infeasible");
    }
    DualWitness out;
    out.weights.reserve(y1.weights.size() * y2.weights.size());
    for (const auto& a : y1.weights) {
        for (const auto& b : y2.weights) {
            out.weights.push_back(a * b);
        }
    }
    return out;
}

FractionalColoring compose_product_primal(const ExplicitGraph& g1, const FractionalColoring& x1,
                                          const ExplicitGraph& g2, const FractionalColoring& x2) {
    if (!check_primal(g1, x1).empty()) {
        throw InfeasibleCertificate("first fractional colouring is infeasible");
    }
    if (!check_primal(g2, x2).empty()) {
        throw InfeasibleCertificate("second fractional colouring is infeasible");
    }
    const auto n2 = static_cast<std::uint32_t>(g2.size());
    FractionalColoring out;
    for (const auto& [set1, w1] : x1.entries) {
        for (const auto& [set2, w2] : x2.entries) {
            IndexSet set;
            set.reserve(set1.size() * set2.size());
            for (auto a : set1) {
                for (auto b : set2) {
                    set.push_back(a * n2 + b);
                }
            }
            out.entries.emplace_back(std::move(set), w1 * w2);
        }
    }
    return out;
}

nlohmann::json to_json(const FractionalColoring& x) {
    auto sets = nlohmann::json::array();
    for (const auto& [set, weight] : x.entries) {
        sets.push_back({{"vertices", set}, {"weight", fraction_string(weight)}});
    }
    return {{"value", fraction_string(x.value())}, {"sets", sets}};
}

nlohmann::json to_json(const DualWitness& y) {
    auto weights = nlohmann::json::array();
    for (const auto& w : y.weights) {
        weights.push_back(fraction_string(w));
    }
    return {{"value", fraction_string(y.value())}, {"weights", weights}};
}

nlohmann::json to_json(const ChiReport& report) {
    return {{"chi", report.chi},
            {"chi_f", fraction_string(report.chi_f)},
            {"maximal_independent_sets", report.maximal_sets},
            {"lp_pivots", report.lp_pivots},
            {"primal", to_json(report.primal)},
            {"dual", to_json(report.dual)},
            {"coloring", report.coloring}};
}

}  // namespace mmphflab::coloring
