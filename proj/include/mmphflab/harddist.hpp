#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mmphflab/common.hpp"
#include "mmphflab/graphs.hpp"

namespace mmphflab::harddist {

/// m indices, step granularity k >= 2, initial exponent s0 >= k^(m+1).
struct SamplerParams {
    unsigned m = 1;
    std::uint64_t k = 2;
    BigInt s0 = 4;

    /// k = m^m, s0 = k^(m+1).
    static SamplerParams canonical(unsigned m);
    /// Validates the invariants; throws InvalidInput.
    static SamplerParams generalized(unsigned m, std::uint64_t k, const BigInt& s0);

    /// k^(m-i+1), the exponent step of iteration i.
    BigInt step(unsigned i) const;
};

struct Iteration {
    BigInt y;
    std::uint64_t z = 0;
    BigInt x;
    BigInt s;
};

/// Win_i = [x_{i-1} + 1, x_{i-1} + 2^{s_{i-1}}].
struct Window {
    BigInt start;
    BigInt exponent;  // length is 2^exponent

    BigInt length() const { return pow2(exponent); }
    BigInt last() const { return start + length() - 1; }
};

struct SampleTrace {
    std::uint64_t seed = 0;
    SamplerParams params;
    std::vector<Iteration> iterations;

    /// x_{i-1}, with x_0 = 0.
    BigInt x_before(unsigned i) const;
    /// s_{i-1}, with s_0 the initial exponent.
    BigInt s_before(unsigned i) const;
    Window window(unsigned i) const;
};

struct WindowGeometry {
    std::vector<BigInt> ladder;  // w_{i,j} = 2^{s_prev - j k^{m-i+1}}, j = 0..k
    BigInt ratio;                // r_i = 2^{k^{m-i+1}}
};

class ExponentUnderflow : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

WindowGeometry window_geometry(const SamplerParams& params, unsigned i, const BigInt& s_prev);

SampleTrace sample(const SamplerParams& params, std::uint64_t seed);

struct TraceCheck {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

TraceCheck verify_trace(const SampleTrace& trace, const SamplerParams& params);

/// Exact law of (X_1..X_m) for tiny parameters.
struct ExplicitTupleDistribution {
    unsigned m = 1;
    std::uint64_t universe = 1;  // M_small
    std::vector<std::pair<std::vector<std::uint64_t>, Rational>> entries;

    /// Throws InvalidInput unless tuples are increasing, inside [1, universe],
    /// and probabilities are positive and sum to 1.
    void validate() const;
};

/// One fully specified run of the sampler with its probability.
struct Outcome {
    std::vector<std::uint64_t> x;
    std::vector<std::uint64_t> s;  // s_0..s_m
    Rational probability;
};

/// Number of (Y, Z) outcome sequences, computed without enumerating.
BigInt outcome_count(const SamplerParams& params);

std::vector<Outcome> enumerate_outcomes(const SamplerParams& params, const EnumerationCaps& caps = {});
ExplicitTupleDistribution enumerate_distribution(const SamplerParams& params, const EnumerationCaps& caps = {});

/// Checks that X_i given (s_<i, x_<i) is uniform on Win_i for every prefix.
/// Returns a list of violations (empty when uniform).
std::vector<std::string> verify_conditional_uniformity(const SamplerParams& params, const EnumerationCaps& caps = {});

using graphs::LabelFunction;
/// Element-wise label function for universes too large to materialize.
using LabelOracle = std::function<unsigned(const BigInt&)>;

Rational success_probability(const ExplicitTupleDistribution& dist, const LabelFunction& f);

struct AdversaryResult {
    Rational best;
    LabelFunction argmax;
    std::uint64_t functions_tried = 0;
};

/// Brute force over all m^universe label functions; first maximiser in
/// lexicographic order.
AdversaryResult adversary_bound_exact(const ExplicitTupleDistribution& dist, const EnumerationCaps& caps = {});

/// Conflict subgraph induced by the support tuples (vertex order = sorted tuples).
graphs::ExplicitGraph support_conflict_graph(const ExplicitTupleDistribution& dist);
/// Max mass of a maximal independent set of the support conflict graph.
Rational max_independent_mass(const ExplicitTupleDistribution& dist);

struct BinomialEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double confidence = 0.99;
};

/// Clopper-Pearson interval.
BinomialEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials, double confidence = 0.99);

BinomialEstimate monte_carlo_success(const SamplerParams& params, const LabelOracle& f, std::uint64_t trials,
                                     std::uint64_t seed, double confidence = 0.99);

/// Stripes of width w_{1,level} labelled 1, 2, ..., m, 1, 2, ...
LabelOracle stripe_adversary(const SamplerParams& params, std::uint64_t level);

struct LadderAdversary {
    std::uint64_t level = 1;
    std::vector<BinomialEstimate> pilot;  // one per candidate level 1..k-1
};

/// Picks the stripe level with the best pilot success estimate.
LadderAdversary choose_ladder_adversary(const SamplerParams& params, std::uint64_t pilot_trials, std::uint64_t seed);

nlohmann::json to_json(const SampleTrace& trace);
SampleTrace trace_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExplicitTupleDistribution& dist);
nlohmann::json to_json(const BinomialEstimate& estimate);

}  // namespace mmphflab::harddist
