#include <random>

#include "doctest.h"

#include "mmphflab/harddist.hpp"
#include "oracles.hpp"

using namespace mmphflab;
using namespace mmphflab::harddist;

namespace {

bool has_prefix(const TraceCheck& check, const std::string& prefix) {
    for (const auto& v : check.violations) {
        if (v.rfind(prefix, 0) == 0) {
            return true;
        }
    }
    return false;
}

LabelOracle split_at(std::uint64_t threshold) {
    return [threshold](const BigInt& e) { return e <= BigInt(std::to_string(threshold)) ? 1U : 2U; };
}

}  // namespace

TEST_CASE("canonical parameters") {
    const auto p2 = SamplerParams::canonical(2);
    CHECK(p2.k == 4);
    CHECK(p2.s0 == 64);
    const auto p3 = SamplerParams::canonical(3);
    CHECK(p3.k == 27);
    CHECK(p3.s0 == 531441);
    CHECK(p3.step(1) == 19683);
    CHECK(p3.step(3) == 27);
    CHECK_THROWS_AS(SamplerParams::canonical(1), InvalidInput);
    CHECK_THROWS_AS(SamplerParams::canonical(16), InvalidInput);
}

TEST_CASE("generalized parameters are validated") {
    CHECK_NOTHROW(SamplerParams::generalized(2, 2, 8));
    CHECK_THROWS_AS(SamplerParams::generalized(2, 2, 7), InvalidInput);
    CHECK_THROWS_AS(SamplerParams::generalized(2, 1, 8), InvalidInput);
    CHECK_THROWS_AS(SamplerParams::generalized(0, 2, 8), InvalidInput);
}

TEST_CASE("window ladder geometry") {
    const auto p = SamplerParams::generalized(2, 3, 27);
    const auto g = window_geometry(p, 1, 27);
    REQUIRE(g.ladder.size() == 4);
    CHECK(g.ladder[0] == pow2(27));
    CHECK(g.ratio == pow2(9));
    for (std::size_t j = 1; j < g.ladder.size(); ++j) {
        CHECK(g.ladder[j - 1] == g.ladder[j] * g.ratio);
    }
    CHECK(g.ladder.back() == 1);
    CHECK_THROWS_AS(window_geometry(p, 1, 26), ExponentUnderflow);
    CHECK_NOTHROW(window_geometry(p, 2, 9));
}

TEST_CASE("property: sampled traces are structurally clean") {
    std::mt19937_64 rng(51);
    const std::vector<SamplerParams> all = {SamplerParams::generalized(2, 2, 8), SamplerParams::canonical(2),
                                            SamplerParams::generalized(3, 3, 100), SamplerParams::canonical(3)};
    for (const auto& p : all) {
        for (int t = 0; t < 25; ++t) {
            const auto trace = sample(p, rng());
            const auto check = verify_trace(trace, p);
            CHECK(check.ok());
            REQUIRE(trace.iterations.size() == p.m);
            for (unsigned i = 1; i <= p.m; ++i) {
                const auto win = trace.window(i);
                const auto& it = trace.iterations[i - 1];
                CHECK(win.start == trace.x_before(i) + 1);
                CHECK(it.x >= win.start);
                CHECK(it.x <= win.last());
                CHECK(win.exponent == trace.s_before(i));
            }
        }
    }
}

TEST_CASE("sampling is deterministic per seed") {
    const auto p = SamplerParams::canonical(2);
    const auto a = sample(p, 99);
    const auto b = sample(p, 99);
    const auto c = sample(p, 100);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_json(a) != to_json(c));
}

TEST_CASE("tampered traces are caught with the right category") {
    const auto p = SamplerParams::canonical(2);
    const auto good = sample(p, 5);
    auto bad_x = good;
    bad_x.iterations[1].x += 1;
    CHECK(has_prefix(verify_trace(bad_x, p), "step:"));
    auto bad_z = good;
    bad_z.iterations[0].z = p.k;
    CHECK(has_prefix(verify_trace(bad_z, p), "range:"));
    auto bad_s = good;
    bad_s.iterations[0].s += 1;
    CHECK(has_prefix(verify_trace(bad_s, p), "ladder:"));
    auto short_trace = good;
    short_trace.iterations.pop_back();
    CHECK(has_prefix(verify_trace(short_trace, p), "shape:"));
    CHECK(has_prefix(verify_trace(good, SamplerParams::generalized(2, 4, 65)), "params:"));
}

TEST_CASE("trace JSON round trip") {
    const auto p = SamplerParams::generalized(3, 3, 90);
    const auto trace = sample(p, 17);
    const auto back = trace_from_json(to_json(trace));
    CHECK(to_json(back) == to_json(trace));
    CHECK(verify_trace(back, p).ok());
}

TEST_CASE("exact distribution matches a nested-loop oracle") {
    for (const auto& [m, k, s0] : std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>>{
             {1, 2, 4}, {1, 3, 9}, {2, 2, 8}, {2, 2, 9}}) {
        const auto p = SamplerParams::generalized(m, k, s0);
        const auto dist = enumerate_distribution(p);
        const auto law = oracle::hard_distribution(m, k, s0);
        REQUIRE(dist.entries.size() == law.size());
        Rational total = 0;
        for (const auto& [tuple, prob] : dist.entries) {
            REQUIRE(law.count(tuple) == 1);
            CHECK(law.at(tuple) == prob);
            total += prob;
        }
        CHECK(total == 1);
        CHECK_NOTHROW(dist.validate());
    }
}

TEST_CASE("outcome counts and enumeration caps") {
    const auto p = SamplerParams::generalized(2, 2, 8);
    CHECK(outcome_count(p) == 4096);
    CHECK(enumerate_outcomes(p).size() == 4096);
    EnumerationCaps caps;
    caps.max_outcomes = 4095;
    CHECK_THROWS_AS(enumerate_outcomes(p, caps), CapExceeded);
    CHECK(outcome_count(SamplerParams::generalized(2, 3, 27)) == pow2(27) * 2 * (pow2(18) + pow2(9)));
}

TEST_CASE("conditional uniformity holds exactly") {
    CHECK(verify_conditional_uniformity(SamplerParams::generalized(2, 2, 8)).empty());
    CHECK(verify_conditional_uniformity(SamplerParams::generalized(2, 2, 9)).empty());
    CHECK(verify_conditional_uniformity(SamplerParams::generalized(1, 3, 9)).empty());
}

TEST_CASE("worked adversary instance: split at 256 succeeds with probability 17/512") {
    const auto p = SamplerParams::generalized(2, 2, 8);
    const auto dist = enumerate_distribution(p);
    graphs::LabelFunction f;
    f.labels.assign(dist.universe, 2);
    for (std::uint64_t e = 1; e <= 256; ++e) {
        f.labels[e - 1] = 1;
    }
    CHECK(success_probability(dist, f) == ratio(17, 512));
    CHECK(success_probability(dist, f) == ratio(136, 4096));
    // Oracle: direct sum over the nested-loop law.
    Rational direct = 0;
    for (const auto& [tuple, prob] : oracle::hard_distribution(2, 2, 8)) {
        if (tuple[0] <= 256 && tuple[1] > 256) {
            direct += prob;
        }
    }
    CHECK(direct == ratio(17, 512));
}

TEST_CASE("property: adversary brute force equals max maximal-IS mass") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        ExplicitTupleDistribution dist;
        dist.m = 2;
        dist.universe = 3 + rng() % 6;
        const auto pairs = oracle::subsets(2, 1, dist.universe);
        std::vector<std::uint64_t> weights;
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::uint64_t w = rng() % 3 == 0 ? 0 : 1 + rng() % 9;
            weights.push_back(w);
            sum += w;
        }
        if (sum == 0) {
            continue;
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (weights[i] > 0) {
                dist.entries.emplace_back(pairs[i], ratio(weights[i], sum));
            }
        }
        const auto best = adversary_bound_exact(dist);
        CHECK(best.functions_tried == (std::uint64_t{1} << dist.universe));
        CHECK(best.best == max_independent_mass(dist));
        CHECK(success_probability(dist, best.argmax) == best.best);
        // Oracle: enumerate labelings directly.
        Rational brute = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dist.universe); ++mask) {
            Rational mass = 0;
            for (const auto& [t, prob] : dist.entries) {
                const bool first = ((mask >> (t[0] - 1)) & 1U) == 0;
                const bool second = ((mask >> (t[1] - 1)) & 1U) != 0;
                if (first && second) {
                    mass += prob;
                }
            }
            brute = std::max(brute, mass);
        }
        CHECK(best.best == brute);
    }
}

TEST_CASE("explicit distributions are validated") {
    ExplicitTupleDistribution d;
    d.m = 2;
    d.universe = 4;
    d.entries = {{{1, 2}, ratio(1, 2)}, {{2, 3}, ratio(1, 2)}};
    CHECK_NOTHROW(d.validate());
    auto not_increasing = d;
    not_increasing.entries[0].first = {2, 2};
    CHECK_THROWS_AS(not_increasing.validate(), InvalidInput);
    auto not_normalised = d;
    not_normalised.entries[0].second = ratio(1, 3);
    CHECK_THROWS_AS(not_normalised.validate(), InvalidInput);
    auto outside = d;
    outside.entries[0].first = {1, 5};
    CHECK_THROWS_AS(outside.validate(), InvalidInput);
}

TEST_CASE("Clopper-Pearson intervals") {
    const auto none = binomial_estimate(0, 100);
    CHECK(none.ci_low == 0.0);
    CHECK(none.ci_high > 0.0);
    CHECK(none.ci_high < 0.06);
    const auto all = binomial_estimate(100, 100);
    CHECK(all.ci_high == 1.0);
    const auto half = binomial_estimate(500, 1000);
    CHECK(half.estimate == 0.5);
    CHECK(half.ci_low < 0.5);
    CHECK(half.ci_high > 0.5);
    CHECK(half.ci_high - 0.5 == doctest::Approx(0.5 - half.ci_low));
    // Reference: exact 99% interval for 500/1000 is about [0.4592, 0.5408].
    CHECK(half.ci_low == doctest::Approx(0.4592).epsilon(0.001));
}

TEST_CASE("Monte Carlo estimate of the worked instance covers 17/512") {
    const auto p = SamplerParams::generalized(2, 2, 8);
    const auto est = monte_carlo_success(p, split_at(256), 20000, 3);
    CHECK(est.trials == 20000);
    CHECK(est.ci_low <= 17.0 / 512.0);
    CHECK(est.ci_high >= 17.0 / 512.0);
    const auto again = monte_carlo_success(p, split_at(256), 20000, 3);
    CHECK(again.successes == est.successes);
}

TEST_CASE("stripe adversary labels cycle through 1..m") {
    const auto p = SamplerParams::generalized(2, 2, 8);
    const auto f = stripe_adversary(p, 1);  // stripes of width 2^(8-4) = 16
    CHECK(f(1) == 1);
    CHECK(f(16) == 1);
    CHECK(f(17) == 2);
    CHECK(f(33) == 1);
    const auto ladder = choose_ladder_adversary(p, 500, 1);
    CHECK(ladder.level >= 1);
    CHECK(ladder.pilot.size() == p.k - 1);
}

TEST_CASE("support conflict graph") {
    ExplicitTupleDistribution d;
    d.m = 2;
    d.universe = 4;
    d.entries = {{{1, 2}, ratio(1, 3)}, {{2, 3}, ratio(1, 3)}, {{3, 4}, ratio(1, 3)}};
    const auto g = support_conflict_graph(d);
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(max_independent_mass(d) == ratio(2, 3));
}
