#include "mmphflab/harddist.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <boost/math/special_functions/beta.hpp>

#include "mmphflab/rng.hpp"

namespace mmphflab::harddist {

SamplerParams SamplerParams::canonical(unsigned m) {
    if (m < 1 || m > 15) {
        throw InvalidInput("canonical parameters need 1 <= m <= 15 so that k = m^m fits a machine word");
    }
    const auto k = to_u64(pow_big(m, m));
    if (k < 2) {
        throw InvalidInput("canonical parameters need m >= 2 (k = m^m must be at least 2)");
    }
    return generalized(m, k, pow_big(BigInt(std::to_string(k)), m + 1));
}

SamplerParams SamplerParams::generalized(unsigned m, std::uint64_t k, const BigInt& s0) {
    if (m < 1) {
        throw InvalidInput("sampler needs m >= 1");
    }
    if (k < 2) {
        throw InvalidInput("sampler needs k >= 2");
    }
    const BigInt minimum = pow_big(BigInt(std::to_string(k)), m + 1);
    if (s0 < minimum) {
        throw InvalidInput("sampler needs s0 >= k^(m+1) = " + minimum.get_str());
    }
    if (!s0.fits_ulong_p()) {
        throw InvalidInput("sampler s0 too large to materialize 2^s0");
    }
    return SamplerParams{m, k, s0};
}

BigInt SamplerParams::step(unsigned i) const {
    if (i < 1 || i > m) {
        throw InvalidInput("iteration index out of range");
    }
    return pow_big(BigInt(std::to_string(k)), m - i + 1);
}

BigInt SampleTrace::x_before(unsigned i) const {
    return i <= 1 ? BigInt(0) : iterations.at(i - 2).x;
}

BigInt SampleTrace::s_before(unsigned i) const {
    return i <= 1 ? params.s0 : iterations.at(i - 2).s;
}

Window SampleTrace::window(unsigned i) const {
    return Window{x_before(i) + 1, s_before(i)};
}

WindowGeometry window_geometry(const SamplerParams& params, unsigned i, const BigInt& s_prev) {
    const BigInt step = params.step(i);
    const BigInt lowest = s_prev - step * BigInt(std::to_string(params.k));
    if (lowest < 0) {
        throw ExponentUnderflow("window ladder exponent underflows: s_prev = " + s_prev.get_str() +
                                " < k^(m-i+2) = " + BigInt(step * BigInt(std::to_string(params.k))).get_str());
    }
    WindowGeometry out;
    out.ladder.reserve(params.k + 1);
    for (std::uint64_t j = 0; j <= params.k; ++j) {
        out.ladder.push_back(pow2(s_prev - step * BigInt(std::to_string(j))));
    }
    out.ratio = pow2(step);
    return out;
}

SampleTrace sample(const SamplerParams& params, std::uint64_t seed) {
    SplitMix64 rng(seed);
    SampleTrace trace;
    trace.seed = seed;
    trace.params = params;
    BigInt x = 0;
    BigInt s = params.s0;
    for (unsigned i = 1; i <= params.m; ++i) {
        Iteration it;
        it.y = rng.random_bits(s.get_ui()) + 1;
        it.z = 1 + rng.below(params.k - 1);
        x += it.y;
        s -= params.step(i) * BigInt(std::to_string(it.z));
        it.x = x;
        it.s = s;
        trace.iterations.push_back(std::move(it));
    }
    return trace;
}

TraceCheck verify_trace(const SampleTrace& trace, const SamplerParams& params) {
    TraceCheck out;
    auto report = [&](std::string what) { out.violations.push_back(std::move(what)); };
    if (trace.params.m != params.m || trace.params.k != params.k || trace.params.s0 != params.s0) {
        report("params: trace was produced with different parameters");
    }
    if (trace.iterations.size() != params.m) {
        report("shape: expected " + std::to_string(params.m) + " iterations, found " +
               std::to_string(trace.iterations.size()));
        return out;
    }
    const BigInt k = BigInt(std::to_string(params.k));
    BigInt x_prev = 0;
    BigInt s_prev = params.s0;
    bool exponents_usable = true;
    for (unsigned i = 1; i <= params.m; ++i) {
        const auto& it = trace.iterations[i - 1];
        const std::string tag = " at i=" + std::to_string(i);
        const BigInt step = params.step(i);
        if (s_prev < 0 || !s_prev.fits_ulong_p()) {
            report("range: exponent s_{i-1} unusable" + tag);
            exponents_usable = false;
            break;
        }
        if (it.y < 1 || it.y > pow2(s_prev)) {
            report("range: y outside [1, 2^{s_{i-1}}]" + tag);
        }
        if (it.z < 1 || it.z > params.k - 1) {
            report("range: z outside [1, k-1]" + tag);
        }
        if (it.x != x_prev + it.y) {
            report("step: x_i != x_{i-1} + y_i" + tag);
        }
        if (it.s != s_prev - step * BigInt(std::to_string(it.z))) {
            report("step: s_i != s_{i-1} - k^{m-i+1} z_i" + tag);
        }
        if (it.x <= x_prev) {
            report("monotonicity: x_i <= x_{i-1}" + tag);
        }
        if (it.s > s_prev - k) {
            report("monotonicity: s_i > s_{i-1} - k" + tag);
        }
        // |Win_{i+1}| = 2^{s_i} must be one of w_{i,1}..w_{i,k-1}.
        const BigInt drop = s_prev - it.s;
        if (drop <= 0 || drop % step != 0 || drop / step > k - 1) {
            report("ladder: |Win_{i+1}| not in {w_{i,1}, ..., w_{i,k-1}}" + tag);
        }
        x_prev = it.x;
        s_prev = it.s;
    }
    const auto& last = trace.iterations.back();
    if (last.s < 0) {
        report("boundedness: s_m < 0");
        exponents_usable = false;
    }
    if (exponents_usable) {
        for (unsigned i = 1; i <= params.m; ++i) {
            const auto& it = trace.iterations[i - 1];
            const std::string tag = " at i=" + std::to_string(i);
            if (it.s < 0 || !it.s.fits_ulong_p()) {
                report("boundedness: s_i unusable" + tag);
                continue;
            }
            if (last.x > it.x + BigInt(params.m - i) * pow2(it.s)) {
                report("boundedness: x_m > x_i + (m-i) 2^{s_i}" + tag);
            }
            if (last.s < it.s - params.step(i)) {
                report("boundedness: s_m < s_i - k^{m-i+1}" + tag);
            }
        }
    }
    return out;
}

void ExplicitTupleDistribution::validate() const {
    Rational total = 0;
    for (const auto& [tuple, p] : entries) {
        if (tuple.size() != m) {
            throw InvalidInput("tuple has wrong length");
        }
        for (std::size_t j = 0; j < tuple.size(); ++j) {
            if (tuple[j] < 1 || tuple[j] > universe || (j > 0 && tuple[j] <= tuple[j - 1])) {
                throw InvalidInput("tuple not strictly increasing inside [1, M]");
            }
        }
        if (p <= 0) {
            throw InvalidInput("non-positive probability");
        }
        total += p;
    }
    if (total != 1) {
        throw InvalidInput("probabilities sum to " + fraction_string(total));
    }
}

BigInt outcome_count(const SamplerParams& params) {
    std::map<std::pair<unsigned, BigInt>, BigInt> memo;
    std::function<BigInt(unsigned, const BigInt&)> count = [&](unsigned i, const BigInt& s) -> BigInt {
        if (i > params.m) {
            return 1;
        }
        auto key = std::make_pair(i, s);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        BigInt total = 0;
        const BigInt step = params.step(i);
        for (std::uint64_t z = 1; z < params.k; ++z) {
            total += count(i + 1, s - step * BigInt(std::to_string(z)));
        }
        total *= pow2(s);
        memo.emplace(key, total);
        return total;
    };
    return count(1, params.s0);
}

std::vector<Outcome> enumerate_outcomes(const SamplerParams& params, const EnumerationCaps& caps) {
    check_cap("max_outcomes", outcome_count(params), caps.max_outcomes);
    std::vector<Outcome> out;
    Outcome current;
    current.s.push_back(params.s0.get_ui());
    const Rational z_share(1, params.k - 1);
    std::function<void(unsigned, const Rational&)> walk = [&](unsigned i, const Rational& mass) {
        if (i > params.m) {
            current.probability = mass;
            out.push_back(current);
            return;
        }
        const std::uint64_t s_prev = current.s.back();
        const std::uint64_t x_prev = current.x.empty() ? 0 : current.x.back();
        const std::uint64_t step = params.step(i).get_ui();
        const std::uint64_t window = std::uint64_t{1} << s_prev;
        const Rational branch = mass * z_share / Rational(BigInt(std::to_string(window)));
        for (std::uint64_t z = 1; z < params.k; ++z) {
            for (std::uint64_t y = 1; y <= window; ++y) {
                current.x.push_back(x_prev + y);
                current.s.push_back(s_prev - step * z);
                walk(i + 1, branch);
                current.x.pop_back();
                current.s.pop_back();
            }
        }
    };
    walk(1, Rational(1));
    return out;
}

ExplicitTupleDistribution enumerate_distribution(const SamplerParams& params, const EnumerationCaps& caps) {
    std::map<std::vector<std::uint64_t>, Rational> mass;
    for (auto& outcome : enumerate_outcomes(params, caps)) {
        mass[outcome.x] += outcome.probability;
    }
    ExplicitTupleDistribution dist;
    dist.m = params.m;
    dist.universe = 0;
    for (auto& [tuple, p] : mass) {
        dist.universe = std::max(dist.universe, tuple.back());
        dist.entries.emplace_back(tuple, p);
    }
    return dist;
}

std::vector<std::string> verify_conditional_uniformity(const SamplerParams& params, const EnumerationCaps& caps) {
    const auto outcomes = enumerate_outcomes(params, caps);
    std::vector<std::string> problems;
    for (unsigned i = 1; i <= params.m; ++i) {
        using Prefix = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;
        std::map<Prefix, std::map<std::uint64_t, Rational>> conditional;
        for (const auto& o : outcomes) {
            Prefix key{{o.x.begin(), o.x.begin() + (i - 1)}, {o.s.begin(), o.s.begin() + i}};
            conditional[key][o.x[i - 1]] += o.probability;
        }
        for (const auto& [prefix, law] : conditional) {
            const std::uint64_t x_prev = prefix.first.empty() ? 0 : prefix.first.back();
            const std::uint64_t window = std::uint64_t{1} << prefix.second.back();
            Rational total = 0;
            for (const auto& [x, p] : law) {
                total += p;
            }
            const Rational expected = total / Rational(BigInt(std::to_string(window)));
            bool uniform = law.size() == window && law.begin()->first == x_prev + 1 &&
                           law.rbegin()->first == x_prev + window;
            for (const auto& [x, p] : law) {
                uniform = uniform && p == expected;
            }
            if (!uniform) {
                problems.push_back("X_" + std::to_string(i) + " not uniform on its window after x_{i-1} = " +
                                   std::to_string(x_prev));
            }
        }
    }
    return problems;
}

Rational success_probability(const ExplicitTupleDistribution& dist, const LabelFunction& f) {
    Rational total = 0;
    for (const auto& [tuple, p] : dist.entries) {
        bool hit = true;
        for (std::size_t j = 0; j < tuple.size() && hit; ++j) {
            hit = f.at(tuple[j]) == j + 1;
        }
        if (hit) {
            total += p;
        }
    }
    return total;
}

AdversaryResult adversary_bound_exact(const ExplicitTupleDistribution& dist, const EnumerationCaps& caps) {
    const BigInt total = pow_big(dist.m, dist.universe);
    check_cap("max_label_functions", total, caps.max_label_functions);
    AdversaryResult out;
    out.best = -1;
    const std::uint64_t count = to_u64(total);
    for (std::uint64_t index = 0; index < count; ++index) {
        LabelFunction f = graphs::label_function_from_index(dist.m, dist.universe, index);
        Rational p = success_probability(dist, f);
        if (p > out.best) {
            out.best = p;
            out.argmax = std::move(f);
        }
    }
    out.functions_tried = count;
    return out;
}

graphs::ExplicitGraph support_conflict_graph(const ExplicitTupleDistribution& dist) {
    std::vector<graphs::Vertex> vertices;
    for (const auto& [tuple, p] : dist.entries) {
        std::vector<BigInt> e;
        for (auto x : tuple) {
            e.emplace_back(BigInt(std::to_string(x)));
        }
        vertices.emplace_back(std::move(e));
    }
    std::sort(vertices.begin(), vertices.end());
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const auto spec = graphs::conflict(dist.m, dist.universe);
    for (std::size_t a = 0; a < vertices.size(); ++a) {
        for (std::size_t b = a + 1; b < vertices.size(); ++b) {
            if (graphs::adjacent(spec, vertices[a], vertices[b])) {
                edges.emplace_back(a, b);
            }
        }
    }
    return graphs::ExplicitGraph(std::move(vertices), edges);
}

Rational max_independent_mass(const ExplicitTupleDistribution& dist) {
    auto graph = support_conflict_graph(dist);
    std::vector<Rational> mass(graph.size());
    for (const auto& [tuple, p] : dist.entries) {
        std::vector<BigInt> e;
        for (auto x : tuple) {
            e.emplace_back(BigInt(std::to_string(x)));
        }
        mass[graph.index_of(graphs::Vertex(std::move(e)))] = p;
    }
    Rational best = 0;
    for (const auto& set : graphs::maximal_independent_sets_generic(graph)) {
        Rational total = 0;
        for (auto v : set) {
            total += mass[v];
        }
        best = std::max(best, total);
    }
    return best;
}

BinomialEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials, double confidence) {
    if (trials == 0 || successes > trials) {
        throw InvalidInput("binomial estimate needs 0 <= successes <= trials and trials > 0");
    }
    BinomialEstimate out;
    out.successes = successes;
    out.trials = trials;
    out.confidence = confidence;
    const double alpha = 1.0 - confidence;
    const auto s = static_cast<double>(successes);
    const auto n = static_cast<double>(trials);
    out.estimate = s / n;
    out.ci_low = successes == 0 ? 0.0 : boost::math::ibeta_inv(s, n - s + 1, alpha / 2);
    out.ci_high = successes == trials ? 1.0 : boost::math::ibeta_inv(s + 1, n - s, 1 - alpha / 2);
    return out;
}

BinomialEstimate monte_carlo_success(const SamplerParams& params, const LabelOracle& f, std::uint64_t trials,
                                     std::uint64_t seed, double confidence) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto trace = sample(params, derive_seed(seed, t));
        bool hit = true;
        for (unsigned i = 1; i <= params.m && hit; ++i) {
            hit = f(trace.iterations[i - 1].x) == i;
        }
        hits += hit ? 1 : 0;
    }
    return binomial_estimate(hits, trials, confidence);
}

LabelOracle stripe_adversary(const SamplerParams& params, std::uint64_t level) {
    if (level > params.k) {
        throw InvalidInput("stripe level beyond the ladder");
    }
    const BigInt exponent = params.s0 - params.step(1) * BigInt(std::to_string(level));
    if (exponent < 0) {
        throw ExponentUnderflow("stripe width exponent underflows");
    }
    const unsigned long shift = exponent.get_ui();
    const unsigned m = params.m;
    return [shift, m](const BigInt& element) {
        BigInt stripe = element - 1;
        mpz_fdiv_q_2exp(stripe.get_mpz_t(), stripe.get_mpz_t(), shift);
        return static_cast<unsigned>(mpz_fdiv_ui(stripe.get_mpz_t(), m)) + 1;
    };
}

LadderAdversary choose_ladder_adversary(const SamplerParams& params, std::uint64_t pilot_trials, std::uint64_t seed) {
    LadderAdversary out;
    std::uint64_t best_hits = 0;
    for (std::uint64_t level = 1; level < params.k; ++level) {
        auto estimate = monte_carlo_success(params, stripe_adversary(params, level), pilot_trials,
                                            derive_seed(seed, level));
        if (level == 1 || estimate.successes > best_hits) {
            best_hits = estimate.successes;
            out.level = level;
        }
        out.pilot.push_back(estimate);
    }
    return out;
}

nlohmann::json to_json(const SampleTrace& trace) {
    auto iterations = nlohmann::json::array();
    for (const auto& it : trace.iterations) {
        iterations.push_back(
            {{"y", it.y.get_str()}, {"z", std::to_string(it.z)}, {"x", it.x.get_str()}, {"s", it.s.get_str()}});
    }
    return {{"seed", std::to_string(trace.seed)},
            {"params",
             {{"m", std::to_string(trace.params.m)},
              {"k", std::to_string(trace.params.k)},
              {"s0", trace.params.s0.get_str()}}},
            {"iterations", iterations}};
}

SampleTrace trace_from_json(const nlohmann::json& j) {
    SampleTrace trace;
    trace.seed = std::stoull(j.at("seed").get<std::string>());
    const auto& p = j.at("params");
    trace.params.m = static_cast<unsigned>(std::stoul(p.at("m").get<std::string>()));
    trace.params.k = std::stoull(p.at("k").get<std::string>());
    trace.params.s0 = BigInt(p.at("s0").get<std::string>());
    for (const auto& it : j.at("iterations")) {
        trace.iterations.push_back(Iteration{BigInt(it.at("y").get<std::string>()),
                                             std::stoull(it.at("z").get<std::string>()),
                                             BigInt(it.at("x").get<std::string>()),
                                             BigInt(it.at("s").get<std::string>())});
    }
    return trace;
}

nlohmann::json to_json(const ExplicitTupleDistribution& dist) {
    auto entries = nlohmann::json::array();
    for (const auto& [tuple, p] : dist.entries) {
        entries.push_back({{"tuple", tuple}, {"p", fraction_string(p)}});
    }
    return {{"m", dist.m}, {"universe", dist.universe}, {"entries", entries}};
}

nlohmann::json to_json(const BinomialEstimate& e) {
    return {{"successes", e.successes}, {"trials", e.trials},   {"estimate", e.estimate},
            {"ci_low", e.ci_low},       {"ci_high", e.ci_high}, {"confidence", e.confidence}};
}

}  // namespace mmphflab::harddist
