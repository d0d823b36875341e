#include "mmphflab/cli.hpp"

#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmphflab/coloring.hpp"
#include "mmphflab/common.hpp"
#include "mmphflab/graphs.hpp"
#include "mmphflab/harddist.hpp"
#include "mmphflab/mmphf.hpp"
#include "mmphflab/rng.hpp"
#include "mmphflab/windowtree.hpp"

namespace mmphflab {

namespace {

using nlohmann::json;

struct Artifact {
    json result = json::object();
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    /// Verbatim text (DIMACS export); metadata goes into comment lines.
    std::optional<std::string> raw;
};

struct GraphOptions {
    std::string family = "conflict";
    unsigned m = 2;
    std::uint64_t width = 4;
    std::string offset = "0";
    unsigned n = 2;
    std::uint64_t u = 4;
    std::size_t size = 5;
    bool square = false;

    void add(CLI::App* app) {
        app->add_option("--graph", family, "conflict, shift, complete or cycle")
            ->check(CLI::IsMember({"conflict", "shift", "complete", "cycle"}))
            ->capture_default_str();
        app->add_option("--m", m, "conflict tuple length")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--M", width, "conflict universe width")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--offset", offset, "conflict universe offset")->capture_default_str();
        app->add_option("--n", n, "shift tuple length")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--u", u, "shift universe")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--size", size, "complete/cycle vertex count")->capture_default_str();
        app->add_flag("--square", square, "use the OR-product of the graph with itself");
    }

    graphs::GraphSpec spec() const {
        graphs::GraphSpec base;
        if (family == "conflict") {
            BigInt off;
            if (off.set_str(offset, 10) != 0 || off < 0) {
                throw InvalidInput("--offset must be a non-negative integer");
            }
            base = graphs::conflict(m, width, off);
        } else if (family == "shift") {
            base = graphs::shift(n, u);
        } else if (family == "complete") {
            base = graphs::complete(size);
        } else {
            base = graphs::cycle(size);
        }
        return square ? graphs::product(base, base) : base;
    }
};

struct SamplerOptions {
    unsigned m = 2;
    bool canonical = false;
    std::uint64_t k = 2;
    std::string s0 = "8";

    void add(CLI::App* app) {
        app->add_option("--m", m, "number of indices")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_flag("--paper-defaults,--canonical", canonical, "k = m^m, s0 = k^(m+1)");
        app->add_option("--k", k, "step granularity")->capture_default_str();
        app->add_option("--s0", s0, "initial exponent")->capture_default_str();
    }

    harddist::SamplerParams params() const {
        if (canonical) {
            return harddist::SamplerParams::canonical(m);
        }
        BigInt s;
        if (s.set_str(s0, 10) != 0) {
            throw InvalidInput("--s0 must be an integer");
        }
        return harddist::SamplerParams::generalized(m, k, s);
    }
};

std::vector<mmphf::Scheme> parse_schemes(const std::string& list) {
    std::vector<mmphf::Scheme> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(mmphf::parse_scheme(item));
        }
    }
    if (out.empty()) {
        throw InvalidInput("--schemes must name at least one scheme");
    }
    return out;
}

json params_json(const harddist::SamplerParams& p) {
    return {{"m", p.m}, {"k", std::to_string(p.k)}, {"s0", p.s0.get_str()}};
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string double_str(double v) { return json(v).dump(); }

std::vector<std::string> estimate_cells(const harddist::BinomialEstimate& e) {
    return {std::to_string(e.successes), std::to_string(e.trials), double_str(e.estimate),
            double_str(e.ci_low),        double_str(e.ci_high),    double_str(e.confidence)};
}

const std::vector<std::string> estimate_columns = {"successes", "trials",  "estimate",
                                                   "ci_low",    "ci_high", "confidence"};

std::string csv_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    return out + "\"";
}

json option_config(const CLI::App* app) {
    json config = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name.empty()) {
            continue;
        }
        if (opt->count() > 0) {
            const auto& results = opt->results();
            std::string joined;
            for (std::size_t i = 0; i < results.size(); ++i) {
                joined += (i == 0 ? "" : ",") + results[i];
            }
            config[name] = opt->get_expected_min() == 0 ? "true" : joined;
        } else if (opt->get_expected_min() == 0) {
            config[name] = "false";
        } else {
            config[name] = opt->get_default_str();
        }
    }
    return config;
}

void emit(const Artifact& artifact, const json& metadata, const std::string& format, std::ostream& out) {
    if (artifact.raw) {
        out << "c " << metadata.dump() << '\n' << *artifact.raw;
        return;
    }
    if (format == "json") {
        json doc = artifact.result;
        doc["metadata"] = metadata;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "# " << metadata.dump() << '\n';
    for (std::size_t i = 0; i < artifact.csv_header.size(); ++i) {
        out << (i == 0 ? "" : ",") << csv_cell(artifact.csv_header[i]);
    }
    out << '\n';
    for (const auto& row : artifact.csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i == 0 ? "" : ",") << csv_cell(row[i]);
        }
        out << '\n';
    }
}

Artifact cmd_graph(const GraphOptions& g, const std::string& export_kind, const EnumerationCaps& caps) {
    const auto spec = g.spec();
    const auto graph = graphs::build_graph(spec, caps);
    Artifact a;
    if (export_kind == "dimacs") {
        a.raw = graphs::to_dimacs(graph);
        return a;
    }
    auto vertices = json::array();
    for (const auto& v : graph.vertices()) {
        vertices.push_back(v.str());
    }
    auto edges = json::array();
    a.csv_header = {"a", "b", "vertex_a", "vertex_b"};
    for (const auto& [x, y] : graph.edges()) {
        edges.push_back({x, y});
        a.csv_rows.push_back({std::to_string(x), std::to_string(y), graph.vertex(x).str(), graph.vertex(y).str()});
    }
    a.result = {{"graph", spec.tag()},
                {"vertex_count", graph.size()},
                {"edge_count", graph.edge_count()},
                {"vertices", vertices},
                {"edges", edges}};
    return a;
}

Artifact cmd_chi(const GraphOptions& g, const EnumerationCaps& caps) {
    const auto graph = graphs::build_graph(g.spec(), caps);
    const auto result = coloring::chromatic_number(graph, caps);
    Artifact a;
    auto colors = json::array();
    a.csv_header = {"vertex", "color"};
    for (std::size_t v = 0; v < graph.size(); ++v) {
        colors.push_back({{"vertex", graph.vertex(v).str()}, {"color", result.coloring[v]}});
        a.csv_rows.push_back({graph.vertex(v).str(), std::to_string(result.coloring[v])});
    }
    a.result = {{"chi", result.chi}, {"exhaustion_nodes", result.exhaustion_nodes}, {"coloring", colors}};
    return a;
}

Artifact cmd_chif(const GraphOptions& g, const EnumerationCaps& caps) {
    const auto spec = g.spec();
    const auto graph = graphs::build_graph(spec, caps);
    const auto sets = graphs::maximal_independent_sets(spec, graph, caps);
    const auto report = coloring::analyze(graph, sets, caps);
    Artifact a;
    a.result = coloring::to_json(report);
    auto vertices = json::array();
    a.csv_header = {"vertex", "dual_weight", "color"};
    for (std::size_t v = 0; v < graph.size(); ++v) {
        vertices.push_back(graph.vertex(v).str());
        a.csv_rows.push_back({graph.vertex(v).str(), fraction_string(report.dual.weights[v]),
                              std::to_string(report.coloring[v])});
    }
    a.result["vertices"] = vertices;
    a.result["graph"] = spec.tag();
    return a;
}

Artifact cmd_sample(const SamplerOptions& s, std::uint64_t trials, const std::string& detail, std::uint64_t seed) {
    const auto params = s.params();
    Artifact a;
    auto traces = json::array();
    std::uint64_t clean = 0;
    a.csv_header = {"trial", "i", "y_bits", "z", "x_bits", "s", "violations"};
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto trace = harddist::sample(params, derive_seed(seed, t));
        const auto check = harddist::verify_trace(trace, params);
        clean += check.ok() ? 1 : 0;
        for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
            const auto& it = trace.iterations[i];
            a.csv_rows.push_back({std::to_string(t), std::to_string(i + 1),
                                  std::to_string(mpz_sizeinbase(it.y.get_mpz_t(), 2)), std::to_string(it.z),
                                  std::to_string(mpz_sizeinbase(it.x.get_mpz_t(), 2)), it.s.get_str(),
                                  std::to_string(check.violations.size())});
        }
        if (detail == "none") {
            continue;
        }
        json record;
        if (detail == "full") {
            record = harddist::to_json(trace);
        } else {
            auto its = json::array();
            for (const auto& it : trace.iterations) {
                its.push_back({{"y_bits", mpz_sizeinbase(it.y.get_mpz_t(), 2)},
                               {"z", it.z},
                               {"x_bits", mpz_sizeinbase(it.x.get_mpz_t(), 2)},
                               {"s", it.s.get_str()}});
            }
            record = {{"seed", std::to_string(trace.seed)}, {"iterations", its}};
        }
        record["violations"] = check.violations;
        traces.push_back(record);
    }
    a.result = {{"params", params_json(params)}, {"trials", trials}, {"clean", clean}, {"traces", traces}};
    return a;
}

Artifact cmd_enumerate(const SamplerOptions& s, const EnumerationCaps& caps) {
    const auto params = s.params();
    const auto dist = harddist::enumerate_distribution(params, caps);
    Rational total = 0;
    Artifact a;
    a.csv_header = {"tuple", "p"};
    for (const auto& [tuple, p] : dist.entries) {
        total += p;
        std::string t;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            t += (i == 0 ? "" : " ") + std::to_string(tuple[i]);
        }
        a.csv_rows.push_back({t, fraction_string(p)});
    }
    a.result = harddist::to_json(dist);
    a.result["params"] = params_json(params);
    a.result["outcomes"] = harddist::outcome_count(params).get_str();
    a.result["total_probability"] = fraction_string(total);
    a.result["uniformity_violations"] = harddist::verify_conditional_uniformity(params, caps);
    return a;
}

Artifact cmd_adversary(const SamplerOptions& s, std::optional<std::uint64_t> split, bool skip_exhaustive,
                       const EnumerationCaps& caps) {
    const auto params = s.params();
    const auto dist = harddist::enumerate_distribution(params, caps);
    Artifact a;
    a.csv_header = {"quantity", "value"};
    a.result = {{"params", params_json(params)}, {"universe", dist.universe}, {"support", dist.entries.size()}};
    if (split) {
        graphs::LabelFunction f;
        f.labels.assign(dist.universe, 1);
        for (std::uint64_t e = *split + 1; e <= dist.universe; ++e) {
            f.labels[e - 1] = params.m >= 2 ? 2 : 1;
        }
        const Rational p = harddist::success_probability(dist, f);
        a.result["split"] = *split;
        a.result["split_success"] = fraction_string(p);
        a.csv_rows.push_back({"split_success", fraction_string(p)});
    }
    if (skip_exhaustive) {
        return a;
    }
    const auto best = harddist::adversary_bound_exact(dist, caps);
    const Rational mass = harddist::max_independent_mass(dist);
    std::vector<unsigned> labels = best.argmax.labels;
    a.result["best"] = fraction_string(best.best);
    a.result["argmax"] = labels;
    a.result["functions_tried"] = best.functions_tried;
    a.result["max_independent_mass"] = fraction_string(mass);
    a.result["agree"] = best.best == mass;
    a.csv_rows.push_back({"best", fraction_string(best.best)});
    a.csv_rows.push_back({"functions_tried", std::to_string(best.functions_tried)});
    a.csv_rows.push_back({"max_independent_mass", fraction_string(mass)});
    a.csv_rows.push_back({"agree", bool_str(best.best == mass)});
    return a;
}

Artifact cmd_prune(std::uint64_t arity, unsigned depth, std::uint64_t leaf, unsigned m, unsigned index,
                   const std::string& tau_text, std::uint64_t seed, const EnumerationCaps& caps) {
    if (index < 1 || index > m) {
        throw InvalidInput("--index must lie in [1, m]");
    }
    BigInt length = leaf;
    for (unsigned d = 0; d < depth; ++d) {
        length *= BigInt(std::to_string(arity));
    }
    check_cap("max_window", length, caps.max_window);
    windowtree::WindowTreeSpec spec{arity, depth, windowtree::Window{1, to_u64(length)}};
    const auto tree = windowtree::build_tree(spec, caps);
    SplitMix64 rng(seed);
    std::vector<unsigned> labels(spec.root.length);
    for (auto& l : labels) {
        l = 1 + static_cast<unsigned>(rng.below(m));
    }
    const Rational tau = parse_fraction(tau_text);
    const auto result = windowtree::prune(tree, windowtree::Labels(labels), index, tau);
    Artifact a;
    a.result = windowtree::to_json(result);
    a.result["root_density"] = fraction_string(windowtree::density(windowtree::Labels(labels), index));
    a.result["leaves"] = tree.leaf_count();
    a.csv_header = {"level", "total", "directly_pruned", "indirectly_pruned", "p"};
    for (const auto& l : result.levels) {
        a.csv_rows.push_back({std::to_string(l.level), std::to_string(l.total), std::to_string(l.directly_pruned),
                              std::to_string(l.indirectly_pruned), fraction_string(l.p)});
    }
    return a;
}

Artifact cmd_case1(std::uint64_t instances, bool force, std::uint64_t seed) {
    const auto sweep = windowtree::case1_sweep(instances, seed, force);
    Artifact a;
    a.result = windowtree::to_json(sweep);
    a.result["ok"] = sweep.conclusion_failures == 0 && sweep.identity_failures == 0;
    a.csv_header = {"instances", "hypothesis_held", "conclusion_failures", "identity_failures"};
    a.csv_rows.push_back({std::to_string(sweep.instances), std::to_string(sweep.hypothesis_held),
                          std::to_string(sweep.conclusion_failures), std::to_string(sweep.identity_failures)});
    return a;
}

mmphf::KeySet random_keyset(std::uint64_t n, std::uint64_t u, std::uint64_t seed) {
    if (n < 1 || n > u) {
        throw InvalidInput("random key sets need 1 <= n <= u");
    }
    SplitMix64 rng(seed);
    std::set<std::uint64_t> chosen;
    // Floyd's sampling of n distinct values in [1, u].
    for (std::uint64_t j = u - n + 1; j <= u; ++j) {
        const std::uint64_t t = 1 + rng.below(j);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    return mmphf::KeySet{{chosen.begin(), chosen.end()}, u};
}

Artifact cmd_mmphf_verify(const std::string& scheme_text, const std::string& keys_path, std::uint64_t n,
                          std::uint64_t u, std::uint64_t seed) {
    mmphf::KeySet keys;
    if (!keys_path.empty()) {
        std::ifstream in(keys_path);
        if (!in) {
            throw InvalidInput("cannot open key file: " + keys_path);
        }
        keys = mmphf::read_keyset(in);
    } else {
        keys = random_keyset(n, u, seed);
    }
    const auto scheme = mmphf::parse_scheme(scheme_text);
    const auto index = mmphf::build(scheme, keys, seed);
    const auto mismatches = mmphf::member_mismatches(index, keys);
    Artifact a;
    a.result = mmphf::to_json(index);
    a.result["n"] = keys.size();
    a.result["universe"] = keys.universe;
    a.result["mismatches"] = mismatches.size();
    a.result["ok"] = mismatches.empty();
    a.csv_header = {"key", "answer", "expected"};
    for (std::uint64_t j = 0; j < keys.size(); ++j) {
        a.csv_rows.push_back(
            {std::to_string(keys.elements[j]), std::to_string(mmphf::query(index, keys.elements[j])), std::to_string(j)});
    }
    return a;
}

Artifact cmd_bound_report(const GraphOptions& g, const std::string& schemes, std::uint64_t seed,
                          const EnumerationCaps& caps) {
    const auto report = mmphf::bound_report(parse_schemes(schemes), g.spec(), seed, caps);
    Artifact a;
    a.result = mmphf::to_json(report);
    a.csv_header = {"scheme",   "max_bits",           "max_payload_bits", "mean_bits", "distinct",
                    "chi",      "chi_f",              "lower_bound_bits", "monochromatic_edges",
                    "proper",   "counting_bound"};
    for (const auto& s : report.schemes) {
        a.csv_rows.push_back({std::string(mmphf::scheme_name(s.scheme)), std::to_string(s.max_bits),
                              std::to_string(s.max_payload_bits), fraction_string(s.mean_bits),
                              std::to_string(s.distinct), std::to_string(report.chi), fraction_string(report.chi_f),
                              double_str(report.lower_bound_bits), std::to_string(s.monochromatic_edges),
                              bool_str(s.proper), bool_str(s.counting_bound)});
    }
    return a;
}

Artifact cmd_sx_roundtrip(unsigned d_max, const std::string& schemes, std::uint64_t seed) {
    if (d_max < 1 || d_max > 20) {
        throw InvalidInput("--d-max must lie in [1, 20]");
    }
    Artifact a;
    a.csv_header = {"d", "scheme", "strings", "roundtrips", "distinct_payloads", "max_payload_bits"};
    auto rows = json::array();
    bool all_ok = true;
    for (const auto scheme : parse_schemes(schemes)) {
        for (unsigned d = 1; d <= d_max; ++d) {
            std::uint64_t ok = 0;
            std::uint64_t max_bits = 0;
            std::set<mmphf::BitString> payloads;
            const std::uint64_t strings = std::uint64_t{1} << d;
            for (std::uint64_t code = 0; code < strings; ++code) {
                std::vector<bool> x(d);
                for (unsigned i = 0; i < d; ++i) {
                    x[i] = ((code >> (d - 1 - i)) & 1U) != 0;
                }
                const auto index = mmphf::build(scheme, mmphf::encode_bitstring(x), seed);
                payloads.insert(index.payload());
                max_bits = std::max<std::uint64_t>(max_bits, index.payload_bits());
                try {
                    ok += mmphf::decode_bitstring(index, d) == x ? 1 : 0;
                } catch (const mmphf::CorruptIndex&) {
                }
            }
            all_ok = all_ok && ok == strings;
            rows.push_back({{"d", d},
                            {"scheme", mmphf::scheme_name(scheme)},
                            {"strings", strings},
                            {"roundtrips", ok},
                            {"distinct_payloads", payloads.size()},
                            {"max_payload_bits", max_bits}});
            a.csv_rows.push_back({std::to_string(d), std::string(mmphf::scheme_name(scheme)), std::to_string(strings),
                                  std::to_string(ok), std::to_string(payloads.size()), std::to_string(max_bits)});
        }
    }
    a.result = {{"rows", rows}, {"ok", all_ok}};
    return a;
}

Artifact cmd_parameterize(std::uint64_t n, const std::string& u) {
    const auto params = mmphf::parameterize(n, mmphf::Tower::parse(u));
    Artifact a;
    a.result = mmphf::to_json(params);
    a.csv_header = {"n",           "u",           "m", "k", "u_prime", "u_prime_le_u", "m_le_sqrt_n",
                    "below_upper", "above_lower"};
    a.csv_rows.push_back({std::to_string(params.n), params.u.str(), std::to_string(params.m), std::to_string(params.k),
                          a.result["u_prime"].get<std::string>(), bool_str(params.u_prime_le_u),
                          bool_str(params.m_le_sqrt_n), bool_str(params.below_upper_range),
                          bool_str(params.above_lower_range)});
    return a;
}

Artifact cmd_mc_success(const SamplerOptions& s, std::uint64_t trials, std::uint64_t level, std::uint64_t pilot,
                        std::uint64_t seed) {
    const auto params = s.params();
    Artifact a;
    a.result["params"] = params_json(params);
    if (level == 0) {
        const auto chosen = harddist::choose_ladder_adversary(params, pilot, derive_seed(seed, 1));
        level = chosen.level;
        auto pilots = json::array();
        for (const auto& p : chosen.pilot) {
            pilots.push_back(harddist::to_json(p));
        }
        a.result["pilot"] = pilots;
    }
    const auto estimate =
        harddist::monte_carlo_success(params, harddist::stripe_adversary(params, level), trials, seed);
    a.result["level"] = level;
    a.result["estimate"] = harddist::to_json(estimate);
    a.csv_header = {"level"};
    a.csv_header.insert(a.csv_header.end(), estimate_columns.begin(), estimate_columns.end());
    auto row = estimate_cells(estimate);
    row.insert(row.begin(), std::to_string(level));
    a.csv_rows.push_back(row);
    return a;
}

Artifact cmd_final_window(const SamplerOptions& s, unsigned index, const std::string& tau, const std::string& threshold,
                          std::uint64_t trials, std::uint64_t level, std::uint64_t seed, const EnumerationCaps& caps) {
    const auto params = s.params();
    const BigInt universe = windowtree::reachable_universe(params);
    check_cap("max_window", universe, caps.max_window);
    graphs::LabelFunction f;
    f.labels.resize(to_u64(universe));
    if (level == 0) {
        SplitMix64 rng(derive_seed(seed, 0));
        for (auto& l : f.labels) {
            l = 1 + static_cast<unsigned>(rng.below(params.m));
        }
    } else {
        const auto oracle = harddist::stripe_adversary(params, level);
        for (std::uint64_t e = 1; e <= f.labels.size(); ++e) {
            f.labels[e - 1] = oracle(BigInt(std::to_string(e)));
        }
    }
    const auto report = windowtree::final_window_experiment(params, f, index, parse_fraction(tau),
                                                            parse_fraction(threshold), trials, seed, caps);
    Artifact a;
    a.result = windowtree::to_json(report);
    a.result["params"] = params_json(params);
    a.result["labels"] = level == 0 ? "random" : "stripe-" + std::to_string(level);
    a.csv_header = {"index", "trials", "conditioned", "below_threshold", "threshold"};
    a.csv_header.insert(a.csv_header.end(), estimate_columns.begin() + 2, estimate_columns.end());
    std::vector<std::string> row = {std::to_string(report.index), std::to_string(report.trials),
                                    std::to_string(report.conditioned), std::to_string(report.below_threshold),
                                    fraction_string(report.threshold)};
    if (report.fraction) {
        const auto cells = estimate_cells(*report.fraction);
        row.insert(row.end(), cells.begin() + 2, cells.end());
    } else {
        row.insert(row.end(), {"", "", "", ""});
    }
    a.csv_rows.push_back(row);
    return a;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Desk-scale laboratory for MMPHF space lower bounds", tool_name};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out_path;
    EnumerationCaps caps;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "64-bit seed")->capture_default_str();
        sub->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", out_path, "write the artifact to this file");
        sub->add_option("--max-vertices", caps.max_vertices)->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--max-label-functions", caps.max_label_functions)
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--max-outcomes", caps.max_outcomes)->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--max-tree-nodes", caps.max_tree_nodes)->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--max-window", caps.max_window)->check(CLI::PositiveNumber)->capture_default_str();
    };

    std::function<Artifact()> action;
    GraphOptions graph_opts;
    SamplerOptions sampler_opts;

    auto* graph = app.add_subcommand("graph", "build a graph; CSV columns a,b,vertex_a,vertex_b");
    std::string export_kind = "json";
    graph_opts.add(graph);
    graph->add_option("--export", export_kind, "json or dimacs")
        ->check(CLI::IsMember({"json", "dimacs"}))
        ->capture_default_str();
    graph->callback([&] { action = [&] { return cmd_graph(graph_opts, export_kind, caps); }; });

    auto* chi = app.add_subcommand("chi", "exact chromatic number; CSV columns vertex,color");
    graph_opts.add(chi);
    chi->callback([&] { action = [&] { return cmd_chi(graph_opts, caps); }; });

    auto* chif = app.add_subcommand("chif", "exact fractional chromatic number with certificates; CSV columns "
                                            "vertex,dual_weight,color");
    graph_opts.add(chif);
    chif->callback([&] { action = [&] { return cmd_chif(graph_opts, caps); }; });

    auto* sample = app.add_subcommand("sample", "hard-distribution traces; CSV columns trial,i,y_bits,z,x_bits,s,"
                                                "violations");
    std::uint64_t trials = 100;
    std::string detail = "full";
    sampler_opts.add(sample);
    sample->add_option("--trials", trials)->capture_default_str();
    sample->add_option("--traces", detail, "full, bits or none")
        ->check(CLI::IsMember({"full", "bits", "none"}))
        ->capture_default_str();
    sample->callback([&] { action = [&] { return cmd_sample(sampler_opts, trials, detail, seed); }; });

    auto* enumerate = app.add_subcommand("enumerate", "exact distribution of (X_1..X_m); CSV columns tuple,p");
    sampler_opts.add(enumerate);
    enumerate->callback([&] { action = [&] { return cmd_enumerate(sampler_opts, caps); }; });

    auto* adversary = app.add_subcommand("adversary", "exact best label function; CSV columns quantity,value");
    std::optional<std::uint64_t> split;
    sampler_opts.add(adversary);
    adversary->add_option("--split", split, "also evaluate f = 1 on [1, T], 2 above");
    bool skip_exhaustive = false;
    adversary->add_flag("--skip-exhaustive", skip_exhaustive, "skip the brute force over all label functions");
    adversary->callback(
        [&] { action = [&] { return cmd_adversary(sampler_opts, split, skip_exhaustive, caps); }; });

    auto* prune = app.add_subcommand("prune", "prune a window tree over random labels; CSV columns level,total,"
                                              "directly_pruned,indirectly_pruned,p");
    std::uint64_t arity = 2;
    unsigned depth = 3;
    std::uint64_t leaf = 1;
    unsigned label_count = 2;
    unsigned index = 1;
    std::string tau = "1/4";
    prune->add_option("--arity", arity)->check(CLI::PositiveNumber)->capture_default_str();
    prune->add_option("--depth", depth)->capture_default_str();
    prune->add_option("--leaf", leaf, "leaf window length")->check(CLI::PositiveNumber)->capture_default_str();
    prune->add_option("--labels", label_count, "label alphabet size")->check(CLI::PositiveNumber)->capture_default_str();
    prune->add_option("--index", index)->capture_default_str();
    prune->add_option("--tau", tau)->capture_default_str();
    prune->callback(
        [&] { action = [&] { return cmd_prune(arity, depth, leaf, label_count, index, tau, seed, caps); }; });

    auto* case1 = app.add_subcommand("case1-sweep", "randomized pruning-inequality check; CSV columns instances,"
                                                    "hypothesis_held,conclusion_failures,identity_failures");
    std::uint64_t instances = 1000;
    bool force = false;
    case1->add_option("--instances", instances)->capture_default_str();
    case1->add_flag("--force-hypothesis", force, "draw delta at or above the kept product");
    case1->callback([&] { action = [&] { return cmd_case1(instances, force, seed); }; });

    auto* verify = app.add_subcommand("mmphf-verify", "build an index and check member ranks; CSV columns key,"
                                                      "answer,expected");
    std::string scheme = "explicit-set";
    std::string keys_path;
    std::uint64_t key_count = 16;
    std::uint64_t universe = 1024;
    verify->add_option("--scheme", scheme, "explicit-set, rank-map or broken-constant")->capture_default_str();
    verify->add_option("--keys", keys_path, "key file (u= header, one key per line)");
    verify->add_option("--n", key_count, "random key count")->capture_default_str();
    verify->add_option("--u", universe, "random key universe")->capture_default_str();
    verify->callback([&] { action = [&] { return cmd_mmphf_verify(scheme, keys_path, key_count, universe, seed); }; });

    auto* bound = app.add_subcommand("bound-report", "extract colorings from schemes; CSV columns scheme,max_bits,"
                                                     "max_payload_bits,mean_bits,distinct,chi,chi_f,"
                                                     "lower_bound_bits,monochromatic_edges,proper,counting_bound");
    std::string schemes = "explicit-set,rank-map";
    graph_opts.add(bound);
    bound->add_option("--schemes", schemes)->capture_default_str();
    bound->callback([&] { action = [&] { return cmd_bound_report(graph_opts, schemes, seed, caps); }; });

    auto* sx = app.add_subcommand("sx-roundtrip", "bit-string encoding round trips; CSV columns d,scheme,strings,"
                                                  "roundtrips,distinct_payloads,max_payload_bits");
    unsigned d_max = 10;
    sx->add_option("--d-max", d_max)->capture_default_str();
    sx->add_option("--schemes", schemes)->capture_default_str();
    sx->callback([&] { action = [&] { return cmd_sx_roundtrip(d_max, schemes, seed); }; });

    auto* param = app.add_subcommand("parameterize", "parameter calculator for huge universes; CSV columns n,u,m,k,"
                                                     "u_prime,u_prime_le_u,m_le_sqrt_n,below_upper,above_lower");
    std::uint64_t pn = 1024;
    std::string pu = "2^2^64";
    param->add_option("--n", pn)->capture_default_str();
    param->add_option("--u", pu, "integer or tower such as 2^2^64")->capture_default_str();
    param->callback([&] { action = [&] { return cmd_parameterize(pn, pu); }; });

    auto* mc = app.add_subcommand("mc-success", "Monte-Carlo success of a stripe adversary; CSV columns level,"
                                                "successes,trials,estimate,ci_low,ci_high,confidence");
    std::uint64_t level = 0;
    std::uint64_t pilot = 1000;
    sampler_opts.add(mc);
    mc->add_option("--trials", trials)->capture_default_str();
    mc->add_option("--level", level, "stripe level; 0 picks the best by pilot runs")->capture_default_str();
    mc->add_option("--pilot", pilot)->capture_default_str();
    mc->callback([&] { action = [&] { return cmd_mc_success(sampler_opts, trials, level, pilot, seed); }; });

    auto* final_window = app.add_subcommand("final-window", "conditional final-window density experiment; CSV "
                                                            "columns index,trials,conditioned,below_threshold,"
                                                            "threshold,estimate,ci_low,ci_high,confidence");
    std::string threshold = "1/2";
    sampler_opts.add(final_window);
    final_window->add_option("--index", index)->capture_default_str();
    final_window->add_option("--tau", tau)->capture_default_str();
    final_window->add_option("--threshold", threshold)->capture_default_str();
    final_window->add_option("--trials", trials)->capture_default_str();
    final_window->add_option("--level", level, "stripe labels at this level; 0 uses random labels")
        ->capture_default_str();
    final_window->callback([&] {
        action = [&] {
            return cmd_final_window(sampler_opts, index, tau, threshold, trials, level, seed, caps);
        };
    });

    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
        add_common(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    try {
        const Artifact artifact = action();
        const json metadata = {{"tool", tool_name},
                               {"version", tool_version},
                               {"subcommand", chosen->get_name()},
                               {"seed", std::to_string(seed)},
                               {"rng", std::string(SplitMix64::name)},
                               {"config", option_config(chosen)}};
        if (out_path.empty()) {
            emit(artifact, metadata, format, out);
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot write " << out_path << '\n';
                return 2;
            }
            emit(artifact, metadata, format, file);
            out << "wrote " << out_path << '\n';
        }
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mmphflab
