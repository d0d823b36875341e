#include "mmphflab/windowtree.hpp"

#include "mmphflab/rng.hpp"

namespace mmphflab::windowtree {

WindowTree::WindowTree(const WindowTreeSpec& spec) : spec_(spec) {
    if (spec.arity < 1) {
        throw InvalidInput("window tree arity must be >= 1");
    }
    if (spec.root.length < 1) {
        throw InvalidInput("window tree root must be non-empty");
    }
    std::uint64_t length = spec.root.length;
    std::uint64_t count = 1;
    for (unsigned level = 0;; ++level) {
        lengths_.push_back(length);
        counts_.push_back(count);
        total_ += count;
        if (level == spec.depth) {
            break;
        }
        if (length % spec.arity != 0) {
            throw InvalidInput("window length " + std::to_string(spec.root.length) + " is not arity^depth times an integer");
        }
        length /= spec.arity;
        count *= spec.arity;
    }
}

Window WindowTree::window(unsigned level, std::uint64_t index) const {
    if (level > spec_.depth || index >= counts_[level]) {
        throw InvalidInput("window tree node out of range");
    }
    return Window{spec_.root.start + static_cast<std::int64_t>(index * lengths_[level]), lengths_[level]};
}

std::vector<Window> WindowTree::children(unsigned level, std::uint64_t index) const {
    if (level >= spec_.depth) {
        return {};
    }
    std::vector<Window> out;
    out.reserve(spec_.arity);
    for (std::uint64_t c = 0; c < spec_.arity; ++c) {
        out.push_back(window(level + 1, index * spec_.arity + c));
    }
    return out;
}

WindowTree build_tree(const WindowTreeSpec& spec, const EnumerationCaps& caps) {
    BigInt total = 0;
    BigInt level_count = 1;
    for (unsigned level = 0; level <= spec.depth; ++level) {
        total += level_count;
        level_count *= BigInt(std::to_string(spec.arity));
    }
    check_cap("max_tree_nodes", total, caps.max_tree_nodes);
    return WindowTree(spec);
}

Rational density(Labels window_labels, unsigned index) {
    if (window_labels.empty()) {
        throw InvalidInput("density of an empty window");
    }
    std::uint64_t hits = 0;
    for (unsigned label : window_labels) {
        hits += label == index ? 1 : 0;
    }
    return ratio(hits, window_labels.size());
}

std::vector<unsigned> labels_over(const Window& window, const graphs::LabelFunction& f) {
    std::vector<unsigned> out;
    out.reserve(window.length);
    for (std::int64_t e = window.start; e <= window.last(); ++e) {
        out.push_back(f.at(BigInt(std::to_string(e))));
    }
    return out;
}

Rational density(const Window& window, const graphs::LabelFunction& f, unsigned index) {
    if (window.length == 0) {
        throw InvalidInput("density of an empty window");
    }
    const auto labels = labels_over(window, f);
    return density(Labels(labels), index);
}

Rational PruneResult::kept_product() const {
    Rational out = 1;
    for (const auto& level : levels) {
        out *= 1 - level.p;
    }
    return out;
}

std::uint64_t PruneResult::kept_leaves() const {
    std::uint64_t kept = 0;
    for (Mark m : marks.back()) {
        kept += m == Mark::kept ? 1 : 0;
    }
    return kept;
}

PruneResult prune(const WindowTree& tree, Labels root_labels, unsigned index, const Rational& tau) {
    if (root_labels.size() != tree.spec().root.length) {
        throw InvalidInput("labels do not cover the root window");
    }
    std::vector<std::uint64_t> prefix(root_labels.size() + 1, 0);
    for (std::size_t j = 0; j < root_labels.size(); ++j) {
        prefix[j + 1] = prefix[j] + (root_labels[j] == index ? 1 : 0);
    }
    PruneResult out;
    out.index = index;
    out.tau = tau;
    for (unsigned level = 0; level <= tree.depth(); ++level) {
        const std::uint64_t count = tree.nodes_at(level);
        const std::uint64_t length = tree.length_at(level);
        std::vector<Mark> marks(count, Mark::kept);
        LevelStats stats;
        stats.level = level;
        stats.total = count;
        for (std::uint64_t node = 0; node < count; ++node) {
            if (level > 0 && out.marks[level - 1][node / tree.arity()] != Mark::kept) {
                marks[node] = Mark::indirectly_pruned;
                ++stats.indirectly_pruned;
                continue;
            }
            const std::uint64_t hits = prefix[(node + 1) * length] - prefix[node * length];
            if (ratio(hits, length) <= tau) {
                marks[node] = Mark::directly_pruned;
                ++stats.directly_pruned;
            }
        }
        const std::uint64_t eligible = stats.total - stats.indirectly_pruned;
        stats.p = eligible == 0 ? Rational(0)
                                : ratio(stats.directly_pruned, eligible);
        out.marks.push_back(std::move(marks));
        out.levels.push_back(std::move(stats));
    }
    return out;
}

SamplingPath sample_path(const WindowTree& tree, std::uint64_t seed) {
    SplitMix64 rng(seed);
    SamplingPath path;
    path.nodes.push_back(0);
    for (unsigned level = 1; level <= tree.depth(); ++level) {
        path.nodes.push_back(path.nodes.back() * tree.arity() + rng.below(tree.arity()));
    }
    const Window leaf = tree.window(tree.depth(), path.nodes.back());
    path.sample = leaf.start + static_cast<std::int64_t>(rng.below(leaf.length));
    return path;
}

SamplingPath path_to(const WindowTree& tree, std::int64_t element) {
    const Window& root = tree.spec().root;
    if (!root.contains(element)) {
        throw InvalidInput("element outside the root window");
    }
    const auto offset = static_cast<std::uint64_t>(element - root.start);
    SamplingPath path;
    for (unsigned level = 0; level <= tree.depth(); ++level) {
        path.nodes.push_back(offset / tree.length_at(level));
    }
    path.sample = element;
    return path;
}

SamplingPath path_of_leaf(const WindowTree& tree, std::uint64_t leaf) {
    return path_to(tree, tree.window(tree.depth(), leaf).start);
}

bool event_no_prune_on_prefix(const SamplingPath& path, const PruneResult& result, unsigned z) {
    if (z > path.nodes.size()) {
        throw InvalidInput("prefix longer than the sampling path");
    }
    for (unsigned level = 0; level < z; ++level) {
        if (result.pruned(level, path.nodes[level])) {
            return false;
        }
    }
    return true;
}

Case1Outcome case1_inequality_check(const WindowTree& tree, Labels root_labels, unsigned index, const Rational& tau,
                                    const Rational& delta) {
    const auto result = prune(tree, root_labels, index, tau);
    Case1Outcome out;
    out.kept_product = result.kept_product();
    out.root_density = density(root_labels, index);
    out.hypothesis = out.kept_product <= delta;
    out.conclusion = out.root_density <= delta + tau;
    return out;
}

Case1Instance random_case1_instance(std::uint64_t seed, bool force_hypothesis) {
    SplitMix64 rng(seed);
    Case1Instance out;
    out.spec.arity = 2 + rng.below(3);
    const std::uint64_t max_depth = out.spec.arity == 2 ? 6 : (out.spec.arity == 3 ? 4 : 3);
    out.spec.depth = static_cast<unsigned>(1 + rng.below(max_depth));
    std::uint64_t leaves = 1;
    for (unsigned d = 0; d < out.spec.depth; ++d) {
        leaves *= out.spec.arity;
    }
    const std::uint64_t leaf_length = 1 + rng.below(3);
    out.spec.root = Window{1 + static_cast<std::int64_t>(rng.below(100)), leaves * leaf_length};
    const unsigned m = 2 + static_cast<unsigned>(rng.below(2));
    out.index = 1 + static_cast<unsigned>(rng.below(m));
    // Hit rate per top-level block so that pruning happens at several levels.
    const std::uint64_t block = out.spec.root.length / out.spec.arity;
    std::vector<std::uint64_t> rate(out.spec.arity);
    for (auto& r : rate) {
        r = rng.below(5);
    }
    out.labels.resize(out.spec.root.length);
    for (std::uint64_t e = 0; e < out.labels.size(); ++e) {
        if (rng.below(4) < rate[e / block]) {
            out.labels[e] = out.index;
        } else {
            out.labels[e] = 1 + static_cast<unsigned>((out.index + rng.below(m - 1)) % m);
        }
    }
    out.tau = ratio(rng.below(17), 16);
    const WindowTree tree(out.spec);
    const Rational kept = prune(tree, Labels(out.labels), out.index, out.tau).kept_product();
    const Rational slack = ratio(rng.below(5), 16);
    out.delta = force_hypothesis ? kept + slack : ratio(rng.below(17), 16);
    return out;
}

Case1Sweep case1_sweep(std::uint64_t instances, std::uint64_t seed, bool force_hypothesis) {
    Case1Sweep out;
    out.instances = instances;
    for (std::uint64_t t = 0; t < instances; ++t) {
        const auto inst = random_case1_instance(derive_seed(seed, t), force_hypothesis);
        const WindowTree tree(inst.spec);
        const Labels labels(inst.labels);
        const auto result = prune(tree, labels, inst.index, inst.tau);
        if (ratio(result.kept_leaves(), tree.leaf_count()) != result.kept_product()) {
            ++out.identity_failures;
        }
        const auto check = case1_inequality_check(tree, labels, inst.index, inst.tau, inst.delta);
        if (check.hypothesis) {
            ++out.hypothesis_held;
            if (!check.conclusion) {
                ++out.conclusion_failures;
            }
        }
    }
    return out;
}

BigInt reachable_universe(const harddist::SamplerParams& params) {
    BigInt top = pow2(params.s0);
    BigInt s = params.s0;
    for (unsigned i = 1; i < params.m; ++i) {
        s -= params.step(i);
        top += pow2(s);
    }
    return top;
}

FinalWindowReport final_window_experiment(const harddist::SamplerParams& params, const graphs::LabelFunction& f,
                                          unsigned index, const Rational& tau, const Rational& threshold,
                                          std::uint64_t trials, std::uint64_t seed, const EnumerationCaps& caps) {
    if (index < 1 || index > params.m) {
        throw InvalidInput("index must lie in [1, m]");
    }
    if (f.offset != 0 || BigInt(std::to_string(f.width())) < reachable_universe(params)) {
        throw InvalidInput("label function must cover [1, " + reachable_universe(params).get_str() + "]");
    }
    const BigInt step = params.step(index);
    if (!step.fits_ulong_p() || step.get_ui() >= 64) {
        throw CapExceeded("max_tree_nodes", pow2(step), caps.max_tree_nodes);
    }
    FinalWindowReport report;
    report.index = index;
    report.trials = trials;
    report.threshold = threshold;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto trace = harddist::sample(params, derive_seed(seed, t));
        const auto win = trace.window(index);
        const BigInt length = win.length();
        check_cap("max_window", length, caps.max_window);
        WindowTreeSpec spec;
        spec.arity = std::uint64_t{1} << step.get_ui();
        spec.depth = static_cast<unsigned>(params.k);
        spec.root = Window{static_cast<std::int64_t>(to_u64(win.start)), to_u64(length)};
        const auto tree = build_tree(spec, caps);
        const auto labels = labels_over(spec.root, f);
        const auto pruned = prune(tree, labels, index, tau);
        const auto& it = trace.iterations[index - 1];
        const auto path = path_to(tree, static_cast<std::int64_t>(to_u64(it.x)));
        if (!event_no_prune_on_prefix(path, pruned, static_cast<unsigned>(it.z))) {
            continue;
        }
        ++report.conditioned;
        const auto last = trace.window(params.m);
        const Window final_window{static_cast<std::int64_t>(to_u64(last.start)), to_u64(last.length())};
        if (density(final_window, f, index) < threshold) {
            ++report.below_threshold;
        }
    }
    if (report.conditioned > 0) {
        report.fraction = harddist::binomial_estimate(report.below_threshold, report.conditioned);
    }
    return report;
}

nlohmann::json to_json(const PruneResult& result) {
    auto levels = nlohmann::json::array();
    for (const auto& l : result.levels) {
        levels.push_back({{"level", l.level},
                          {"total", l.total},
                          {"directly_pruned", l.directly_pruned},
                          {"indirectly_pruned", l.indirectly_pruned},
                          {"p", fraction_string(l.p)}});
    }
    return {{"index", result.index},
            {"tau", fraction_string(result.tau)},
            {"levels", levels},
            {"kept_product", fraction_string(result.kept_product())},
            {"kept_leaves", result.kept_leaves()}};
}

nlohmann::json to_json(const FinalWindowReport& report) {
    nlohmann::json out = {{"index", report.index},
                          {"trials", report.trials},
                          {"conditioned", report.conditioned},
                          {"below_threshold", report.below_threshold},
                          {"threshold", fraction_string(report.threshold)}};
    if (report.fraction) {
        out["fraction"] = harddist::to_json(*report.fraction);
    } else {
        out["fraction"] = nullptr;
        out["note"] = "empty conditioning: the no-prune event never held";
    }
    return out;
}

nlohmann::json to_json(const Case1Sweep& sweep) {
    return {{"instances", sweep.instances},
            {"hypothesis_held", sweep.hypothesis_held},
            {"conclusion_failures", sweep.conclusion_failures},
            {"identity_failures", sweep.identity_failures}};
}

}  // namespace mmphflab::windowtree
