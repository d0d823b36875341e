#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "mmphflab/common.hpp"
#include "mmphflab/graphs.hpp"
#include "mmphflab/harddist.hpp"

namespace mmphflab::windowtree {

/// Contiguous window [start, start + length - 1].
struct Window {
    std::int64_t start = 1;
    std::uint64_t length = 1;

    std::int64_t last() const noexcept { return start + static_cast<std::int64_t>(length) - 1; }
    bool contains(std::int64_t e) const noexcept { return e >= start && e <= last(); }
};

/// r-ary equipartition tree with levels 0..depth; the root window length
/// must be arity^depth times an integer leaf length.
struct WindowTreeSpec {
    std::uint64_t arity = 2;
    unsigned depth = 1;
    Window root;
};

class WindowTree {
public:
    explicit WindowTree(const WindowTreeSpec& spec);

    const WindowTreeSpec& spec() const noexcept { return spec_; }
    unsigned depth() const noexcept { return spec_.depth; }
    std::uint64_t arity() const noexcept { return spec_.arity; }
    std::uint64_t nodes_at(unsigned level) const { return counts_.at(level); }
    std::uint64_t length_at(unsigned level) const { return lengths_.at(level); }
    std::uint64_t leaf_count() const { return counts_.back(); }
    std::uint64_t node_total() const noexcept { return total_; }

    /// Window of the `index`-th node (left to right) at `level`.
    Window window(unsigned level, std::uint64_t index) const;
    std::vector<Window> children(unsigned level, std::uint64_t index) const;

private:
    WindowTreeSpec spec_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> lengths_;
    std::uint64_t total_ = 0;
};

/// Throws InvalidInput on non-divisible lengths, CapExceeded on node count.
WindowTree build_tree(const WindowTreeSpec& spec, const EnumerationCaps& caps = {});

/// Labels of the window's elements, in order.
using Labels = std::span<const unsigned>;

/// Fraction of entries equal to `index`.
Rational density(Labels window_labels, unsigned index);
Rational density(const Window& window, const graphs::LabelFunction& f, unsigned index);

/// f restricted to the window, in element order.
std::vector<unsigned> labels_over(const Window& window, const graphs::LabelFunction& f);

enum class Mark { kept, directly_pruned, indirectly_pruned };

struct LevelStats {
    unsigned level = 0;
    std::uint64_t total = 0;
    std::uint64_t directly_pruned = 0;
    std::uint64_t indirectly_pruned = 0;
    /// directly / (total - indirectly); 0 when the denominator is 0.
    Rational p;
};

struct PruneResult {
    unsigned index = 1;
    Rational tau;
    std::vector<std::vector<Mark>> marks;  // [level][node]
    std::vector<LevelStats> levels;

    bool pruned(unsigned level, std::uint64_t node) const { return marks.at(level).at(node) != Mark::kept; }
    /// prod over levels of (1 - p_l).
    Rational kept_product() const;
    std::uint64_t kept_leaves() const;
};

/// Top-down pruning: a node is directly pruned iff its density is <= tau and
/// no ancestor is pruned. `root_labels` covers the root window.
PruneResult prune(const WindowTree& tree, Labels root_labels, unsigned index, const Rational& tau);

struct SamplingPath {
    std::vector<std::uint64_t> nodes;  // node index per level 0..depth
    std::int64_t sample = 0;
};

SamplingPath sample_path(const WindowTree& tree, std::uint64_t seed);
/// The unique root-to-leaf path whose leaf window contains `element`.
SamplingPath path_to(const WindowTree& tree, std::int64_t element);
/// Root-to-leaf path of a leaf, sample at the leaf's left end.
SamplingPath path_of_leaf(const WindowTree& tree, std::uint64_t leaf);

/// No node among the first z path nodes is pruned.
bool event_no_prune_on_prefix(const SamplingPath& path, const PruneResult& result, unsigned z);

struct Case1Outcome {
    Rational kept_product;
    Rational root_density;
    bool hypothesis = false;  // prod(1 - p_l) <= delta
    bool conclusion = false;  // density(root) <= delta + tau

    bool holds() const noexcept { return !hypothesis || conclusion; }
};

Case1Outcome case1_inequality_check(const WindowTree& tree, Labels root_labels, unsigned index, const Rational& tau,
                                    const Rational& delta);

/// Random (tree, labels, tau, delta) instance. With `force_hypothesis`,
/// delta is drawn at or above the kept product.
struct Case1Instance {
    WindowTreeSpec spec;
    std::vector<unsigned> labels;
    unsigned index = 1;
    Rational tau;
    Rational delta;
};

Case1Instance random_case1_instance(std::uint64_t seed, bool force_hypothesis);

struct Case1Sweep {
    std::uint64_t instances = 0;
    std::uint64_t hypothesis_held = 0;
    std::uint64_t conclusion_failures = 0;  // hypothesis held, conclusion did not
    std::uint64_t identity_failures = 0;    // kept leaves / leaves != kept product
};

Case1Sweep case1_sweep(std::uint64_t instances, std::uint64_t seed, bool force_hypothesis);

struct FinalWindowReport {
    unsigned index = 1;
    std::uint64_t trials = 0;
    std::uint64_t conditioned = 0;  // trials where the no-prune event held
    std::uint64_t below_threshold = 0;
    Rational threshold;
    /// Present only when conditioned > 0.
    std::optional<harddist::BinomialEstimate> fraction;
};

/// For each trial: sample the hard distribution, build the window tree of
/// iteration `index`, prune it, and test density(Win_m, index) < threshold
/// given that none of the first z_index path nodes is pruned. f must be
/// defined on [1, f.width()] covering every reachable element.
FinalWindowReport final_window_experiment(const harddist::SamplerParams& params, const graphs::LabelFunction& f,
                                          unsigned index, const Rational& tau, const Rational& threshold,
                                          std::uint64_t trials, std::uint64_t seed, const EnumerationCaps& caps = {});

/// Largest element reachable by the sampler: 2^s0 + sum of later maxima.
BigInt reachable_universe(const harddist::SamplerParams& params);

nlohmann::json to_json(const PruneResult& result);
nlohmann::json to_json(const FinalWindowReport& report);
nlohmann::json to_json(const Case1Sweep& sweep);

}  // namespace mmphflab::windowtree
