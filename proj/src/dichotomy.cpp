#include "nd/dichotomy.hpp"

#include <algorithm>
#include <limits>

#include "nd/errors.hpp"
#include "nd/growth.hpp"
#include "nd/metrics.hpp"
#include "nd/parallel.hpp"

namespace nd {

namespace {

// Uniform BigInt in [0, bound) by rejection over the minimal bit width.
BigInt below_big(Rng& rng, const BigInt& bound) {
    if (bound <= 1) return 0;
    const unsigned bits = boost::multiprecision::msb(bound - 1) + 1;
    for (;;) {
        BigInt v = 0;
        unsigned filled = 0;
        while (filled < bits) {
            const unsigned take = std::min(64u, bits - filled);
            std::uint64_t chunk = rng.next_u64();
            if (take < 64) chunk &= (1ULL << take) - 1;
            v <<= take;
            v |= chunk;
            filled += take;
        }
        if (v < bound) return v;
    }
}

// Uniform subset of the given size; both sides come back sorted.
ClassSplit subset_split(const std::vector<int>& members, std::size_t left_size,
                        Rng& rng) {
    std::vector<int> pool = members;
    for (std::size_t i = 0; i < left_size; ++i) {
        const std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    ClassSplit split;
    split.left.members.assign(pool.begin(),
                              pool.begin() + static_cast<std::ptrdiff_t>(left_size));
    split.right.members.assign(pool.begin() + static_cast<std::ptrdiff_t>(left_size),
                               pool.end());
    std::sort(split.left.members.begin(), split.left.members.end());
    std::sort(split.right.members.begin(), split.right.members.end());
    return split;
}

std::vector<int> rows_of_classes(const EncodedDataset& data,
                                 const std::vector<int>& classes) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < data.n_rows; ++i)
        if (std::binary_search(classes.begin(), classes.end(), data.labels[i]))
            rows.push_back(static_cast<int>(i));
    return rows;
}

}  // namespace

void ClassSet::validate() const {
    if (members.empty()) throw UsageError("class set is empty");
    for (std::size_t i = 1; i < members.size(); ++i)
        if (members[i] <= members[i - 1])
            throw UsageError("class set must be sorted and duplicate-free");
}

ClassSplit sample_random_split(const ClassSet& c, Rng& rng) {
    c.validate();
    const std::size_t n = c.size();
    if (n < 2) throw UsageError("cannot split fewer than 2 classes");
    // Draw the unordered size pair (a, n-a) with probability proportional to
    // (#splits of that shape) * T(a) * T(n-a); the total is exactly T(n).
    const BigInt total = growth_random(static_cast<int>(n));
    BigInt ticket = below_big(rng, total);
    std::size_t side = 0;
    for (std::size_t a = 1; a <= n / 2; ++a) {
        BigInt mult = binomial(static_cast<int>(n), static_cast<int>(a));
        if (2 * a == n) mult /= 2;
        const BigInt weight = mult * growth_random(static_cast<int>(a)) *
                              growth_random(static_cast<int>(n - a));
        if (ticket < weight) {
            side = a;
            break;
        }
        ticket -= weight;
    }
    if (side == 0) throw InternalError("split shape draw fell off the end");
    return subset_split(c.members, side, rng);
}

ClassSplit sample_balanced_split(const ClassSet& c, Rng& rng) {
    c.validate();
    const std::size_t n = c.size();
    if (n < 2) throw UsageError("cannot split fewer than 2 classes");
    return subset_split(c.members, n / 2, rng);
}

ClassSplit random_pair_split(const ClassSet& c, const EncodedDataset& node_data,
                             const BinaryLearnerConfig& learner, Rng& rng,
                             RandomPairTrace* trace) {
    c.validate();
    const std::size_t n = c.size();
    if (n < 2) throw UsageError("cannot split fewer than 2 classes");
    if (n == 2) {
        ClassSplit split;
        split.left.members = {c.members[0]};
        split.right.members = {c.members[1]};
        if (trace) {
            trace->first_class = c.members[0];
            trace->second_class = c.members[1];
        }
        return split;
    }

    const std::size_t i = rng.below(n);
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    const int c1 = c.members[i];
    const int c2 = c.members[j];

    // Pair classifier on the two selected classes only; c1 is the positive
    // target.
    std::vector<int> pair_rows;
    for (std::size_t r = 0; r < node_data.n_rows; ++r)
        if (node_data.labels[r] == c1 || node_data.labels[r] == c2)
            pair_rows.push_back(static_cast<int>(r));
    EncodedDataset pair_data = take_rows(node_data, pair_rows);
    for (auto& label : pair_data.labels) label = (label == c1) ? 1 : 0;
    const BinaryModel pair_model = train_binary(pair_data, learner);

    ClassSplit split;
    split.left.members = {c1};
    split.right.members = {c2};
    ConfusionCounts confusion;
    for (int cls : c.members) {
        if (cls == c1 || cls == c2) continue;
        std::size_t as_first = 0, as_second = 0;
        for (std::size_t r = 0; r < node_data.n_rows; ++r) {
            if (node_data.labels[r] != cls) continue;
            if (pair_model.predict(node_data.row(r)) >= 0.5)
                ++as_first;
            else
                ++as_second;
        }
        confusion.remaining.push_back(cls);
        confusion.predicted_as_first.push_back(as_first);
        confusion.predicted_as_second.push_back(as_second);
        // A class joins c1's side when its instances are predicted as c1 at
        // least as often as c2; a class with no instances ties to c1's side.
        if (as_first >= as_second)
            split.left.members.push_back(cls);
        else
            split.right.members.push_back(cls);
    }
    std::sort(split.left.members.begin(), split.left.members.end());
    std::sort(split.right.members.begin(), split.right.members.end());
    if (trace) {
        trace->first_class = c1;
        trace->second_class = c2;
        trace->confusion = std::move(confusion);
    }
    return split;
}

EvaluatedSplit evaluate_split(const EncodedDataset& node_data,
                              const ClassSplit& split,
                              const BinaryLearnerConfig& learner) {
    split.left.validate();
    split.right.validate();
    EncodedDataset meta = node_data;
    for (std::size_t r = 0; r < meta.n_rows; ++r) {
        const int label = meta.labels[r];
        if (std::binary_search(split.left.members.begin(),
                               split.left.members.end(), label)) {
            meta.labels[r] = 1;
        } else if (std::binary_search(split.right.members.begin(),
                                      split.right.members.end(), label)) {
            meta.labels[r] = 0;
        } else {
            throw UsageError("instance class " + std::to_string(label) +
                             " not covered by the split");
        }
    }

    EvaluatedSplit result;
    result.split = split;
    result.model = train_binary(meta, learner);
    result.model.positive_is_left = true;

    PredictionBatch batch;
    batch.n_instances = node_data.n_rows;
    batch.n_classes = 2;
    batch.estimates.resize(batch.n_instances * 2);
    batch.truth.resize(batch.n_instances);
    for (std::size_t r = 0; r < node_data.n_rows; ++r) {
        const double p = result.model.predict(node_data.row(r));
        batch.estimates[r * 2] = p;
        batch.estimates[r * 2 + 1] = 1.0 - p;
        batch.truth[r] = meta.labels[r] == 1 ? 0 : 1;
    }
    result.train_rmse = rmse(batch);
    return result;
}

EvaluatedSplit select_split(const EncodedDataset& node_data, const ClassSet& c,
                            const SplitterSpec& spec,
                            const BinaryLearnerConfig& learner,
                            std::uint64_t node_seed, int threads,
                            SelectionTrace* trace) {
    spec.validate();
    c.validate();
    if (c.size() < 2) throw UsageError("cannot split fewer than 2 classes");
    const int k =
        static_cast<int>(c.size()) >= spec.class_threshold ? spec.lambda : 1;

    std::vector<EvaluatedSplit> candidates(static_cast<std::size_t>(k));
    parallel_for(static_cast<std::size_t>(k), threads, [&](std::size_t i) {
        Rng rng(derive_seed(node_seed, i));
        ClassSplit split;
        switch (spec.strategy) {
            case SplitStrategy::Random:
                split = sample_random_split(c, rng);
                break;
            case SplitStrategy::Balanced:
                split = sample_balanced_split(c, rng);
                break;
            case SplitStrategy::RandomPair:
                split = random_pair_split(c, node_data, learner, rng);
                break;
        }
        candidates[i] = evaluate_split(node_data, split, learner);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].train_rmse < candidates[best].train_rmse) best = i;
    if (trace) {
        trace->candidates.clear();
        for (const auto& cand : candidates)
            trace->candidates.push_back({cand.split, cand.train_rmse});
    }
    return std::move(candidates[best]);
}

namespace {

std::unique_ptr<NdNode> build_subtree(const EncodedDataset& node_data,
                                      const ClassSet& classes,
                                      const SplitterSpec& spec,
                                      const BinaryLearnerConfig& learner,
                                      std::uint64_t path, int threads) {
    if (classes.size() == 1) {
        auto leaf = std::make_unique<NdNode>();
        leaf->leaf_class = classes.members[0];
        return leaf;
    }
    const std::uint64_t node_seed = derive_seed(spec.seed, path);
    EvaluatedSplit selected =
        select_split(node_data, classes, spec, learner, node_seed, threads);

    auto node = std::make_unique<NdNode>();
    node->split = selected.split;
    node->model = std::move(selected.model);

    const std::vector<int> left_rows =
        rows_of_classes(node_data, node->split.left.members);
    const std::vector<int> right_rows =
        rows_of_classes(node_data, node->split.right.members);
    node->left = build_subtree(take_rows(node_data, left_rows), node->split.left,
                               spec, learner, path_left(path), threads);
    node->right = build_subtree(take_rows(node_data, right_rows),
                                node->split.right, spec, learner,
                                path_right(path), threads);
    return node;
}

void accumulate(const NdNode& node, std::span<const double> row, double acc,
                std::vector<double>& out) {
    if (node.is_leaf()) {
        out[static_cast<std::size_t>(node.leaf_class)] = acc;
        return;
    }
    const double p_positive = node.model.predict(row);
    const double p_left =
        node.model.positive_is_left ? p_positive : 1.0 - p_positive;
    accumulate(*node.left, row, acc * p_left, out);
    accumulate(*node.right, row, acc * (1.0 - p_left), out);
}

int count_internal(const NdNode& node) {
    if (node.is_leaf()) return 0;
    return 1 + count_internal(*node.left) + count_internal(*node.right);
}

int node_depth(const NdNode& node) {
    if (node.is_leaf()) return 0;
    return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

}  // namespace

std::vector<double> NestedDichotomy::predict(
    std::span<const double> raw_row) const {
    if (raw_row.size() != schema.size())
        throw UsageError("instance has " + std::to_string(raw_row.size()) +
                         " values, schema expects " +
                         std::to_string(schema.size()));
    std::vector<double> encoded(encoding.width());
    encoding.encode_row(raw_row, encoded);
    return predict_encoded(encoded);
}

std::vector<double> NestedDichotomy::predict_encoded(
    std::span<const double> encoded_row) const {
    if (encoded_row.size() != encoding.width())
        throw UsageError("encoded instance width mismatch");
    std::vector<double> out(class_names.size(), 0.0);
    accumulate(*root, encoded_row, 1.0, out);
    return out;
}

int NestedDichotomy::internal_node_count() const { return count_internal(*root); }

int NestedDichotomy::depth() const { return node_depth(*root); }

NestedDichotomy build_nd_encoded(const EncodedDataset& data,
                                 const std::vector<Attribute>& schema,
                                 const std::vector<std::string>& class_names,
                                 const SplitterSpec& spec,
                                 const BinaryLearnerConfig& learner,
                                 int threads) {
    if (class_names.size() < 2)
        throw UsageError("a nested dichotomy needs at least 2 classes");
    if (data.n_rows == 0) throw DataError("dataset has no instances");
    spec.validate();
    learner.validate();

    std::vector<bool> seen(class_names.size(), false);
    for (int label : data.labels) seen[static_cast<std::size_t>(label)] = true;
    ClassSet present;
    for (std::size_t cls = 0; cls < seen.size(); ++cls)
        if (seen[cls]) present.members.push_back(static_cast<int>(cls));

    NestedDichotomy nd;
    nd.schema = schema;
    nd.class_names = class_names;
    nd.encoding = data.encoding;
    if (present.size() >= 2) {
        const std::vector<int> rows = rows_of_classes(data, present.members);
        nd.root = build_subtree(take_rows(data, rows), present, spec, learner,
                                kRootPath, threads);
    } else {
        auto leaf = std::make_unique<NdNode>();
        leaf->leaf_class = present.members[0];
        nd.root = std::move(leaf);
    }

    // Classes with no instances become leaves above the root, behind a
    // constant fifty-fifty model, so every schema class gets a probability.
    ClassSet covered = present;
    for (std::size_t cls = 0; cls < seen.size(); ++cls) {
        if (seen[cls]) continue;
        auto leaf = std::make_unique<NdNode>();
        leaf->leaf_class = static_cast<int>(cls);
        auto wrapper = std::make_unique<NdNode>();
        wrapper->split.left.members = {static_cast<int>(cls)};
        wrapper->split.right = covered;
        wrapper->model.degenerate_probability = 0.5;
        wrapper->left = std::move(leaf);
        wrapper->right = std::move(nd.root);
        nd.root = std::move(wrapper);
        covered.members.push_back(static_cast<int>(cls));
        std::sort(covered.members.begin(), covered.members.end());
    }
    return nd;
}

NestedDichotomy build_nd(const Dataset& data, const SplitterSpec& spec,
                         const BinaryLearnerConfig& learner, int threads) {
    if (data.n_classes() < 2)
        throw UsageError("a nested dichotomy needs at least 2 classes");
    data.validate();
    return build_nd_encoded(encode(data), data.schema, data.class_names, spec,
                            learner, threads);
}

}  // namespace nd
