#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nd/dataset.hpp"
#include "nd/learner.hpp"
#include "nd/rng.hpp"
#include "nd/splitter_spec.hpp"

namespace nd {

// Distinct class indices, kept sorted ascending.
struct ClassSet {
    std::vector<int> members;

    std::size_t size() const { return members.size(); }
    void validate() const;  // non-empty, sorted, no duplicates
};

// A two-way class partition; both sides non-empty and disjoint.
struct ClassSplit {
    ClassSet left;   // C_i1
    ClassSet right;  // C_i2
};

// Draws a split such that recursing with the same rule makes every one of the
// T(|c|) nested dichotomies equally likely: a split with side sizes (a, b) is
// drawn with probability T(a)*T(b)/T(|c|). The size pair is drawn first with
// exact big-integer weights, then a uniform subset of that size.
ClassSplit sample_random_split(const ClassSet& c, Rng& rng);

// Uniform draw among the splits whose side sizes differ by at most one.
ClassSplit sample_balanced_split(const ClassSet& c, Rng& rng);

// Predictions of the pair classifier on the remaining classes.
// predicted_as_first[j] counts instances of remaining[j] classified as the
// first pair class.
struct ConfusionCounts {
    std::vector<int> remaining;
    std::vector<std::size_t> predicted_as_first;
    std::vector<std::size_t> predicted_as_second;
};

struct RandomPairTrace {
    int first_class = -1;
    int second_class = -1;
    ConfusionCounts confusion;
};

// Draws a uniform random pair (c1, c2), trains a binary classifier on just
// those two classes, classifies every other class's instances with it, and
// groups a class with c1 when its instances are predicted as c1 at least as
// often as c2 (ties go to c1's side, as does a class with no instances).
ClassSplit random_pair_split(const ClassSet& c, const EncodedDataset& node_data,
                             const BinaryLearnerConfig& learner, Rng& rng,
                             RandomPairTrace* trace = nullptr);

struct EvaluatedSplit {
    ClassSplit split;
    BinaryModel model;
    double train_rmse = 0.0;
};

// Trains the side-membership model for a fixed split (left side is the
// positive target) and reports its training RMSE over the two meta-classes.
EvaluatedSplit evaluate_split(const EncodedDataset& node_data,
                              const ClassSplit& split,
                              const BinaryLearnerConfig& learner);

struct SelectionTrace {
    struct Candidate {
        ClassSplit split;
        double train_rmse = 0.0;
    };
    std::vector<Candidate> candidates;  // in draw order
};

// Multiple subset evaluation at one node: draws lambda candidates (one when
// the node has fewer than class_threshold classes), evaluates each on an
// independent substream derived from (node_seed, candidate index), and keeps
// the lowest training RMSE; ties break towards the earliest draw. Results are
// identical for any thread count.
EvaluatedSplit select_split(const EncodedDataset& node_data, const ClassSet& c,
                            const SplitterSpec& spec,
                            const BinaryLearnerConfig& learner,
                            std::uint64_t node_seed, int threads = 1,
                            SelectionTrace* trace = nullptr);

// Tree node: a leaf carries a class index, an internal node a split, a
// trained model and two children.
struct NdNode {
    int leaf_class = -1;
    ClassSplit split;
    BinaryModel model;
    std::unique_ptr<NdNode> left;
    std::unique_ptr<NdNode> right;

    bool is_leaf() const { return leaf_class >= 0; }
};

// A trained nested dichotomy plus the schema and encoding statistics needed
// to score raw instances.
struct NestedDichotomy {
    std::vector<Attribute> schema;
    std::vector<std::string> class_names;
    Encoding encoding;
    std::unique_ptr<NdNode> root;

    // Per-class probabilities: the product of branch probabilities along each
    // root-to-leaf path. Sums to one up to rounding.
    std::vector<double> predict(std::span<const double> raw_row) const;
    std::vector<double> predict_encoded(std::span<const double> encoded_row) const;

    int internal_node_count() const;
    int depth() const;
};

// Builds a nested dichotomy over all schema classes. Classes without any
// instance (possible under bootstrap resampling) are attached above the root
// as leaves behind a constant 0.5/0.5 model so that every class still
// receives a probability.
NestedDichotomy build_nd(const Dataset& data, const SplitterSpec& spec,
                         const BinaryLearnerConfig& learner, int threads = 1);

// Same, over pre-encoded rows with shared encoding statistics (ensembles fit
// the encoding once on the full training data).
NestedDichotomy build_nd_encoded(const EncodedDataset& data,
                                 const std::vector<Attribute>& schema,
                                 const std::vector<std::string>& class_names,
                                 const SplitterSpec& spec,
                                 const BinaryLearnerConfig& learner,
                                 int threads = 1);

}  // namespace nd
