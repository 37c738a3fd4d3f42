#pragma once

#include <cstddef>
#include <vector>

namespace nd {

// Probability estimates against one-hot truth. estimates is row-major
// n_instances x n_classes; truth holds the true class index per row.
struct PredictionBatch {
    std::size_t n_instances = 0;
    std::size_t n_classes = 0;
    std::vector<double> estimates;
    std::vector<int> truth;

    double estimate(std::size_t i, std::size_t j) const {
        return estimates[i * n_classes + j];
    }
    void validate() const;  // UsageError on empty or malformed batches
};

// sqrt( 1/(n*m) * sum_ij (estimate_ij - truth_ij)^2 ), truth one-hot.
double rmse(const PredictionBatch& batch);

// Fraction of rows whose argmax estimate hits the true class; argmax ties
// resolve to the lowest class index.
double accuracy(const PredictionBatch& batch);

}  // namespace nd
