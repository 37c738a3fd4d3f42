#include "nd/metrics.hpp"

#include <cmath>
#include <string>

#include "nd/errors.hpp"

namespace nd {

void PredictionBatch::validate() const {
    if (n_instances == 0 || n_classes == 0)
        throw UsageError("empty prediction batch");
    if (estimates.size() != n_instances * n_classes)
        throw UsageError("estimate matrix size mismatch");
    if (truth.size() != n_instances) throw UsageError("truth size mismatch");
    for (std::size_t i = 0; i < n_instances; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n_classes; ++j) sum += estimate(i, j);
        if (std::abs(sum - 1.0) > 1e-6)
            throw UsageError("estimate row " + std::to_string(i) +
                             " sums to " + std::to_string(sum));
        if (truth[i] < 0 || truth[i] >= static_cast<int>(n_classes))
            throw UsageError("truth index out of range in row " +
                             std::to_string(i));
    }
}

double rmse(const PredictionBatch& batch) {
    batch.validate();
    double total = 0.0;
    for (std::size_t i = 0; i < batch.n_instances; ++i) {
        for (std::size_t j = 0; j < batch.n_classes; ++j) {
            const double y = (static_cast<int>(j) == batch.truth[i]) ? 1.0 : 0.0;
            const double d = batch.estimate(i, j) - y;
            total += d * d;
        }
    }
    return std::sqrt(total / (static_cast<double>(batch.n_instances) *
                              static_cast<double>(batch.n_classes)));
}

double accuracy(const PredictionBatch& batch) {
    batch.validate();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < batch.n_instances; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < batch.n_classes; ++j)
            if (batch.estimate(i, j) > batch.estimate(i, best)) best = j;
        if (static_cast<int>(best) == batch.truth[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(batch.n_instances);
}

}  // namespace nd
