#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nd/dataset.hpp"

namespace nd {

struct BinaryLearnerConfig {
    double ridge = 1e-8;      // L2 coefficient; the intercept is unpenalized
    int max_iterations = 200;
    double tolerance = 1e-8;  // on the gradient infinity norm

    void validate() const;
};

// Logistic model over encoded columns. predict() returns the probability of
// target 1; positive_is_left records which side of a class split that is.
// Single-class training sets produce a degenerate constant-probability model.
struct BinaryModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    bool positive_is_left = true;
    std::optional<double> degenerate_probability;

    double predict(std::span<const double> row) const;
};

struct TrainDiagnostics {
    std::vector<double> objective_trace;  // value after each accepted step
    int iterations = 0;
    bool converged = false;
};

// Minimizes the weighted negative log-likelihood plus ridge * |coefficients|^2
// by damped Newton steps with backtracking, from zero initialization. Targets
// are data.labels and must be 0/1. When only one target value carries positive
// weight the result is the Laplace-smoothed constant (n1 + 1) / (n + 2) over
// the positively weighted instances.
BinaryModel train_binary(const EncodedDataset& data,
                         const BinaryLearnerConfig& config,
                         TrainDiagnostics* diagnostics = nullptr);

// Objective and gradient of the training criterion at an arbitrary parameter
// point (coefficients..., intercept). Exposed so the optimizer can be checked
// against finite differences.
double logistic_objective(const EncodedDataset& data,
                          const BinaryLearnerConfig& config,
                          std::span<const double> params);
std::vector<double> logistic_gradient(const EncodedDataset& data,
                                      const BinaryLearnerConfig& config,
                                      std::span<const double> params);

}  // namespace nd
