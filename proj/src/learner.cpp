#include "nd/learner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nd/errors.hpp"

namespace nd {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double clipped_log(double p) {
    return std::log(std::clamp(p, 1e-12, 1.0 - 1e-12));
}

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<const RowMatrix>;

void check_targets(const EncodedDataset& data) {
    for (int y : data.labels)
        if (y != 0 && y != 1)
            throw UsageError("binary learner targets must be 0 or 1");
}

double objective_at(const EncodedDataset& data, const BinaryLearnerConfig& cfg,
                    const Eigen::VectorXd& theta) {
    const std::size_t d = data.width;
    double nll = 0.0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double w = data.weights[i];
        if (w == 0.0) continue;
        const auto x = data.row(i);
        double z = theta[static_cast<Eigen::Index>(d)];
        for (std::size_t j = 0; j < d; ++j)
            z += theta[static_cast<Eigen::Index>(j)] * x[j];
        const double p = sigmoid(z);
        nll -= w * (data.labels[i] == 1 ? clipped_log(p) : clipped_log(1.0 - p));
    }
    double penalty = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        penalty += theta[static_cast<Eigen::Index>(j)] *
                   theta[static_cast<Eigen::Index>(j)];
    return nll + cfg.ridge * penalty;
}

}  // namespace

void BinaryLearnerConfig::validate() const {
    if (ridge < 0.0) throw UsageError("ridge must be >= 0");
    if (max_iterations < 1) throw UsageError("max_iterations must be >= 1");
    if (tolerance <= 0.0) throw UsageError("tolerance must be > 0");
}

double BinaryModel::predict(std::span<const double> row) const {
    if (degenerate_probability.has_value()) return *degenerate_probability;
    if (row.size() != coefficients.size())
        throw UsageError("instance width " + std::to_string(row.size()) +
                         " does not match model width " +
                         std::to_string(coefficients.size()));
    double z = intercept;
    for (std::size_t j = 0; j < row.size(); ++j) z += coefficients[j] * row[j];
    return sigmoid(z);
}

BinaryModel train_binary(const EncodedDataset& data,
                         const BinaryLearnerConfig& cfg,
                         TrainDiagnostics* diagnostics) {
    cfg.validate();
    check_targets(data);

    std::size_t n_weighted = 0, n_positive = 0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        if (data.weights[i] < 0.0) throw UsageError("negative instance weight");
        if (data.weights[i] > 0.0) {
            ++n_weighted;
            if (data.labels[i] == 1) ++n_positive;
        }
    }
    if (n_positive == 0 || n_positive == n_weighted) {
        BinaryModel m;
        m.degenerate_probability = (static_cast<double>(n_positive) + 1.0) /
                                   (static_cast<double>(n_weighted) + 2.0);
        return m;
    }

    const auto d = static_cast<Eigen::Index>(data.width);
    MatrixMap x(data.matrix.data(), static_cast<Eigen::Index>(data.n_rows), d);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
    double obj = objective_at(data, cfg, theta);
    if (diagnostics) {
        diagnostics->objective_trace.push_back(obj);
        diagnostics->converged = false;
        diagnostics->iterations = 0;
    }

    Eigen::VectorXd grad(d + 1), delta(d + 1);
    Eigen::MatrixXd hessian(d + 1, d + 1);
    Eigen::VectorXd p(static_cast<Eigen::Index>(data.n_rows));
    Eigen::VectorXd curvature(static_cast<Eigen::Index>(data.n_rows));

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Gradient and curvature weights at the current point.
        Eigen::VectorXd z =
            (x * theta.head(d)).array() + theta[d];
        Eigen::VectorXd residual(static_cast<Eigen::Index>(data.n_rows));
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            p[i] = sigmoid(z[i]);
            const double w = data.weights[static_cast<std::size_t>(i)];
            const double y = data.labels[static_cast<std::size_t>(i)];
            residual[i] = w * (p[i] - y);
            curvature[i] = w * p[i] * (1.0 - p[i]);
        }
        grad.head(d) = x.transpose() * residual;
        grad.head(d) += 2.0 * cfg.ridge * theta.head(d);
        grad[d] = residual.sum();

        if (grad.lpNorm<Eigen::Infinity>() <= cfg.tolerance) {
            if (diagnostics) diagnostics->converged = true;
            break;
        }

        hessian.topLeftCorner(d, d) = x.transpose() * curvature.asDiagonal() * x;
        hessian.topLeftCorner(d, d) +=
            2.0 * cfg.ridge * Eigen::MatrixXd::Identity(d, d);
        hessian.topRightCorner(d, 1) = x.transpose() * curvature;
        hessian.bottomLeftCorner(1, d) = hessian.topRightCorner(d, 1).transpose();
        hessian(d, d) = curvature.sum();

        // Levenberg damping until the solve yields a descent direction.
        double damping = 0.0;
        for (;;) {
            Eigen::MatrixXd h = hessian;
            if (damping > 0.0)
                h += damping * Eigen::MatrixXd::Identity(d + 1, d + 1);
            Eigen::LDLT<Eigen::MatrixXd> solver(h);
            delta = solver.solve(-grad);
            if (solver.info() == Eigen::Success && grad.dot(delta) < 0.0) break;
            damping = damping == 0.0 ? 1e-8 : damping * 10.0;
            if (damping > 1e12)
                throw InternalError("logistic optimizer cannot find a descent direction");
        }

        // Backtracking line search (Armijo).
        const double slope = grad.dot(delta);
        double step = 1.0;
        double next_obj = obj;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            next_obj = objective_at(data, cfg, theta + step * delta);
            if (next_obj <= obj + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || next_obj >= obj) break;  // stalled at numeric precision
        theta += step * delta;
        obj = next_obj;
        if (diagnostics) {
            diagnostics->objective_trace.push_back(obj);
            diagnostics->iterations = iter + 1;
        }
    }

    BinaryModel m;
    m.coefficients.assign(theta.data(), theta.data() + d);
    m.intercept = theta[d];
    return m;
}

double logistic_objective(const EncodedDataset& data,
                          const BinaryLearnerConfig& cfg,
                          std::span<const double> params) {
    if (params.size() != data.width + 1)
        throw UsageError("parameter vector must have width + 1 entries");
    Eigen::VectorXd theta(static_cast<Eigen::Index>(params.size()));
    for (std::size_t j = 0; j < params.size(); ++j)
        theta[static_cast<Eigen::Index>(j)] = params[j];
    return objective_at(data, cfg, theta);
}

std::vector<double> logistic_gradient(const EncodedDataset& data,
                                      const BinaryLearnerConfig& cfg,
                                      std::span<const double> params) {
    if (params.size() != data.width + 1)
        throw UsageError("parameter vector must have width + 1 entries");
    const std::size_t d = data.width;
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        const double w = data.weights[i];
        if (w == 0.0) continue;
        const auto x = data.row(i);
        double z = params[d];
        for (std::size_t j = 0; j < d; ++j) z += params[j] * x[j];
        const double r = w * (sigmoid(z) - data.labels[i]);
        for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[j];
        grad[d] += r;
    }
    for (std::size_t j = 0; j < d; ++j) grad[j] += 2.0 * cfg.ridge * params[j];
    return grad;
}

}  // namespace nd
