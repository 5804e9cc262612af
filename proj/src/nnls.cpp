#include "thermimic/nnls.hpp"

#include "thermimic/error.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace thermimic {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (passive[j]) {
            cols.push_back(j);
        }
    }
    Eigen::VectorXd s = Eigen::VectorXd::Zero(a.cols());
    if (cols.empty()) {
        return s;
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    }
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        s(cols[k]) = z(static_cast<Eigen::Index>(k));
    }
    return s;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations, double tolerance) {
    if (a.rows() != b.size()) {
        throw InvalidArgument("nnls: design matrix and target have different row counts");
    }
    const Eigen::Index n = a.cols();
    if (max_iterations <= 0) {
        max_iterations = static_cast<int>(3 * std::max<Eigen::Index>(n, 1));
    }
    if (tolerance <= 0.0) {
        const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
        tolerance = 10.0 * std::numeric_limits<double>::epsilon() * norm1 *
                    static_cast<double>(std::max(a.rows(), n));
    }

    NnlsResult result;
    result.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    Eigen::VectorXd& x = result.x;
    Eigen::VectorXd w = a.transpose() * (b - a * x);

    while (result.iterations < max_iterations) {
        Eigen::Index best = -1;
        double best_w = tolerance;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[j] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) {
            result.converged = true;
            break;
        }
        passive[best] = true;

        // inner loop: step back toward feasibility until the passive solve is positive
        while (true) {
            ++result.iterations;
            Eigen::VectorXd s = solve_passive(a, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && s(j) <= 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                x = s;
                break;
            }
            double step = 1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && s(j) <= 0.0) {
                    step = std::min(step, x(j) / (x(j) - s(j)));
                }
            }
            x += step * (s - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && x(j) <= tolerance) {
                    passive[j] = false;
                    x(j) = 0.0;
                }
            }
            if (result.iterations >= max_iterations) {
                break;
            }
        }
        w = a.transpose() * (b - a * x);
    }
    result.residual_norm = (a * x - b).norm();
    return result;
}

}  // namespace thermimic
