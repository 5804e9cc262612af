#pragma once

#include <Eigen/Dense>

namespace thermimic {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
// max_iterations <= 0 selects 3 * cols; tolerance <= 0 selects
// 10 * eps * ||A||_1 * max(rows, cols).
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0,
                double tolerance = 0.0);

}  // namespace thermimic
