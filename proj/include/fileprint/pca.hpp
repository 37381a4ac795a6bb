#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fileprint/linalg.hpp"

namespace fileprint {

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // sorted descending
    Matrix eigenvectors;              // orthonormal columns; column i pairs with eigenvalues[i]
};

// Linear projection stage fitted on pooled training vectors.
struct PcaModel {
    std::vector<double> mean;         // dataset mean, dimension d
    Matrix basis;                     // k x d; rows are the top-k eigenvectors
    std::vector<double> eigenvalues;  // all d eigenvalues, descending

    std::size_t input_dim() const { return mean.size(); }
    std::size_t retained_dim() const { return basis.rows(); }

    bool operator==(const PcaModel&) const = default;
};

// S = (1/N) sum_n (x_n - mean)(x_n - mean)^T over the rows of data.
// Symmetric and positive semi-definite up to rounding.
Matrix scatter_matrix(const Matrix& data);

// Cyclic Jacobi rotations in row-major sweep order. Eigenvalues come back
// sorted descending (stable under ties); each eigenvector is flipped so its
// largest-magnitude component is non-negative, which makes the decomposition
// bit-reproducible. Throws NotSymmetric on asymmetric input and NotConverged
// when the off-diagonal Frobenius norm is still above off_diag_tol after
// max_sweeps sweeps.
EigenDecomposition jacobi_eigendecompose(const Matrix& s, double off_diag_tol = 1e-10,
                                         int max_sweeps = 100);

// Information lost when keeping k components: half the sum of the discarded
// eigenvalues. Expects eigenvalues sorted descending; throws OutOfRange if
// k exceeds their count.
double truncation_error(std::span<const double> eigenvalues, std::size_t k);

// Smallest k whose truncation error is within budget. With nonnegative
// eigenvalues the error at k = d is zero, so the result is at most d.
std::size_t min_components_for_error(std::span<const double> eigenvalues, double budget);

// Mean, scatter eigendecomposition, top-k basis. Requires 1 <= k <= d and at
// least two samples.
PcaModel fit_pca(const Matrix& data, std::size_t k);

// z = basis * (x - mean)
std::vector<double> project(const PcaModel& model, std::span<const double> x);

// x_hat = mean + basis^T * z
std::vector<double> reconstruct(const PcaModel& model, std::span<const double> z);

}  // namespace fileprint
