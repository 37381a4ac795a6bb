#include "fileprint/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fileprint/errors.hpp"

namespace fileprint {

namespace {

std::vector<double> column_means(const Matrix& data) {
    std::vector<double> mean(data.cols(), 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += row[c];
    }
    const double inv = 1.0 / static_cast<double>(data.rows());
    for (double& m : mean) m *= inv;
    return mean;
}

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) sum += a(i, j) * a(i, j);
    return std::sqrt(2.0 * sum);
}

}  // namespace

Matrix scatter_matrix(const Matrix& data) {
    if (data.rows() == 0) throw InsufficientSamples("scatter matrix needs at least one sample");
    const std::size_t d = data.cols();
    const std::vector<double> mean = column_means(data);

    Matrix s(d, d);
    std::vector<double> centered(d);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < d; ++c) centered[c] = row[c] - mean[c];
        for (std::size_t i = 0; i < d; ++i) {
            const double ci = centered[i];
            if (ci == 0.0) continue;
            for (std::size_t j = i; j < d; ++j) s(i, j) += ci * centered[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(data.rows());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            s(i, j) *= inv;
            s(j, i) = s(i, j);
        }
    return s;
}

EigenDecomposition jacobi_eigendecompose(const Matrix& s, double off_diag_tol, int max_sweeps) {
    const std::size_t n = s.rows();
    if (s.cols() != n)
        throw NotSymmetric("matrix is " + std::to_string(n) + "x" + std::to_string(s.cols()));

    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) max_abs = std::max(max_abs, std::abs(s(i, j)));
    const double sym_tol = 1e-12 * std::max(1.0, max_abs);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > sym_tol)
                throw NotSymmetric("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") differs from its transpose");

    // Work on an exactly symmetric copy.
    Matrix a = s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = v;
        }
    Matrix v = Matrix::identity(n);

    bool converged = off_diagonal_norm(a) <= off_diag_tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;

                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 1.0 / (2.0 * tau);
                } else if (tau >= 0.0) {
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                } else {
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = a(p, i) = c * aip - sn * aiq;
                    a(i, q) = a(q, i) = sn * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        }
        converged = off_diagonal_norm(a) <= off_diag_tol;
    }
    if (!converged)
        throw NotConverged("off-diagonal norm " + std::to_string(off_diagonal_norm(a)) +
                           " above " + std::to_string(off_diag_tol) + " after " +
                           std::to_string(max_sweeps) + " sweeps");

    // Stable descending order keeps tied eigenvalues in sweep order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src);

        std::size_t peak = 0;
        double peak_abs = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > peak_abs) {
                peak_abs = mag;
                peak = i;
            }
        }
        const double sign = v(peak, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * v(i, src);
    }
    return out;
}

double truncation_error(std::span<const double> eigenvalues, std::size_t k) {
    if (k > eigenvalues.size())
        throw OutOfRange("k = " + std::to_string(k) + " exceeds " +
                         std::to_string(eigenvalues.size()) + " eigenvalues");
    double tail = 0.0;
    for (std::size_t i = k; i < eigenvalues.size(); ++i) tail += eigenvalues[i];
    return 0.5 * tail;
}

std::size_t min_components_for_error(std::span<const double> eigenvalues, double budget) {
    for (std::size_t k = 0; k <= eigenvalues.size(); ++k)
        if (truncation_error(eigenvalues, k) <= budget) return k;
    return eigenvalues.size();
}

PcaModel fit_pca(const Matrix& data, std::size_t k) {
    if (data.rows() < 2) throw InsufficientSamples("need at least two samples to fit");
    const std::size_t d = data.cols();
    if (k < 1 || k > d)
        throw OutOfRange("k = " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");

    const Matrix s = scatter_matrix(data);
    const EigenDecomposition eig = jacobi_eigendecompose(s);

    PcaModel model;
    model.mean = column_means(data);
    model.eigenvalues = eig.eigenvalues;
    model.basis = Matrix(k, d);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < d; ++c) model.basis(r, c) = eig.eigenvectors(c, r);
    return model;
}

std::vector<double> project(const PcaModel& model, std::span<const double> x) {
    const std::size_t d = model.input_dim();
    if (x.size() != d)
        throw DimensionMismatch("input has " + std::to_string(x.size()) + " dimensions, expected " +
                                std::to_string(d));
    std::vector<double> z(model.retained_dim(), 0.0);
    for (std::size_t r = 0; r < z.size(); ++r) {
        const auto basis_row = model.basis.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += basis_row[c] * (x[c] - model.mean[c]);
        z[r] = acc;
    }
    return z;
}

std::vector<double> reconstruct(const PcaModel& model, std::span<const double> z) {
    const std::size_t k = model.retained_dim();
    if (z.size() != k)
        throw DimensionMismatch("coefficient vector has " + std::to_string(z.size()) +
                                " dimensions, expected " + std::to_string(k));
    std::vector<double> x(model.mean.begin(), model.mean.end());
    for (std::size_t r = 0; r < k; ++r) {
        const auto basis_row = model.basis.row(r);
        const double w = z[r];
        for (std::size_t c = 0; c < x.size(); ++c) x[c] += w * basis_row[c];
    }
    return x;
}

}  // namespace fileprint
