#include "fileprint/pca.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"
#include "test_util.hpp"

using namespace fileprint;

namespace {

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
    Matrix m(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = rng.uniform(-scale, scale);
    return m;
}

Matrix random_symmetric(Rng& rng, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
    return m;
}

// Independent quadratic-form tally of S = (1/N) sum (x - mean)(x - mean)^T.
Matrix scatter_by_hand(const Matrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c) / static_cast<double>(n);

    Matrix s(d, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                s(i, j) += (data(r, i) - mean[i]) * (data(r, j) - mean[j]) /
                           static_cast<double>(n);
    return s;
}

double frobenius(const Matrix& m) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) sum += m(r, c) * m(r, c);
    return std::sqrt(sum);
}

// max |(S Phi - Phi Lambda)| relative to ||S||_F.
double eigen_residual(const Matrix& s, const EigenDecomposition& eig) {
    const std::size_t n = s.rows();
    double worst = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double sv = 0.0;
            for (std::size_t j = 0; j < n; ++j) sv += s(i, j) * eig.eigenvectors(j, col);
            worst = std::max(worst,
                             std::abs(sv - eig.eigenvalues[col] * eig.eigenvectors(i, col)));
        }
    }
    return worst / std::max(frobenius(s), 1.0);
}

double orthonormality_defect(const Matrix& v) {
    const std::size_t n = v.rows();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += v(i, a) * v(i, b);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

TEST_CASE("scatter_matrix equals the brute-force definition") {
    Rng rng(21);
    const Matrix data = random_matrix(rng, 37, 9);
    const Matrix s = scatter_matrix(data);
    const Matrix expected = scatter_by_hand(data);

    REQUIRE(s.rows() == 9);
    REQUIRE(s.cols() == 9);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            CHECK(s(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-12));
}

TEST_CASE("scatter_matrix is symmetric and positive semidefinite") {
    Rng rng(22);
    const Matrix s = scatter_matrix(random_matrix(rng, 20, 6));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(s(i, j) == s(j, i));

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(6);
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        double quad = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) quad += x[i] * s(i, j) * x[j];
        CHECK(quad >= -1e-12);
    }
}

TEST_CASE("scatter_matrix needs at least one row") {
    CHECK_THROWS_AS(scatter_matrix(Matrix(0, 4)), InsufficientSamples);
}

TEST_CASE("jacobi solves a known 2x2 system") {
    Matrix s = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const EigenDecomposition eig = jacobi_eigendecompose(s);

    REQUIRE(eig.eigenvalues.size() == 2);
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    const double r = 1.0 / std::sqrt(2.0);
    CHECK(eig.eigenvectors(0, 0) == doctest::Approx(r));
    CHECK(eig.eigenvectors(1, 0) == doctest::Approx(r));
    // Sign rule: the largest-magnitude component (tie -> lowest index) is
    // non-negative.
    CHECK(eig.eigenvectors(0, 1) == doctest::Approx(r));
    CHECK(eig.eigenvectors(1, 1) == doctest::Approx(-r));
}

TEST_CASE("jacobi reproduces a diagonal matrix's entries sorted") {
    Matrix s(4, 4);
    s(0, 0) = -1.0;
    s(1, 1) = 5.0;
    s(2, 2) = 2.0;
    s(3, 3) = 2.0;
    const EigenDecomposition eig = jacobi_eigendecompose(s);
    CHECK(eig.eigenvalues == std::vector<double>{5.0, 2.0, 2.0, -1.0});
    // Stable sort keeps the original order of the two equal eigenvalues.
    CHECK(eig.eigenvectors(2, 1) == 1.0);
    CHECK(eig.eigenvectors(3, 2) == 1.0);
}

TEST_CASE("jacobi satisfies the eigen equation on random symmetric matrices") {
    Rng rng(23);
    for (const std::size_t n : {2u, 3u, 5u, 8u, 13u, 21u}) {
        const Matrix s = random_symmetric(rng, n);
        const EigenDecomposition eig = jacobi_eigendecompose(s);

        CHECK(eigen_residual(s, eig) < 1e-9);
        CHECK(orthonormality_defect(eig.eigenvectors) < 1e-10);
        CHECK(std::is_sorted(eig.eigenvalues.rbegin(), eig.eigenvalues.rend()));

        // Trace is preserved by similarity transforms.
        double trace = 0.0;
        double lambda_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += s(i, i);
            lambda_sum += eig.eigenvalues[i];
        }
        CHECK(trace == doctest::Approx(lambda_sum).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("jacobi is bit-reproducible") {
    Rng rng(24);
    const Matrix s = random_symmetric(rng, 12);
    const EigenDecomposition a = jacobi_eigendecompose(s);
    const EigenDecomposition b = jacobi_eigendecompose(s);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("jacobi rejects bad input") {
    CHECK_THROWS_AS(jacobi_eigendecompose(Matrix(3, 4)), NotSymmetric);

    Matrix asym = Matrix::from_rows({{1.0, 2.0}, {0.5, 1.0}});
    CHECK_THROWS_AS(jacobi_eigendecompose(asym), NotSymmetric);

    Rng rng(25);
    const Matrix s = random_symmetric(rng, 6);
    CHECK_THROWS_AS(jacobi_eigendecompose(s, 1e-10, 0), NotConverged);
}

TEST_CASE("truncation_error is half the discarded eigenvalue mass") {
    const std::vector<double> lambda = {4.0, 2.0, 1.0, 0.5};
    CHECK(truncation_error(lambda, 0) == doctest::Approx(3.75));
    CHECK(truncation_error(lambda, 1) == doctest::Approx(1.75));
    CHECK(truncation_error(lambda, 2) == doctest::Approx(0.75));
    CHECK(truncation_error(lambda, 3) == doctest::Approx(0.25));
    CHECK(truncation_error(lambda, 4) == 0.0);
    CHECK_THROWS_AS(truncation_error(lambda, 5), OutOfRange);
}

TEST_CASE("min_components_for_error finds the smallest adequate k") {
    const std::vector<double> lambda = {4.0, 2.0, 1.0, 1.0};
    // E_k series: 4, 2, 1, 0.5, 0.
    CHECK(min_components_for_error(lambda, 4.0) == 0);
    CHECK(min_components_for_error(lambda, 2.5) == 1);
    CHECK(min_components_for_error(lambda, 1.0) == 2);
    CHECK(min_components_for_error(lambda, 0.6) == 3);
    CHECK(min_components_for_error(lambda, 0.0) == 4);
}

TEST_CASE("mean squared reconstruction error equals twice the truncation error") {
    Rng rng(26);
    const std::size_t n = 120;
    const std::size_t d = 10;
    const Matrix data = random_matrix(rng, n, d);

    for (std::size_t k = 1; k <= d; ++k) {
        const PcaModel model = fit_pca(data, k);
        double mse = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const std::vector<double> rec = reconstruct(model, project(model, data.row(r)));
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = data(r, c) - rec[c];
                mse += diff * diff;
            }
        }
        mse /= static_cast<double>(n);

        const double expected = 2.0 * truncation_error(model.eigenvalues, k);
        if (expected > 1e-12)
            CHECK(mse == doctest::Approx(expected).epsilon(1e-6));
        else
            CHECK(mse <= 1e-10);
    }
}

TEST_CASE("projection of the dataset is centered and decorrelated") {
    Rng rng(27);
    const Matrix data = random_matrix(rng, 80, 6);
    const PcaModel model = fit_pca(data, 6);

    Matrix projected(data.rows(), 6);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const std::vector<double> z = project(model, data.row(r));
        for (std::size_t c = 0; c < 6; ++c) projected(r, c) = z[c];
    }
    const Matrix s = scatter_matrix(projected);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            if (i == j)
                CHECK(s(i, j) == doctest::Approx(model.eigenvalues[i]).epsilon(1e-8));
            else
                CHECK(std::abs(s(i, j)) < 1e-9);
        }
}

TEST_CASE("fit_pca validates its arguments") {
    Rng rng(28);
    const Matrix data = random_matrix(rng, 10, 4);
    CHECK_THROWS_AS(fit_pca(data, 0), OutOfRange);
    CHECK_THROWS_AS(fit_pca(data, 5), OutOfRange);
    CHECK_THROWS_AS(fit_pca(random_matrix(rng, 1, 4), 2), InsufficientSamples);
}

TEST_CASE("project and reconstruct check dimensions") {
    Rng rng(29);
    const PcaModel model = fit_pca(random_matrix(rng, 12, 5), 3);
    CHECK(project(model, std::vector<double>(5, 0.0)).size() == 3);
    CHECK(reconstruct(model, std::vector<double>(3, 0.0)).size() == 5);
    CHECK_THROWS_AS(project(model, std::vector<double>(4, 0.0)), DimensionMismatch);
    CHECK_THROWS_AS(reconstruct(model, std::vector<double>(5, 0.0)), DimensionMismatch);
}
