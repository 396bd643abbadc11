#pragma once
// Dense complex Hermitian linear algebra for small matrices (p up to ~10).
//
// HermitianMatrix is a validated value type: construction symmetrizes the
// input to (H + H*)/2 and rejects anything whose asymmetry is larger than
// rounding noise. Everything downstream (samplers, zonal polynomials, the
// averages) takes HermitianMatrix by const reference.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvda/errors.hpp"

namespace mvda {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPivotTol = 1e-14;

class HermitianMatrix {
public:
    HermitianMatrix() = default;

    // Asymmetry tolerance is kHermitianTol scaled by max(1, largest entry
    // magnitude) so that sampler products with O(100) entries are accepted.
    explicit HermitianMatrix(const ComplexMatrix& m) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw InvalidArgument("Hermitian matrix must be square and non-empty");
        if (!m.allFinite()) throw InvalidArgument("Hermitian matrix has non-finite entries");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (asym > kHermitianTol * scale)
            throw InvalidArgument("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
        m_ = (m + m.adjoint()) * 0.5;
    }

    static HermitianMatrix identity(int p) { return HermitianMatrix(ComplexMatrix::Identity(p, p)); }
    static HermitianMatrix zero(int p) { return HermitianMatrix(ComplexMatrix::Zero(p, p)); }
    static HermitianMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                              static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return HermitianMatrix(m);
    }
    static HermitianMatrix scalar(double x) { return diagonal({x}); }

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& mat() const noexcept { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    double trace() const { return m_.trace().real(); }

    bool is_diagonal() const {
        for (Eigen::Index i = 0; i < m_.rows(); ++i)
            for (Eigen::Index j = 0; j < m_.cols(); ++j)
                if (i != j && m_(i, j) != Complex(0.0, 0.0)) return false;
        return true;
    }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix(a.m_ + b.m_);
    }
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
        return HermitianMatrix(a.m_ - b.m_);
    }
    friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix(s * a.m_); }

    friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
    }

private:
    ComplexMatrix m_;
};

// Lower-triangular T with real positive diagonal, H = T T*.
class LowerTriangularFactor {
public:
    explicit LowerTriangularFactor(ComplexMatrix l) : l_(std::move(l)) {}
    int dim() const noexcept { return static_cast<int>(l_.rows()); }
    const ComplexMatrix& mat() const noexcept { return l_; }
    ComplexMatrix reconstruct() const { return l_ * l_.adjoint(); }

private:
    ComplexMatrix l_;
};

// Fails when a pivot drops to kPivotTol times the largest diagonal entry.
inline LowerTriangularFactor cholesky(const HermitianMatrix& h) {
    const auto& a = h.mat();
    const Eigen::Index n = a.rows();
    const double max_diag = a.diagonal().real().maxCoeff();
    if (!(max_diag > 0.0)) throw NotPositiveDefinite("cholesky: non-positive diagonal");
    const double threshold = kPivotTol * max_diag;

    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > threshold))
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) + " is " + std::to_string(d));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            Complex s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return LowerTriangularFactor(std::move(l));
}

inline double logdet_abs(const HermitianMatrix& h) {
    const auto t = cholesky(h);
    double s = 0.0;
    for (int j = 0; j < t.dim(); ++j) s += std::log(t.mat()(j, j).real());
    return 2.0 * s;
}

inline bool is_pd(const HermitianMatrix& h) {
    try {
        (void)cholesky(h);
        return true;
    } catch (const NotPositiveDefinite&) {
        return false;
    }
}

struct EigenDecomposition {
    Eigen::VectorXd values;   // descending
    ComplexMatrix vectors;    // columns match values
};

inline EigenDecomposition eigh(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.mat(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NoConvergence("Hermitian eigensolver did not converge");
    // Eigen returns ascending order; flip.
    EigenDecomposition out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

inline std::vector<double> eigvals_hermitian(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.mat(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NoConvergence("Hermitian eigensolver did not converge");
    std::vector<double> v(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

namespace detail {

template <class F>
HermitianMatrix spectral_map(const HermitianMatrix& h, F&& f) {
    if (h.is_diagonal()) {
        ComplexMatrix m = ComplexMatrix::Zero(h.dim(), h.dim());
        for (int i = 0; i < h.dim(); ++i) m(i, i) = f(h(i, i).real());
        return HermitianMatrix(m);
    }
    const auto e = eigh(h);
    Eigen::VectorXd d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(e.values(i));
    return HermitianMatrix(e.vectors * d.asDiagonal() * e.vectors.adjoint());
}

}  // namespace detail

inline HermitianMatrix inv_sqrt(const HermitianMatrix& h) {
    if (!is_pd(h)) throw NotPositiveDefinite("inv_sqrt: matrix is not positive definite");
    return detail::spectral_map(h, [](double x) { return 1.0 / std::sqrt(x); });
}

// Principal square root of a positive semidefinite matrix; tiny negative
// eigenvalues from rounding are clamped to zero.
inline HermitianMatrix sqrt_psd(const HermitianMatrix& h) {
    return detail::spectral_map(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

// Inverse square root with eigenvalues floored at rel_floor * lambda_max.
// Returns true in *floored when any eigenvalue was raised.
inline HermitianMatrix inv_sqrt_floored(const HermitianMatrix& h, double rel_floor, bool* floored = nullptr) {
    bool hit = false;
    auto e = eigh(h);
    const double lmax = e.values(0);
    if (!(lmax > 0.0)) throw NotPositiveDefinite("inv_sqrt_floored: no positive eigenvalue");
    const double floor = rel_floor * lmax;
    Eigen::VectorXd d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        double x = e.values(i);
        if (x < floor) {
            x = floor;
            hit = true;
        }
        d(i) = 1.0 / std::sqrt(x);
    }
    if (floored) *floored = hit;
    return HermitianMatrix(e.vectors * d.asDiagonal() * e.vectors.adjoint());
}

// Congruence R H R* for Hermitian R, the workhorse of the samplers.
inline HermitianMatrix congruence(const HermitianMatrix& r, const HermitianMatrix& h) {
    return HermitianMatrix(r.mat() * h.mat() * r.mat());
}

// |det(M)| for a general complex matrix via LU; used by Monte Carlo integrands
// that must not throw on near-singular samples.
inline double abs_det(const ComplexMatrix& m) { return std::abs(m.partialPivLu().determinant()); }

// Real part of tr(A B); exact for Hermitian A, B up to rounding.
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
    return (a.mat().cwiseProduct(b.mat().transpose())).sum().real();
}

}  // namespace mvda
