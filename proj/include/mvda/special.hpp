#pragma once
// Scalar and matrix-argument special functions.
//
// Zonal polynomials of complex matrix argument are evaluated as
//   C_kappa(X) = f^kappa * s_kappa(eig X)
// where f^kappa counts standard Young tableaux and s_kappa is the Schur
// polynomial. This is the scaling for which sum_{|kappa|=m} C_kappa(X)
// equals (tr X)^m, so that exp(tr X) = sum_m sum_kappa C_kappa(X) / m!.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvda/errors.hpp"
#include "mvda/linalg.hpp"

namespace mvda {

// ---------------------------------------------------------------------------
// Log-gamma
// ---------------------------------------------------------------------------

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosCoef[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace detail

// Principal-branch log Gamma for complex arguments away from the poles.
inline Complex lgamma_complex(Complex z) {
    using std::numbers::pi;
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    Complex x = detail::kLanczosCoef[0];
    for (int i = 1; i < 9; ++i) x += detail::kLanczosCoef[i] / (z + static_cast<double>(i));
    const Complex t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log Gamma for real positive arguments.
inline double lgamma_pos(double x) { return std::lgamma(x); }

// ---------------------------------------------------------------------------
// Complex matrix-variate gamma
// ---------------------------------------------------------------------------

struct GammaPArgs {
    int p = 1;
    Complex alpha{1.0, 0.0};
};

inline std::string gamma_p_condition(int p) { return "Re(alpha) > p-1 = " + std::to_string(p - 1); }

// log of pi^{p(p-1)/2} Gamma(a) Gamma(a-1) ... Gamma(a-p+1).
inline Complex gamma_p_ln(const GammaPArgs& args) {
    if (args.p < 1) throw InvalidArgument("gamma_p_ln: p must be >= 1");
    if (!(args.alpha.real() > args.p - 1)) throw DomainError(gamma_p_condition(args.p));
    const double pp = static_cast<double>(args.p);
    Complex s = 0.5 * pp * (pp - 1.0) * std::log(std::numbers::pi);
    const bool real = args.alpha.imag() == 0.0;
    for (int j = 0; j < args.p; ++j) {
        const Complex z = args.alpha - static_cast<double>(j);
        s += real ? Complex(lgamma_pos(z.real()), 0.0) : lgamma_complex(z);
    }
    return s;
}

inline double gamma_p_ln(int p, double alpha) { return gamma_p_ln(GammaPArgs{p, Complex(alpha, 0.0)}).real(); }

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

class Partition {
public:
    Partition() = default;
    // Trailing zeros are dropped; throws if parts are not non-increasing.
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0) throw InvalidArgument("partition parts must be non-negative");
            if (i > 0 && parts_[i] > parts_[i - 1]) throw InvalidArgument("partition parts must be non-increasing");
        }
        weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
    }

    const std::vector<int>& parts() const noexcept { return parts_; }
    int weight() const noexcept { return weight_; }
    int length() const noexcept { return static_cast<int>(parts_.size()); }
    int operator[](int i) const { return i < length() ? parts_[i] : 0; }

    Partition conjugate() const {
        std::vector<int> c(parts_.empty() ? 0 : parts_.front(), 0);
        for (int r : parts_)
            for (int j = 0; j < r; ++j) ++c[j];
        return Partition(std::move(c));
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
        return s + ")";
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

namespace detail {

inline void partitions_rec(int remaining, int max_part, int slots, std::vector<int>& cur, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (slots == 0) return;
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        // Remaining slots must be able to hold what is left.
        if (static_cast<long long>(part) * slots < remaining) break;
        cur.push_back(part);
        partitions_rec(remaining - part, part, slots - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

// All partitions of m with at most max_len parts, lexicographically decreasing.
inline std::vector<Partition> partitions_of(int m, int max_len) {
    if (m < 0 || max_len < 1) throw InvalidArgument("partitions_of: need m >= 0 and max_len >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    detail::partitions_rec(m, m, max_len, cur, out);
    return out;
}

// Number of standard Young tableaux of shape kappa (hook-length formula).
// Exact 128-bit integer arithmetic through weight 33, log space beyond.
inline double standard_tableaux_count(const Partition& kappa) {
    const int m = kappa.weight();
    const Partition conj = kappa.conjugate();
    if (m <= 33) {
        unsigned __int128 num = 1, den = 1;
        for (int i = 2; i <= m; ++i) num *= static_cast<unsigned>(i);
        for (int i = 0; i < kappa.length(); ++i)
            for (int j = 0; j < kappa[i]; ++j) den *= static_cast<unsigned>(kappa[i] - j + conj[j] - i - 1);
        return static_cast<double>(num / den);
    }
    double lg = std::lgamma(m + 1.0);
    for (int i = 0; i < kappa.length(); ++i)
        for (int j = 0; j < kappa[i]; ++j) lg -= std::log(static_cast<double>(kappa[i] - j + conj[j] - i - 1));
    return std::round(std::exp(lg));
}

// ---------------------------------------------------------------------------
// Pochhammer symbols
// ---------------------------------------------------------------------------

// (a)_m = a (a+1) ... (a+m-1), (a)_0 = 1.
inline Complex rising(Complex a, int m) {
    Complex r = 1.0;
    for (int i = 0; i < m; ++i) r *= a + static_cast<double>(i);
    return r;
}

// [a]_M = prod_j (a - j + 1)_{m_j}, j = 1..p.
inline Complex pochhammer_gen(Complex a, const Partition& kappa) {
    Complex r = 1.0;
    for (int j = 0; j < kappa.length(); ++j) r *= rising(a - static_cast<double>(j), kappa[j]);
    return r;
}

// ---------------------------------------------------------------------------
// Schur polynomials and zonal polynomials
// ---------------------------------------------------------------------------

// Complete (h_k) and elementary (e_k) symmetric polynomials of a fixed set of
// variables, tabulated up to a maximum degree. Schur values come from the
// Jacobi-Trudi determinant in h, or its dual in e for tall shapes, whichever
// is the smaller determinant.
class SymmetricTable {
public:
    SymmetricTable(std::span<const double> vars, int max_degree)
        : n_(static_cast<int>(vars.size())), h_(max_degree + 1, 0.0), e_(max_degree + 1, 0.0) {
        h_[0] = 1.0;
        e_[0] = 1.0;
        for (double x : vars) {
            // Multiply generating functions by 1/(1 - x t) and (1 + x t).
            for (int k = 1; k <= max_degree; ++k) h_[k] += x * h_[k - 1];
            for (int k = std::min(max_degree, n_); k >= 1; --k) e_[k] += x * e_[k - 1];
        }
    }

    int variables() const noexcept { return n_; }
    int max_degree() const noexcept { return static_cast<int>(h_.size()) - 1; }
    double h(int k) const { return k < 0 ? 0.0 : h_.at(static_cast<std::size_t>(k)); }
    double e(int k) const { return (k < 0 || k > n_) ? 0.0 : e_.at(static_cast<std::size_t>(k)); }

    double schur(const Partition& kappa) const {
        if (kappa.length() > n_) return 0.0;
        if (kappa.weight() > max_degree()) throw InvalidArgument("schur: partition weight exceeds table degree");
        const Partition conj = kappa.conjugate();
        if (kappa.length() <= conj.length()) return jacobi_trudi(kappa, [this](int k) { return h(k); });
        return jacobi_trudi(conj, [this](int k) { return e(k); });
    }

private:
    template <class Coef>
    static double jacobi_trudi(const Partition& shape, Coef&& coef) {
        const int l = shape.length();
        if (l == 0) return 1.0;
        if (l == 1) return coef(shape[0]);
        Eigen::MatrixXd m(l, l);
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j) m(i, j) = coef(shape[i] - i + j);
        return m.partialPivLu().determinant();
    }

    int n_;
    std::vector<double> h_;
    std::vector<double> e_;
};

inline double schur_eval(const Partition& kappa, std::span<const double> lambdas) {
    if (kappa.length() > static_cast<int>(lambdas.size())) return 0.0;
    return SymmetricTable(lambdas, kappa.weight()).schur(kappa);
}

inline double zonal_c(const Partition& kappa, const HermitianMatrix& x) {
    const auto lambdas = eigvals_hermitian(x);
    return standard_tableaux_count(kappa) * schur_eval(kappa, lambdas);
}

// ---------------------------------------------------------------------------
// 1F1 of Hermitian matrix argument
// ---------------------------------------------------------------------------

struct TruncationPolicy {
    int max_order = 25;
    double rel_stop = 1e-12;
    int consecutive_orders = 3;

    void validate() const {
        if (max_order < 0) throw InvalidArgument("TruncationPolicy: max_order must be >= 0");
        if (!(rel_stop > 0.0)) throw InvalidArgument("TruncationPolicy: rel_stop must be > 0");
        if (consecutive_orders < 1) throw InvalidArgument("TruncationPolicy: consecutive_orders must be >= 1");
    }
};

struct Hyp1F1Result {
    Complex value;
    int order_reached = 0;
    double last_increment = 0.0;
    bool converged = false;  // false means the early-stop test never fired
};

// Partial sum over partition weights m <= policy.max_order of
//   [a]_kappa / [c]_kappa * C_kappa(A) / m!.
inline Hyp1F1Result hyp1f1_matrix(Complex a, Complex c, const HermitianMatrix& A,
                                  const TruncationPolicy& policy = {}) {
    policy.validate();
    const int p = A.dim();
    const auto lambdas = eigvals_hermitian(A);
    const SymmetricTable table(lambdas, policy.max_order);
    const double pole_tol = 1e-12 * std::max(1.0, std::abs(c));

    Hyp1F1Result r;
    Complex sum = 0.0;
    double inv_factorial = 1.0;
    int quiet = 0;
    for (int m = 0; m <= policy.max_order; ++m) {
        if (m > 0) inv_factorial /= static_cast<double>(m);
        Complex inc = 0.0;
        for (const auto& kappa : partitions_of(m, p)) {
            for (int j = 0; j < kappa.length(); ++j)
                for (int i = 0; i < kappa[j]; ++i)
                    if (std::abs(c - static_cast<double>(j) + static_cast<double>(i)) <= pole_tol)
                        throw PochhammerPole("[c]_kappa vanishes for kappa = " + kappa.to_string());
            const double zonal = standard_tableaux_count(kappa) * table.schur(kappa);
            inc += pochhammer_gen(a, kappa) / pochhammer_gen(c, kappa) * zonal;
        }
        inc *= inv_factorial;
        sum += inc;
        r.order_reached = m;
        r.last_increment = std::abs(inc);
        if (m > 0 && std::abs(inc) <= policy.rel_stop * std::abs(sum)) {
            if (++quiet >= policy.consecutive_orders) {
                r.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    r.value = sum;
    return r;
}

// ---------------------------------------------------------------------------
// Classical power mean
// ---------------------------------------------------------------------------

// [sum_j w_j z_j^b]^{1/b}; the geometric mean prod z_j^{w_j} at b = 0.
inline double power_mean(std::span<const double> w, std::span<const double> z, double b) {
    if (w.empty() || w.size() != z.size()) throw BadWeights("weights and values must be non-empty and equal length");
    double wsum = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0)) throw BadWeights("every weight must be > 0");
        wsum += wi;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw BadWeights("weights must sum to 1");
    for (double zi : z)
        if (!(zi > 0.0)) throw BadSupport("every value must be > 0");

    double mean_log = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) mean_log += w[j] * std::log(z[j]);
    if (std::abs(b) < 1e-8) {
        // f(b) = G exp(b Var_w(log z) / 2 + O(b^2))
        double var = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) var += w[j] * std::pow(std::log(z[j]) - mean_log, 2);
        return std::exp(mean_log + 0.5 * b * var);
    }
    double shift = -INFINITY;
    for (double zi : z) shift = std::max(shift, b * std::log(zi));
    double acc = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) acc += w[j] * std::exp(b * std::log(z[j]) - shift);
    return std::exp((shift + std::log(acc)) / b);
}

}  // namespace mvda
