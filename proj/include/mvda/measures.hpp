#pragma once
// Samplers for the complex matrix-variate gamma law and the Dirichlet
// measures built from it.
//
// Type-1: draw W_1..W_{k+1} ~ matrix-gamma(alpha_j), S = sum W_j,
//         X_j = S^{-1/2} W_j S^{-1/2}.
// Type-2: X_j = W_{k+1}^{-1/2} W_j W_{k+1}^{-1/2}.
// Rectangular (p = 1): the Hermitian forms u_j = X_j^* B_j X_j follow a
//         scalar Dirichlet with shapes (alpha_j + n_j, alpha_{k+1}), so they
//         are drawn directly in u-space.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mvda/errors.hpp"
#include "mvda/linalg.hpp"
#include "mvda/rng.hpp"

namespace mvda {

enum class MeasureKind { type1, type2, rect_type1_p1, rect_type2_p1 };

inline std::string to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::type1: return "type1";
        case MeasureKind::type2: return "type2";
        case MeasureKind::rect_type1_p1: return "rect_type1_p1";
        case MeasureKind::rect_type2_p1: return "rect_type2_p1";
    }
    return "?";
}

inline MeasureKind measure_kind_from_string(const std::string& s) {
    if (s == "type1") return MeasureKind::type1;
    if (s == "type2") return MeasureKind::type2;
    if (s == "rect_type1_p1") return MeasureKind::rect_type1_p1;
    if (s == "rect_type2_p1") return MeasureKind::rect_type2_p1;
    throw InvalidArgument("unknown measure kind '" + s + "'");
}

inline bool is_rectangular(MeasureKind k) {
    return k == MeasureKind::rect_type1_p1 || k == MeasureKind::rect_type2_p1;
}

inline bool is_type1_family(MeasureKind k) { return k == MeasureKind::type1 || k == MeasureKind::rect_type1_p1; }

struct MeasureSpec {
    MeasureKind kind = MeasureKind::type1;
    int p = 1;
    int k = 1;
    std::vector<double> alphas;         // k + 1 entries
    std::vector<int> ns;                // rectangular only, k entries
    std::vector<HermitianMatrix> Bs;    // rectangular only, optional (identity when empty)

    // Shape errors; throws InvalidArgument.
    void validate_structure() const {
        if (p < 1) throw InvalidArgument("measure: p must be >= 1");
        if (k < 1) throw InvalidArgument("measure: k must be >= 1");
        if (alphas.size() != static_cast<std::size_t>(k) + 1)
            throw InvalidArgument("measure: expected k+1 = " + std::to_string(k + 1) + " alphas");
        for (double a : alphas)
            if (!std::isfinite(a)) throw InvalidArgument("measure: alphas must be finite");
        if (is_rectangular(kind)) {
            if (p != 1) throw InvalidArgument("measure: rectangular kinds require p = 1");
            if (ns.size() != static_cast<std::size_t>(k)) throw InvalidArgument("measure: expected k values in ns");
            for (int n : ns)
                if (n < p) throw InvalidArgument("measure: each n_j must be >= p");
            if (!Bs.empty()) {
                if (Bs.size() != static_cast<std::size_t>(k)) throw InvalidArgument("measure: expected k matrices in Bs");
                for (int j = 0; j < k; ++j)
                    if (Bs[j].dim() != ns[j]) throw InvalidArgument("measure: B_j must be n_j x n_j");
            }
        } else if (!ns.empty() || !Bs.empty()) {
            throw InvalidArgument("measure: ns/Bs are only valid for rectangular kinds");
        }
    }

    // Named existence conditions that fail for this parameterization.
    std::vector<std::string> violations() const {
        validate_structure();
        std::vector<std::string> out;
        const std::string pm1 = std::to_string(p - 1);
        for (int j = 0; j < k; ++j) {
            const std::string idx = std::to_string(j + 1);
            if (is_rectangular(kind)) {
                if (!(alphas[j] + ns[j] > p - 1)) out.push_back("alpha_" + idx + " + n_" + idx + " > p-1 = " + pm1);
            } else if (!(alphas[j] > p - 1)) {
                out.push_back("alpha_" + idx + " > p-1 = " + pm1);
            }
        }
        if (!(alphas[k] > p - 1)) out.push_back("alpha_" + std::to_string(k + 1) + " > p-1 = " + pm1);
        for (std::size_t j = 0; j < Bs.size(); ++j)
            if (!is_pd(Bs[j])) out.push_back("B_" + std::to_string(j + 1) + " positive definite");
        return out;
    }

    void require_valid() const {
        auto v = violations();
        if (!v.empty()) throw DomainError(std::move(v));
    }

    // Shape parameters of the scalar Dirichlet law that the rectangular
    // forms u_j follow: (alpha_1 + n_1, ..., alpha_k + n_k, alpha_{k+1}).
    std::vector<double> effective_alphas() const {
        std::vector<double> a = alphas;
        if (is_rectangular(kind))
            for (int j = 0; j < k; ++j) a[j] += ns[j];
        return a;
    }
};

struct DirichletSample {
    std::vector<HermitianMatrix> matrices;  // 1x1 for p = 1 and for the rectangular forms

    double scalar(std::size_t j) const { return matrices.at(j)(0, 0).real(); }
};

struct SamplerStats {
    std::uint64_t floored = 0;  // inverse square roots that needed eigenvalue flooring
};

inline constexpr double kEigenFloor = 1e-13;

// W = T T^* with t_jj^2 ~ Gamma(alpha - j + 1) and strictly-lower t_ij having
// independent N(0, 1/2) real and imaginary parts.
inline HermitianMatrix sample_matrix_gamma(int p, double alpha, CounterRng& rng) {
    if (p < 1) throw InvalidArgument("sample_matrix_gamma: p must be >= 1");
    if (!(alpha > p - 1)) throw DomainError("alpha > p-1 = " + std::to_string(p - 1));
    ComplexMatrix t = ComplexMatrix::Zero(p, p);
    const double s = std::sqrt(0.5);
    for (int j = 0; j < p; ++j) {
        t(j, j) = std::sqrt(gamma_variate(rng, alpha - j));
        for (int i = j + 1; i < p; ++i) t(i, j) = Complex(s * rng.normal(), s * rng.normal());
    }
    return HermitianMatrix(t * t.adjoint());
}

inline HermitianMatrix sample_matrix_gamma(int p, double alpha, SeedSpec seed) {
    CounterRng rng(seed);
    return sample_matrix_gamma(p, alpha, rng);
}

namespace detail {

// Scalar Dirichlet (type-1) or inverted Dirichlet (type-2) in log space.
inline DirichletSample scalar_dirichlet(const std::vector<double>& shapes, bool type1, CounterRng& rng) {
    const std::size_t k = shapes.size() - 1;
    std::vector<double> lg(shapes.size());
    for (std::size_t j = 0; j < shapes.size(); ++j) lg[j] = log_gamma_variate(rng, shapes[j]);
    double denom = lg[k];
    if (type1) {
        double mx = lg[0];
        for (double v : lg) mx = std::max(mx, v);
        double acc = 0.0;
        for (double v : lg) acc += std::exp(v - mx);
        denom = mx + std::log(acc);
    }
    DirichletSample out;
    out.matrices.reserve(k);
    for (std::size_t j = 0; j < k; ++j) out.matrices.push_back(HermitianMatrix::scalar(std::exp(lg[j] - denom)));
    return out;
}

inline HermitianMatrix normalizer(const HermitianMatrix& s, SamplerStats* stats) {
    bool floored = false;
    auto r = inv_sqrt_floored(s, kEigenFloor, &floored);
    if (floored && stats) ++stats->floored;
    return r;
}

inline void require_kind(const MeasureSpec& spec, MeasureKind kind) {
    if (spec.kind != kind) throw InvalidArgument("sampler expects a " + to_string(kind) + " measure");
    spec.require_valid();
}

}  // namespace detail

inline DirichletSample sample_type1(const MeasureSpec& spec, CounterRng& rng, SamplerStats* stats = nullptr) {
    detail::require_kind(spec, MeasureKind::type1);
    if (spec.p == 1) return detail::scalar_dirichlet(spec.alphas, true, rng);
    std::vector<HermitianMatrix> w;
    w.reserve(spec.alphas.size());
    ComplexMatrix s = ComplexMatrix::Zero(spec.p, spec.p);
    for (double a : spec.alphas) {
        w.push_back(sample_matrix_gamma(spec.p, a, rng));
        s += w.back().mat();
    }
    const auto r = detail::normalizer(HermitianMatrix(s), stats);
    DirichletSample out;
    for (int j = 0; j < spec.k; ++j) out.matrices.push_back(congruence(r, w[j]));
    return out;
}

inline DirichletSample sample_type2(const MeasureSpec& spec, CounterRng& rng, SamplerStats* stats = nullptr) {
    detail::require_kind(spec, MeasureKind::type2);
    if (spec.p == 1) return detail::scalar_dirichlet(spec.alphas, false, rng);
    std::vector<HermitianMatrix> w;
    w.reserve(spec.alphas.size());
    for (double a : spec.alphas) w.push_back(sample_matrix_gamma(spec.p, a, rng));
    const auto r = detail::normalizer(w.back(), stats);
    DirichletSample out;
    for (int j = 0; j < spec.k; ++j) out.matrices.push_back(congruence(r, w[j]));
    return out;
}

// Rectangular measures at p = 1, type-1 or type-2, sampled in u-space.
inline DirichletSample sample_rect_p1(const MeasureSpec& spec, CounterRng& rng) {
    if (!is_rectangular(spec.kind)) throw InvalidArgument("sample_rect_p1 expects a rectangular measure");
    spec.require_valid();
    return detail::scalar_dirichlet(spec.effective_alphas(), spec.kind == MeasureKind::rect_type1_p1, rng);
}

inline DirichletSample sample(const MeasureSpec& spec, CounterRng& rng, SamplerStats* stats = nullptr) {
    switch (spec.kind) {
        case MeasureKind::type1: return sample_type1(spec, rng, stats);
        case MeasureKind::type2: return sample_type2(spec, rng, stats);
        default: return sample_rect_p1(spec, rng);
    }
}

inline DirichletSample sample(const MeasureSpec& spec, SeedSpec seed) {
    CounterRng rng(seed);
    return sample(spec, rng);
}

// Support of each measure: type-1 needs X_j > 0 and I - sum X_j > 0,
// type-2 needs X_j > 0, rectangular forms need u_j > 0 (and sum < 1 for type-1).
inline bool in_support(const MeasureSpec& spec, const DirichletSample& s) {
    if (s.matrices.size() != static_cast<std::size_t>(spec.k)) return false;
    ComplexMatrix total = ComplexMatrix::Zero(spec.p, spec.p);
    for (const auto& x : s.matrices) {
        if (x.dim() != spec.p || !is_pd(x)) return false;
        total += x.mat();
    }
    if (!is_type1_family(spec.kind)) return true;
    return is_pd(HermitianMatrix(ComplexMatrix::Identity(spec.p, spec.p) - total));
}

}  // namespace mvda
