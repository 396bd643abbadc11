#pragma once
// Closed forms for the normalizing constants and the Dirichlet averages.
// Every gamma ratio is a difference of log-gammas; existence conditions are
// checked before any gamma is evaluated and reported by name.

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mvda/errors.hpp"
#include "mvda/linalg.hpp"
#include "mvda/measures.hpp"
#include "mvda/special.hpp"

namespace mvda {

enum class Functional { det_power, complement_power, exp_trace, phi6, hermitian_form_moment };

inline std::string to_string(Functional f) {
    switch (f) {
        case Functional::det_power: return "det_power";
        case Functional::complement_power: return "complement_power";
        case Functional::exp_trace: return "exp_trace";
        case Functional::phi6: return "phi6";
        case Functional::hermitian_form_moment: return "hermitian_form_moment";
    }
    return "?";
}

inline Functional functional_from_string(const std::string& s) {
    if (s == "det_power") return Functional::det_power;
    if (s == "complement_power") return Functional::complement_power;
    if (s == "exp_trace") return Functional::exp_trace;
    if (s == "phi6") return Functional::phi6;
    if (s == "hermitian_form_moment") return Functional::hermitian_form_moment;
    throw InvalidArgument("unknown functional '" + s + "'");
}

struct AverageSpec {
    MeasureSpec measure;
    Functional functional = Functional::det_power;
    std::optional<std::vector<double>> gammas;
    std::optional<double> delta;
    std::optional<double> h;
    std::optional<HermitianMatrix> A;
    std::optional<TruncationPolicy> policy;

    // Exactly the parameters the functional needs must be present.
    void validate() const {
        measure.validate_structure();
        const bool need_g = functional == Functional::det_power;
        const bool need_d = functional == Functional::complement_power;
        const bool need_h = functional == Functional::hermitian_form_moment;
        const bool need_a = functional == Functional::exp_trace || functional == Functional::phi6;
        const std::string f = to_string(functional);
        auto check = [&](bool present, bool needed, const char* name) {
            if (present && !needed) throw InvalidArgument(f + " does not take '" + name + "'");
            if (!present && needed) throw InvalidArgument(f + " requires '" + name + "'");
        };
        check(gammas.has_value(), need_g, "gammas");
        check(delta.has_value(), need_d, "delta");
        check(h.has_value(), need_h, "h");
        check(A.has_value(), need_a, "A");
        if (policy && functional != Functional::exp_trace) throw InvalidArgument(f + " does not take 'policy'");
        if (gammas && gammas->size() != static_cast<std::size_t>(measure.k))
            throw InvalidArgument("gammas must have k entries");
        if (A && A->dim() != measure.p) throw InvalidArgument("A must be p x p");
        if ((functional == Functional::exp_trace || functional == Functional::phi6) && measure.k != 2)
            throw InvalidArgument(f + " is defined for k = 2");
        if (functional == Functional::exp_trace && measure.kind != MeasureKind::type1)
            throw InvalidArgument("exp_trace is averaged over the type1 measure");
        if (functional == Functional::phi6 && measure.kind != MeasureKind::type2)
            throw InvalidArgument("phi6 is averaged over the type2 measure");
        if (functional == Functional::hermitian_form_moment && !is_rectangular(measure.kind))
            throw InvalidArgument("hermitian_form_moment needs a rectangular p = 1 measure");
    }
};

struct TruncationInfo {
    int order_reached = 0;
    double last_increment = 0.0;
    bool converged = false;
};

struct AverageResult {
    Functional functional = Functional::det_power;
    bool conditions_ok = false;
    std::vector<std::string> violated_conditions;
    std::optional<double> log_value;
    std::optional<double> value;
    std::optional<TruncationInfo> diagnostics;

    static AverageResult from_log(Functional f, double log_value) {
        AverageResult r;
        r.functional = f;
        r.conditions_ok = true;
        r.log_value = log_value;
        r.value = std::exp(log_value);
        return r;
    }
};

namespace detail {

inline double lgp(int p, double a) { return gamma_p_ln(p, a); }

inline std::string gt(const std::string& lhs, int p) { return lhs + " > p-1 = " + std::to_string(p - 1); }

inline void require(std::vector<std::string> v) {
    if (!v.empty()) throw DomainError(std::move(v));
}

inline double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace detail

// log of the normalizing constant. Type-1 and type-2 share
//   Gamma_p(sum alpha) / prod Gamma_p(alpha_j);
// the rectangular constant adds |det B_j|^p Gamma_p(n_j) / pi^{n_j p} per
// component and shifts alpha_j by n_j.
inline double normalizer_ln(const MeasureSpec& m) {
    m.require_valid();
    const int p = m.p;
    if (!is_rectangular(m.kind)) {
        double s = detail::lgp(p, detail::sum(m.alphas));
        for (double a : m.alphas) s -= detail::lgp(p, a);
        return s;
    }
    double s = 0.0;
    double total = m.alphas[m.k];
    for (int j = 0; j < m.k; ++j) {
        const double logdet_b = m.Bs.empty() ? 0.0 : logdet_abs(m.Bs[j]);
        s += p * logdet_b + detail::lgp(p, m.ns[j]) - m.ns[j] * p * std::log(std::numbers::pi) -
             detail::lgp(p, m.alphas[j] + m.ns[j]);
        total += m.alphas[j] + m.ns[j];
    }
    return s + detail::lgp(p, total) - detail::lgp(p, m.alphas[m.k]);
}

// E[prod_j |det X_j|^{gamma_j}].
inline AverageResult det_power_average(const MeasureSpec& m, const std::vector<double>& gammas) {
    m.validate_structure();
    if (gammas.size() != static_cast<std::size_t>(m.k)) throw InvalidArgument("gammas must have k entries");
    const int p = m.p;
    const auto a = m.effective_alphas();
    const double gsum = detail::sum(gammas);

    auto v = m.violations();
    for (int j = 0; j < m.k; ++j) {
        const std::string idx = std::to_string(j + 1);
        const std::string name = is_rectangular(m.kind) ? "alpha_" + idx + " + n_" + idx + " + gamma_" + idx
                                                         : "alpha_" + idx + " + gamma_" + idx;
        if (!(a[j] + gammas[j] > p - 1)) v.push_back(detail::gt(name, p));
    }
    const std::string last = "alpha_" + std::to_string(m.k + 1);
    if (!is_type1_family(m.kind) && !(a[m.k] - gsum > p - 1))
        v.push_back("moment does not exist: " + last + " - sum(gamma) must exceed p-1 = " + std::to_string(p - 1));
    detail::require(std::move(v));

    double s = 0.0;
    for (int j = 0; j < m.k; ++j) s += detail::lgp(p, a[j] + gammas[j]) - detail::lgp(p, a[j]);
    if (is_type1_family(m.kind)) {
        const double total = detail::sum(a);
        s += detail::lgp(p, total) - detail::lgp(p, total + gsum);
    } else {
        s += detail::lgp(p, a[m.k] - gsum) - detail::lgp(p, a[m.k]);
    }
    return AverageResult::from_log(Functional::det_power, s);
}

// Type-1 family: E[|det(I - sum X_j)|^delta]; type-2 family:
// E[|det(I + sum X_j)|^{-delta}]. Both evaluate to the same gamma ratio.
inline AverageResult complement_power_average(const MeasureSpec& m, double delta) {
    m.validate_structure();
    const int p = m.p;
    const auto a = m.effective_alphas();
    auto v = m.violations();
    if (!(a[m.k] + delta > p - 1)) v.push_back(detail::gt("alpha_" + std::to_string(m.k + 1) + " + delta", p));
    const double total = detail::sum(a);
    if (!(total + delta > p - 1)) v.push_back(detail::gt("sum(alpha) + delta", p));
    detail::require(std::move(v));
    const double s = detail::lgp(p, a[m.k] + delta) - detail::lgp(p, a[m.k]) + detail::lgp(p, total) -
                     detail::lgp(p, total + delta);
    return AverageResult::from_log(Functional::complement_power, s);
}

// E[exp(tr(A X_1))] under the k = 2 type-1 measure:
//   1F1(alpha_1; alpha_1 + alpha_2 + alpha_3; A).
inline AverageResult exp_trace_average(int p, const std::vector<double>& alphas, const HermitianMatrix& A,
                                       const TruncationPolicy& policy = {}) {
    if (alphas.size() != 3) throw InvalidArgument("exp_trace_average needs three alphas");
    if (A.dim() != p) throw InvalidArgument("A must be p x p");
    std::vector<std::string> v;
    for (int j = 0; j < 3; ++j)
        if (!(alphas[j] > p - 1)) v.push_back(detail::gt("alpha_" + std::to_string(j + 1), p));
    detail::require(std::move(v));

    const double c = alphas[0] + alphas[1] + alphas[2];
    const auto f = hyp1f1_matrix(alphas[0], c, A, policy);
    AverageResult r;
    r.functional = Functional::exp_trace;
    r.conditions_ok = true;
    r.value = f.value.real();
    if (*r.value > 0.0) r.log_value = std::log(*r.value);
    r.diagnostics = TruncationInfo{f.order_reached, f.last_increment, f.converged};
    return r;
}

// E[exp(-tr(A X_1)) |det(I + X_1)|^{alpha_1 + alpha_3}] under the k = 2
// type-2 measure: Gamma_p(alpha_1 + alpha_3) / Gamma_p(alpha_3) |det A|^{-alpha_1}.
inline AverageResult phi6_average(int p, const std::vector<double>& alphas, const HermitianMatrix& A) {
    if (alphas.size() != 3) throw InvalidArgument("phi6_average needs three alphas");
    if (A.dim() != p) throw InvalidArgument("A must be p x p");
    std::vector<std::string> v;
    for (int j = 0; j < 3; ++j)
        if (!(alphas[j] > p - 1)) v.push_back(detail::gt("alpha_" + std::to_string(j + 1), p));
    if (!is_pd(A)) v.push_back("A positive definite");
    detail::require(std::move(v));
    const double s = detail::lgp(p, alphas[0] + alphas[2]) - detail::lgp(p, alphas[2]) - alphas[0] * logdet_abs(A);
    return AverageResult::from_log(Functional::phi6, s);
}

// E[(sum_j u_j)^h] for the p = 1 rectangular measures, u_j = X_j^* B_j X_j.
inline AverageResult hermitian_form_moment(MeasureKind kind, double h, const std::vector<double>& alphas,
                                           const std::vector<int>& ns) {
    if (!is_rectangular(kind)) throw InvalidArgument("hermitian_form_moment needs a rectangular kind");
    MeasureSpec m{kind, 1, static_cast<int>(alphas.size()) - 1, alphas, ns, {}};
    if (m.k < 1) throw InvalidArgument("hermitian_form_moment needs at least two alphas");
    auto v = m.violations();
    const auto a = m.effective_alphas();
    const double shifted = std::accumulate(a.begin(), a.end() - 1, 0.0);
    const std::string last = "alpha_" + std::to_string(m.k + 1);
    if (!(shifted + h > 0.0)) v.push_back("sum(alpha_j + n_j) + h > 0");
    if (kind == MeasureKind::rect_type2_p1 && !(a[m.k] - h > 0.0))
        v.push_back("moment does not exist: h must be < " + last);
    detail::require(std::move(v));

    double s = lgamma_pos(shifted + h) - lgamma_pos(shifted);
    if (kind == MeasureKind::rect_type1_p1)
        s += lgamma_pos(shifted + a[m.k]) - lgamma_pos(shifted + a[m.k] + h);
    else
        s += lgamma_pos(a[m.k] - h) - lgamma_pos(a[m.k]);
    return AverageResult::from_log(Functional::hermitian_form_moment, s);
}

// Evaluate the closed form named by an AverageSpec. Domain violations come
// back as conditions_ok = false with the named conditions; malformed specs
// and numerical failures still throw.
inline AverageResult evaluate_average(const AverageSpec& spec) {
    spec.validate();
    const auto& m = spec.measure;
    try {
        switch (spec.functional) {
            case Functional::det_power: return det_power_average(m, *spec.gammas);
            case Functional::complement_power: return complement_power_average(m, *spec.delta);
            case Functional::exp_trace: return exp_trace_average(m.p, m.alphas, *spec.A, spec.policy.value_or(TruncationPolicy{}));
            case Functional::phi6: return phi6_average(m.p, m.alphas, *spec.A);
            case Functional::hermitian_form_moment: return hermitian_form_moment(m.kind, *spec.h, m.alphas, m.ns);
        }
    } catch (const DomainError& e) {
        AverageResult r;
        r.functional = spec.functional;
        r.conditions_ok = false;
        r.violated_conditions = e.conditions();
        return r;
    }
    throw InvalidArgument("unhandled functional");
}

}  // namespace mvda
