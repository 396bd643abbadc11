#pragma once
// Monte Carlo estimation and the closed-form verification suite.
//
// Sample i belongs to chunk i / chunk_size; chunk c draws from
// CounterRng(seed, substream = c). Integrand values are stored by sample
// index and reduced sequentially afterwards, so the estimate does not
// depend on how many workers ran the chunks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mvda/averages.hpp"
#include "mvda/errors.hpp"
#include "mvda/io.hpp"
#include "mvda/linalg.hpp"
#include "mvda/measures.hpp"
#include "mvda/rng.hpp"

namespace mvda {

struct McConfig {
    std::uint64_t samples = 100000;
    SeedSpec seed{42, 0};
    std::uint64_t chunk = 10000;

    void validate() const {
        if (samples < 1) throw InvalidArgument("mc: samples must be >= 1");
        if (chunk < 1) throw InvalidArgument("mc: chunk must be >= 1");
        if ((samples - 1) / chunk >= std::numeric_limits<std::uint32_t>::max())
            throw InvalidArgument("mc: too many chunks");
    }
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    double kurtosis = 0.0;       // m4 / m2^2 of the integrand values; 0 when constant
    std::uint64_t floored = 0;   // sampler eigenvalue-floor events
};

using Integrand = std::function<double(const DirichletSample&)>;

template <class F>
McEstimate mc_estimate(const MeasureSpec& measure, F&& integrand, const McConfig& config, unsigned workers = 1) {
    config.validate();
    measure.require_valid();
    const std::uint64_t n = config.samples;
    const std::uint64_t n_chunks = (n + config.chunk - 1) / config.chunk;

    std::vector<double> values(n);
    std::vector<std::uint64_t> floored(n_chunks, 0);
    std::vector<std::exception_ptr> errors(n_chunks);
    std::atomic<std::uint64_t> next{0};

    auto run = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                CounterRng rng(config.seed, static_cast<std::uint32_t>(c));
                SamplerStats stats;
                const std::uint64_t end = std::min(n, (c + 1) * config.chunk);
                for (std::uint64_t i = c * config.chunk; i < end; ++i) {
                    const double v = integrand(sample(measure, rng, &stats));
                    if (!std::isfinite(v)) throw NonFiniteIntegrand(i);
                    values[i] = v;
                }
                floored[c] = stats.floored;
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(n_chunks, 256))));
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    // The lowest failing chunk wins, independent of scheduling.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    McEstimate out;
    out.n = n;
    for (auto f : floored) out.floored += f;

    // Neumaier-compensated mean, then central moments.
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    const double mean = (sum + comp) / static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    out.estimate = mean;
    if (n > 1) out.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    if (m2 > 0.0) out.kurtosis = (m4 / static_cast<double>(n)) / std::pow(m2 / static_cast<double>(n), 2);
    return out;
}

// Integrand whose expectation is the closed form the AverageSpec names.
inline Integrand make_integrand(const AverageSpec& spec) {
    spec.validate();
    const int p = spec.measure.p;
    const MeasureKind kind = spec.measure.kind;
    const ComplexMatrix eye = ComplexMatrix::Identity(p, p);
    switch (spec.functional) {
        case Functional::det_power: {
            const auto gammas = *spec.gammas;
            return [gammas](const DirichletSample& s) {
                double lg = 0.0;
                for (std::size_t j = 0; j < gammas.size(); ++j)
                    if (gammas[j] != 0.0) lg += gammas[j] * std::log(abs_det(s.matrices[j].mat()));
                return std::exp(lg);
            };
        }
        case Functional::complement_power: {
            const double delta = *spec.delta;
            const bool type1 = is_type1_family(kind);
            return [delta, type1, eye](const DirichletSample& s) {
                ComplexMatrix total = eye;
                for (const auto& x : s.matrices) total += type1 ? ComplexMatrix(-x.mat()) : x.mat();
                const double d = abs_det(total);
                return std::pow(d, type1 ? delta : -delta);
            };
        }
        case Functional::exp_trace: {
            const HermitianMatrix a = *spec.A;
            return [a](const DirichletSample& s) { return std::exp(trace_product(a, s.matrices[0])); };
        }
        case Functional::phi6: {
            const HermitianMatrix a = *spec.A;
            const double expo = spec.measure.alphas[0] + spec.measure.alphas[2];
            return [a, expo, eye](const DirichletSample& s) {
                const double d = abs_det(eye + s.matrices[0].mat());
                return std::exp(-trace_product(a, s.matrices[0]) + expo * std::log(d));
            };
        }
        case Functional::hermitian_form_moment: {
            const double h = *spec.h;
            return [h](const DirichletSample& s) {
                double total = 0.0;
                for (std::size_t j = 0; j < s.matrices.size(); ++j) total += s.scalar(j);
                return std::pow(total, h);
            };
        }
    }
    throw InvalidArgument("unhandled functional");
}

inline McEstimate mc_estimate(const AverageSpec& spec, const McConfig& config, unsigned workers = 1) {
    return mc_estimate(spec.measure, make_integrand(spec), config, workers);
}

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

struct VerifyCase {
    std::string case_id;
    AverageSpec spec;
    McConfig mc;
};

struct McDiagnostics {
    double kurtosis = 0.0;
    bool boosted = false;
    std::uint64_t floored = 0;
    friend bool operator==(const McDiagnostics&, const McDiagnostics&) = default;
};

struct McReport {
    std::string case_id;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double closed_form = std::numeric_limits<double>::quiet_NaN();
    double abs_diff = std::numeric_limits<double>::quiet_NaN();
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    std::uint64_t n = 0;
    std::int64_t runtime_ms = 0;
    McDiagnostics diagnostics;
    std::string error;  // empty unless the case could not be evaluated
};

inline constexpr double kDefaultAbsFloor = 1e-4;
inline constexpr double kSigmaMultiplier = 4.0;
inline constexpr double kKurtosisBoostThreshold = 50.0;
inline constexpr std::uint64_t kBoostFactor = 10;

struct VerifyOptions {
    double abs_floor = kDefaultAbsFloor;
    unsigned workers = 1;
    bool record_timing = true;
};

// Fills tolerance, abs_diff and the verdict from estimate/closed_form.
inline void judge(McReport& r, double abs_floor) {
    r.abs_diff = std::abs(r.estimate - r.closed_form);
    r.tolerance = std::max(kSigmaMultiplier * r.std_error, abs_floor);
    r.pass = r.abs_diff <= r.tolerance;
}

inline McReport verify_case(const VerifyCase& vc, const VerifyOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    McReport r;
    r.case_id = vc.case_id;
    try {
        const auto closed = evaluate_average(vc.spec);
        if (!closed.conditions_ok) throw DomainError(closed.violated_conditions);
        r.closed_form = *closed.value;
        const auto integrand = make_integrand(vc.spec);
        auto est = mc_estimate(vc.spec.measure, integrand, vc.mc, opt.workers);
        r.diagnostics.kurtosis = est.kurtosis;
        if (est.kurtosis > kKurtosisBoostThreshold) {
            McConfig boosted = vc.mc;
            boosted.samples *= kBoostFactor;
            est = mc_estimate(vc.spec.measure, integrand, boosted, opt.workers);
            r.diagnostics.boosted = true;
        }
        r.diagnostics.floored = est.floored;
        r.estimate = est.estimate;
        r.std_error = est.std_error;
        r.n = est.n;
        judge(r, opt.abs_floor);
    } catch (const std::exception& e) {
        r.error = e.what();
        r.pass = false;
    }
    if (opt.record_timing)
        r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// One report per case; a failing case never hides the others.
inline std::vector<McReport> verify_suite(const std::vector<VerifyCase>& cases, const VerifyOptions& opt = {}) {
    std::set<std::string> ids;
    for (const auto& c : cases)
        if (!ids.insert(c.case_id).second) throw InvalidArgument("duplicate case_id '" + c.case_id + "'");
    std::vector<McReport> out;
    out.reserve(cases.size());
    for (const auto& c : cases) out.push_back(verify_case(c, opt));
    return out;
}

inline bool all_pass(const std::vector<McReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const McReport& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace io {

inline Json to_json(const McConfig& c) {
    Json out;
    out["samples"] = c.samples;
    out["seed"] = c.seed.seed;
    out["stream"] = c.seed.stream;
    out["chunk"] = c.chunk;
    return out;
}

inline McConfig mc_config_from_json(const Json& j) {
    detail::allow_keys(j, {"samples", "seed", "stream", "chunk"}, "mc");
    McConfig c;
    if (j.contains("samples")) c.samples = detail::get<std::uint64_t>(j, "samples", "mc");
    if (j.contains("seed")) c.seed.seed = detail::get<std::uint64_t>(j, "seed", "mc");
    if (j.contains("stream")) c.seed.stream = detail::get<std::uint64_t>(j, "stream", "mc");
    if (j.contains("chunk")) c.chunk = detail::get<std::uint64_t>(j, "chunk", "mc");
    c.validate();
    return c;
}

// A VerifyCase is an AverageSpec document plus "case_id" and "mc".
inline Json to_json(const VerifyCase& c) {
    Json out;
    out["case_id"] = c.case_id;
    write_average_fields(out, c.spec);
    out["mc"] = to_json(c.mc);
    return out;
}

inline VerifyCase verify_case_from_json(const Json& j) {
    detail::allow_keys(j, {"case_id", "measure", "functional", "gammas", "delta", "h", "A", "policy", "mc"}, "case");
    VerifyCase c;
    c.case_id = detail::get<std::string>(j, "case_id", "case");
    c.spec = read_average_fields(j);
    if (j.contains("mc")) c.mc = mc_config_from_json(j["mc"]);
    return c;
}

inline std::vector<VerifyCase> suite_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("suite: expected a JSON array of cases");
    std::vector<VerifyCase> out;
    for (const auto& c : j) out.push_back(verify_case_from_json(c));
    return out;
}

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline double number_from(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline Json to_json(const McReport& r) {
    Json out;
    out["case_id"] = r.case_id;
    out["estimate"] = number_or_null(r.estimate);
    out["std_error"] = number_or_null(r.std_error);
    out["closed_form"] = number_or_null(r.closed_form);
    out["abs_diff"] = number_or_null(r.abs_diff);
    out["tolerance"] = number_or_null(r.tolerance);
    out["verdict"] = r.pass ? "pass" : "fail";
    out["n"] = r.n;
    out["runtime_ms"] = r.runtime_ms;
    Json d;
    d["kurtosis"] = number_or_null(r.diagnostics.kurtosis);
    d["boosted"] = r.diagnostics.boosted;
    d["floored"] = r.diagnostics.floored;
    out["diagnostics"] = std::move(d);
    if (!r.error.empty()) out["error"] = r.error;
    return out;
}

inline McReport report_from_json(const Json& j) {
    detail::allow_keys(j, {"case_id", "estimate", "std_error", "closed_form", "abs_diff", "tolerance", "verdict", "n",
                           "runtime_ms", "diagnostics", "error"},
                       "report");
    try {
        McReport r;
        r.case_id = j.at("case_id").get<std::string>();
        r.estimate = number_from(j.at("estimate"));
        r.std_error = number_from(j.at("std_error"));
        r.closed_form = number_from(j.at("closed_form"));
        r.abs_diff = number_from(j.at("abs_diff"));
        r.tolerance = number_from(j.at("tolerance"));
        r.pass = j.at("verdict").get<std::string>() == "pass";
        r.n = j.at("n").get<std::uint64_t>();
        r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
        if (j.contains("diagnostics")) {
            const auto& d = j["diagnostics"];
            r.diagnostics.kurtosis = number_from(d.at("kurtosis"));
            r.diagnostics.boosted = d.at("boosted").get<bool>();
            r.diagnostics.floored = d.at("floored").get<std::uint64_t>();
        }
        if (j.contains("error")) r.error = j["error"].get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("report: ") + e.what());
    }
}

inline std::vector<McReport> reports_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("reports: expected a JSON array");
    std::vector<McReport> out;
    for (const auto& r : j) out.push_back(report_from_json(r));
    return out;
}

}  // namespace io

enum class ReportFormat { json, csv };

inline constexpr const char* kCsvHeader = "case_id,estimate,std_error,closed_form,abs_diff,tolerance,verdict,n,runtime_ms";

namespace detail {

inline std::string csv_number(double x) {
    if (!std::isfinite(x)) return "";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

// JSON: array of report objects with a fixed key order (no trailing newline).
// CSV: fixed header plus one line per report, each line newline-terminated.
inline std::string report_emit(const std::vector<McReport>& reports, ReportFormat format) {
    if (format == ReportFormat::json) {
        io::Json arr = io::Json::array();
        for (const auto& r : reports) arr.push_back(io::to_json(r));
        return arr.dump(2);
    }
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : reports) {
        out += detail::csv_field(r.case_id) + "," + detail::csv_number(r.estimate) + "," +
               detail::csv_number(r.std_error) + "," + detail::csv_number(r.closed_form) + "," +
               detail::csv_number(r.abs_diff) + "," + detail::csv_number(r.tolerance) + "," +
               (r.pass ? "pass" : "fail") + "," + std::to_string(r.n) + "," + std::to_string(r.runtime_ms) + "\n";
    }
    return out;
}

}  // namespace mvda
