#pragma once
// Command-line front end. cli_main is callable in-process so tests can
// drive every subcommand without spawning a shell.
//
// Exit codes: 0 success, 1 usage, 2 domain error, 3 verification failure,
// 4 internal or numerical error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvda/averages.hpp"
#include "mvda/default_suite.hpp"
#include "mvda/errors.hpp"
#include "mvda/harness.hpp"
#include "mvda/io.hpp"
#include "mvda/measures.hpp"
#include "mvda/special.hpp"

namespace mvda::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kVerifyFailed = 3, kInternal = 4 };

class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Either inline JSON (starting with '{' or '[') or a path to a JSON file.
inline io::Json load_json_arg(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return io::parse(arg);
    return io::parse(read_file(arg));
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw InvalidArgument("not an integer list: '" + s + "'");
        }
    }
    return out;
}

inline std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("MVDA_SEED");
    if (!v || !*v) return std::nullopt;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("MVDA_SEED is not an unsigned integer: '") + v + "'");
    }
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Matrix-variate Dirichlet averages: special functions, samplers and Monte Carlo verification", "mvda"};
    app.require_subcommand(1, 1);

    std::string out_path;
    auto add_out = [&](CLI::App* sc) { sc->add_option("--out", out_path, "Write JSON to FILE instead of stdout"); };

    // gamma
    int gp = 1;
    double g_alpha = 0.0, g_alpha_im = 0.0;
    auto* sc_gamma = app.add_subcommand("gamma", "log of the complex matrix-variate gamma function");
    sc_gamma->add_option("-p", gp, "Dimension")->required();
    sc_gamma->add_option("--alpha", g_alpha, "Real part of alpha")->required();
    sc_gamma->add_option("--alpha-im", g_alpha_im, "Imaginary part of alpha");
    add_out(sc_gamma);

    // pochhammer
    double pa = 0.0, pa_im = 0.0;
    std::string p_part;
    auto* sc_poch = app.add_subcommand("pochhammer", "Generalized Pochhammer symbol [a]_kappa");
    sc_poch->add_option("--a", pa, "Real part of a")->required();
    sc_poch->add_option("--a-im", pa_im, "Imaginary part of a");
    sc_poch->add_option("--partition", p_part, "Comma-separated parts, e.g. 2,1")->required();
    add_out(sc_poch);

    // zonal
    std::string z_part, z_matrix;
    auto* sc_zonal = app.add_subcommand("zonal", "Zonal polynomial of a Hermitian matrix");
    sc_zonal->add_option("--partition", z_part, "Comma-separated parts")->required();
    sc_zonal->add_option("--matrix", z_matrix, "Matrix JSON file or inline JSON")->required();
    add_out(sc_zonal);

    // hyp1f1
    double ha = 0.0, ha_im = 0.0, hc = 0.0, hc_im = 0.0;
    std::string h_matrix;
    TruncationPolicy h_policy;
    auto* sc_hyp = app.add_subcommand("hyp1f1", "1F1(a; c; A) of Hermitian matrix argument");
    sc_hyp->add_option("--a", ha)->required();
    sc_hyp->add_option("--a-im", ha_im);
    sc_hyp->add_option("--c", hc)->required();
    sc_hyp->add_option("--c-im", hc_im);
    sc_hyp->add_option("--matrix", h_matrix, "Matrix JSON file or inline JSON")->required();
    sc_hyp->add_option("--max-order", h_policy.max_order);
    sc_hyp->add_option("--rel-stop", h_policy.rel_stop);
    sc_hyp->add_option("--consecutive-orders", h_policy.consecutive_orders);
    add_out(sc_hyp);

    // power-mean
    std::vector<double> pm_w, pm_z;
    double pm_b = 1.0;
    auto* sc_pm = app.add_subcommand("power-mean", "Weighted power mean [sum w z^b]^{1/b}");
    sc_pm->add_option("--weights", pm_w)->required()->delimiter(',');
    sc_pm->add_option("--values", pm_z)->required()->delimiter(',');
    sc_pm->add_option("--b", pm_b)->required();
    add_out(sc_pm);

    // sample
    std::string s_config;
    std::uint64_t s_samples = 1;
    std::optional<std::uint64_t> s_seed;
    std::uint64_t s_stream = 0;
    auto* sc_sample = app.add_subcommand("sample", "Draw samples from a measure as JSON lines");
    sc_sample->add_option("--config", s_config, "MeasureSpec JSON file or inline JSON")->required();
    sc_sample->add_option("--samples", s_samples, "Number of samples (default 1)")->check(CLI::PositiveNumber);
    sc_sample->add_option("--seed", s_seed, "Seed; overrides MVDA_SEED (default 42)");
    sc_sample->add_option("--stream", s_stream, "Stream index");
    add_out(sc_sample);

    // average
    std::string a_config;
    auto* sc_avg = app.add_subcommand("average", "Closed-form Dirichlet average");
    sc_avg->add_option("--config", a_config, "AverageSpec JSON file or inline JSON")->required();
    add_out(sc_avg);

    // verify
    std::string v_suite = "default", v_format = "json";
    std::optional<std::uint64_t> v_samples, v_seed;
    unsigned v_workers = 1;
    double v_floor = kDefaultAbsFloor;
    bool v_no_timing = false;
    auto* sc_verify = app.add_subcommand("verify", "Compare closed forms against Monte Carlo estimates");
    sc_verify->add_option("--suite,--config", v_suite, "'default' or a suite JSON file");
    sc_verify->add_option("--samples", v_samples, "Override samples per case")->check(CLI::PositiveNumber);
    sc_verify->add_option("--seed", v_seed, "Override the seed of every case");
    sc_verify->add_option("--workers", v_workers, "Worker threads; results do not depend on this")->check(CLI::PositiveNumber);
    sc_verify->add_option("--format", v_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sc_verify->add_option("--abs-floor", v_floor, "Absolute tolerance floor (default 1e-4)");
    sc_verify->add_flag("--no-timing", v_no_timing, "Record runtime_ms as 0 for byte-reproducible reports");
    add_out(sc_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*sc_gamma) {
            const Complex v = gamma_p_ln(GammaPArgs{gp, Complex(g_alpha, g_alpha_im)});
            io::Json j;
            j["log_value"] = v.real();
            if (g_alpha_im != 0.0) j["log_value_im"] = v.imag();
            detail::Output o(out_path, out);
            o.stream() << j.dump(2) << "\n";
        } else if (*sc_poch) {
            const Complex v = pochhammer_gen(Complex(pa, pa_im), Partition(detail::parse_int_list(p_part)));
            io::Json j;
            j["value"] = v.real();
            if (pa_im != 0.0) j["value_im"] = v.imag();
            detail::Output o(out_path, out);
            o.stream() << j.dump(2) << "\n";
        } else if (*sc_zonal) {
            const Partition kappa(detail::parse_int_list(z_part));
            const auto x = io::matrix_from_json(detail::load_json_arg(z_matrix));
            if (kappa.length() > x.dim()) throw InvalidArgument("partition has more parts than the matrix dimension");
            io::Json j;
            j["partition"] = kappa.parts();
            j["value"] = zonal_c(kappa, x);
            detail::Output o(out_path, out);
            o.stream() << j.dump(2) << "\n";
        } else if (*sc_hyp) {
            const auto x = io::matrix_from_json(detail::load_json_arg(h_matrix));
            const auto r = hyp1f1_matrix(Complex(ha, ha_im), Complex(hc, hc_im), x, h_policy);
            io::Json j;
            j["value"] = r.value.real();
            if (ha_im != 0.0 || hc_im != 0.0) j["value_im"] = r.value.imag();
            j["order_reached"] = r.order_reached;
            j["last_increment"] = r.last_increment;
            j["converged"] = r.converged;
            detail::Output o(out_path, out);
            o.stream() << j.dump(2) << "\n";
        } else if (*sc_pm) {
            io::Json j;
            j["value"] = power_mean(pm_w, pm_z, pm_b);
            detail::Output o(out_path, out);
            o.stream() << j.dump(2) << "\n";
        } else if (*sc_sample) {
            const auto measure = io::measure_from_json(detail::load_json_arg(s_config));
            measure.require_valid();
            SeedSpec seed{s_seed ? *s_seed : detail::env_seed().value_or(42), s_stream};
            io::Json header;
            header["measure"] = io::to_json(measure);
            header["seed"] = io::to_json(seed);
            header["samples"] = s_samples;
            detail::Output o(out_path, out);
            o.stream() << header.dump() << "\n";
            CounterRng rng(seed);
            for (std::uint64_t i = 0; i < s_samples; ++i) o.stream() << io::to_json(sample(measure, rng)).dump() << "\n";
        } else if (*sc_avg) {
            const auto spec = io::average_spec_from_json(detail::load_json_arg(a_config));
            const auto r = evaluate_average(spec);
            detail::Output o(out_path, out);
            o.stream() << io::to_json(r).dump(2) << "\n";
            if (!r.conditions_ok) {
                for (const auto& c : r.violated_conditions) err << "domain error: " << c << "\n";
                return kDomain;
            }
        } else if (*sc_verify) {
            auto cases = io::suite_from_json(v_suite == "default" ? io::parse(std::string(kDefaultSuiteJson))
                                                                  : detail::load_json_arg(v_suite));
            const auto seed = v_seed ? v_seed : detail::env_seed();
            for (auto& c : cases) {
                if (v_samples) c.mc.samples = *v_samples;
                if (seed) c.mc.seed.seed = *seed;
            }
            VerifyOptions opt;
            opt.abs_floor = v_floor;
            opt.workers = v_workers;
            opt.record_timing = !v_no_timing;
            const auto reports = verify_suite(cases, opt);
            detail::Output o(out_path, out);
            o.stream() << report_emit(reports, v_format == "csv" ? ReportFormat::csv : ReportFormat::json);
            if (v_format == "json") o.stream() << "\n";
            for (const auto& r : reports)
                if (!r.pass) err << "FAIL " << r.case_id << (r.error.empty() ? "" : ": " + r.error) << "\n";
            return all_pass(reports) ? kOk : kVerifyFailed;
        }
        return kOk;
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        return kDomain;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace mvda::cli
