#pragma once
// JSON documents shared by the CLI: matrices, measure specs, average specs
// and results, samples. Objects are emitted with a fixed key order.
//
// Matrix format: {"p": 2, "re": [[..],[..]], "im": [[..],[..]]}, row-major.

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvda/averages.hpp"
#include "mvda/errors.hpp"
#include "mvda/linalg.hpp"
#include "mvda/measures.hpp"
#include "mvda/rng.hpp"
#include "mvda/special.hpp"

namespace mvda::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline void allow_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
    if (!j.is_object()) throw InvalidArgument(std::string(what) + ": expected a JSON object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw InvalidArgument(std::string(what) + ": unknown field '" + it.key() + "'");
}

template <class T>
T get(const Json& j, const char* key, const char* what) {
    if (!j.contains(key)) throw InvalidArgument(std::string(what) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string(what) + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace detail

inline Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

inline Json to_json(const HermitianMatrix& h) {
    Json re = Json::array(), im = Json::array();
    for (int i = 0; i < h.dim(); ++i) {
        Json rr = Json::array(), ir = Json::array();
        for (int j = 0; j < h.dim(); ++j) {
            rr.push_back(h(i, j).real());
            ir.push_back(h(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    Json out;
    out["p"] = h.dim();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

// "im" may be omitted for real symmetric input.
inline HermitianMatrix matrix_from_json(const Json& j) {
    detail::allow_keys(j, {"p", "re", "im"}, "matrix");
    const int p = detail::get<int>(j, "p", "matrix");
    if (p < 1) throw InvalidArgument("matrix: p must be >= 1");
    const auto re = detail::get<std::vector<std::vector<double>>>(j, "re", "matrix");
    std::vector<std::vector<double>> im;
    if (j.contains("im")) im = detail::get<std::vector<std::vector<double>>>(j, "im", "matrix");
    auto check = [p](const std::vector<std::vector<double>>& rows, const char* name) {
        if (rows.size() != static_cast<std::size_t>(p)) throw InvalidArgument(std::string("matrix: '") + name + "' must have p rows");
        for (const auto& r : rows)
            if (r.size() != static_cast<std::size_t>(p)) throw InvalidArgument(std::string("matrix: '") + name + "' rows must have p entries");
    };
    check(re, "re");
    if (!im.empty()) check(im, "im");
    ComplexMatrix m(p, p);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) m(r, c) = Complex(re[r][c], im.empty() ? 0.0 : im[r][c]);
    return HermitianMatrix(m);
}

// ---------------------------------------------------------------------------

inline Json to_json(const MeasureSpec& m) {
    Json out;
    out["kind"] = to_string(m.kind);
    out["p"] = m.p;
    out["k"] = m.k;
    out["alphas"] = m.alphas;
    if (is_rectangular(m.kind)) {
        out["ns"] = m.ns;
        if (!m.Bs.empty()) {
            Json bs = Json::array();
            for (const auto& b : m.Bs) bs.push_back(to_json(b));
            out["Bs"] = std::move(bs);
        }
    }
    return out;
}

inline MeasureSpec measure_from_json(const Json& j) {
    detail::allow_keys(j, {"kind", "p", "k", "alphas", "ns", "Bs"}, "measure");
    MeasureSpec m;
    m.kind = measure_kind_from_string(detail::get<std::string>(j, "kind", "measure"));
    m.p = detail::get<int>(j, "p", "measure");
    m.k = detail::get<int>(j, "k", "measure");
    m.alphas = detail::get<std::vector<double>>(j, "alphas", "measure");
    if (j.contains("ns")) m.ns = detail::get<std::vector<int>>(j, "ns", "measure");
    if (j.contains("Bs")) {
        if (!j["Bs"].is_array()) throw InvalidArgument("measure: 'Bs' must be an array");
        for (const auto& b : j["Bs"]) m.Bs.push_back(matrix_from_json(b));
    }
    m.validate_structure();
    return m;
}

inline Json to_json(const SeedSpec& s) {
    Json out;
    out["seed"] = s.seed;
    out["stream"] = s.stream;
    return out;
}

inline SeedSpec seed_from_json(const Json& j) {
    detail::allow_keys(j, {"seed", "stream"}, "seed");
    SeedSpec s;
    s.seed = detail::get<std::uint64_t>(j, "seed", "seed");
    if (j.contains("stream")) s.stream = detail::get<std::uint64_t>(j, "stream", "seed");
    return s;
}

inline Json to_json(const TruncationPolicy& t) {
    Json out;
    out["max_order"] = t.max_order;
    out["rel_stop"] = t.rel_stop;
    out["consecutive_orders"] = t.consecutive_orders;
    return out;
}

inline TruncationPolicy policy_from_json(const Json& j) {
    detail::allow_keys(j, {"max_order", "rel_stop", "consecutive_orders"}, "policy");
    TruncationPolicy t;
    if (j.contains("max_order")) t.max_order = detail::get<int>(j, "max_order", "policy");
    if (j.contains("rel_stop")) t.rel_stop = detail::get<double>(j, "rel_stop", "policy");
    if (j.contains("consecutive_orders")) t.consecutive_orders = detail::get<int>(j, "consecutive_orders", "policy");
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------

inline void write_average_fields(Json& out, const AverageSpec& s) {
    out["measure"] = to_json(s.measure);
    out["functional"] = to_string(s.functional);
    if (s.gammas) out["gammas"] = *s.gammas;
    if (s.delta) out["delta"] = *s.delta;
    if (s.h) out["h"] = *s.h;
    if (s.A) out["A"] = to_json(*s.A);
    if (s.policy) out["policy"] = to_json(*s.policy);
}

inline Json to_json(const AverageSpec& s) {
    Json out;
    write_average_fields(out, s);
    return out;
}

inline AverageSpec read_average_fields(const Json& j) {
    AverageSpec s;
    s.measure = measure_from_json(detail::get<Json>(j, "measure", "average"));
    s.functional = functional_from_string(detail::get<std::string>(j, "functional", "average"));
    if (j.contains("gammas")) s.gammas = detail::get<std::vector<double>>(j, "gammas", "average");
    if (j.contains("delta")) s.delta = detail::get<double>(j, "delta", "average");
    if (j.contains("h")) s.h = detail::get<double>(j, "h", "average");
    if (j.contains("A")) s.A = matrix_from_json(j["A"]);
    if (j.contains("policy")) s.policy = policy_from_json(j["policy"]);
    s.validate();
    return s;
}

inline AverageSpec average_spec_from_json(const Json& j) {
    detail::allow_keys(j, {"measure", "functional", "gammas", "delta", "h", "A", "policy"}, "average");
    return read_average_fields(j);
}

inline Json to_json(const AverageResult& r) {
    Json out;
    out["functional"] = to_string(r.functional);
    out["conditions_ok"] = r.conditions_ok;
    out["violated_conditions"] = r.violated_conditions;
    if (r.log_value) out["log_value"] = *r.log_value;
    if (r.value) out["value"] = *r.value;
    if (r.diagnostics) {
        Json d;
        d["order_reached"] = r.diagnostics->order_reached;
        d["last_increment"] = r.diagnostics->last_increment;
        d["converged"] = r.diagnostics->converged;
        out["diagnostics"] = std::move(d);
    }
    return out;
}

inline Json to_json(const DirichletSample& s) {
    Json mats = Json::array();
    for (const auto& m : s.matrices) mats.push_back(to_json(m));
    Json out;
    out["matrices"] = std::move(mats);
    return out;
}

}  // namespace mvda::io
