#ifndef WALSHCTL_IO_HPP
#define WALSHCTL_IO_HPP

// Front-end parsing and serialization: symbolic angle and grid specs, JSON
// encodings for sequences, noise models and simulation experiments, and
// fixed-precision CSV output. Only this header and the CLI depend on the
// JSON library.

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

#include <json.hpp>

#include "walshctl/catalog.hpp"
#include "walshctl/noise.hpp"

namespace walshctl {

using nlohmann::json;

namespace detail {

inline double parse_full_double(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + ": cannot parse number '" +
                                    text + "'");
    return v;
}

inline std::string strip(const std::string& text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

} // namespace detail

// Angles are accepted as exact symbolic multiples of pi so published values
// like "3pi" or "0.65pi" do not pick up decimal drift: forms are "<num>",
// "<num>pi", "pi", "-pi", "<num>pi/<den>", "pi/<den>".
inline double parse_angle(const std::string& text) {
    const std::string s = detail::strip(text);
    const auto at = s.find("pi");
    if (at == std::string::npos)
        return detail::parse_full_double(s, "parse_angle");
    const std::string prefix = s.substr(0, at);
    double coefficient = 1.0;
    if (prefix == "-")
        coefficient = -1.0;
    else if (!prefix.empty() && prefix != "+")
        coefficient = detail::parse_full_double(prefix, "parse_angle");
    double value = coefficient * pi;
    const std::string suffix = s.substr(at + 2);
    if (!suffix.empty()) {
        if (suffix[0] != '/')
            throw std::invalid_argument("parse_angle: trailing text after pi in '" +
                                        text + "'");
        const double den =
            detail::parse_full_double(suffix.substr(1), "parse_angle");
        if (den == 0.0)
            throw std::invalid_argument("parse_angle: division by zero in '" +
                                        text + "'");
        value /= den;
    }
    return value;
}

// Frequency grid spec "w_min:w_max:points_per_decade", frequencies in units
// of 1/tau.
struct GridSpec {
    double w_low = 0.0;
    double w_high = 0.0;
    double points_per_decade = 0.0;

    std::vector<double> grid() const {
        return log_grid(w_low, w_high, points_per_decade);
    }
};

inline GridSpec parse_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw std::invalid_argument(
            "parse_grid: expected 'w_min:w_max:points_per_decade', got '" + text +
            "'");
    GridSpec g;
    g.w_low = detail::parse_full_double(text.substr(0, c1), "parse_grid");
    g.w_high = detail::parse_full_double(text.substr(c1 + 1, c2 - c1 - 1),
                                         "parse_grid");
    g.points_per_decade =
        detail::parse_full_double(text.substr(c2 + 1), "parse_grid");
    if (!(g.w_low > 0.0) || !(g.w_high > g.w_low))
        throw std::invalid_argument("parse_grid: need 0 < w_min < w_max");
    if (!(g.points_per_decade > 0.0))
        throw std::invalid_argument("parse_grid: points per decade must be positive");
    return g;
}

inline const char* quadrature_name(Quadrature q) {
    return q == Quadrature::dephasing ? "dephasing" : "amplitude";
}

inline Quadrature quadrature_from_name(const std::string& name) {
    if (name == "dephasing" || name == "z")
        return Quadrature::dephasing;
    if (name == "amplitude" || name == "omega")
        return Quadrature::amplitude;
    throw std::invalid_argument("unknown quadrature '" + name +
                                "' (want dephasing|z|amplitude|omega)");
}

// Params in JSON may be numbers or symbolic angle strings.
inline double json_angle(const json& v, const std::string& key) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return parse_angle(v.get<std::string>());
    throw std::invalid_argument("parameter '" + key +
                                "' must be a number or an angle string");
}

inline json to_json(const CatalogSpec& spec) {
    json params = json::object();
    for (const auto& [key, value] : spec.params)
        params[key] = value;
    return json{{"family", family_name(spec.family)},
                {"params", params},
                {"tau", spec.tau}};
}

inline CatalogSpec catalog_spec_from_json(const json& j) {
    CatalogSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            throw std::invalid_argument("'params' must be an object");
        for (const auto& [key, value] : j.at("params").items())
            spec.params[key] = json_angle(value, key);
    }
    spec.tau = j.value("tau", 1.0);
    return spec;
}

// Segments serialize in the normalized internal form (non-negative rate plus
// retained sign) so a written table reloads bit-identically; hand-written
// specs may use the constructor form {"rate": <signed>, ...} instead.
inline json to_json(const Segment& s) {
    return json{{"omega", s.omega},
                {"duration", s.tau},
                {"phase", s.phi},
                {"rabi_sign", s.rabi_sign}};
}

inline Segment segment_from_json(const json& j) {
    if (j.contains("rate"))
        return Segment(j.at("rate").get<double>(), j.at("duration").get<double>(),
                       j.value("phase", 0.0));
    Segment s;
    s.omega = j.at("omega").get<double>();
    s.tau = j.at("duration").get<double>();
    s.phi = j.value("phase", 0.0);
    s.rabi_sign = j.value("rabi_sign", 1);
    if (!(s.omega >= 0.0) || !(s.tau > 0.0) || !(s.phi >= 0.0) ||
        !(s.phi < two_pi) || (s.rabi_sign != 1 && s.rabi_sign != -1))
        throw std::invalid_argument("segment: invalid normalized fields");
    return s;
}

inline json to_json(const ControlSequence& seq) {
    json segs = json::array();
    for (const Segment& s : seq.segments)
        segs.push_back(to_json(s));
    return json{{"label", seq.label},
                {"duration", seq.duration()},
                {"segments", segs}};
}

inline ControlSequence sequence_from_json(const json& j) {
    if (j.contains("family"))
        return make_sequence(catalog_spec_from_json(j));
    if (j.contains("segments")) {
        std::vector<Segment> segs;
        for (const json& js : j.at("segments"))
            segs.push_back(segment_from_json(js));
        return ControlSequence(std::move(segs), j.value("label", std::string{}));
    }
    throw std::invalid_argument("sequence spec needs 'family' or 'segments'");
}

inline json to_json(const NoiseModel& m) {
    json j{{"quadrature", quadrature_name(m.quadrature)},
           {"family", m.family == PsdFamily::flat_band ? "flat_band" : "power_law"},
           {"amplitude", m.amplitude},
           {"w_low", m.w_low},
           {"w_high", m.w_high}};
    if (m.family == PsdFamily::power_law)
        j["alpha"] = m.alpha;
    return j;
}

// "xi_squared" rescales the PSD level so tau^2 <beta^2> hits the target for
// the given sequence duration; with it present "amplitude" is optional.
inline NoiseModel noise_model_from_json(const json& j, double tau_for_xi) {
    NoiseModel m;
    m.quadrature = quadrature_from_name(j.at("quadrature").get<std::string>());
    const std::string family = j.value("family", std::string("flat_band"));
    if (family == "flat_band") {
        m.family = PsdFamily::flat_band;
    } else if (family == "power_law") {
        m.family = PsdFamily::power_law;
        m.alpha = j.at("alpha").get<double>();
    } else {
        throw std::invalid_argument("unknown PSD family '" + family +
                                    "' (want flat_band|power_law)");
    }
    m.w_low = j.at("w_low").get<double>();
    m.w_high = j.at("w_high").get<double>();
    m.amplitude = j.value("amplitude", j.contains("xi_squared") ? 1.0 : 0.0);
    m.validate();
    if (j.contains("xi_squared"))
        m.set_xi_squared(j.at("xi_squared").get<double>(), tau_for_xi);
    return m;
}

// Full Monte-Carlo experiment description for the simulate command.
struct ExperimentSpec {
    ControlSequence sequence;
    std::vector<NoiseModel> models;
    std::size_t n_realizations = 500;
    int substeps = 0; // 0 = automatic
    std::size_t n_harmonics = 1024;
    std::uint64_t seed = 1;
};

inline ExperimentSpec experiment_from_json(const json& j) {
    ExperimentSpec spec{sequence_from_json(j.at("sequence")), {}, 500, 0, 1024, 1};
    const double tau = spec.sequence.duration();
    if (j.contains("noise"))
        for (const json& jm : j.at("noise"))
            spec.models.push_back(noise_model_from_json(jm, tau));
    spec.n_realizations = j.value("n_realizations", spec.n_realizations);
    spec.substeps = j.value("substeps", spec.substeps);
    spec.n_harmonics = j.value("n_harmonics", spec.n_harmonics);
    spec.seed = j.value("seed", spec.seed);
    return spec;
}

inline json to_json(const ExperimentSpec& spec) {
    json noise = json::array();
    for (const NoiseModel& m : spec.models)
        noise.push_back(to_json(m));
    return json{{"sequence", to_json(spec.sequence)},
                {"noise", noise},
                {"n_realizations", spec.n_realizations},
                {"substeps", spec.substeps},
                {"n_harmonics", spec.n_harmonics},
                {"seed", spec.seed}};
}

// CSV numbers carry 17 significant digits so doubles round-trip and equal
// runs produce bit-identical files.
inline std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_number(row[i]);
        out << '\n';
    }
}

} // namespace walshctl

#endif
