// walshctl: command-line front end for Walsh-modulated qubit control.
// Subcommands construct catalog sequences, evaluate and export
// filter-transfer functions, integrate band costs, fit filter orders, run
// optimizations and cost maps, apply envelope shaping, and drive
// Monte-Carlo noise simulations.
//
// Exit codes: 0 success, 2 option/spec errors, 3 numeric failures or
// step-size violations, 4 optimizer failed to improve on its seed.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "walshctl/io.hpp"
#include "walshctl/optimize.hpp"
#include "walshctl/shaping.hpp"
#include "walshctl/simulate.hpp"
#include "walshctl/spectral.hpp"

namespace {

using namespace walshctl;

struct no_improvement_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct step_size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- plumbing

json load_json_or_inline(const std::string& text) {
    if (!text.empty() && (text[0] == '{' || text[0] == '['))
        return json::parse(text);
    std::ifstream in(text);
    if (!in)
        throw std::invalid_argument("cannot open spec file: " + text);
    return json::parse(in);
}

// Writes the command payload to stdout or a file and echoes the resolved
// configuration to stderr (plus a sidecar next to a file output) so every
// run records its provenance.
class Output {
  public:
    explicit Output(std::string path) : path_(std::move(path)) {}

    void echo_config(const json& config) const {
        std::cerr << config.dump() << '\n';
        if (path_ != "-") {
            std::ofstream side(path_ + ".config.json", std::ios::binary);
            if (!side)
                throw std::invalid_argument("cannot write config sidecar for: " + path_);
            side << config.dump(2) << '\n';
        }
    }

    void write(const std::string& body) const {
        if (path_ == "-") {
            std::cout << body;
            return;
        }
        std::ofstream out(path_, std::ios::binary);
        if (!out)
            throw std::invalid_argument("cannot write output file: " + path_);
        out << body;
    }

  private:
    std::string path_;
};

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ostringstream s;
    write_csv(s, header, rows);
    return s.str();
}

// ------------------------------------------------------- sequence sourcing

struct SequenceOptions {
    std::string family;
    std::string params;
    std::string spec;
    std::string tau = "1";
};

void add_sequence_options(CLI::App* cmd, SequenceOptions& opt) {
    auto* family = cmd->add_option(
        "--family", opt.family,
        "catalog family: primitive|wamf03|wamf07|wpmf_correction|bb1|wrse|uwmf1|uwmf2");
    cmd->add_option("--params", opt.params,
                    "comma-separated name=value pairs; values may be symbolic "
                    "multiples of pi (x0=3pi, theta=pi/4)");
    cmd->add_option("--tau", opt.tau, "total sequence duration");
    cmd->add_option("--spec", opt.spec,
                    "sequence spec as inline JSON or a path to a JSON file")
        ->excludes(family);
}

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--params entries must be name=value, got '" +
                                        item + "'");
        const std::string key = item.substr(0, eq);
        if (out.count(key))
            throw std::invalid_argument("--params repeats '" + key + "'");
        out[key] = parse_angle(item.substr(eq + 1));
    }
    return out;
}

CatalogSpec catalog_from_options(const SequenceOptions& opt) {
    if (opt.family.empty())
        throw std::invalid_argument("need --family (with --params) or --spec");
    CatalogSpec spec;
    spec.family = family_from_name(opt.family);
    spec.params = parse_params(opt.params);
    spec.tau = parse_angle(opt.tau);
    return spec;
}

ControlSequence build_sequence(const SequenceOptions& opt, json* config) {
    if (!opt.spec.empty()) {
        const json j = load_json_or_inline(opt.spec);
        if (config)
            *config = j;
        return sequence_from_json(j);
    }
    const CatalogSpec spec = catalog_from_options(opt);
    if (config)
        *config = to_json(spec);
    return make_sequence(spec);
}

// ----------------------------------------------------------------- shaping

struct ShapeSpec {
    std::string kind;      // gaussian | trapezoid | butterworth
    double value = 0.0;    // g, f, or fc/fs
    std::size_t n = 0;     // substeps or total samples
};

ShapeSpec parse_shape(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument(
            "--shape wants kind:key=value[,n=N], e.g. gaussian:g=0.1666");
    ShapeSpec shape;
    shape.kind = text.substr(0, colon);
    std::string expected_key;
    if (shape.kind == "gaussian") {
        expected_key = "g";
        shape.n = 100;
    } else if (shape.kind == "trapezoid") {
        expected_key = "f";
        shape.n = 100;
    } else if (shape.kind == "butterworth") {
        expected_key = "fc";
        shape.n = 2048;
    } else {
        throw std::invalid_argument("unknown shape kind '" + shape.kind +
                                    "' (want gaussian|trapezoid|butterworth)");
    }
    bool have_value = false;
    std::istringstream stream(text.substr(colon + 1));
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--shape entries must be key=value, got '" +
                                        item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == expected_key) {
            shape.value = parse_angle(value);
            have_value = true;
        } else if (key == "n") {
            shape.n = static_cast<std::size_t>(
                detail::parse_full_double(value, "--shape n"));
        } else {
            throw std::invalid_argument("--shape " + shape.kind +
                                        " does not take '" + key + "'");
        }
    }
    if (!have_value)
        throw std::invalid_argument("--shape " + shape.kind + " needs " +
                                    expected_key + "=<value>");
    return shape;
}

json to_json(const ShapeSpec& shape) {
    return json{{"kind", shape.kind}, {"value", shape.value}, {"n", shape.n}};
}

// Envelope shaping of the rotation-angle profile needs the Walsh spectrum,
// so it is limited to the amplitude-modulated catalog families; the
// pre-modulation filter applies to any sequence with phases 0 or pi.
ControlSequence shaped_sequence(const ShapeSpec& shape, const SequenceOptions& opt,
                                json* config) {
    if (shape.kind == "butterworth")
        return butterworth_sequence(build_sequence(opt, config), shape.value,
                                    shape.n);
    if (!opt.spec.empty())
        throw std::invalid_argument(
            "gaussian/trapezoid shaping needs --family wamf03 or wamf07");
    const CatalogSpec cat = catalog_from_options(opt);
    make_sequence(cat); // validates the parameter set
    WalshSpectrum spectrum;
    spectrum.tau = cat.tau;
    if (cat.family == Family::wamf03) {
        spectrum.amplitudes = {cat.params.at("x0"), 0.0, 0.0, cat.params.at("x3")};
    } else if (cat.family == Family::wamf07) {
        spectrum.amplitudes = {cat.params.at("x0"), 0.0, 0.0, cat.params.at("x3"),
                               0.0, cat.params.at("x5"), cat.params.at("x6")};
    } else {
        throw std::invalid_argument(
            "gaussian/trapezoid shaping supports wamf03 and wamf07");
    }
    if (config)
        *config = to_json(cat);
    return shape.kind == "gaussian"
               ? gaussian_sequence(spectrum, shape.value, shape.n)
               : trapezoid_sequence(spectrum, shape.value, shape.n);
}

json sequence_report(const ControlSequence& seq) {
    json body = to_json(seq);
    const TotalRotation rot = total_rotation(seq);
    body["big_theta"] = rot.big_theta;
    body["theta_eff"] = rot.theta_eff;
    return body;
}

// ---------------------------------------------------------------- commands

struct CatalogCmd {
    SequenceOptions seq;
    std::string output = "-";
};

void run_catalog(const CatalogCmd& o) {
    json seq_config;
    const ControlSequence seq = build_sequence(o.seq, &seq_config);
    const Output out(o.output);
    out.echo_config(json{{"command", "catalog"},
                         {"sequence", seq_config},
                         {"output", o.output}});
    out.write(sequence_report(seq).dump(2) + "\n");
}

struct ShapeCmd {
    SequenceOptions seq;
    std::string shape;
    std::string output = "-";
};

void run_shape(const ShapeCmd& o) {
    const ShapeSpec shape = parse_shape(o.shape);
    json seq_config;
    const ControlSequence shaped = shaped_sequence(shape, o.seq, &seq_config);
    const Output out(o.output);
    out.echo_config(json{{"command", "shape"},
                         {"sequence", seq_config},
                         {"shape", to_json(shape)},
                         {"output", o.output}});
    out.write(sequence_report(shaped).dump(2) + "\n");
}

struct EvalCmd {
    SequenceOptions seq;
    std::string grid;
    std::string shape;
    unsigned threads = 1;
    std::string output = "-";
};

void run_eval(const EvalCmd& o) {
    const GridSpec grid = parse_grid(o.grid);
    json seq_config;
    ShapeSpec shape;
    const bool shaped = !o.shape.empty();
    if (shaped)
        shape = parse_shape(o.shape);
    const ControlSequence seq = shaped ? shaped_sequence(shape, o.seq, &seq_config)
                                       : build_sequence(o.seq, &seq_config);
    const double tau = seq.duration();

    // Grid values are dimensionless w tau; evaluation wants physical w.
    std::vector<double> wt = grid.grid();
    std::vector<double> physical(wt.size());
    for (std::size_t i = 0; i < wt.size(); ++i)
        physical[i] = wt[i] / tau;
    const FilterSamples fs = filter_functions(seq, physical, o.threads);

    const Output out(o.output);
    json config{{"command", "eval"},
                {"sequence", seq_config},
                {"grid", json{{"w_low_tau", grid.w_low},
                              {"w_high_tau", grid.w_high},
                              {"points_per_decade", grid.points_per_decade}}},
                {"threads", o.threads},
                {"output", o.output}};
    if (shaped)
        config["shape"] = to_json(shape);
    out.echo_config(config);

    std::vector<std::vector<double>> rows(wt.size());
    for (std::size_t i = 0; i < wt.size(); ++i)
        rows[i] = {wt[i], fs.f_z[i], fs.f_omega[i]};
    out.write(csv_text({"omega_tau", "F_z", "F_omega"}, rows));
}

struct CostCmd {
    SequenceOptions seq;
    std::string grid;
    std::string quadrature = "both";
    std::string output = "-";
};

void run_cost(const CostCmd& o) {
    const GridSpec grid = parse_grid(o.grid);
    const bool want_z = o.quadrature == "both" || o.quadrature == "z" ||
                        o.quadrature == "dephasing";
    const bool want_omega = o.quadrature == "both" || o.quadrature == "omega" ||
                            o.quadrature == "amplitude";
    if (!want_z && !want_omega)
        throw std::invalid_argument("--quadrature wants z|omega|both");
    json seq_config;
    const ControlSequence seq = build_sequence(o.seq, &seq_config);
    const double tau = seq.duration();

    const Output out(o.output);
    out.echo_config(json{{"command", "cost"},
                         {"sequence", seq_config},
                         {"grid", json{{"w_low_tau", grid.w_low},
                                       {"w_high_tau", grid.w_high},
                                       {"points_per_decade", grid.points_per_decade}}},
                         {"quadrature", o.quadrature},
                         {"output", o.output}});

    json result{{"label", seq.label},
                {"w_low_tau", grid.w_low},
                {"w_high_tau", grid.w_high}};
    if (want_z) {
        const CostBand band{grid.w_low / tau, grid.w_high / tau,
                            Quadrature::dephasing, grid.points_per_decade};
        result["dephasing_cost"] = cost(seq, band);
    }
    if (want_omega) {
        const CostBand band{grid.w_low / tau, grid.w_high / tau,
                            Quadrature::amplitude, grid.points_per_decade};
        result["amplitude_cost"] = cost(seq, band);
    }
    out.write(result.dump(2) + "\n");
}

struct OrderCmd {
    SequenceOptions seq;
    std::string grid;
    std::string quadrature = "z";
    std::string instantaneous;
    std::string output = "-";
};

void run_order(const OrderCmd& o) {
    const GridSpec grid = parse_grid(o.grid);
    const Quadrature q = quadrature_from_name(o.quadrature);
    json seq_config;
    const ControlSequence seq = build_sequence(o.seq, &seq_config);
    const double tau = seq.duration();

    const Output out(o.output);
    out.echo_config(json{{"command", "order"},
                         {"sequence", seq_config},
                         {"grid", json{{"w_low_tau", grid.w_low},
                                       {"w_high_tau", grid.w_high},
                                       {"points_per_decade", grid.points_per_decade}}},
                         {"quadrature", quadrature_name(q)},
                         {"instantaneous", o.instantaneous},
                         {"output", o.output}});

    const OrderEstimate est = filter_order(seq, q, grid.w_low / tau,
                                           grid.w_high / tau,
                                           grid.points_per_decade);
    json result{{"label", seq.label},       {"quadrature", quadrature_name(q)},
                {"slope", est.slope},       {"order", est.order},
                {"w_low_tau", grid.w_low},  {"w_high_tau", grid.w_high},
                {"rms_residual", est.rms_residual}, {"poor_fit", est.poor_fit}};
    out.write(result.dump(2) + "\n");

    if (!o.instantaneous.empty()) {
        const auto points = instantaneous_order(seq, q, grid.w_low / tau,
                                                grid.w_high / tau,
                                                grid.points_per_decade);
        std::vector<std::vector<double>> rows(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            rows[i] = {points[i].w * tau, points[i].p_star};
        Output(o.instantaneous)
            .write(csv_text({"omega_tau", "p_star"}, rows));
    }
}

struct OptimizeCmd {
    std::string problem;
    std::string x0;
    std::string bracket = "0.5pi:1.5pi";
    std::string grid;
    std::string x3_seed = "pi";
    std::string vary = "x3,x5,x6";
    std::string output = "-";
};

// Reduced-coordinate variant of the two-stage band optimization: fixed
// depths stay at their seed values while the varied subset descends the
// same penalty-plus-polish objectives.
Wamf07Optimum optimize_wamf07_subset(double x0, const CostBand& band,
                                     const std::vector<double>& seed_depths,
                                     const std::vector<int>& varied) {
    auto expand = [&](const std::vector<double>& reduced) {
        std::vector<double> full = seed_depths;
        for (std::size_t i = 0; i < varied.size(); ++i)
            full[varied[i]] = reduced[i];
        return full;
    };
    auto surrogate = [&](const std::vector<double>& full) {
        const ControlSequence seq = wamf07(x0, full[0], full[1], full[2]);
        const double c2 = taylor_coefficient(seq, Quadrature::dephasing, 1);
        const double c4 = taylor_coefficient(seq, Quadrature::dephasing, 2);
        return c2 * c2 + 0.01 * c4 * c4;
    };

    OptimizationProblem descent;
    descent.objective = [&](const std::vector<double>& reduced) {
        const auto full = expand(reduced);
        if (full[0] < 0.0 || full[0] > 2.0 * pi || std::abs(full[1]) > pi ||
            std::abs(full[2]) > pi)
            return 1e6;
        return cost(wamf07(x0, full[0], full[1], full[2]), band) +
               1e12 * surrogate(full);
    };
    descent.initial.resize(varied.size());
    for (std::size_t i = 0; i < varied.size(); ++i)
        descent.initial[i] = seed_depths[varied[i]];
    descent.x_tol = 1e-8;
    descent.f_tol = 1e-22;
    descent.max_iterations = 3000;
    descent.restarts = 2;
    const OptimizationResult stage_a = nelder_mead(descent);

    OptimizationProblem polish;
    polish.objective = [&](const std::vector<double>& reduced) {
        return surrogate(expand(reduced));
    };
    polish.initial = stage_a.argmin;
    polish.x_tol = 1e-10;
    polish.f_tol = 1e-30;
    polish.max_iterations = 2000;
    polish.restarts = 0;
    polish.initial_step = 0.02 * pi;
    const OptimizationResult stage_b = nelder_mead(polish);

    Wamf07Optimum out;
    out.depths = expand(stage_b.argmin);
    const ControlSequence best =
        wamf07(x0, out.depths[0], out.depths[1], out.depths[2]);
    out.band_cost = cost(best, band);
    out.seed_cost =
        cost(wamf07(x0, seed_depths[0], seed_depths[1], seed_depths[2]), band);
    out.c2 = taylor_coefficient(best, Quadrature::dephasing, 1);
    out.c4 = taylor_coefficient(best, Quadrature::dephasing, 2);
    out.iterations = stage_a.iterations + stage_b.iterations;
    return out;
}

void run_optimize(const OptimizeCmd& o) {
    const double x0 = parse_angle(o.x0);
    const Output out(o.output);

    if (o.problem == "wamf03-tune") {
        const auto colon = o.bracket.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--bracket wants lo:hi");
        const double lo = parse_angle(o.bracket.substr(0, colon));
        const double hi = parse_angle(o.bracket.substr(colon + 1));
        out.echo_config(json{{"command", "optimize"},
                             {"problem", o.problem},
                             {"x0", x0},
                             {"bracket", json::array({lo, hi})},
                             {"output", o.output}});
        const double x3 = find_c2_zero(x0, lo, hi);
        out.write(json{{"problem", o.problem},
                       {"x0", x0},
                       {"x3", x3},
                       {"x3_over_pi", x3 / pi},
                       {"c2_inner", wamf03_c2_inner(x0, x3)},
                       {"c2_dephasing", wamf03_c2_dephasing(x0, x3)}}
                      .dump(2) +
                  "\n");
        return;
    }

    if (o.problem != "wamf07-band")
        throw std::invalid_argument("--problem wants wamf03-tune|wamf07-band");
    if (o.grid.empty())
        throw std::invalid_argument("wamf07-band needs --grid for the stopband");
    const GridSpec grid = parse_grid(o.grid);
    const CostBand band{grid.w_low, grid.w_high, Quadrature::dephasing,
                        grid.points_per_decade};

    std::vector<int> varied;
    std::istringstream stream(o.vary);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item == "x3")
            varied.push_back(0);
        else if (item == "x5")
            varied.push_back(1);
        else if (item == "x6")
            varied.push_back(2);
        else
            throw std::invalid_argument("--vary entries must be x3|x5|x6, got '" +
                                        item + "'");
    }
    if (varied.empty())
        throw std::invalid_argument("--vary names no coordinates: nothing to optimize");
    std::sort(varied.begin(), varied.end());
    if (std::unique(varied.begin(), varied.end()) != varied.end())
        throw std::invalid_argument("--vary repeats a coordinate");

    const double x3_seed = parse_angle(o.x3_seed);
    out.echo_config(json{{"command", "optimize"},
                         {"problem", o.problem},
                         {"x0", x0},
                         {"x3_seed", x3_seed},
                         {"vary", o.vary},
                         {"grid", json{{"w_low_tau", grid.w_low},
                                       {"w_high_tau", grid.w_high},
                                       {"points_per_decade", grid.points_per_decade}}},
                         {"output", o.output}});

    const Wamf07Optimum r =
        varied.size() == 3
            ? optimize_wamf07(x0, band, x3_seed)
            : optimize_wamf07_subset(x0, band, {x3_seed, 0.0, 0.0}, varied);
    out.write(json{{"problem", o.problem},
                   {"x0", x0},
                   {"x3", r.depths[0]},
                   {"x5", r.depths[1]},
                   {"x6", r.depths[2]},
                   {"band_cost", r.band_cost},
                   {"seed_cost", r.seed_cost},
                   {"c2", r.c2},
                   {"c4", r.c4},
                   {"iterations", r.iterations}}
                  .dump(2) +
              "\n");
    if (!(r.band_cost < r.seed_cost))
        throw no_improvement_error("optimizer did not improve on the seed cost");
}

struct MapCmd {
    std::string family;
    std::string fixed;
    std::string x_axis;
    std::string y_axis;
    std::string grid;
    std::string quadrature = "z";
    std::string tau = "1";
    unsigned threads = 1;
    std::string output = "-";
};

AxisSpec parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ':'))
        parts.push_back(item);
    if (parts.size() != 4)
        throw std::invalid_argument("axis wants name:lo:hi:count, got '" + text +
                                    "'");
    AxisSpec axis;
    axis.name = parts[0];
    axis.lo = parse_angle(parts[1]);
    axis.hi = parse_angle(parts[2]);
    axis.count =
        static_cast<int>(detail::parse_full_double(parts[3], "axis count"));
    axis.validate();
    return axis;
}

void run_map(const MapCmd& o) {
    const GridSpec grid = parse_grid(o.grid);
    const Quadrature q = quadrature_from_name(o.quadrature);
    const AxisSpec x_axis = parse_axis(o.x_axis);
    const AxisSpec y_axis = parse_axis(o.y_axis);
    const Family family = family_from_name(o.family);
    const auto fixed = parse_params(o.fixed);
    const double tau = parse_angle(o.tau);
    if (x_axis.name == y_axis.name || fixed.count(x_axis.name) ||
        fixed.count(y_axis.name))
        throw std::invalid_argument("axis names must be distinct from each other "
                                    "and from --fixed parameters");
    const CostBand band{grid.w_low / tau, grid.w_high / tau, q,
                        grid.points_per_decade};

    const Output out(o.output);
    out.echo_config(json{{"command", "map"},
                         {"family", o.family},
                         {"fixed", o.fixed},
                         {"x_axis", json{{"name", x_axis.name}, {"lo", x_axis.lo},
                                         {"hi", x_axis.hi}, {"count", x_axis.count}}},
                         {"y_axis", json{{"name", y_axis.name}, {"lo", y_axis.lo},
                                         {"hi", y_axis.hi}, {"count", y_axis.count}}},
                         {"grid", json{{"w_low_tau", grid.w_low},
                                       {"w_high_tau", grid.w_high},
                                       {"points_per_decade", grid.points_per_decade}}},
                         {"quadrature", quadrature_name(q)},
                         {"tau", tau},
                         {"threads", o.threads},
                         {"output", o.output}});

    auto builder = [&](double x, double y) {
        CatalogSpec spec;
        spec.family = family;
        spec.params = fixed;
        spec.params[x_axis.name] = x;
        spec.params[y_axis.name] = y;
        spec.tau = tau;
        return make_sequence(spec);
    };
    const CostMap m = cost_map(builder, x_axis, y_axis, band, o.threads);

    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(x_axis.count) * y_axis.count);
    for (int iy = 0; iy < y_axis.count; ++iy)
        for (int ix = 0; ix < x_axis.count; ++ix)
            rows.push_back({x_axis.at(ix), y_axis.at(iy), m.at(ix, iy)});
    out.write(csv_text({x_axis.name, y_axis.name, "log10_cost"}, rows));
}

struct SimulateCmd {
    std::string spec;
    std::string seed;
    unsigned threads = 1;
    std::string output = "-";
};

void run_simulate(const SimulateCmd& o) {
    const json j = load_json_or_inline(o.spec);
    std::vector<ExperimentSpec> runs;
    if (j.contains("experiments"))
        for (const json& je : j.at("experiments"))
            runs.push_back(experiment_from_json(je));
    else
        runs.push_back(experiment_from_json(j));
    if (!o.seed.empty())
        for (ExperimentSpec& run : runs)
            run.seed = static_cast<std::uint64_t>(
                detail::parse_full_double(o.seed, "--seed"));

    const Output out(o.output);
    json resolved = json::array();
    for (const ExperimentSpec& run : runs)
        resolved.push_back(to_json(run));
    out.echo_config(json{{"command", "simulate"},
                         {"experiments", resolved},
                         {"threads", o.threads},
                         {"output", o.output}});

    bool warned = false;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const ExperimentSpec& run = runs[i];
        EnsembleOptions opts;
        opts.substeps_per_segment = run.substeps;
        opts.n_harmonics = run.n_harmonics;
        opts.n_threads = o.threads;
        const EnsembleResult res = ensemble_infidelity(
            run.sequence, run.models, run.n_realizations, run.seed, opts);
        const InfidelityPrediction pred =
            predicted_infidelity(run.sequence, run.models);
        warned = warned || res.step_warning;
        rows.push_back({static_cast<double>(i),
                        static_cast<double>(res.n_realizations), res.infidelity,
                        res.standard_error, pred.value, pred.dephasing_part,
                        pred.amplitude_part, res.step_warning ? 1.0 : 0.0});
    }
    out.write(csv_text({"run", "n_realizations", "infidelity", "standard_error",
                        "predicted", "predicted_dephasing", "predicted_amplitude",
                        "step_warning"},
                       rows));
    if (warned)
        throw step_size_error(
            "substep budget violates max(Omega, beta) dt < 0.05; raise 'substeps'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Walsh-modulated qubit control: sequence synthesis, "
                 "filter-transfer functions, band optimization, envelope "
                 "shaping, and Monte-Carlo noise validation"};
    app.require_subcommand(1);

    auto catalog_cmd = std::make_shared<CatalogCmd>();
    auto* catalog_app =
        app.add_subcommand("catalog", "construct a sequence and print its segments");
    add_sequence_options(catalog_app, catalog_cmd->seq);
    catalog_app->add_option("--output", catalog_cmd->output, "output path, '-' = stdout");
    catalog_app->callback([catalog_cmd] { run_catalog(*catalog_cmd); });

    auto eval_cmd = std::make_shared<EvalCmd>();
    auto* eval_app = app.add_subcommand(
        "eval", "evaluate filter-transfer functions over a frequency grid");
    add_sequence_options(eval_app, eval_cmd->seq);
    eval_app->add_option("--grid", eval_cmd->grid, "w_min:w_max:points_per_decade in units of 1/tau")
        ->required();
    eval_app->add_option("--shape", eval_cmd->shape,
                         "apply envelope shaping: gaussian:g=G | trapezoid:f=F | "
                         "butterworth:fc=FC[,n=N]");
    eval_app->add_option("--threads", eval_cmd->threads, "worker threads");
    eval_app->add_option("--output", eval_cmd->output, "CSV path, '-' = stdout");
    eval_app->callback([eval_cmd] { run_eval(*eval_cmd); });

    auto cost_cmd = std::make_shared<CostCmd>();
    auto* cost_app =
        app.add_subcommand("cost", "integrate filter functions over a stopband");
    add_sequence_options(cost_app, cost_cmd->seq);
    cost_app->add_option("--grid", cost_cmd->grid, "w_min:w_max:points_per_decade")
        ->required();
    cost_app->add_option("--quadrature", cost_cmd->quadrature, "z|omega|both");
    cost_app->add_option("--output", cost_cmd->output, "JSON path, '-' = stdout");
    cost_app->callback([cost_cmd] { run_cost(*cost_cmd); });

    auto order_cmd = std::make_shared<OrderCmd>();
    auto* order_app =
        app.add_subcommand("order", "fit the log-log filter slope over a band");
    add_sequence_options(order_app, order_cmd->seq);
    order_app->add_option("--grid", order_cmd->grid, "w_min:w_max:points_per_decade")
        ->required();
    order_app->add_option("--quadrature", order_cmd->quadrature, "z|omega");
    order_app->add_option("--instantaneous", order_cmd->instantaneous,
                          "also write per-frequency local order to this CSV path");
    order_app->add_option("--output", order_cmd->output, "JSON path, '-' = stdout");
    order_app->callback([order_cmd] { run_order(*order_cmd); });

    auto optimize_cmd = std::make_shared<OptimizeCmd>();
    auto* optimize_app = app.add_subcommand(
        "optimize", "tune modulation depths: first-order zero or band cost");
    optimize_app
        ->add_option("--problem", optimize_cmd->problem, "wamf03-tune|wamf07-band")
        ->required();
    optimize_app->add_option("--x0", optimize_cmd->x0, "fixed X0 depth, e.g. 3pi")
        ->required();
    optimize_app->add_option("--bracket", optimize_cmd->bracket,
                             "bisection bracket lo:hi for wamf03-tune");
    optimize_app->add_option("--grid", optimize_cmd->grid,
                             "stopband w_min:w_max:points_per_decade for wamf07-band");
    optimize_app->add_option("--x3-seed", optimize_cmd->x3_seed,
                             "starting X3 for wamf07-band");
    optimize_app->add_option("--vary", optimize_cmd->vary,
                             "comma list of varied depths (subset of x3,x5,x6)");
    optimize_app->add_option("--output", optimize_cmd->output, "JSON path, '-' = stdout");
    optimize_app->callback([optimize_cmd] { run_optimize(*optimize_cmd); });

    auto map_cmd = std::make_shared<MapCmd>();
    auto* map_app = app.add_subcommand(
        "map", "log10 band-cost map over two catalog parameters");
    map_app->add_option("--family", map_cmd->family, "catalog family")->required();
    map_app->add_option("--fixed", map_cmd->fixed, "fixed name=value parameters");
    map_app->add_option("--x-axis", map_cmd->x_axis, "name:lo:hi:count")->required();
    map_app->add_option("--y-axis", map_cmd->y_axis, "name:lo:hi:count")->required();
    map_app->add_option("--grid", map_cmd->grid, "w_min:w_max:points_per_decade")
        ->required();
    map_app->add_option("--quadrature", map_cmd->quadrature, "z|omega");
    map_app->add_option("--tau", map_cmd->tau, "sequence duration");
    map_app->add_option("--threads", map_cmd->threads, "worker threads");
    map_app->add_option("--output", map_cmd->output, "CSV path, '-' = stdout");
    map_app->callback([map_cmd] { run_map(*map_cmd); });

    auto shape_cmd = std::make_shared<ShapeCmd>();
    auto* shape_app = app.add_subcommand(
        "shape", "apply envelope shaping and print the shaped segments");
    add_sequence_options(shape_app, shape_cmd->seq);
    shape_app->add_option("--shape", shape_cmd->shape,
                          "gaussian:g=G | trapezoid:f=F | butterworth:fc=FC[,n=N]")
        ->required();
    shape_app->add_option("--output", shape_cmd->output, "JSON path, '-' = stdout");
    shape_app->callback([shape_cmd] { run_shape(*shape_cmd); });

    auto simulate_cmd = std::make_shared<SimulateCmd>();
    auto* simulate_app = app.add_subcommand(
        "simulate", "Monte-Carlo ensemble infidelity for a JSON experiment spec");
    simulate_app
        ->add_option("--spec", simulate_cmd->spec,
                     "experiment spec: inline JSON or a path to a JSON file")
        ->required();
    simulate_app->add_option("--seed", simulate_cmd->seed,
                             "override the spec's ensemble seed");
    simulate_app->add_option("--threads", simulate_cmd->threads, "worker threads");
    simulate_app->add_option("--output", simulate_cmd->output, "CSV path, '-' = stdout");
    simulate_app->callback([simulate_cmd] { run_simulate(*simulate_cmd); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const no_improvement_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const step_size_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
