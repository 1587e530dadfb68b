// cli.cpp — configuration parsing and subcommand implementations

#include "sr/cli.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <type_traits>

#include "sr/channels.hpp"
#include "sr/criterion.hpp"
#include "sr/dynamics.hpp"
#include "sr/errors.hpp"
#include "sr/interactions.hpp"
#include "sr/io.hpp"
#include "sr/rng.hpp"
#include "sr/statistics.hpp"

namespace sr::cli {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError("unknown config key '" + item.key() + "' in " + where);
        }
    }
}

template <class T>
void read_field(const json& obj, const char* key, T& value) {
    if (!obj.contains(key)) return;
    const json& field = obj.at(key);
    if constexpr (std::is_unsigned_v<T>) {
        if (field.is_number_integer() && !field.is_number_unsigned()) {
            if (field.get<long long>() < 0) {
                throw ValidationError("config field '" + std::string(key) +
                                      "' must be non-negative");
            }
        }
    }
    try {
        value = field.get<T>();
    } catch (const json::exception& e) {
        throw ValidationError("config field '" + std::string(key) +
                              "' has the wrong type: " + e.what());
    }
}

LatticeSpec lattice_spec_from(const GeometryConfig& g) {
    LatticeSpec spec;
    if (g.kind == "chain") {
        spec.kind = LatticeKind::chain;
    } else if (g.kind == "ring") {
        spec.kind = LatticeKind::ring;
    } else if (g.kind == "square") {
        spec.kind = LatticeKind::square;
    } else if (g.kind == "cubic") {
        spec.kind = LatticeKind::cubic;
    } else {
        throw ValidationError("unknown geometry kind '" + g.kind + "'");
    }
    spec.nx = g.nx;
    spec.ny = g.ny;
    spec.nz = g.nz;
    spec.spacing = g.spacing;
    if (g.polarization == "x") {
        spec.polarization = Polarization::x();
    } else if (g.polarization == "y") {
        spec.polarization = Polarization::y();
    } else if (g.polarization == "z") {
        spec.polarization = Polarization::z();
    } else if (g.polarization == "tangential") {
        spec.polarization = Polarization::tangential();
    } else {
        throw ValidationError("unknown polarization '" + g.polarization + "'");
    }
    return spec;
}

void apply_imperfections(EmitterArray& array, const ImperfectionConfig& imp) {
    const int n = array.size();
    if (imp.gamma_nr < 0.0) throw ValidationError("gamma_nr must be >= 0");
    if (imp.sigma_gamma0 < 0.0) throw ValidationError("sigma_gamma0 must be >= 0");
    if (imp.gamma_nr > 0.0) array.gamma_nr.assign(n, imp.gamma_nr);
    if (imp.sigma_gamma0 > 0.0) {
        Rng rng(imp.seed);
        for (int i = 0; i < n; ++i) {
            double g = 0.0;
            do {
                g = 1.0 + imp.sigma_gamma0 * rng.normal();
            } while (g <= 0.0);
            array.gamma0[i] = g;
        }
    }
}

std::string direction_name(CrossingDirection dir) {
    return dir == CrossingDirection::upward ? "upward" : "downward";
}

void write_json_output(const RunConfig& config, const json& summary) {
    json doc = summary;
    doc["config"] = resolved_config(config);
    const std::string text = doc.dump(2) + "\n";
    std::string path = config.output.summary_path;
    if (path.empty() && !config.output.path.empty()) {
        path = config.output.path + ".summary.json";
    }
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open output file " + path);
    out << text;
}

void write_provenance(CsvWriter& csv, const RunConfig& config) {
    csv.comment("config: " + resolved_config(config).dump());
}

ScanOptions scan_options_from(const RunConfig& config, LatticeKind kind) {
    ScanOptions opts = ScanOptions::for_kind(kind);
    opts.grid = config.scan.grid;
    opts.refine_tol = config.scan.refine_tol;
    opts.threads = config.threads;
    return opts;
}

DRange range_from(const ScanConfig& scan) { return {scan.d_min, scan.d_max}; }

// ---------------------------------------------------------------- subcommands

void run_g2(const RunConfig& config) {
    const EmitterArray array = build_configured_array(config);
    const InteractionMatrices matrices = interaction_matrices(array);
    const RateMoments moments = rate_moments(matrices);
    const PhotonStatistics stats = photon_statistics(moments);

    json summary;
    summary["n"] = array.size();
    summary["g2"] = stats.g2;
    summary["variance"] = stats.variance;
    summary["burst_predicted"] = stats.burst_predicted;
    if (array.size() >= 3) summary["g3"] = stats.g3;

    const bool needs_channels = config.imperfection.phi < 1.0 ||
                                config.imperfection.gamma_nr > 0.0;
    if (needs_channels || config.imperfection.sigma_gamma0 > 0.0) {
        const DecayChannels channels = decay_channels(matrices);
        if (config.imperfection.phi < 1.0) {
            const Vec3 k(config.imperfection.k[0], config.imperfection.k[1],
                         config.imperfection.k[2]);
            const HoleState hole = coherent_spin_state_hole(config.imperfection.phi, k, array);
            summary["g2_imperfect"] = g2_imperfect(channels, hole);
            summary["imperfection_weight"] = hole.imperfection();
        }
        if (config.imperfection.gamma_nr > 0.0) {
            const G2NonRadiative nr = g2_nonradiative(channels, array.gamma_nr);
            summary["g2_nonradiative"] = nr.g2;
            if (nr.extrapolated) summary["g2_nonradiative_extrapolated"] = true;
        }
        if (config.imperfection.sigma_gamma0 > 0.0) {
            summary["g2_inhomogeneous"] = g2_inhomogeneous(moments, array.gamma0);
        }
    }
    write_json_output(config, summary);
}

void dump_matrices(const RunConfig& config, const InteractionMatrices& matrices) {
    CsvWriter csv(config.output.matrices_path);
    write_provenance(csv, config);
    csv.comment("n: " + std::to_string(matrices.size()));
    csv.comment("units: couplings in the single-emitter rate; row-major entries");
    csv.columns({"matrix", "row", "col", "real", "imag"});
    const auto dump = [&](const char* name, const MatXc& m) {
        for (int i = 0; i < matrices.size(); ++i) {
            for (int j = 0; j < matrices.size(); ++j) {
                csv.row({name, std::to_string(i), std::to_string(j),
                         CsvWriter::format_double(m(i, j).real()),
                         CsvWriter::format_double(m(i, j).imag())});
            }
        }
    };
    dump("J", matrices.J);
    dump("Gamma", matrices.Gamma);
    csv.finalize();
}

void run_channels(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("channels needs output.path for the CSV artifact");
    }
    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: d in wavelengths; rates in the single-emitter rate");
    csv.columns({"d", "channel", "rate"});

    // grid = 1 emits the single spectrum at the configured spacing; larger
    // grids sweep the decay-rate spectrum over [d_min, d_max]
    std::vector<double> spacings;
    if (config.scan.grid <= 1) {
        spacings.push_back(config.geometry.spacing);
    } else {
        for (int i = 0; i < config.scan.grid; ++i) {
            spacings.push_back(config.scan.d_min + (config.scan.d_max - config.scan.d_min) *
                                                       i / (config.scan.grid - 1));
        }
    }
    for (double d : spacings) {
        RunConfig at = config;
        at.geometry.spacing = d;
        const EmitterArray array = build_configured_array(at);
        const InteractionMatrices matrices = interaction_matrices(array);
        const DecayChannels channels = decay_channels(matrices);
        for (int nu = 0; nu < channels.size(); ++nu) {
            csv.row({d, static_cast<double>(nu), channels.rates[nu]});
        }
        if (!config.output.matrices_path.empty() && spacings.size() == 1) {
            dump_matrices(config, matrices);
        }
    }
    csv.finalize();
}

void run_sweep(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("sweep needs output.path for the CSV artifact");
    }
    const LatticeSpec spec = lattice_spec_from(config.geometry);
    const ArrayFamily family = ArrayFamily::from_spec(spec);
    const ScanOptions opts = scan_options_from(config, spec.kind);

    const std::vector<G2Sample> grid =
        scan_g2([&](double d) { return family.g2_at(d); }, range_from(config.scan), opts);

    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: d in wavelengths; g2, g3, variance dimensionless");
    csv.columns({"d", "g2", "g3", "variance"});
    for (const G2Sample& sample : grid) {
        EmitterArray array = family.at(sample.d);
        apply_imperfections(array, config.imperfection);
        const RateMoments moments = rate_moments(interaction_matrices(array));
        const PhotonStatistics stats = photon_statistics(moments);
        csv.row({sample.d, stats.g2, stats.g3, stats.variance});
    }
    csv.finalize();
}

void run_critical(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("critical needs output.path for the CSV artifact");
    }
    const GeometryConfig& g = config.geometry;
    std::vector<int> sizes = config.n_list;
    if (sizes.empty()) sizes.push_back(g.nx);

    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: d in wavelengths; n is the emitter count");
    csv.comment("direction: g2 crossing unity as d decreases");
    csv.columns({"n", "d_crossing", "direction"});
    for (int size : sizes) {
        GeometryConfig sized = g;
        sized.nx = size;
        if (g.kind == "square") sized.ny = size;
        if (g.kind == "cubic") sized.ny = sized.nz = size;
        const LatticeSpec spec = lattice_spec_from(sized);
        const ArrayFamily family = ArrayFamily::from_spec(spec);
        const CrossingSet crossings = find_critical_distance(
            family, range_from(config.scan), scan_options_from(config, spec.kind));
        for (const Crossing& c : crossings.crossings) {
            csv.row({std::to_string(spec.site_count()), CsvWriter::format_double(c.d),
                     direction_name(c.direction)});
        }
    }
    csv.finalize();
}

void run_ensemble(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("ensemble needs output.path for the CSV artifact");
    }
    const LatticeSpec spec = lattice_spec_from(config.geometry);
    Perturbation perturbation;
    if (config.ensemble.perturbation == "filling") {
        perturbation = FillingPerturbation{config.ensemble.eta};
    } else if (config.ensemble.perturbation == "noise") {
        perturbation = PositionNoisePerturbation{config.ensemble.sigma_rel};
    } else {
        throw ValidationError("unknown perturbation '" + config.ensemble.perturbation + "'");
    }

    EnsembleOptions opts;
    opts.scan = scan_options_from(config, spec.kind);
    const EnsembleResult result =
        ensemble_critical(spec, perturbation, config.ensemble.samples,
                          config.ensemble.seed, range_from(config.scan), opts);

    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: d_critical in wavelengths");
    csv.comment("mean: " + CsvWriter::format_double(result.mean));
    csv.comment("stddev: " + CsvWriter::format_double(result.stddev));
    csv.comment("failed: " + std::to_string(result.failed_count()));
    for (std::size_t b = 0; b + 1 < result.histogram_edges.size(); ++b) {
        csv.comment("histogram: " + CsvWriter::format_double(result.histogram_edges[b]) +
                    " " + CsvWriter::format_double(result.histogram_edges[b + 1]) + " " +
                    std::to_string(result.histogram_counts[b]));
    }
    csv.columns({"sample", "seed", "status", "d_critical"});
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const EnsembleSample& s = result.samples[i];
        const char* status = s.status == SampleStatus::ok          ? "ok"
                             : s.status == SampleStatus::degenerate ? "degenerate"
                                                                    : "no_crossing";
        csv.row({std::to_string(i), std::to_string(s.seed), status,
                 s.status == SampleStatus::ok ? CsvWriter::format_double(s.d_critical)
                                              : "nan"});
    }
    csv.finalize();
}

void run_simulate(const RunConfig& config) {
    const EmitterArray array = build_configured_array(config);

    DynamicsOptions opts;
    opts.include_hamiltonian = config.dynamics.hamiltonian;
    opts.t_end = config.dynamics.t_end;
    opts.n_traj = config.dynamics.n_traj;
    opts.seed = config.dynamics.seed;
    opts.threads = config.threads;

    EmissionTrace trace;
    if (config.dynamics.backend == "liouville") {
        trace = evolve_liouville(array, opts);
    } else if (config.dynamics.backend == "trajectories") {
        trace = evolve_trajectories(array, opts);
    } else {
        throw ValidationError("unknown dynamics backend '" + config.dynamics.backend + "'");
    }
    const BurstInfo burst = detect_burst(trace);

    if (!config.output.path.empty()) {
        CsvWriter csv(config.output.path);
        write_provenance(csv, config);
        csv.comment("units: t in inverse single-emitter rate; rate in the single-emitter rate");
        csv.comment("backend: " + trace.backend);
        csv.columns({"t", "rate", "stderr"});
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            csv.row({trace.times[i], trace.rate[i],
                     trace.std_error.empty() ? 0.0 : trace.std_error[i]});
        }
        csv.finalize();
    }

    json summary;
    summary["t_max"] = burst.t_max;
    summary["peak_ratio"] = burst.peak_ratio;
    summary["burst"] = burst.burst;
    summary["backend"] = trace.backend;
    if (array.size() >= 2) {
        summary["g2_of_geometry"] =
            g2_zero(rate_moments(interaction_matrices(array), false));
    }
    write_json_output(config, summary);
}

void run_g2tau(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("g2tau needs output.path for the CSV artifact");
    }
    if (config.tau.points < 2 || !(config.tau.tau_max > 0.0)) {
        throw ValidationError("tau grid needs points >= 2 and tau_max > 0");
    }
    const EmitterArray array = build_configured_array(config);
    const InteractionMatrices matrices = interaction_matrices(array);
    const DecayChannels channels = decay_channels(matrices);

    std::vector<double> taus(config.tau.points);
    for (int i = 0; i < config.tau.points; ++i) {
        taus[i] = config.tau.tau_max * i / (config.tau.points - 1);
    }
    const std::vector<double> ratio = g2_tau_ratio(channels, matrices.J, taus);

    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: tau in inverse single-emitter rate; ratio dimensionless");
    csv.columns({"tau", "ratio"});
    for (std::size_t i = 0; i < taus.size(); ++i) csv.row({taus[i], ratio[i]});
    csv.finalize();
}

void run_solidstate(const RunConfig& config) {
    if (config.output.path.empty()) {
        throw ValidationError("solidstate needs output.path for the CSV artifact");
    }
    const LatticeSpec spec = lattice_spec_from(config.geometry);
    const int samples = std::max(1, config.solidstate.samples);

    CsvWriter csv(config.output.path);
    write_provenance(csv, config);
    csv.comment("units: gamma_nr in the single-emitter rate; d_critical in wavelengths");
    csv.columns({"gamma_nr", "sample", "d_critical"});
    for (double gamma : config.solidstate.gamma_values) {
        if (gamma < 0.0) throw ValidationError("gamma values must be >= 0");
        for (int s = 0; s < samples; ++s) {
            const ArrayFamily base = ArrayFamily::from_spec(spec);
            EmitterArray unit = base.unit();
            unit.gamma_nr.assign(unit.size(), gamma);
            if (config.imperfection.sigma_gamma0 > 0.0) {
                ImperfectionConfig draw = config.imperfection;
                draw.gamma_nr = 0.0;
                draw.seed = child_seed(config.imperfection.seed, s);
                apply_imperfections(unit, draw);
            }
            const ArrayFamily family{std::move(unit)};
            const auto g2_of_d = [&](double d) {
                const InteractionMatrices m = interaction_matrices(family.at(d));
                const DecayChannels ch = decay_channels(m);
                return g2_nonradiative(ch, family.unit().gamma_nr).g2;
            };
            const CrossingSet crossings = find_crossings(
                g2_of_d, range_from(config.scan), scan_options_from(config, spec.kind));
            csv.row({CsvWriter::format_double(gamma), std::to_string(s),
                     crossings.empty() ? "nan"
                                       : CsvWriter::format_double(
                                             crossings.critical_distance())});
        }
    }
    csv.finalize();
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config root must be a JSON object");
    reject_unknown_keys(doc,
                        {"subcommand", "geometry", "scan", "ensemble", "dynamics",
                         "imperfection", "tau", "solidstate", "output", "n_list",
                         "threads"},
                        "config root");
    RunConfig config;
    read_field(doc, "subcommand", config.subcommand);
    read_field(doc, "n_list", config.n_list);
    read_field(doc, "threads", config.threads);

    if (doc.contains("geometry")) {
        const json& g = doc.at("geometry");
        reject_unknown_keys(g, {"kind", "nx", "ny", "nz", "spacing", "polarization"},
                            "geometry");
        read_field(g, "kind", config.geometry.kind);
        read_field(g, "nx", config.geometry.nx);
        read_field(g, "ny", config.geometry.ny);
        read_field(g, "nz", config.geometry.nz);
        read_field(g, "spacing", config.geometry.spacing);
        read_field(g, "polarization", config.geometry.polarization);
    }
    if (doc.contains("scan")) {
        const json& s = doc.at("scan");
        reject_unknown_keys(s, {"d_min", "d_max", "grid", "refine_tol"}, "scan");
        read_field(s, "d_min", config.scan.d_min);
        read_field(s, "d_max", config.scan.d_max);
        read_field(s, "grid", config.scan.grid);
        read_field(s, "refine_tol", config.scan.refine_tol);
    }
    if (doc.contains("ensemble")) {
        const json& e = doc.at("ensemble");
        reject_unknown_keys(e, {"perturbation", "samples", "eta", "sigma_rel", "seed"},
                            "ensemble");
        read_field(e, "perturbation", config.ensemble.perturbation);
        read_field(e, "samples", config.ensemble.samples);
        read_field(e, "eta", config.ensemble.eta);
        read_field(e, "sigma_rel", config.ensemble.sigma_rel);
        read_field(e, "seed", config.ensemble.seed);
    }
    if (doc.contains("dynamics")) {
        const json& d = doc.at("dynamics");
        reject_unknown_keys(d, {"backend", "hamiltonian", "n_traj", "t_end", "seed"},
                            "dynamics");
        read_field(d, "backend", config.dynamics.backend);
        read_field(d, "hamiltonian", config.dynamics.hamiltonian);
        read_field(d, "n_traj", config.dynamics.n_traj);
        read_field(d, "t_end", config.dynamics.t_end);
        read_field(d, "seed", config.dynamics.seed);
    }
    if (doc.contains("imperfection")) {
        const json& i = doc.at("imperfection");
        reject_unknown_keys(i, {"phi", "k", "gamma_nr", "sigma_gamma0", "seed"},
                            "imperfection");
        read_field(i, "phi", config.imperfection.phi);
        read_field(i, "k", config.imperfection.k);
        read_field(i, "gamma_nr", config.imperfection.gamma_nr);
        read_field(i, "sigma_gamma0", config.imperfection.sigma_gamma0);
        read_field(i, "seed", config.imperfection.seed);
    }
    if (doc.contains("tau")) {
        const json& t = doc.at("tau");
        reject_unknown_keys(t, {"tau_max", "points"}, "tau");
        read_field(t, "tau_max", config.tau.tau_max);
        read_field(t, "points", config.tau.points);
    }
    if (doc.contains("solidstate")) {
        const json& s = doc.at("solidstate");
        reject_unknown_keys(s, {"gamma_values", "samples"}, "solidstate");
        read_field(s, "gamma_values", config.solidstate.gamma_values);
        read_field(s, "samples", config.solidstate.samples);
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown_keys(o, {"path", "summary_path", "matrices_path"}, "output");
        read_field(o, "path", config.output.path);
        read_field(o, "summary_path", config.output.summary_path);
        read_field(o, "matrices_path", config.output.matrices_path);
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json resolved_config(const RunConfig& c) {
    json doc;
    doc["subcommand"] = c.subcommand;
    doc["geometry"] = {{"kind", c.geometry.kind},     {"nx", c.geometry.nx},
                       {"ny", c.geometry.ny},         {"nz", c.geometry.nz},
                       {"spacing", c.geometry.spacing},
                       {"polarization", c.geometry.polarization}};
    doc["scan"] = {{"d_min", c.scan.d_min},
                   {"d_max", c.scan.d_max},
                   {"grid", c.scan.grid},
                   {"refine_tol", c.scan.refine_tol}};
    doc["ensemble"] = {{"perturbation", c.ensemble.perturbation},
                       {"samples", c.ensemble.samples},
                       {"eta", c.ensemble.eta},
                       {"sigma_rel", c.ensemble.sigma_rel},
                       {"seed", c.ensemble.seed}};
    doc["dynamics"] = {{"backend", c.dynamics.backend},
                       {"hamiltonian", c.dynamics.hamiltonian},
                       {"n_traj", c.dynamics.n_traj},
                       {"t_end", c.dynamics.t_end},
                       {"seed", c.dynamics.seed}};
    doc["imperfection"] = {{"phi", c.imperfection.phi},
                           {"k", c.imperfection.k},
                           {"gamma_nr", c.imperfection.gamma_nr},
                           {"sigma_gamma0", c.imperfection.sigma_gamma0},
                           {"seed", c.imperfection.seed}};
    doc["tau"] = {{"tau_max", c.tau.tau_max}, {"points", c.tau.points}};
    doc["solidstate"] = {{"gamma_values", c.solidstate.gamma_values},
                         {"samples", c.solidstate.samples}};
    doc["output"] = {{"path", c.output.path},
                     {"summary_path", c.output.summary_path},
                     {"matrices_path", c.output.matrices_path}};
    doc["n_list"] = c.n_list;
    doc["threads"] = c.threads;
    return doc;
}

EmitterArray build_configured_array(const RunConfig& config) {
    EmitterArray array;
    if (config.geometry.kind == "dicke") {
        array = dicke_point(config.geometry.nx);
    } else {
        array = build_lattice(lattice_spec_from(config.geometry));
    }
    apply_imperfections(array, config.imperfection);
    return array;
}

void run(const RunConfig& config) {
    if (config.subcommand == "g2") {
        run_g2(config);
    } else if (config.subcommand == "channels") {
        run_channels(config);
    } else if (config.subcommand == "sweep") {
        run_sweep(config);
    } else if (config.subcommand == "critical") {
        run_critical(config);
    } else if (config.subcommand == "ensemble") {
        run_ensemble(config);
    } else if (config.subcommand == "simulate") {
        run_simulate(config);
    } else if (config.subcommand == "g2tau") {
        run_g2tau(config);
    } else if (config.subcommand == "solidstate") {
        run_solidstate(config);
    } else {
        throw ValidationError("unknown subcommand '" + config.subcommand + "'");
    }
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const ValidationError&) {
        return 1;
    } catch (const CapacityError&) {
        return 3;
    } catch (const Error&) {
        return 2;
    } catch (const std::exception&) {
        return 2;
    }
}

}  // namespace sr::cli
