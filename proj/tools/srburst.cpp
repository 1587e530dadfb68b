// srburst.cpp — command-line entry point

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "sr/cli.hpp"

namespace {

struct Overrides {
    std::optional<std::string> kind, polarization, backend, perturbation, out, summary,
        matrices;
    std::optional<int> nx, ny, nz, grid, samples, n_traj, tau_points;
    std::optional<double> spacing, d_min, d_max, eta, sigma_rel, t_end, phi, gamma_nr,
        sigma_gamma0, tau_max;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<bool> hamiltonian;
    std::vector<int> n_list;
};

void add_common_options(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("--config", config_path, "JSON run configuration");
    cmd->add_option("--kind", ov.kind, "geometry kind: chain|ring|square|cubic|dicke");
    cmd->add_option("--nx", ov.nx, "sites along x (emitter count for chain/ring/dicke)");
    cmd->add_option("--ny", ov.ny, "sites along y");
    cmd->add_option("--nz", ov.nz, "sites along z");
    cmd->add_option("--spacing,-d", ov.spacing, "lattice constant in wavelengths");
    cmd->add_option("--pol", ov.polarization, "polarization: x|y|z|tangential");
    cmd->add_option("--dmin", ov.d_min, "scan lower bound");
    cmd->add_option("--dmax", ov.d_max, "scan upper bound");
    cmd->add_option("--grid", ov.grid, "scan grid points");
    cmd->add_option("--samples", ov.samples, "ensemble samples");
    cmd->add_option("--eta", ov.eta, "filling fraction");
    cmd->add_option("--sigma-rel", ov.sigma_rel, "position noise relative to the spacing");
    cmd->add_option("--perturbation", ov.perturbation, "ensemble perturbation: filling|noise");
    cmd->add_option("--backend", ov.backend, "dynamics backend: liouville|trajectories");
    cmd->add_option("--ntraj", ov.n_traj, "trajectory count");
    cmd->add_option("--tend", ov.t_end, "evolution end time");
    cmd->add_option("--hamiltonian", ov.hamiltonian, "include coherent interactions");
    cmd->add_option("--phi", ov.phi, "coherent-spin-state excitation probability");
    cmd->add_option("--gamma-nr", ov.gamma_nr, "uniform non-radiative rate");
    cmd->add_option("--sigma-gamma0", ov.sigma_gamma0, "radiative-rate inhomogeneity");
    cmd->add_option("--tau-max", ov.tau_max, "largest delay time");
    cmd->add_option("--tau-points", ov.tau_points, "delay grid points");
    cmd->add_option("--seed", ov.seed, "master seed (ensemble / dynamics / imperfection)");
    cmd->add_option("--threads", ov.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out,-o", ov.out, "CSV output path");
    cmd->add_option("--summary", ov.summary, "JSON summary path");
    cmd->add_option("--dump-matrices", ov.matrices, "coupling-matrix CSV path");
    cmd->add_option("--n-list", ov.n_list, "sizes for critical boundary sweeps");
}

void apply_overrides(sr::cli::RunConfig& config, const Overrides& ov) {
    if (ov.kind) config.geometry.kind = *ov.kind;
    if (ov.nx) config.geometry.nx = *ov.nx;
    if (ov.ny) config.geometry.ny = *ov.ny;
    if (ov.nz) config.geometry.nz = *ov.nz;
    if (ov.spacing) config.geometry.spacing = *ov.spacing;
    if (ov.polarization) config.geometry.polarization = *ov.polarization;
    if (ov.d_min) config.scan.d_min = *ov.d_min;
    if (ov.d_max) config.scan.d_max = *ov.d_max;
    if (ov.grid) config.scan.grid = *ov.grid;
    if (ov.samples) config.ensemble.samples = *ov.samples;
    if (ov.eta) config.ensemble.eta = *ov.eta;
    if (ov.sigma_rel) config.ensemble.sigma_rel = *ov.sigma_rel;
    if (ov.perturbation) config.ensemble.perturbation = *ov.perturbation;
    if (ov.backend) config.dynamics.backend = *ov.backend;
    if (ov.n_traj) config.dynamics.n_traj = *ov.n_traj;
    if (ov.t_end) config.dynamics.t_end = *ov.t_end;
    if (ov.hamiltonian) config.dynamics.hamiltonian = *ov.hamiltonian;
    if (ov.phi) config.imperfection.phi = *ov.phi;
    if (ov.gamma_nr) config.imperfection.gamma_nr = *ov.gamma_nr;
    if (ov.sigma_gamma0) config.imperfection.sigma_gamma0 = *ov.sigma_gamma0;
    if (ov.tau_max) config.tau.tau_max = *ov.tau_max;
    if (ov.tau_points) config.tau.points = *ov.tau_points;
    if (ov.seed) {
        config.ensemble.seed = *ov.seed;
        config.dynamics.seed = *ov.seed;
        config.imperfection.seed = *ov.seed;
    }
    if (ov.threads) config.threads = *ov.threads;
    if (ov.out) config.output.path = *ov.out;
    if (ov.summary) config.output.summary_path = *ov.summary;
    if (ov.matrices) config.output.matrices_path = *ov.matrices;
    if (!ov.n_list.empty()) config.n_list = ov.n_list;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superradiant-burst prediction for emitter arrays"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"g2", "photon statistics of one geometry"},
        {"channels", "collective decay-rate spectrum"},
        {"sweep", "g2/g3 versus lattice constant"},
        {"critical", "crossings of g2 through unity"},
        {"ensemble", "critical distance over stochastic realizations"},
        {"simulate", "emission rate from exact evolution"},
        {"g2tau", "delayed two-photon correlation ratio"},
        {"solidstate", "critical distance versus non-radiative decay"},
    };

    std::string config_path;
    Overrides ov;
    for (const auto& [name, description] : subcommands) {
        add_common_options(app.add_subcommand(name, description), config_path, ov);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sr::cli::RunConfig config;
        if (!config_path.empty()) config = sr::cli::load_config_file(config_path);
        config.subcommand = app.get_subcommands().front()->get_name();
        apply_overrides(config, ov);
        sr::cli::run(config);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sr::cli::exit_code_for_current_exception();
    }
}
