// cli.hpp — declarative run configuration and subcommand orchestration

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sr/geometry.hpp"

namespace sr::cli {

struct GeometryConfig {
    std::string kind = "chain";  // chain | ring | square | cubic | dicke
    int nx = 2, ny = 1, nz = 1;  // dicke uses nx as the emitter count
    double spacing = 0.2;
    std::string polarization = "z";  // x | y | z | tangential
};

struct ScanConfig {
    double d_min = 0.1;
    double d_max = 1.0;
    int grid = 400;
    double refine_tol = 1e-4;
};

struct EnsembleConfig {
    std::string perturbation = "filling";  // filling | noise
    int samples = 100;
    double eta = 1.0;
    double sigma_rel = 0.0;
    std::uint64_t seed = 1;
};

struct DynamicsConfig {
    std::string backend = "liouville";  // liouville | trajectories
    bool hamiltonian = true;
    int n_traj = 1000;
    double t_end = 3.0;
    std::uint64_t seed = 1;
};

struct ImperfectionConfig {
    double phi = 1.0;                          // coherent-spin-state excitation probability
    std::array<double, 3> k = {k0, 0.0, 0.0};  // drive wavevector
    double gamma_nr = 0.0;                     // uniform non-radiative rate
    double sigma_gamma0 = 0.0;                 // inhomogeneous radiative-rate spread
    std::uint64_t seed = 1;
};

struct TauConfig {
    double tau_max = 1.0;
    int points = 51;
};

struct SolidStateConfig {
    std::vector<double> gamma_values = {0.0, 0.25, 0.5, 1.0};
    int samples = 1;  // stochastic rate draws per gamma when sigma_gamma0 > 0
};

struct OutputConfig {
    std::string path;           // CSV artifact; empty prints JSON to stdout
    std::string summary_path;   // JSON summary; defaults next to path
    std::string matrices_path;  // optional coupling-matrix dump (channels)
};

struct RunConfig {
    std::string subcommand;
    GeometryConfig geometry;
    ScanConfig scan;
    EnsembleConfig ensemble;
    DynamicsConfig dynamics;
    ImperfectionConfig imperfection;
    TauConfig tau;
    SolidStateConfig solidstate;
    OutputConfig output;
    std::vector<int> n_list;  // extra sizes for `critical` boundary sweeps
    unsigned threads = 0;
};

// Strict parsing: unknown keys anywhere in the document are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);
nlohmann::json resolved_config(const RunConfig& config);

// Emitter array described by the geometry and imperfection sections.
EmitterArray build_configured_array(const RunConfig& config);

// Executes one subcommand; writes the configured artifacts. Throws
// ValidationError / NumericalError / CapacityError on failure.
void run(const RunConfig& config);

// Maps an exception to the documented process exit code.
int exit_code_for_current_exception();

}  // namespace sr::cli
