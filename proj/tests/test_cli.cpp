#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sr/cli.hpp"
#include "sr/errors.hpp"
#include "sr/io.hpp"

using namespace sr;
using nlohmann::json;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("config parsing applies defaults and nested fields") {
    const json doc = {
        {"subcommand", "g2"},
        {"geometry", {{"kind", "square"}, {"nx", 4}, {"ny", 4}, {"spacing", 0.15}}},
        {"scan", {{"d_min", 0.2}, {"d_max", 0.8}}},
    };
    const cli::RunConfig config = cli::parse_config(doc);
    CHECK(config.subcommand == "g2");
    CHECK(config.geometry.kind == "square");
    CHECK(config.geometry.nx == 4);
    CHECK(config.geometry.spacing == 0.15);
    CHECK(config.scan.d_min == 0.2);
    CHECK(config.scan.grid == 400);  // default preserved
    CHECK(config.dynamics.backend == "liouville");
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(cli::parse_config(json{{"subcomand", "g2"}}), ValidationError);
    CHECK_THROWS_AS(cli::parse_config(json{{"geometry", {{"knd", "chain"}}}}),
                    ValidationError);
    CHECK_THROWS_AS(cli::parse_config(json{{"scan", {{"dmin", 0.1}}}}), ValidationError);
    CHECK_THROWS_AS(cli::parse_config(json{{"output", {{"file", "x.csv"}}}}),
                    ValidationError);
}

TEST_CASE("type mismatches are validation errors") {
    CHECK_THROWS_AS(cli::parse_config(json{{"geometry", {{"nx", "four"}}}}),
                    ValidationError);
    CHECK_THROWS_AS(cli::parse_config(json{{"threads", -2}}), ValidationError);
}

TEST_CASE("configured arrays honor geometry and imperfections") {
    cli::RunConfig config;
    config.geometry.kind = "dicke";
    config.geometry.nx = 4;
    CHECK(cli::build_configured_array(config).point_limit);

    config.geometry.kind = "ring";
    config.geometry.nx = 8;
    config.geometry.polarization = "tangential";
    config.imperfection.gamma_nr = 0.3;
    const EmitterArray ring = cli::build_configured_array(config);
    CHECK(ring.size() == 8);
    CHECK(ring.gamma_nr[3] == 0.3);

    config.imperfection.sigma_gamma0 = 0.1;
    config.imperfection.seed = 4;
    const EmitterArray broadened = cli::build_configured_array(config);
    bool any_changed = false;
    for (double g : broadened.gamma0) {
        CHECK(g > 0.0);
        if (g != 1.0) any_changed = true;
    }
    CHECK(any_changed);
}

TEST_CASE("unknown subcommand and bad enum values fail validation") {
    cli::RunConfig config;
    config.subcommand = "frobnicate";
    CHECK_THROWS_AS(cli::run(config), ValidationError);

    config.subcommand = "g2";
    config.geometry.kind = "hexagonal";
    CHECK_THROWS_AS(cli::run(config), ValidationError);

    config.geometry.kind = "chain";
    config.geometry.polarization = "diagonal";
    CHECK_THROWS_AS(cli::run(config), ValidationError);
}

TEST_CASE("sweep artifact carries units, provenance and a status record") {
    const auto path = temp_path("sr_cli_sweep_test.csv");
    std::filesystem::remove(path);

    cli::RunConfig config;
    config.subcommand = "sweep";
    config.geometry.kind = "chain";
    config.geometry.nx = 4;
    config.scan = {0.2, 0.6, 24, 1e-4};
    config.output.path = path.string();
    cli::run(config);

    const std::string text = read_file(path);
    CHECK(text.find("# config: ") != std::string::npos);
    CHECK(text.find("units") != std::string::npos);
    CHECK(text.find("d,g2,g3,variance") != std::string::npos);
    CHECK(text.find("# status: complete") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("simulate writes a JSON summary consistent with the statistics") {
    const auto csv_path = temp_path("sr_cli_sim_test.csv");
    const auto json_path = temp_path("sr_cli_sim_test.json");
    std::filesystem::remove(csv_path);
    std::filesystem::remove(json_path);

    cli::RunConfig config;
    config.subcommand = "simulate";
    config.geometry.kind = "dicke";
    config.geometry.nx = 5;
    config.dynamics.t_end = 1.0;
    config.output.path = csv_path.string();
    config.output.summary_path = json_path.string();
    cli::run(config);

    const json summary = json::parse(read_file(json_path));
    CHECK(summary.at("burst").get<bool>());
    CHECK(summary.at("t_max").get<double>() > 0.0);
    CHECK(summary.at("g2_of_geometry").get<double>() ==
          doctest::Approx(2.0 * 4.0 / 5.0).epsilon(1e-12));
    CHECK(summary.contains("config"));
    std::filesystem::remove(csv_path);
    std::filesystem::remove(json_path);
}

TEST_CASE("ensemble CSVs are byte-identical per seed") {
    const auto path_a = temp_path("sr_cli_ens_a.csv");
    const auto path_b = temp_path("sr_cli_ens_b.csv");
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);

    cli::RunConfig config;
    config.subcommand = "ensemble";
    config.geometry.kind = "square";
    config.geometry.nx = config.geometry.ny = 4;
    config.scan = {0.3, 0.9, 60, 1e-4};
    config.ensemble.samples = 6;
    config.ensemble.eta = 0.85;
    config.ensemble.seed = 11;
    config.output.path = path_a.string();
    cli::run(config);
    config.output.path = path_b.string();
    cli::run(config);

    const std::string a = read_file(path_a);
    std::string b = read_file(path_b);
    // normalize the provenance line, which embeds the differing output path
    const auto cut = [](std::string text) {
        const auto from = text.find("# units");
        return text.substr(from);
    };
    CHECK(cut(a) == cut(b));
    CHECK(a.find("# mean: ") != std::string::npos);
    CHECK(a.find("# histogram: ") != std::string::npos);
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);
}

TEST_CASE("channels artifact sweeps the rate spectrum and dumps matrices") {
    const auto path = temp_path("sr_cli_channels.csv");
    const auto mpath = temp_path("sr_cli_matrices.csv");
    std::filesystem::remove(path);
    std::filesystem::remove(mpath);

    cli::RunConfig config;
    config.subcommand = "channels";
    config.geometry.kind = "chain";
    config.geometry.nx = 3;
    config.geometry.spacing = 0.2;
    config.scan = {0.1, 0.3, 5, 1e-4};
    config.output.path = path.string();
    cli::run(config);
    {
        const std::string text = read_file(path);
        CHECK(text.find("d,channel,rate") != std::string::npos);
        // 5 spacings x 3 channels = 15 data rows
        int rows = 0;
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line[0] != '#' && line.rfind("d,", 0) != 0) ++rows;
        }
        CHECK(rows == 15);
    }

    // single-spectrum mode with the coupling-matrix dump
    config.scan.grid = 1;
    config.output.matrices_path = mpath.string();
    cli::run(config);
    const std::string matrices = read_file(mpath);
    CHECK(matrices.find("matrix,row,col,real,imag") != std::string::npos);
    CHECK(matrices.find("# n: 3") != std::string::npos);
    CHECK(matrices.find("Gamma,0,0,1,0") != std::string::npos);
    std::filesystem::remove(path);
    std::filesystem::remove(mpath);
}

TEST_CASE("g2tau artifact holds a flat curve for the tangential ring") {
    const auto path = temp_path("sr_cli_g2tau.csv");
    std::filesystem::remove(path);

    cli::RunConfig config;
    config.subcommand = "g2tau";
    config.geometry.kind = "ring";
    config.geometry.nx = 8;
    config.geometry.spacing = 0.25;
    config.geometry.polarization = "tangential";
    config.tau.tau_max = 0.5;
    config.tau.points = 11;
    config.output.path = path.string();
    cli::run(config);

    std::istringstream lines(read_file(path));
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("tau,", 0) == 0) continue;
        const double ratio = std::stod(line.substr(line.find(',') + 1));
        CHECK(ratio == doctest::Approx(1.0).epsilon(1e-8));
        ++rows;
    }
    CHECK(rows == 11);
    std::filesystem::remove(path);
}

TEST_CASE("solidstate artifact orders critical distances by loss rate") {
    const auto path = temp_path("sr_cli_solidstate.csv");
    std::filesystem::remove(path);

    cli::RunConfig config;
    config.subcommand = "solidstate";
    config.geometry.kind = "square";
    config.geometry.nx = config.geometry.ny = 4;
    config.geometry.polarization = "z";
    config.scan = {0.2, 0.6, 80, 1e-4};
    config.solidstate.gamma_values = {0.0, 0.5};
    config.output.path = path.string();
    cli::run(config);

    std::vector<double> criticals;
    std::istringstream lines(read_file(path));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("gamma_nr,", 0) == 0) continue;
        criticals.push_back(std::stod(line.substr(line.find_last_of(',') + 1)));
    }
    REQUIRE(criticals.size() == 2);
    CHECK(criticals[1] < criticals[0]);
    std::filesystem::remove(path);
}

TEST_CASE("missing output path for CSV subcommands is a validation error") {
    cli::RunConfig config;
    config.subcommand = "sweep";
    CHECK_THROWS_AS(cli::run(config), ValidationError);
    config.subcommand = "channels";
    CHECK_THROWS_AS(cli::run(config), ValidationError);
    config.subcommand = "ensemble";
    CHECK_THROWS_AS(cli::run(config), ValidationError);
}

TEST_CASE("csv writer leaves no unmarked partial files") {
    const auto path = temp_path("sr_cli_partial.csv");
    std::filesystem::remove(path);
    {
        CsvWriter csv(path);
        csv.comment("probe");
        // destroyed without finalize: the target path must not appear
    }
    CHECK(!std::filesystem::exists(path));
    const auto part = std::filesystem::path(path.string() + ".part");
    CHECK(std::filesystem::exists(part));
    const std::string text = read_file(part);
    CHECK(text.find("# status: aborted") != std::string::npos);
    std::filesystem::remove(part);
}

TEST_CASE("exit codes map the error taxonomy") {
    const auto code_for = [](auto&& thrower) {
        try {
            thrower();
        } catch (...) {
            return cli::exit_code_for_current_exception();
        }
        return 0;
    };
    CHECK(code_for([] { throw ValidationError("x"); }) == 1);
    CHECK(code_for([] { throw NumericalError("x"); }) == 2);
    CHECK(code_for([] { throw CapacityError("x"); }) == 3);
    CHECK(code_for([] { throw std::runtime_error("x"); }) == 2);
}
