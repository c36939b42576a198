// Command-line front end: derives coefficients, Schmidt numbers and OAM
// spectra for a config file, runs parameter sweeps to CSV, and executes
// the oracle cross-check suite.
//
// Exit status: 0 full success, 1 any row/check failure, 2 config error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "biphoton/biphoton.hpp"

namespace {

int cmd_coeffs(const biphoton::ExperimentConfig& config) {
    const auto coeffs = biphoton::derive_biphoton_coeffs(config);
    const auto heralded = biphoton::derive_heralded_coeffs(coeffs, config.herald_mode_waist);
    std::printf("A = %s um^2\n", biphoton::format_number(coeffs.A).c_str());
    std::printf("B = %s um^2\n", biphoton::format_number(coeffs.B).c_str());
    std::printf("C = %s um^2\n", biphoton::format_number(coeffs.C).c_str());
    std::printf("D = %s um^2\n", biphoton::format_number(coeffs.D).c_str());
    std::printf("F = %s um^2\n", biphoton::format_number(heralded.F).c_str());
    std::printf("G = %s um^2\n", biphoton::format_number(heralded.G).c_str());
    return 0;
}

int cmd_schmidt(const biphoton::ExperimentConfig& config) {
    const auto result = biphoton::schmidt_number(biphoton::derive_biphoton_coeffs(config));
    std::printf("K = %s\n", biphoton::format_number(result.K).c_str());
    std::printf("Kx = %s\n", biphoton::format_number(result.Kx).c_str());
    std::printf("Ky = %s\n", biphoton::format_number(result.Ky).c_str());
    return 0;
}

int cmd_symmetry(const biphoton::ExperimentConfig& config) {
    const double length =
        biphoton::symmetric_cloud_length(config.cloud_transverse_size, config.pump_waist);
    std::printf("L* = %s um\n", biphoton::format_number(length).c_str());
    return 0;
}

int cmd_oam(const biphoton::ExperimentConfig& config, int m_max, const std::string& spectrum_out) {
    const auto coeffs = biphoton::derive_biphoton_coeffs(config);
    const auto heralded = biphoton::derive_heralded_coeffs(coeffs, config.herald_mode_waist);
    const auto spectrum = m_max < 0 ? biphoton::spiral_spectrum_auto(heralded)
                                    : biphoton::spiral_spectrum(heralded, m_max);

    std::printf("F = %s um^2\n", biphoton::format_number(heralded.F).c_str());
    std::printf("G = %s um^2\n", biphoton::format_number(heralded.G).c_str());
    std::printf("m_max = %d\n", spectrum.m_max);
    std::printf("residual = %s\n", biphoton::format_number(spectrum.residual).c_str());
    if (spectrum.truncated())
        std::fprintf(stderr, "warning: spectrum truncated, residual %s > 1e-6\n",
                     biphoton::format_number(spectrum.residual).c_str());
    for (const auto& [m, p] : spectrum.weights)
        std::printf("P(%d) = %s\n", m, biphoton::format_number(p).c_str());

    if (!spectrum_out.empty()) {
        std::ofstream out(spectrum_out, std::ios::binary | std::ios::trunc);
        if (!out)
            throw biphoton::io_error("cannot open output file: " + spectrum_out);
        out << "m,P\n";
        for (const auto& [m, p] : spectrum.weights)
            out << m << ',' << biphoton::format_number(p) << '\n';
        if (!out.flush())
            throw biphoton::io_error("error writing output file: " + spectrum_out);
    }
    return 0;
}

int cmd_sweep(const biphoton::ExperimentConfig& config, const std::string& var,
              double from, double to, int steps, const std::string& out_path,
              const std::string& outputs_csv) {
    static const std::map<std::string, biphoton::SweepVariable> variables = {
        {"angle", biphoton::SweepVariable::angle},
        {"length", biphoton::SweepVariable::cloud_length},
        {"w0", biphoton::SweepVariable::pump_waist},
        {"w1", biphoton::SweepVariable::filter_width},
    };

    biphoton::SweepSpec spec;
    spec.variable = variables.at(var);
    spec.start = from;
    spec.stop = to;
    spec.steps = steps;
    spec.base = config;
    if (!outputs_csv.empty()) {
        spec.outputs = 0;
        std::stringstream ss(outputs_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "coeffs")
                spec.outputs |= biphoton::output::coeffs;
            else if (item == "schmidt")
                spec.outputs |= biphoton::output::schmidt;
            else if (item == "oam_p0")
                spec.outputs |= biphoton::output::oam_p0;
            else if (item == "oam_full")
                spec.outputs |= biphoton::output::oam_full;
            else
                throw biphoton::invalid_config("unknown output \"" + item + "\"");
        }
    }

    const auto result = biphoton::run_sweep(spec);
    for (const auto& failure : result.failures)
        std::fprintf(stderr, "row %d (value %s): %s\n", failure.row,
                     biphoton::format_number(failure.variable_value).c_str(),
                     failure.message.c_str());
    if (!result.rows.empty())
        biphoton::emit_csv(result.rows, out_path);
    std::fprintf(stderr, "wrote %zu rows to %s (%zu failed)\n", result.rows.size(),
                 out_path.c_str(), result.failures.size());
    return result.failures.empty() ? 0 : 1;
}

int cmd_oracle(const biphoton::ExperimentConfig& config, int grid) {
    const auto report = biphoton::run_oracle_suite(config, grid);
    for (const auto& check : report.checks) {
        const char* tag = check.skipped ? "SKIP" : (check.passed ? "PASS" : "FAIL");
        std::printf("[%s] %s", tag, check.name.c_str());
        if (!check.skipped)
            std::printf(": discrepancy %s (tol %s)",
                        biphoton::format_number(check.discrepancy).c_str(),
                        biphoton::format_number(check.tolerance).c_str());
        if (!check.message.empty())
            std::printf(" - %s", check.message.c_str());
        std::printf("\n");
    }
    return report.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatial quantum state of photon pairs from cold-atom ensembles"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_path, spectrum_out, var, outputs_csv;
    double from = 0, to = 0;
    int steps = 0, m_max = -1, grid = 1024;

    auto* coeffs_cmd = app.add_subcommand("coeffs", "derived Gaussian coefficients");
    coeffs_cmd->add_option("config", config_path, "config file")->required();

    auto* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt number of the pair state");
    schmidt_cmd->add_option("config", config_path, "config file")->required();

    auto* oam_cmd = app.add_subcommand("oam", "heralded OAM spectrum");
    oam_cmd->add_option("config", config_path, "config file")->required();
    oam_cmd->add_option("--mmax", m_max, "truncation order (default: automatic)");
    oam_cmd->add_option("--spectrum-out", spectrum_out, "long-format CSV output path");

    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    sweep_cmd->add_option("config", config_path, "config file")->required();
    sweep_cmd->add_option("--var", var, "swept variable")
        ->required()
        ->check(CLI::IsMember({"angle", "length", "w0", "w1"}));
    sweep_cmd->add_option("--from", from, "start value (deg for angle, um otherwise)")->required();
    sweep_cmd->add_option("--to", to, "stop value")->required();
    sweep_cmd->add_option("--steps", steps, "number of rows")->required();
    sweep_cmd->add_option("--out", out_path, "CSV output path")->required();
    sweep_cmd->add_option("--outputs", outputs_csv,
                          "comma-separated subset of coeffs,schmidt,oam_p0,oam_full");

    auto* oracle_cmd = app.add_subcommand("oracle", "closed-form vs oracle cross-checks");
    oracle_cmd->add_option("config", config_path, "config file")->required();
    oracle_cmd->add_option("--grid", grid, "Schmidt oracle grid points");

    auto* symmetry_cmd = app.add_subcommand("symmetry", "cylindrical-symmetry cloud length L*");
    symmetry_cmd->add_option("config", config_path, "config file")->required();

    auto* preset_cmd = app.add_subcommand("preset", "print a built-in config");
    preset_cmd->add_option("name", preset_name, "fig2, fig3 or fig4")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    biphoton::ExperimentConfig config;
    try {
        if (preset_cmd->parsed()) {
            std::fputs(biphoton::preset_text(preset_name).c_str(), stdout);
            return 0;
        }
        config = biphoton::parse_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        if (coeffs_cmd->parsed())
            return cmd_coeffs(config);
        if (schmidt_cmd->parsed())
            return cmd_schmidt(config);
        if (oam_cmd->parsed())
            return cmd_oam(config, m_max, spectrum_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(config, var, from, to, steps, out_path, outputs_csv);
        if (oracle_cmd->parsed())
            return cmd_oracle(config, grid);
        if (symmetry_cmd->parsed())
            return cmd_symmetry(config);
    } catch (const biphoton::invalid_config& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
