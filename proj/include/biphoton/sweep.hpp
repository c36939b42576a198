#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "biphoton/config_io.hpp"
#include "biphoton/core.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/mode_function.hpp"
#include "biphoton/oam.hpp"
#include "biphoton/schmidt.hpp"

// Parameter sweeps and the one-shot oracle suite. The sweep layer does no
// physics arithmetic of its own: every emitted number is produced by one
// operation of the geometry/mode/OAM/Schmidt modules. Rows are
// independent and are evaluated by a small worker pool; assembly is
// ordered by row index, so the output is identical for any worker count.

namespace biphoton {

enum class SweepVariable { angle, cloud_length, pump_waist, filter_width };

namespace output {
inline constexpr unsigned coeffs = 1u << 0;
inline constexpr unsigned schmidt = 1u << 1;
inline constexpr unsigned oam_p0 = 1u << 2;
inline constexpr unsigned oam_full = 1u << 3;
} // namespace output

struct SweepSpec {
    SweepVariable variable = SweepVariable::angle;
    double start = 0; // degrees for angle, um otherwise
    double stop = 0;
    int steps = 2;
    ExperimentConfig base;
    unsigned outputs = output::coeffs | output::schmidt | output::oam_p0;

    void validate() const {
        base.validate();
        if (!(start < stop))
            throw invalid_config("sweep requires start < stop");
        if (steps < 2 || steps > 1000000)
            throw invalid_config("sweep requires 2 <= steps <= 1e6");
        if (variable == SweepVariable::angle && (start < 0 || stop > 90))
            throw invalid_config("angle sweeps are confined to [0, 90] degrees");
        if (outputs == 0)
            throw invalid_config("sweep requires at least one output column");
    }
};

struct SweepRow {
    double variable_value = 0; // degrees for angle sweeps, um otherwise
    std::optional<double> A, B, C, D, F, G, K, P0;
    std::optional<std::string> spectrum_json;
};

struct SweepFailure {
    int row = 0;
    double variable_value = 0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;          // successful rows, in sweep order
    std::vector<SweepFailure> failures; // failed rows, in sweep order
};

/// Worker count for sweeps: BIPHOTON_WORKERS when set to a positive
/// integer, otherwise the available hardware parallelism.
inline int worker_count() {
    if (const char* env = std::getenv("BIPHOTON_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1 && n <= 4096)
            return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Compact JSON map of the non-negative half of a spiral spectrum,
/// {"0":...,"2":...}; the negative half is equal by symmetry.
inline std::string spectrum_to_json(const SpiralSpectrum& spectrum) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [m, p] : spectrum.weights) {
        if (m < 0)
            continue;
        if (!first)
            out << ',';
        first = false;
        out << '"' << m << "\":" << format_number(p);
    }
    out << '}';
    return out.str();
}

namespace detail {

inline SweepRow compute_row(const SweepSpec& spec, double value) {
    ExperimentConfig config = spec.base;
    switch (spec.variable) {
    case SweepVariable::angle:
        config.emission_angle = deg_to_rad(value);
        break;
    case SweepVariable::cloud_length:
        config.cloud_length = value;
        break;
    case SweepVariable::pump_waist:
        config.pump_waist = value;
        break;
    case SweepVariable::filter_width:
        config.detection_filter_width = value;
        break;
    }

    SweepRow row;
    row.variable_value = value;
    const auto coeffs = derive_biphoton_coeffs(config);
    const auto heralded = derive_heralded_coeffs(coeffs, config.herald_mode_waist);
    if (spec.outputs & output::coeffs) {
        row.A = coeffs.A;
        row.B = coeffs.B;
        row.C = coeffs.C;
        row.D = coeffs.D;
        row.F = heralded.F;
        row.G = heralded.G;
    }
    if (spec.outputs & output::schmidt)
        row.K = schmidt_number(coeffs).K;
    if (spec.outputs & output::oam_p0)
        row.P0 = spiral_weight(heralded, 0);
    if (spec.outputs & output::oam_full)
        row.spectrum_json = spectrum_to_json(spiral_spectrum_auto(heralded));
    return row;
}

} // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const int n = spec.steps;
    std::vector<std::optional<SweepRow>> slots(n);
    std::vector<std::optional<std::string>> errors(n);

    const int workers = std::min(worker_count(), n);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            const double value = spec.start + (spec.stop - spec.start) * i / (n - 1);
            try {
                slots[i] = detail::compute_row(spec, value);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    SweepResult result;
    result.rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (slots[i]) {
            result.rows.push_back(std::move(*slots[i]));
        } else {
            const double value = spec.start + (spec.stop - spec.start) * i / (n - 1);
            result.failures.push_back({i, value, errors[i].value_or("unknown failure")});
        }
    }
    return result;
}

/// CSV with the fixed column order
/// variable_value,A,B,C,D,F,G,K,P0,spectrum_json; floating-point cells
/// carry 12 significant digits, absent outputs are empty cells, lines end
/// with LF. Identical rows produce byte-identical text.
inline std::string to_csv(const std::vector<SweepRow>& rows) {
    if (rows.empty())
        throw invalid_config("no rows to serialize");
    std::ostringstream out;
    out << "variable_value,A,B,C,D,F,G,K,P0,spectrum_json\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? format_number(*v) : std::string();
    };
    for (const auto& row : rows) {
        out << format_number(row.variable_value) << ',' << cell(row.A) << ',' << cell(row.B)
            << ',' << cell(row.C) << ',' << cell(row.D) << ',' << cell(row.F) << ','
            << cell(row.G) << ',' << cell(row.K) << ',' << cell(row.P0) << ',';
        if (row.spectrum_json) {
            out << '"';
            for (char ch : *row.spectrum_json) {
                out << ch;
                if (ch == '"')
                    out << '"';
            }
            out << '"';
        }
        out << '\n';
    }
    return out.str();
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    const std::string text = to_csv(rows); // throws before the file is touched
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot open output file: " + path);
    out << text;
    out.flush();
    if (!out)
        throw io_error("error writing output file: " + path);
}

// ---------------------------------------------------------------------
// Oracle suite: every closed-form-vs-oracle comparison in one run.

struct OracleCheck {
    std::string name;
    bool passed = false;
    bool skipped = false;
    double discrepancy = 0;
    double tolerance = 0;
    std::string message;
};

struct OracleReport {
    std::vector<OracleCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.skipped && !c.passed)
                return false;
        return true;
    }
};

inline OracleReport run_oracle_suite(const ExperimentConfig& config, int grid_points = 1024) {
    config.validate();
    OracleReport report;
    const auto coeffs = derive_biphoton_coeffs(config);
    const auto heralded = derive_heralded_coeffs(coeffs, config.herald_mode_waist);

    {
        OracleCheck check{.name = "normalization", .tolerance = 1e-9};
        try {
            check.discrepancy = std::abs(normalization_check(coeffs) - 1.0);
            check.passed = check.discrepancy <= check.tolerance;
        } catch (const std::exception& e) {
            check.message = e.what();
        }
        report.checks.push_back(std::move(check));
    }

    {
        OracleCheck check{.name = "schmidt-closed-vs-svd", .tolerance = 1e-3};
        try {
            const double closed = schmidt_number(coeffs).K;
            const auto oracle = schmidt_oracle_svd_checked(coeffs, grid_points);
            check.discrepancy = std::abs(oracle.K - closed) / closed;
            check.passed = check.discrepancy <= check.tolerance;
        } catch (const std::exception& e) {
            check.message = e.what();
        }
        report.checks.push_back(std::move(check));
    }

    {
        OracleCheck check{.name = "oam-quadrature-vs-fft", .tolerance = 1e-4};
        try {
            const auto quad = spiral_spectrum_auto(heralded);
            const auto fft = spiral_spectrum_oracle_checked(heralded);
            double worst = 0;
            for (const auto& [m, p] : quad.weights) {
                const auto it = fft.weights.find(m);
                const double other = it == fft.weights.end() ? 0.0 : it->second;
                worst = std::max(worst, std::abs(p - other));
            }
            check.discrepancy = worst;
            check.passed = worst <= check.tolerance && fft.max_odd_weight <= 1e-12;
            if (fft.max_odd_weight > 1e-12)
                check.message = "odd-index weight above parity bound";
        } catch (const std::exception& e) {
            check.message = e.what();
        }
        report.checks.push_back(std::move(check));
    }

    {
        OracleCheck check{.name = "paraxial-reduction", .tolerance = 1e-2};
        if (config.cloud_length > 20.0) {
            check.skipped = true;
            check.message = "cloud longer than 20 um; short-cloud reduction not applicable";
        } else {
            try {
                const auto inputs = PhaseMatchingInputs::degenerate(config);
                check.discrepancy = paraxial_reduction_distance(config, inputs);
                check.passed = check.discrepancy <= check.tolerance;
            } catch (const std::exception& e) {
                check.message = e.what();
            }
        }
        report.checks.push_back(std::move(check));
    }

    return report;
}

} // namespace biphoton
