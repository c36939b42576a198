#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "biphoton/config_io.hpp"

using namespace biphoton;
using Catch::Approx;

namespace {
const char* reference_text =
    "# transverse-emission reference geometry\n"
    "w0 = \"100um\"\n"
    "R = \"400um\"\n"
    "w1 = \"100um\"\n"
    "L = \"2mm\"\n"
    "phi = \"0deg\"\n"
    "wg = \"500um\"\n";
} // namespace

TEST_CASE("parses the reference config with unit suffixes and comments") {
    const auto config = parse_config_text(reference_text);
    CHECK(config.pump_waist == 100.0);
    CHECK(config.cloud_transverse_size == 400.0);
    CHECK(config.detection_filter_width == 100.0);
    CHECK(config.cloud_length == 2000.0); // mm converted
    CHECK(config.emission_angle == 0.0);
    CHECK(config.herald_mode_waist == 500.0);
    CHECK(config.pump_wavelength == 0.780); // defaults
    CHECK(config.refractive_index == 1.0);
}

TEST_CASE("angle and optional keys") {
    const auto config = parse_config_text(
        "R = \"400um\"\nL = \"2mm\"\nw0 = \"100um\"\nw1 = \"100um\"\nwg = \"500um\"\n"
        "phi = \"45deg\"\nlambda_p = \"0.795um\"\nn_p = \"1.0002\"\n");
    CHECK(config.emission_angle == Approx(deg_to_rad(45)).epsilon(1e-15));
    CHECK(config.pump_wavelength == 0.795);
    CHECK(config.refractive_index == 1.0002);
}

TEST_CASE("negative length is a validation error naming the field") {
    const std::string text =
        "R = \"400um\"\nL = \"-1um\"\nw0 = \"100um\"\nw1 = \"100um\"\nwg = \"500um\"\nphi = \"0deg\"\n";
    CHECK_THROWS_MATCHES(parse_config_text(text), invalid_config,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("cloud_length")));
}

TEST_CASE("unknown key is a parse error with its location") {
    const std::string text = "R = \"400um\"\nphii = \"0deg\"\n";
    try {
        parse_config_text(text, "test.cfg");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("unknown key \"phii\"") != std::string::npos);
    }
}

TEST_CASE("grammar violations are rejected") {
    CHECK_THROWS_AS(parse_config_text("R 400um\n"), parse_error);          // missing '='
    CHECK_THROWS_AS(parse_config_text("R = 400um\n"), parse_error);        // unquoted
    CHECK_THROWS_AS(parse_config_text("R = \"400um\n"), parse_error);      // unterminated
    CHECK_THROWS_AS(parse_config_text("R = \"400cm\"\n"), parse_error);    // unknown unit
    CHECK_THROWS_AS(parse_config_text("R = \"abcum\"\n"), parse_error);    // not a number
    CHECK_THROWS_AS(parse_config_text("phi = \"45\"\n"), parse_error);     // missing deg
    CHECK_THROWS_AS(parse_config_text("n_p = \"1.0x\"\n"), parse_error);   // trailing unit
    CHECK_THROWS_AS(parse_config_text("R = \"400um\" x\n"), parse_error);  // trailing text
    CHECK_THROWS_AS(parse_config_text("R = \"1um\"\nR = \"2um\"\n"), parse_error); // duplicate
    CHECK_THROWS_AS(parse_config_text("R = \"400um\"\n"), parse_error);    // missing keys
}

TEST_CASE("file round trip and io errors") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "biphoton_test_config.cfg";
    {
        std::ofstream out(path);
        out << reference_text;
    }
    const auto config = parse_config(path.string());
    CHECK(config.cloud_length == 2000.0);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(parse_config((dir / "does_not_exist_biphoton.cfg").string()), io_error);
}

TEST_CASE("presets parse through their own grammar") {
    for (const char* name : {"fig2", "fig3", "fig4"}) {
        const auto direct = preset(name);
        const auto reparsed = parse_config_text(preset_text(name));
        CHECK(reparsed.cloud_transverse_size == direct.cloud_transverse_size);
        CHECK(reparsed.cloud_length == direct.cloud_length);
        CHECK(reparsed.pump_waist == direct.pump_waist);
        CHECK(reparsed.detection_filter_width == direct.detection_filter_width);
        CHECK(reparsed.herald_mode_waist == direct.herald_mode_waist);
        CHECK(reparsed.emission_angle == Approx(direct.emission_angle).margin(1e-15));
    }
    CHECK(preset("fig4").cloud_transverse_size == 1000.0);
    CHECK(preset("fig3").emission_angle == Approx(deg_to_rad(90)).epsilon(1e-15));
    CHECK_THROWS_AS(preset("fig5"), invalid_config);
}

TEST_CASE("format_config emits the grammar it parses") {
    ExperimentConfig config = preset("fig2");
    config.emission_angle = deg_to_rad(33.5);
    config.refractive_index = 1.00025;
    const auto reparsed = parse_config_text(format_config(config));
    CHECK(reparsed.emission_angle == Approx(config.emission_angle).epsilon(1e-12));
    CHECK(reparsed.refractive_index == config.refractive_index);
}
