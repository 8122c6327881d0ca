#include <doctest.h>

#include <string>

#include "interimsim/presets.hpp"
#include "interimsim/scenario_file.hpp"

using namespace interimsim;

namespace {

const char* kMinimal = R"(name = mini
endpoint = normal_unknown_var
design = single_arm
n_max = 60
interims = 20:50:15   # range
theta0 = 0.25
delta = 0.1
cutoff = 0.63
replicates = 10
seed = 5

[generating]
prior = normal(0.25, 0.04, 40)

[user]
prior = nix(0.25, 5, 5, 40)

[variant "vague"]
prior = nix(0.25, 0.1, 5, 40)
)";

int error_line(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("parses a minimal document") {
    const ScenarioFile f = parse_scenario(kMinimal);
    CHECK(f.base.name == "mini");
    CHECK(f.base.endpoint == Endpoint::normal_unknown_var);
    CHECK(f.base.interims == std::vector<int>{20, 35, 50});
    CHECK(f.base.delta == 0.1);
    CHECK(f.base.n_replicates == 10);
    CHECK(f.base.user == ArmPrior{NixPrior{0.25, 5, 5, 40}});
    CHECK(f.base.generating == ArmPrior{NormalKnownVarPrior{0.25, 0.04, 40}});
    REQUIRE(f.variants.size() == 1);
    CHECK(f.row_label(0) == "vague");
    CHECK(f.scenario_for(0).user == ArmPrior{NixPrior{0.25, 0.1, 5, 40}});
    CHECK_FALSE(f.cutoff_auto);
}

TEST_CASE("every preset round-trips") {
    REQUIRE(preset_catalog().size() >= 19);
    for (const auto& p : preset_catalog()) {
        CAPTURE(p.name);
        const ScenarioFile a = parse_scenario(p.text);
        const ScenarioFile b = parse_scenario(serialize_scenario(a));
        REQUIRE(a == b);
        for (std::size_t v = 0; v < a.n_rows(); ++v) a.scenario_for(v).validate();
    }
}

TEST_CASE("errors name the line") {
    std::string text = kMinimal;
    CHECK(error_line(text + "bogus = 1\n") == 20);
    CHECK(error_line("name = a\nendpoint = binary\nn_max = 10\nn_max = 20\n") == 4);
    CHECK(error_line("name = a\n[nowhere]\n") == 2);
    CHECK(error_line("interims = 5, x\n") == 1);
    CHECK(error_line("endpoint = binary\n[generating]\nprior = beta(1)\n") == 3);
    try {
        parse_scenario(text + "\nbogus = 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 21") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("invalid scenarios are rejected") {
    std::string text = kMinimal;
    std::string bad = text;
    bad.replace(bad.find("n_max = 60"), 10, "n_max = 30");
    CHECK_THROWS(parse_scenario(bad));
    bad = text;
    bad.replace(bad.find("nix(0.25, 5, 5, 40)"), 19, "nix(0.25, -5, 5, 40)");
    CHECK_THROWS(parse_scenario(bad));
    bad = text;
    bad.replace(bad.find("interims = 20:50:15"), 19, "interims = 50, 20");
    CHECK_THROWS(parse_scenario(bad));
    bad = text;
    bad.replace(bad.find("cutoff = 0.63"), 13, "cutoff = 1.5");
    CHECK_THROWS(parse_scenario(bad));
}

TEST_CASE("cutoff auto and interims none") {
    std::string text = kMinimal;
    text.replace(text.find("cutoff = 0.63"), 13, "cutoff = auto");
    text.replace(text.find("interims = 20:50:15"), 19, "interims = none");
    const ScenarioFile f = parse_scenario(text);
    CHECK(f.cutoff_auto);
    CHECK(f.base.interims.empty());
    CHECK(parse_scenario(serialize_scenario(f)) == f);
}

TEST_CASE("prior expressions") {
    CHECK(parse_arm_prior("beta(3, 3)") == ArmPrior{BetaPrior{3, 3}});
    CHECK(parse_arm_prior("normal(0,1)") == ArmPrior{NormalKnownVarPrior{0, 1, 1}});
    CHECK_THROWS(parse_arm_prior("beta(1)"));
    CHECK_THROWS(parse_arm_prior("cauchy(0, 1)"));
    CHECK(format_arm_prior(BetaPrior{0.06, 0.04}) == "beta(0.06, 0.04)");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-9) == "1e-09");
}

TEST_CASE("presets resolve by name and unknown names fail") {
    CHECK(preset_text("table2").has_value());
    CHECK_FALSE(preset_text("table99").has_value());
    CHECK(load_scenario("table3").base.endpoint == Endpoint::normal_known_var);
    CHECK_THROWS(load_scenario("no-such-preset"));
}
