#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "interimsim/engine.hpp"
#include "interimsim/presets.hpp"

using namespace interimsim;

namespace {

Scenario binary_scenario() {
    Scenario s;
    s.endpoint = Endpoint::binary;
    s.n_max = 100;
    s.interims = {40, 70};
    s.theta0 = 0.6;
    s.cutoff = 0.689;
    s.generating = BetaPrior{0.6 * 20, 0.4 * 20};
    s.user = BetaPrior{0.6 * 20, 0.4 * 20};
    s.n_replicates = 3000;
    s.seed = 11;
    return s;
}

bool same(const TrialRecord& a, const TrialRecord& b) {
    return a.rejected == b.rejected && a.stop_analysis == b.stop_analysis && a.final_n == b.final_n &&
           a.true_value == b.true_value && a.summary == b.summary;
}

}  // namespace

TEST_CASE("censoring at an analysis") {
    const AccrualPlan plan{{5.0}, {1}};
    const SurvData d = observe_at(plan, {10.0}, 12.0);
    REQUIRE(d.size() == 1);
    CHECK(d[0].time == doctest::Approx(7.0));
    CHECK_FALSE(d[0].event);
    const SurvData later = observe_at(plan, {10.0}, 15.0);
    CHECK(later[0].event);
    CHECK(later[0].time == 10.0);
    CHECK(observe_at(plan, {10.0}, 4.0).empty());
}

TEST_CASE("accrual and analysis times") {
    Scenario s = binary_scenario();
    s.endpoint = Endpoint::survival;
    s.design = Design::rct;
    s.n_max = 50;
    s.interims = {20, 35};
    RngStream rng(1, 0);
    const AccrualPlan plan = build_accrual(s, rng);
    REQUIRE(plan.arrivals.size() == 100);
    for (std::size_t i = 1; i < plan.arrivals.size(); ++i) REQUIRE(plan.arrivals[i] >= plan.arrivals[i - 1]);
    for (std::size_t i = 0; i < plan.arms.size(); i += 2) REQUIRE(plan.arms[i] + plan.arms[i + 1] == 1);
    const auto times = analysis_times(s, plan);
    REQUIRE(times.size() == 3);
    CHECK(times[0] == plan.arrivals[39]);
    CHECK(times[1] == plan.arrivals[69]);
    CHECK(times[2] == plan.arrivals.back() + 12.0);

    Scenario single = binary_scenario();
    single.n_max = 20000;
    RngStream r2(2, 0);
    const AccrualPlan big = build_accrual(single, r2);
    CHECK(big.arrivals.back() / 20000 == doctest::Approx(1.0 / 6.0).epsilon(0.03));
}

TEST_CASE("hypotheses and estimands") {
    Scenario s = binary_scenario();
    Truth t;
    t.theta = 0.6;
    CHECK(null_is_true(s, t));
    t.theta = 0.61;
    CHECK_FALSE(null_is_true(s, t));
    CHECK(target_value(s, t) == 0.61);

    s.design = Design::rct;
    s.delta = 0.1;
    t.theta = 0.6;
    t.theta_control = 0.5;
    CHECK(null_is_true(s, t));
    t.theta = 0.65;
    CHECK_FALSE(null_is_true(s, t));
    CHECK(target_value(s, t) == 0.65);

    s.endpoint = Endpoint::survival;
    s.rho = 1.0;
    t.beta = -0.2;
    CHECK_FALSE(null_is_true(s, t));
    CHECK(target_value(s, t) == doctest::Approx(std::exp(-0.2)));
    t.beta = 0.0;
    CHECK(null_is_true(s, t));
}

TEST_CASE("cutoff 1 never stops early or rejects") {
    Scenario s = binary_scenario();
    s.cutoff = 1.0;
    s.n_replicates = 500;
    for (const auto& r : run_scenario(s).records) {
        REQUIRE(r.stop_analysis == 2);
        REQUIRE(r.final_n == 100);
        REQUIRE_FALSE(r.rejected);
    }
}

TEST_CASE("overwhelming interim evidence stops at the first look") {
    Scenario s = binary_scenario();
    s.generating = BetaPrior{1e5, 1e-3};
    s.user = BetaPrior{0.05, 0.05};
    for (std::size_t k = 0; k < 20; ++k) {
        const TrialRecord r = run_trial(s, k);
        REQUIRE(r.stop_analysis == 0);
        REQUIRE(r.final_n == 40);
        REQUIRE(r.rejected);
        REQUIRE(r.summary.prob_superior > 0.999);
    }
}

TEST_CASE("replicates are deterministic and thread-invariant") {
    Scenario s = binary_scenario();
    s.n_replicates = 800;
    const auto a = run_scenario(s, {1, true, {}});
    const auto b = run_scenario(s, {3, true, {}});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        REQUIRE(same(a.records[i], b.records[i]));
        REQUIRE(same(a.fixed_records[i], b.fixed_records[i]));
        REQUIRE(same(a.records[i], run_trial(s, i)));
    }
}

TEST_CASE("paired designs share data: adaptive rejections contain fixed rejections") {
    for (const char* name : {"table2", "table3", "table4", "s3", "s4", "s5"}) {
        Scenario s = load_scenario(name).base;
        s.n_replicates = 400;
        const auto run = run_scenario(s, {1, true, {}});
        for (std::size_t i = 0; i < run.records.size(); ++i) {
            const auto& f = run.fixed_records[i];
            const auto& a = run.records[i];
            CAPTURE(name);
            CAPTURE(i);
            REQUIRE(f.stop_analysis == s.n_analyses() - 1);
            REQUIRE(f.true_value == a.true_value);
            if (f.rejected) REQUIRE(a.rejected);
            if (a.stop_analysis == s.n_analyses() - 1) REQUIRE(same(a, f));
        }
    }
}

TEST_CASE("final analyses agree with fixed-design records") {
    Scenario s = binary_scenario();
    s.n_replicates = 300;
    const auto finals = run_final_analyses(s);
    const auto run = run_scenario(s, {1, true, {}});
    for (std::size_t i = 0; i < finals.size(); ++i) {
        REQUIRE(finals[i].prob_superior == run.fixed_records[i].summary.prob_superior);
        REQUIRE(finals[i].h0_true == run.fixed_records[i].h0_true);
    }
}

TEST_CASE("two-arm sample sizes count both arms") {
    Scenario s = load_scenario("s3").base;
    s.n_replicates = 200;
    for (const auto& r : run_scenario(s).records) {
        REQUIRE(r.final_n % 2 == 0);
        REQUIRE((r.final_n == 40 || r.final_n == 70 || r.final_n == 100));
    }
}

TEST_CASE("survival trial smoke run") {
    Scenario s = load_scenario("table5").base;
    s.n_replicates = 4;
    const auto run = run_scenario(s, {1, true, {}});
    REQUIRE(run.records.size() == 4);
    for (const auto& r : run.fixed_records) REQUIRE(r.final_n == 100);
    for (const auto& r : run.records) REQUIRE(r.true_value > 0);
    CHECK(same(run.records[2], run_trial(s, 2)));
}

TEST_CASE("parallel_for captures failures per index") {
    std::atomic<int> count{0};
    const auto errors = parallel_for(100, 3, [&](std::size_t i) {
        ++count;
        if (i % 10 == 3) throw std::runtime_error("boom");
    });
    CHECK(count == 100);
    int n_err = 0;
    for (const auto& e : errors) n_err += !e.empty();
    CHECK(n_err == 10);
}
