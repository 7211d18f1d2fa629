#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ump/sim.hpp"

namespace {

// Small convolutional pair (16 vs 4 codewords at n = 12) that decodes in
// microseconds, so whole search protocols run in seconds.
ump::ExperimentConfig toy_config() {
    ump::ExperimentConfig cfg;
    cfg.family = ump::CodeFamily::ztcc;
    cfg.n = 12;
    cfg.k0 = 4;
    cfg.k1 = 2;
    cfg.nu = 2;
    cfg.generators0 = {05, 07};
    cfg.generators1 = {05, 07, 07};
    cfg.eps0_target = 1e-2;
    cfg.eps1_target = 5e-2;
    cfg.mode = ump::TestMode::alrt;
    cfg.seed = 20260823;
    return cfg;
}

bool same_estimate(const ump::ErrorEstimate& a, const ump::ErrorEstimate& b) {
    return a.frames == b.frames && a.wrong_class == b.wrong_class &&
           a.wrong_codeword == b.wrong_codeword && a.erasure == b.erasure;
}

}  // namespace

TEST_CASE("wilson intervals match the score formula", "[sim]") {
    struct Case {
        std::uint64_t e, f;
        double lo, hi;
    };
    const Case cases[] = {
        {0, 100, 0.0, 0.03699349820698568},
        {3, 50, 0.02061497034897397, 0.16217091688838173},
        {100, 100000, 0.0008223379697212456, 0.001215998316636628},
        {50, 50, 0.9286524008666414, 1.0},
        {1, 16, 0.01111934476464252, 0.28328737570298945},
        {625, 10000, 0.057921618740657516, 0.0674143798336845},
    };
    for (const Case& c : cases) {
        const auto [lo, hi] = ump::wilson_interval(c.e, c.f);
        REQUIRE(lo == Catch::Approx(c.lo).margin(1e-15));
        REQUIRE(hi == Catch::Approx(c.hi).margin(1e-15));
        REQUIRE(lo <= static_cast<double>(c.e) / static_cast<double>(c.f));
        REQUIRE(hi >= static_cast<double>(c.e) / static_cast<double>(c.f));
    }
    REQUIRE(ump::wilson_interval(0, 0) == std::pair{0.0, 1.0});
    REQUIRE_THROWS_AS(ump::wilson_interval(5, 4), std::invalid_argument);
}

TEST_CASE("experiment configs are validated", "[sim]") {
    REQUIRE_NOTHROW(ump::validate_config(toy_config()));

    auto expect_bad = [](auto&& mutate) {
        ump::ExperimentConfig cfg = toy_config();
        mutate(cfg);
        REQUIRE_THROWS_AS(ump::validate_config(cfg), std::invalid_argument);
    };
    expect_bad([](auto& c) { c.eps0_target = c.eps1_target; });  // must be stricter
    expect_bad([](auto& c) { c.eps0_target = 0.2; });            // looser than class 1
    expect_bad([](auto& c) { c.eps0_target = 0.0; });
    expect_bad([](auto& c) { c.eps1_target = 1.0; });
    expect_bad([](auto& c) { c.k0 = 0; });
    expect_bad([](auto& c) { c.class0_prior = 1.0; });
    expect_bad([](auto& c) { c.stop.max_frames = 0; });
    expect_bad([](auto& c) { c.threads = 0; });
    expect_bad([](auto& c) { c.generators0.clear(); });
    expect_bad([](auto& c) {
        c.family = ump::CodeFamily::polar;
        c.list_size = 0;
    });
}

TEST_CASE("csv rows serialize with fixed columns", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.seed = 42;

    ump::SweepPoint p;
    p.esn0_db = 2.5;
    p.log_threshold = -0.25;
    p.class0.frames = 1024;
    p.class0.wrong_class = 2;
    p.class0.wrong_codeword = 1;
    p.class0.erasure = 1;
    p.class0.ci_lo = 0.25;
    p.class0.ci_hi = 0.5;
    p.class1.frames = 1024;

    std::ostringstream os;
    ump::write_csv_header(os);
    ump::write_csv_row(os, cfg, p);
    const std::string expect_header =
        "family,n,k0,k1,mode,esn0_db,log_threshold,"
        "frames0,wrong_class0,wrong_codeword0,erasure0,errors0,estimate0,ci_lo0,ci_hi0,"
        "frames1,wrong_class1,wrong_codeword1,erasure1,errors1,estimate1,ci_lo1,ci_hi1,"
        "seed\n";
    const std::string expect_row =
        "ztcc,12,4,2,alrt,2.5,-0.25,"
        "1024,2,1,1,4,0.00390625,0.25,0.5,"
        "1024,0,0,0,0,0,0,1,"
        "42\n";
    REQUIRE(os.str() == expect_header + expect_row);
}

TEST_CASE("estimates are deterministic and worker-count independent", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.stop.max_frames = 8192;
    cfg.stop.min_errors_per_class = 1000000000;  // run to the cap

    const ump::RateEstimates a = ump::estimate_rates(cfg, 2.0, 0.3);
    const ump::RateEstimates b = ump::estimate_rates(cfg, 2.0, 0.3);
    REQUIRE(same_estimate(a.class0, b.class0));
    REQUIRE(same_estimate(a.class1, b.class1));
    REQUIRE(a.frames_total == b.frames_total);
    REQUIRE(a.class0.frames + a.class1.frames == a.frames_total);
    REQUIRE(a.class0.frames == a.class1.frames);  // strict alternation

    cfg.threads = 3;
    const ump::RateEstimates c = ump::estimate_rates(cfg, 2.0, 0.3);
    REQUIRE(same_estimate(a.class0, c.class0));
    REQUIRE(same_estimate(a.class1, c.class1));
}

TEST_CASE("noiseless channel yields zero estimates", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.stop.max_frames = 2000;
    cfg.stop.min_errors_per_class = 1000000000;

    const double log_t = ump::operational_log_threshold(1.0, cfg.k0, cfg.k1);
    const ump::RateEstimates r = ump::estimate_rates(cfg, 30.0, log_t);
    REQUIRE(r.class0.errors() == 0);
    REQUIRE(r.class1.errors() == 0);
    REQUIRE(r.class0.estimate() == 0.0);
    REQUIRE(r.class0.ci_lo == 0.0);
    REQUIRE(r.class0.ci_hi < 0.01);  // still an honest interval
    REQUIRE(r.class0.low_confidence);
}

TEST_CASE("zero-offset overlap reproduces the predicted floor", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.zero_offsets = true;
    cfg.stop.max_frames = 20000;
    cfg.stop.min_errors_per_class = 1000000000;

    const ump::UmpCode code = ump::build_ump_code(cfg);
    REQUIRE_FALSE(code.disjoint());
    const std::uint64_t shared = ump::intersection_size(code.certificate);
    REQUIRE(shared == 1);  // only the all-zero codeword
    const double floor = ump::error_floor_prediction(shared, 1u << cfg.k0);
    REQUIRE(floor == Catch::Approx(1.0 / 16.0));

    // Far above threshold the only class-0 errors left are the shared
    // codewords, which the test hands to class 1.
    const double log_t = ump::operational_log_threshold(1.0, cfg.k0, cfg.k1);
    const ump::RateEstimates r = ump::estimate_rates(cfg, 8.0, log_t);
    REQUIRE(r.class0.frames >= 10000);
    REQUIRE(r.class0.ci_lo <= floor);
    REQUIRE(floor <= r.class0.ci_hi);
    REQUIRE(r.class0.wrong_class == r.class0.errors());  // misrouted, not misdecoded
    REQUIRE(r.class1.estimate() < 0.01);                 // class 1 keeps the overlap
}

TEST_CASE("threshold sweep is an exact staircase with exhaustive accounting", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.stop.max_frames = 20000;

    const ump::ThresholdResult res = ump::optimize_threshold(cfg, 1.0);
    REQUIRE_FALSE(res.sweep.empty());
    REQUIRE(std::abs(res.log_threshold - res.coarse_log_threshold) <= ump::kGridStep + 1e-12);

    std::vector<ump::SweepPoint> sweep = res.sweep;
    std::sort(sweep.begin(), sweep.end(),
              [](const auto& a, const auto& b) { return a.log_threshold < b.log_threshold; });
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const auto& p = sweep[i];
        for (const ump::ErrorEstimate* e : {&p.class0, &p.class1}) {
            REQUIRE(e->wrong_class + e->wrong_codeword + e->erasure == e->errors());
            REQUIRE(e->errors() <= e->frames);
        }
        // Common random numbers: raising T can only push class-0 frames out
        // of (and class-1 frames into) the declared-critical region.
        if (i > 0) {
            REQUIRE(p.class0.errors() >= sweep[i - 1].class0.errors());
            REQUIRE(p.class1.errors() <= sweep[i - 1].class1.errors());
            REQUIRE(p.class0.frames == sweep[i - 1].class0.frames);
        }
    }
    // The optimum beats (or ties) every swept point on the objective.
    for (const auto& p : sweep) {
        const double obj = std::max(p.class0.estimate() / cfg.eps0_target,
                                    p.class1.estimate() / cfg.eps1_target);
        REQUIRE(res.objective <= obj + 1e-12);
    }
}

TEST_CASE("symmetric classes center the threshold near zero", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.k0 = 4;
    cfg.k1 = 4;
    cfg.generators0 = {05, 07};
    cfg.generators1 = {05, 07};  // identical base code, different offsets
    cfg.eps0_target = 0.0099;    // targets as close as the config allows
    cfg.eps1_target = 0.01;
    cfg.stop.max_frames = 30000;

    const ump::ThresholdResult res = ump::optimize_threshold(cfg, 2.0);
    REQUIRE(std::abs(res.log_threshold) <= 1.0);
}

TEST_CASE("minimum snr search: determinism and target monotonicity", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.stop.max_frames = 60000;
    cfg.snr_lo_db = -2.0;  // infeasible at these targets, so bisection really runs
    cfg.snr_hi_db = 10.0;

    const ump::MinSnrResult strict = ump::find_min_snr(cfg);
    REQUIRE(strict.found);
    REQUIRE_FALSE(strict.bracket_low_feasible);
    REQUIRE(strict.at_star.satisfied);
    REQUIRE(strict.esn0_star_db <= 10.0);
    REQUIRE(strict.esn0_star_db > -2.0);
    REQUIRE(strict.evaluations.size() >= 4);  // both ends plus bisection steps

    const ump::MinSnrResult again = ump::find_min_snr(cfg);
    REQUIRE(again.esn0_star_db == strict.esn0_star_db);
    REQUIRE(again.at_star.log_threshold == strict.at_star.log_threshold);

    ump::ExperimentConfig relaxed = cfg;
    relaxed.eps0_target *= 10.0;
    relaxed.eps1_target *= 10.0;
    const ump::MinSnrResult loose = ump::find_min_snr(relaxed);
    REQUIRE(loose.found);
    REQUIRE(loose.bracket_low_feasible);  // 10x looser targets hold at -2 dB already
    REQUIRE(loose.esn0_star_db <= strict.esn0_star_db);

    ump::ExperimentConfig hopeless = cfg;
    hopeless.snr_lo_db = -12.0;
    hopeless.snr_hi_db = -10.0;  // far below what the toy pair can deliver
    const ump::MinSnrResult fail = ump::find_min_snr(hopeless);
    REQUIRE_FALSE(fail.found);
    REQUIRE_FALSE(fail.evaluations.empty());
}

TEST_CASE("maximum rates: coordinate ascent is feasible and snr-monotone", "[sim]") {
    ump::ExperimentConfig cfg = toy_config();
    cfg.n = 24;
    cfg.eps0_target = 2e-2;
    cfg.eps1_target = 8e-2;
    cfg.stop.max_frames = 20000;

    const ump::MaxRatesResult at4 = ump::find_max_rates(cfg, 4.0);
    REQUIRE(at4.feasible);
    REQUIRE(at4.at_optimum.satisfied);
    REQUIRE(at4.k0 >= 1);
    REQUIRE(at4.k1 >= 1);
    REQUIRE(at4.r0 == Catch::Approx(static_cast<double>(at4.k0) / 24.0));
    REQUIRE(at4.r1 == Catch::Approx(static_cast<double>(at4.k1) / 24.0));
    // The ascent probes past the optimum (including rate pairs that cannot
    // even be made disjoint), so the trace mixes both verdicts.
    std::size_t good = 0, bad = 0;
    for (const auto& [k0, k1, ok] : at4.trace) (ok ? good : bad)++;
    REQUIRE(good >= 1);
    REQUIRE(bad >= 1);

    const ump::MaxRatesResult at7 = ump::find_max_rates(cfg, 7.0);
    REQUIRE(at7.feasible);
    REQUIRE(at7.k0 >= at4.k0);
    REQUIRE(at7.k1 >= at4.k1);
}

TEST_CASE("polar pair simulation with erasures", "[sim]") {
    ump::ExperimentConfig cfg;
    cfg.family = ump::CodeFamily::polar;
    cfg.n = 16;
    cfg.k0 = 4;
    cfg.k1 = 6;
    cfg.crc = ump::parse_crc_hex("61");
    cfg.list_size = 8;
    cfg.eps0_target = 1e-2;
    cfg.eps1_target = 5e-2;
    cfg.seed = 7;
    cfg.stop.max_frames = 4096;
    cfg.stop.min_errors_per_class = 1000000000;

    const ump::RateEstimates a = ump::estimate_rates(cfg, -4.0, 0.0);
    const ump::RateEstimates b = ump::estimate_rates(cfg, -4.0, 0.0);
    REQUIRE(same_estimate(a.class0, b.class0));
    REQUIRE(same_estimate(a.class1, b.class1));
    REQUIRE(a.class0.erasure + a.class1.erasure > 0);  // double-erasure events show up

    // The staircase property must also hold with forced declarations from
    // one-sided erasures in the mix.
    cfg.stop.max_frames = 4096;
    const ump::ThresholdResult res = ump::optimize_threshold(cfg, -4.0);
    std::vector<ump::SweepPoint> sweep = res.sweep;
    std::sort(sweep.begin(), sweep.end(),
              [](const auto& x, const auto& y) { return x.log_threshold < y.log_threshold; });
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        REQUIRE(sweep[i].class0.errors() >= sweep[i - 1].class0.errors());
        REQUIRE(sweep[i].class1.errors() <= sweep[i - 1].class1.errors());
        REQUIRE(sweep[i].class0.erasure == sweep[i - 1].class0.erasure);  // T-independent
    }
}
