#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ump/channel.hpp"
#include "ump/ztcc.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using ump::BitVector;

namespace {

// Exhaustive references over all 2^k messages, scanning in ascending
// message order (bit t of the integer = input at time t) with strictly
// better metrics winning, plus an optional codeword offset.
double cw_metric(const BitVector& cw, std::span<const double> y, double sigma) {
    double m = 0.0;
    for (std::size_t i = 0; i < cw.size(); ++i) m += (cw.get(i) ? -y[i] : y[i]) / (sigma * sigma);
    return m;
}

struct Exhaustive {
    std::uint64_t best_msg = 0;
    double best_metric = 0.0;
    double log_sum = 0.0;
};

Exhaustive exhaustive_scan(const ump::ZtccCode& code, std::span<const double> y, double sigma,
                           const BitVector* offset = nullptr) {
    Exhaustive out;
    out.best_metric = -1e300;
    std::vector<double> metrics;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << code.spec().k); ++m) {
        BitVector cw = code.encode(BitVector::from_word(m, code.spec().k));
        if (offset) cw ^= *offset;
        const double metric = cw_metric(cw, y, sigma);
        metrics.push_back(metric);
        if (metric > out.best_metric) {
            out.best_metric = metric;
            out.best_msg = m;
        }
    }
    double shift = out.best_metric;
    double acc = 0.0;
    for (double m : metrics) acc += std::exp(m - shift);
    out.log_sum = shift + std::log(acc);
    return out;
}

std::vector<double> random_observation(ump::RngStream& rng, std::size_t n) {
    std::vector<double> y(n);
    for (auto& v : y) v = rng.gaussian();
    return y;
}

}  // namespace

TEST_CASE("octal generator parsing", "[ztcc]") {
    auto gens = ump::parse_generators_octal("133,171");
    REQUIRE(gens == std::vector<unsigned>{0133, 0171});
    REQUIRE(ump::parse_generators_octal("117,127,155,171") ==
            std::vector<unsigned>{0117, 0127, 0155, 0171});
    CHECK_THROWS_AS(ump::parse_generators_octal("138"), std::invalid_argument);
    CHECK_THROWS_AS(ump::parse_generators_octal("133,,171"), std::invalid_argument);
    CHECK_THROWS_AS(ump::parse_generators_octal(""), std::invalid_argument);
}

TEST_CASE("even puncture pattern", "[ztcc]") {
    REQUIRE(ump::even_puncture_pattern(12, 4) == std::vector<std::size_t>{0, 3, 6, 9});
    REQUIRE(ump::even_puncture_pattern(10, 1) == std::vector<std::size_t>{0});
    REQUIRE(ump::even_puncture_pattern(10, 0).empty());
}

TEST_CASE("spec validation", "[ztcc]") {
    CHECK_THROWS_AS(ump::make_ztcc_spec({}, 6, 8, 28), std::invalid_argument);
    CHECK_THROWS_AS(ump::make_ztcc_spec({0133, 0171}, 6, 8, 60), std::invalid_argument);
    // Degree exceeds memory: 133 needs
    CHECK_THROWS_AS(ump::make_ztcc_spec({0133, 0171}, 5, 8, 20), std::invalid_argument);
    // Bad explicit pattern: wrong size, out of range, not increasing.
    CHECK_THROWS_AS(ump::make_ztcc_spec({07, 05}, 2, 4, 10, {0}), std::invalid_argument);
    CHECK_THROWS_AS(ump::make_ztcc_spec({07, 05}, 2, 4, 10, {5, 12}), std::invalid_argument);
    CHECK_THROWS_AS(ump::make_ztcc_spec({07, 05}, 2, 4, 10, {5, 5}), std::invalid_argument);
    // Default pattern fills in the right number of drops.
    auto spec = ump::make_ztcc_spec({07, 05}, 2, 4, 10);
    REQUIRE(spec.puncture_pattern.size() == 2);
}

TEST_CASE("impulse response pins the octal convention", "[ztcc]") {
    // 133 -> 1011011 (1 + D^2 + D^3 + D^5 + D^6), 171 -> 1111001.
    auto code = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 8, 28));
    BitVector msg(8);
    msg.set(0, true);
    BitVector cw = code.encode(msg);
    REQUIRE(cw.to_string() == "1101111100101100000000000000");

    BitVector zero = code.encode(BitVector(8));
    REQUIRE_FALSE(zero.any());
}

TEST_CASE("encoding is linear", "[ztcc]") {
    auto code = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 16, 33));
    ump::RngStream rng(5, 0);
    for (int it = 0; it < 100; ++it) {
        BitVector a = BitVector::from_word(rng.raw() & 0xFFFF, 16);
        BitVector b = BitVector::from_word(rng.raw() & 0xFFFF, 16);
        REQUIRE((code.encode(a) ^ code.encode(b)) == code.encode(a ^ b));
    }
}

TEST_CASE("viterbi recovers noiseless transmissions", "[ztcc]") {
    auto code = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 16, 33));
    ump::RngStream rng(6, 0);
    for (int it = 0; it < 20; ++it) {
        BitVector msg = BitVector::from_word(rng.raw() & 0xFFFF, 16);
        auto y = ump::modulate_bpsk(code.encode(msg));
        auto res = code.viterbi_decode(y, 0.8);
        REQUIRE(res.message == msg);
        REQUIRE(res.codeword == code.encode(msg));
        CHECK_THAT(res.metric, WithinRel(33.0 / 0.64, 1e-12));
    }
}

TEST_CASE("viterbi equals the exhaustive maximum", "[ztcc]") {
    ump::RngStream rng(7, 0);
    for (bool punctured : {false, true}) {
        auto code = ump::ZtccCode(ump::make_ztcc_spec({013, 017}, 3, 8, punctured ? 17 : 22));
        for (int it = 0; it < 30; ++it) {
            auto y = random_observation(rng, code.spec().n);
            auto res = code.viterbi_decode(y, 0.9);
            auto ref = exhaustive_scan(code, y, 0.9);
            REQUIRE(res.message.to_word() == ref.best_msg);
            CHECK_THAT(res.metric, WithinAbs(ref.best_metric, 1e-9));
        }
    }
}

TEST_CASE("viterbi tie-breaking matches the ascending-message scan", "[ztcc]") {
    // Dyadic observations with sigma = 1 make every metric comparison exact,
    // so ties are real and the tie rule is observable.
    auto code = ump::ZtccCode(ump::make_ztcc_spec({013, 017}, 3, 6, 18));
    const std::size_t n = code.spec().n;

    std::vector<double> zeros(n, 0.0);
    auto res = code.viterbi_decode(zeros, 1.0);
    REQUIRE(res.message.to_word() == 0);  // every codeword ties at metric 0

    ump::RngStream rng(8, 0);
    for (int it = 0; it < 200; ++it) {
        std::vector<double> y(n);
        for (auto& v : y) v = 0.5 * static_cast<double>(static_cast<int>(rng.raw() % 5) - 2);
        auto got = code.viterbi_decode(y, 1.0);
        auto ref = exhaustive_scan(code, y, 1.0);
        REQUIRE(got.message.to_word() == ref.best_msg);
        REQUIRE(got.metric == ref.best_metric);
    }

    // Midpoints of two modulated codewords tie those two codewords exactly.
    for (int it = 0; it < 50; ++it) {
        const std::uint64_t m1 = rng.raw() & 63, m2 = rng.raw() & 63;
        auto x1 = ump::modulate_bpsk(code.encode(BitVector::from_word(m1, 6)));
        auto x2 = ump::modulate_bpsk(code.encode(BitVector::from_word(m2, 6)));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (x1[i] + x2[i]);
        auto got = code.viterbi_decode(y, 1.0);
        auto ref = exhaustive_scan(code, y, 1.0);
        REQUIRE(got.message.to_word() == ref.best_msg);
    }
}

TEST_CASE("positive scaling leaves the viterbi argmax unchanged", "[ztcc]") {
    auto code = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 12, 30));
    ump::RngStream rng(9, 0);
    for (int it = 0; it < 10; ++it) {
        auto y = random_observation(rng, code.spec().n);
        auto a = code.viterbi_decode(y, 1.0);
        std::vector<double> ys(y);
        for (auto& v : ys) v *= 3.7;
        auto b = code.viterbi_decode(ys, 1.0);
        REQUIRE(a.message == b.message);
    }
}

TEST_CASE("forward recursion on a two-codeword toy code", "[ztcc]") {
    // k=1, nu=1, generators 3 (1+D) and 2 (1): codebook {0000, 1110}.
    auto code = ump::ZtccCode(ump::make_ztcc_spec({03, 02}, 1, 1, 4));
    REQUIRE(code.encode(BitVector::from_string("1")).to_string() == "1110");

    const std::vector<double> y{0.3, -1.1, 0.4, 2.0};
    const double sigma = 0.7;
    const double m0 = cw_metric(code.encode(BitVector::from_string("0")), y, sigma);
    const double m1 = cw_metric(code.encode(BitVector::from_string("1")), y, sigma);
    const double expect = std::max(m0, m1) + std::log1p(std::exp(-std::abs(m0 - m1)));
    CHECK_THAT(code.forward_log_likelihood(y, sigma), WithinAbs(expect, 1e-12));
}

TEST_CASE("forward recursion equals exhaustive log-sum", "[ztcc]") {
    ump::RngStream rng(10, 0);
    // Rate 1/2 with and without puncturing, and a rate 1/4 bank.
    std::vector<ump::ZtccSpec> specs = {
        ump::make_ztcc_spec({013, 017}, 3, 8, 22),
        ump::make_ztcc_spec({013, 017}, 3, 8, 17),
        ump::make_ztcc_spec({0117, 0127, 0155, 0171}, 6, 5, 32),
    };
    for (const auto& spec : specs) {
        auto code = ump::ZtccCode(spec);
        for (int it = 0; it < 20; ++it) {
            auto y = random_observation(rng, spec.n);
            const double sigma = 0.6 + 0.2 * (it % 3);
            const double got = code.forward_log_likelihood(y, sigma);
            const auto ref = exhaustive_scan(code, y, sigma);
            CHECK_THAT(got, WithinRel(ref.log_sum, 1e-9));

            // Sum of 2^k positive terms: between the max and max + k ln 2.
            const auto vit = code.viterbi_decode(y, sigma);
            CHECK(got >= vit.metric);
            CHECK(got <= vit.metric + spec.k * std::log(2.0) + 1e-9);
        }
    }
}

TEST_CASE("offset decoding via sign flips equals the shifted codebook", "[ztcc]") {
    auto code = ump::ZtccCode(ump::make_ztcc_spec({013, 017}, 3, 6, 18));
    ump::RngStream rng(11, 0);
    const std::size_t n = code.spec().n;
    for (int it = 0; it < 30; ++it) {
        BitVector v(n);
        for (std::size_t i = 0; i < n; ++i) v.set(i, rng.raw() & 1);
        auto y = random_observation(rng, n);
        std::vector<double> ytilde(n);
        for (std::size_t i = 0; i < n; ++i) ytilde[i] = v.get(i) ? -y[i] : y[i];

        auto got = code.viterbi_decode(ytilde, 1.0);
        auto ref = exhaustive_scan(code, y, 1.0, &v);
        REQUIRE(got.message.to_word() == ref.best_msg);
        CHECK_THAT(got.metric, WithinAbs(ref.best_metric, 1e-9));
        REQUIRE(got.codeword == code.encode(BitVector::from_word(ref.best_msg, 6)));

        CHECK_THAT(code.forward_log_likelihood(ytilde, 1.0), WithinRel(ref.log_sum, 1e-9));
    }
}

TEST_CASE("punctured positions contribute exactly zero", "[ztcc]") {
    auto punct = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 10, 24));
    auto full = ump::ZtccCode(ump::make_ztcc_spec({0133, 0171}, 6, 10, 32));
    const std::size_t total = full.spec().n;
    ump::RngStream rng(12, 0);

    // A punctured observation behaves like the unpunctured code fed with
    // zeros at the dropped positions.
    for (int it = 0; it < 10; ++it) {
        auto y = random_observation(rng, punct.spec().n);
        std::vector<double> y_full(total, 0.0);
        std::size_t p = 0, out = 0;
        for (std::size_t i = 0; i < total; ++i) {
            if (p < punct.spec().puncture_pattern.size() && punct.spec().puncture_pattern[p] == i)
                ++p;
            else
                y_full[i] = y[out++];
        }
        auto a = punct.viterbi_decode(y, 0.9);
        auto b = full.viterbi_decode(y_full, 0.9);
        REQUIRE(a.message == b.message);
        CHECK_THAT(a.metric, WithinAbs(b.metric, 1e-9));
        CHECK_THAT(punct.forward_log_likelihood(y, 0.9),
                   WithinAbs(full.forward_log_likelihood(y_full, 0.9), 1e-9));
    }
}
