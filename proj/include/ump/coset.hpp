#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ump/channel.hpp"
#include "ump/gf2.hpp"
#include "ump/polar.hpp"
#include "ump/ztcc.hpp"

namespace ump {

enum class CodeFamily { ztcc, polar };

/// An affine codebook {u G + v}: a linear base code shifted by an offset.
/// The generator and parity check are derived from the base encoder, the
/// syndrome from the offset, so membership of x is the check H x = s.
struct CosetCode {
    CodeFamily family = CodeFamily::ztcc;
    std::optional<ZtccCode> ztcc;
    std::optional<PolarSpec> polar;
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix generator;     // k x n
    BitMatrix parity_check;  // (n - k) x n
    BitVector offset;        // v, length n
    BitVector syndrome;      // H v
};

namespace detail {

inline BitVector coset_base_encode(const CosetCode& code, const BitVector& msg) {
    switch (code.family) {
        case CodeFamily::ztcc:
            return code.ztcc->encode(msg);
        case CodeFamily::polar:
            return ca_polar_encode(*code.polar, msg);
    }
    throw std::logic_error("coset_base_encode: unreachable");
}

inline void finish_coset_code(CosetCode& code, BitVector offset) {
    if (offset.size() != code.n)
        throw std::invalid_argument("make_coset_code: offset length mismatch");
    BitMatrix g(0, code.n);
    for (std::size_t i = 0; i < code.k; ++i) {
        BitVector e(code.k);
        e.set(i, true);
        g.append_row(coset_base_encode(code, e));
    }
    code.generator = std::move(g);
    code.parity_check = parity_check_from_generator(code.generator);
    code.syndrome = code.parity_check.mul(offset);
    code.offset = std::move(offset);
}

}  // namespace detail

inline CosetCode make_coset_code(ZtccSpec spec, BitVector offset) {
    CosetCode code;
    code.family = CodeFamily::ztcc;
    code.ztcc.emplace(std::move(spec));
    code.n = code.ztcc->spec().n;
    code.k = code.ztcc->spec().k;
    detail::finish_coset_code(code, std::move(offset));
    return code;
}

inline CosetCode make_coset_code(PolarSpec spec, BitVector offset) {
    CosetCode code;
    code.family = CodeFamily::polar;
    code.polar.emplace(std::move(spec));
    code.n = code.polar->n;
    code.k = code.polar->k;
    detail::finish_coset_code(code, std::move(offset));
    return code;
}

/// Same base code, new offset (generator and parity check are reused).
inline CosetCode with_offset(CosetCode code, BitVector offset) {
    if (offset.size() != code.n) throw std::invalid_argument("with_offset: offset length mismatch");
    code.syndrome = code.parity_check.mul(offset);
    code.offset = std::move(offset);
    return code;
}

inline BitVector encode(const CosetCode& code, const BitVector& msg) {
    if (msg.size() != code.k) throw std::invalid_argument("encode: message length mismatch");
    return detail::coset_base_encode(code, msg) ^ code.offset;
}

enum class TestMode { lrt, alrt };

/// Two-class code: class 0 carries the critical messages. The decision
/// statistic Lambda (a log-likelihood difference, definition depending on
/// the mode) is compared against log_threshold; Lambda >= log_threshold
/// declares class 0, with the exact tie fixed to class 0 for determinism.
struct UmpCode {
    CosetCode class0;
    CosetCode class1;
    double log_threshold = 0.0;  // operational: codebook-size constants absorbed
    TestMode mode = TestMode::lrt;
    CosetIntersection certificate;  // of the two codebooks, from construction

    bool disjoint() const { return certificate.empty; }
};

/// Map a threshold T stated for the size-weighted likelihood-sum ratio
/// (each class average-weighted by 1/|C_i|) into the operational log
/// threshold applied to the plain sum ratio: ln T + (k0 - k1) ln 2.
inline double operational_log_threshold(double t, std::size_t k0, std::size_t k1) {
    if (!(t > 0.0)) throw std::invalid_argument("operational_log_threshold: T must be positive");
    return std::log(t) +
           (static_cast<double>(k0) - static_cast<double>(k1)) * std::log(2.0);
}

/// Inverse mapping: the size-weighted T a given operational threshold
/// corresponds to.
inline double size_weighted_threshold(double log_threshold, std::size_t k0, std::size_t k1) {
    return std::exp(log_threshold -
                    (static_cast<double>(k0) - static_cast<double>(k1)) * std::log(2.0));
}

inline UmpCode make_ump_code(CosetCode class0, CosetCode class1, double log_threshold,
                             TestMode mode) {
    if (class0.n != class1.n) throw std::invalid_argument("make_ump_code: blocklength mismatch");
    if (class0.family != class1.family)
        throw std::invalid_argument("make_ump_code: mixed code families");
    if (!std::isfinite(log_threshold))
        throw std::invalid_argument("make_ump_code: threshold must be finite");
    UmpCode code;
    code.certificate = coset_intersection(class0.parity_check, class0.syndrome,
                                          class1.parity_check, class1.syndrome);
    code.class0 = std::move(class0);
    code.class1 = std::move(class1);
    code.log_threshold = log_threshold;
    code.mode = mode;
    return code;
}

inline BitVector encode(const UmpCode& code, std::size_t class_id, const BitVector& msg) {
    if (class_id > 1) throw std::invalid_argument("encode: class id must be 0 or 1");
    return encode(class_id == 0 ? code.class0 : code.class1, msg);
}

/// Codewords common to both codebooks (0 when the certificate is empty).
inline std::uint64_t intersection_size(const CosetIntersection& cert) {
    if (cert.empty) return 0;
    if (cert.dim > 63) throw std::overflow_error("intersection_size: dimension too large");
    return std::uint64_t{1} << cert.dim;
}

/// Irreducible misclassification floor for class 0 when the shared
/// codewords are assigned a priori to class 1: |A| / M0.
inline double error_floor_prediction(std::uint64_t intersection_size, std::uint64_t m0) {
    if (m0 == 0) throw std::invalid_argument("error_floor_prediction: empty class-0 codebook");
    if (intersection_size > m0)
        throw std::invalid_argument("error_floor_prediction: |A| cannot exceed M0");
    return static_cast<double>(intersection_size) / static_cast<double>(m0);
}

enum class Hypothesis { h0, h1, erasure };

struct DecodeOutcome {
    Hypothesis hypothesis = Hypothesis::erasure;
    BitVector message;   // of the declared class (empty on erasure)
    BitVector codeword;  // member of the declared codebook (empty on erasure)
    double statistic = std::numeric_limits<double>::quiet_NaN();  // Lambda
};

/// One class's decoding result plus its contribution to the statistic.
/// log_score is the quantity whose difference forms Lambda: the codebook
/// likelihood sum (LRT), the best-codeword metric (ALRT), or the channel
/// log likelihood of the list winner (polar).
struct ClassCandidate {
    bool erasure = false;
    BitVector message;
    BitVector codeword;  // offset applied, i.e. a member of the coset
    double log_score = 0.0;
};

/// Everything threshold-independent about one received frame, so that many
/// thresholds can be applied to the same frame without decoding again.
struct FrameStatistic {
    ClassCandidate c0;
    ClassCandidate c1;
    double lambda = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

/// BPSK symmetry: decoding the shifted codebook {x + v} on y is decoding
/// the base codebook on y with the sign flipped wherever v has a one.
inline std::vector<double> offset_adjust(std::span<const double> y, const BitVector& v) {
    std::vector<double> adj(y.begin(), y.end());
    for (std::size_t i = 0; i < adj.size(); ++i)
        if (v.get(i)) adj[i] = -adj[i];
    return adj;
}

}  // namespace detail

inline FrameStatistic ztcc_frame_statistic(const UmpCode& code, std::span<const double> y,
                                           double sigma) {
    if (code.class0.family != CodeFamily::ztcc)
        throw std::invalid_argument("ztcc_frame_statistic: not a convolutional code pair");
    if (y.size() != code.class0.n)
        throw std::invalid_argument("ztcc_frame_statistic: observation length mismatch");

    FrameStatistic fs;
    ClassCandidate* cand[2] = {&fs.c0, &fs.c1};
    const CosetCode* cls[2] = {&code.class0, &code.class1};
    for (int i = 0; i < 2; ++i) {
        const std::vector<double> adj = detail::offset_adjust(y, cls[i]->offset);
        const ViterbiResult vit = cls[i]->ztcc->viterbi_decode(adj, sigma);
        cand[i]->message = vit.message;
        cand[i]->codeword = vit.codeword ^ cls[i]->offset;
        cand[i]->log_score = code.mode == TestMode::lrt
                                 ? cls[i]->ztcc->forward_log_likelihood(adj, sigma)
                                 : vit.metric;
    }
    fs.lambda = fs.c0.log_score - fs.c1.log_score;
    return fs;
}

inline FrameStatistic polar_frame_statistic(const UmpCode& code, std::span<const double> llrs) {
    if (code.class0.family != CodeFamily::polar)
        throw std::invalid_argument("polar_frame_statistic: not a polar code pair");
    if (llrs.size() != code.class0.n)
        throw std::invalid_argument("polar_frame_statistic: llr length mismatch");

    FrameStatistic fs;
    ClassCandidate* cand[2] = {&fs.c0, &fs.c1};
    const CosetCode* cls[2] = {&code.class0, &code.class1};
    for (int i = 0; i < 2; ++i) {
        const std::vector<double> adj = detail::offset_adjust(llrs, cls[i]->offset);
        const SclOutcome scl = scl_decode(*cls[i]->polar, adj);
        cand[i]->erasure = scl.erasure;
        if (scl.erasure) continue;
        cand[i]->message = scl.message;
        cand[i]->codeword = scl.codeword ^ cls[i]->offset;
        double ll = 0.0;  // channel log likelihood up to a common constant
        for (std::size_t j = 0; j < llrs.size(); ++j)
            ll += 0.5 * (cand[i]->codeword.get(j) ? -llrs[j] : llrs[j]);
        cand[i]->log_score = ll;
    }
    if (fs.c0.erasure && fs.c1.erasure)
        fs.lambda = std::numeric_limits<double>::quiet_NaN();
    else if (fs.c0.erasure)
        fs.lambda = -std::numeric_limits<double>::infinity();
    else if (fs.c1.erasure)
        fs.lambda = std::numeric_limits<double>::infinity();
    else
        fs.lambda = fs.c0.log_score - fs.c1.log_score;
    return fs;
}

inline DecodeOutcome apply_threshold(const FrameStatistic& fs, double log_threshold) {
    DecodeOutcome out;
    if (fs.c0.erasure && fs.c1.erasure) return out;  // erasure outcome
    bool pick0;
    if (fs.c0.erasure)
        pick0 = false;
    else if (fs.c1.erasure)
        pick0 = true;
    else
        pick0 = fs.lambda >= log_threshold;
    const ClassCandidate& w = pick0 ? fs.c0 : fs.c1;
    out.hypothesis = pick0 ? Hypothesis::h0 : Hypothesis::h1;
    out.message = w.message;
    out.codeword = w.codeword;
    out.statistic = fs.lambda;
    return out;
}

/// Two-step decoding of a convolutional pair: form Lambda (likelihood sums
/// via the forward recursion in LRT mode, best-codeword metrics in ALRT
/// mode), compare with the threshold, and return the declared class's
/// Viterbi solution.
inline DecodeOutcome decode_ztcc(const UmpCode& code, std::span<const double> y, double sigma,
                                 std::optional<double> log_threshold_override = {}) {
    return apply_threshold(ztcc_frame_statistic(code, y, sigma),
                           log_threshold_override.value_or(code.log_threshold));
}

/// Two-step decoding of a polar pair with erasures: if both list decoders
/// erase the outcome is an erasure; if one erases the other class is
/// declared; otherwise the best-codeword likelihood ratio is thresholded.
inline DecodeOutcome decode_polar(const UmpCode& code, std::span<const double> llrs,
                                  std::optional<double> log_threshold_override = {}) {
    return apply_threshold(polar_frame_statistic(code, llrs),
                           log_threshold_override.value_or(code.log_threshold));
}

struct OffsetSearchResult {
    bool found = false;
    BitVector v0;
    BitVector v1;
    std::size_t tries = 0;
    CosetIntersection last_certificate;
};

/// Randomized search for offsets making the two codebooks disjoint, each
/// draw checked by the exact certificate. Deterministic given the stream
/// state. Failure after max_tries is reported, not thrown: some pairs
/// (e.g. when the stacked parity checks have full row rank and the base
/// codes are large enough to force overlap) admit no disjoint offsets.
inline OffsetSearchResult search_disjoint_offsets(const CosetCode& code0, const CosetCode& code1,
                                                  RngStream& rng, std::size_t max_tries) {
    if (code0.n != code1.n)
        throw std::invalid_argument("search_disjoint_offsets: blocklength mismatch");
    if (max_tries < 1) throw std::invalid_argument("search_disjoint_offsets: max_tries must be >= 1");

    OffsetSearchResult res;
    for (std::size_t t = 1; t <= max_tries; ++t) {
        BitVector v0(code0.n), v1(code1.n);
        for (std::size_t i = 0; i < code0.n; ++i) {
            v0.set(i, rng.uniform() < 0.5);
            v1.set(i, rng.uniform() < 0.5);
        }
        const CosetIntersection cert =
            coset_intersection(code0.parity_check, code0.parity_check.mul(v0),
                               code1.parity_check, code1.parity_check.mul(v1));
        res.v0 = std::move(v0);
        res.v1 = std::move(v1);
        res.tries = t;
        res.last_certificate = cert;
        if (cert.empty) {
            res.found = true;
            return res;
        }
    }
    return res;
}

}  // namespace ump
