#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ump/channel.hpp"
#include "ump/coset.hpp"
#include "ump/na.hpp"

namespace ump {

struct StoppingRule {
    std::uint64_t min_errors_per_class = 100;  // points below this are low-confidence
    std::uint64_t max_frames = 200000;
};

/// Desk-scale Monte Carlo experiment description. Message sizes are given
/// as k0/k1 (rates are k_i/n); class 0 is the critical class and must have
/// the stricter target.
struct ExperimentConfig {
    CodeFamily family = CodeFamily::ztcc;
    std::size_t n = 128;
    std::size_t k0 = 26;
    std::size_t k1 = 58;
    double eps0_target = 1e-3;
    double eps1_target = 1e-2;
    TestMode mode = TestMode::lrt;
    // Convolutional flavor.
    std::size_t nu = 6;
    std::vector<unsigned> generators0 = {0117, 0127, 0155, 0171};
    std::vector<unsigned> generators1 = {0133, 0171};
    // Polar flavor.
    CrcSpec crc = parse_crc_hex("61");
    std::size_t list_size = 32;
    // Offsets: searched by default; zero offsets force codebook overlap
    // (used by the error-floor demonstrations).
    bool zero_offsets = false;
    std::size_t offset_search_tries = 500;
    // Search brackets for the minimum-SNR protocol.
    double snr_lo_db = -4.0;
    double snr_hi_db = 8.0;

    double class0_prior = 0.5;  // 0.5 = strict alternation
    StoppingRule stop;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

inline void validate_config(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
    if (cfg.n < 2) bad("blocklength too small");
    if (cfg.k0 < 1 || cfg.k1 < 1) bad("message sizes must be >= 1");
    if (!(cfg.eps0_target > 0.0 && cfg.eps0_target < 1.0) ||
        !(cfg.eps1_target > 0.0 && cfg.eps1_target < 1.0))
        bad("targets must lie in (0, 1)");
    if (!(cfg.eps0_target < cfg.eps1_target))
        bad("critical class must have the stricter target (eps0 < eps1)");
    if (!(cfg.class0_prior > 0.0 && cfg.class0_prior < 1.0)) bad("class prior must be in (0, 1)");
    if (cfg.stop.max_frames < 1) bad("frame cap must be >= 1");
    if (cfg.threads < 1) bad("thread count must be >= 1");
    if (cfg.family == CodeFamily::ztcc) {
        if (cfg.nu < 1) bad("memory must be >= 1");
        if (cfg.generators0.empty() || cfg.generators1.empty()) bad("generators missing");
    } else {
        if (cfg.list_size < 1) bad("list size must be >= 1");
        if (cfg.crc.poly < 2) bad("checksum polynomial missing");
    }
}

/// Stream ids: frame f uses (seed, f); the offset search gets its own id
/// outside the frame range so frames never collide with it.
inline constexpr std::uint64_t kOffsetSearchStream = (std::uint64_t{1} << 63) + 1;

/// No offset pair separating the two codebooks was found. For some rate
/// pairs (e.g. k0 + k1 well above n) disjoint cosets do not exist at all.
struct OffsetSearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Zero-offset base codes for the two classes of a config.
inline std::pair<CosetCode, CosetCode> make_base_codes(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.family == CodeFamily::ztcc)
        return {make_coset_code(make_ztcc_spec(cfg.generators0, cfg.nu, cfg.k0, cfg.n),
                                BitVector(cfg.n)),
                make_coset_code(make_ztcc_spec(cfg.generators1, cfg.nu, cfg.k1, cfg.n),
                                BitVector(cfg.n))};
    return {make_coset_code(make_polar_spec(cfg.n, cfg.k0, cfg.crc, cfg.list_size),
                            BitVector(cfg.n)),
            make_coset_code(make_polar_spec(cfg.n, cfg.k1, cfg.crc, cfg.list_size),
                            BitVector(cfg.n))};
}

inline UmpCode build_ump_code(const ExperimentConfig& cfg) {
    auto [base0, base1] = make_base_codes(cfg);
    if (!cfg.zero_offsets) {
        RngStream rng(cfg.seed, kOffsetSearchStream);
        const OffsetSearchResult res =
            search_disjoint_offsets(base0, base1, rng, cfg.offset_search_tries);
        if (!res.found)
            throw OffsetSearchError(
                "build_ump_code: no disjoint offsets found; the codebooks may overlap "
                "unavoidably (shared-intersection dimension " +
                std::to_string(res.last_certificate.dim) + ")");
        base0 = with_offset(std::move(base0), res.v0);
        base1 = with_offset(std::move(base1), res.v1);
    }
    const TestMode mode = cfg.family == CodeFamily::polar ? TestMode::alrt : cfg.mode;
    return make_ump_code(std::move(base0), std::move(base1), 0.0, mode);
}

struct ErrorEstimate {
    std::uint64_t frames = 0;
    std::uint64_t wrong_class = 0;
    std::uint64_t wrong_codeword = 0;
    std::uint64_t erasure = 0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    bool low_confidence = true;

    std::uint64_t errors() const { return wrong_class + wrong_codeword + erasure; }
    double estimate() const {
        return frames == 0 ? 0.0 : static_cast<double>(errors()) / static_cast<double>(frames);
    }
};

/// 95% Wilson score interval.
inline std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t frames) {
    if (frames == 0) return {0.0, 1.0};
    if (errors > frames) throw std::invalid_argument("wilson_interval: errors exceed frames");
    constexpr double z = 1.959963984540054;
    const double f = static_cast<double>(frames);
    const double p = static_cast<double>(errors) / f;
    const double den = 1.0 + z * z / f;
    const double center = (p + z * z / (2.0 * f)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / f + z * z / (4.0 * f * f)) / den;
    double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = errors == frames ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

namespace detail {

/// Threshold-independent outcome of one simulated frame.
struct FrameRecord {
    std::uint8_t true_class = 0;
    bool c0_erased = false;
    bool c1_erased = false;
    bool own_correct = false;  // declared-class candidate matches the sent message
    double lambda = 0.0;       // meaningful when neither candidate erased
};

inline FrameRecord simulate_frame(const UmpCode& code, const ExperimentConfig& cfg,
                                  const ChannelParams& ch, std::uint64_t frame) {
    RngStream rng(cfg.seed, frame);
    const bool is_class1 = cfg.class0_prior == 0.5 ? (frame & 1) != 0
                                                   : rng.uniform() >= cfg.class0_prior;
    const CosetCode& cls = is_class1 ? code.class1 : code.class0;
    BitVector msg(cls.k);
    for (std::size_t i = 0; i < cls.k; ++i) msg.set(i, rng.uniform() < 0.5);

    const std::vector<double> y = transmit(modulate_bpsk(encode(cls, msg)), ch, rng);
    const FrameStatistic fs = code.class0.family == CodeFamily::ztcc
                                  ? ztcc_frame_statistic(code, y, ch.sigma)
                                  : polar_frame_statistic(code, llr_awgn(y, ch));

    FrameRecord rec;
    rec.true_class = is_class1 ? 1 : 0;
    rec.c0_erased = fs.c0.erasure;
    rec.c1_erased = fs.c1.erasure;
    const ClassCandidate& own = is_class1 ? fs.c1 : fs.c0;
    rec.own_correct = !own.erasure && own.message == msg;
    rec.lambda = fs.lambda;
    return rec;
}

/// Tally accumulator answering "counts at threshold t" for any t from one
/// pass over the frames: thresholded frames keep a sorted statistic array
/// with prefix counts of wrong candidates; forced and double-erased frames
/// are threshold-independent constants.
class TallyEngine {
  public:
    void add(const FrameRecord& r) {
        const int c = r.true_class;
        ++frames_[c];
        if (r.c0_erased && r.c1_erased) {
            ++both_erased_[c];
        } else if (r.c0_erased || r.c1_erased) {
            const bool own_erased = (c == 0) ? r.c0_erased : r.c1_erased;
            if (own_erased) {
                ++forced_other_[c];
            } else {
                ++forced_own_[c];
                if (!r.own_correct) ++forced_own_bad_[c];
            }
        } else {
            pending_[c].push_back({r.lambda, !r.own_correct});
        }
        dirty_ = true;
    }

    std::uint64_t frames(int c) const { return frames_[c]; }

    /// Class-0 and class-1 estimates (unfinalized intervals) at threshold t.
    std::pair<ErrorEstimate, ErrorEstimate> counts_at(double log_t) const {
        flush();
        ErrorEstimate e[2];
        for (int c = 0; c < 2; ++c) {
            const auto& lam = lambda_[c];
            const std::size_t i =
                std::lower_bound(lam.begin(), lam.end(), log_t) - lam.begin();
            e[c].frames = frames_[c];
            e[c].erasure = both_erased_[c];
            if (c == 0) {
                e[c].wrong_class = i + forced_other_[c];
                e[c].wrong_codeword = (bad_prefix_[c].back() - bad_prefix_[c][i]) +
                                      forced_own_bad_[c];
            } else {
                e[c].wrong_class = (lam.size() - i) + forced_other_[c];
                e[c].wrong_codeword = bad_prefix_[c][i] + forced_own_bad_[c];
            }
        }
        return {e[0], e[1]};
    }

  private:
    void flush() const {
        if (!dirty_) return;
        for (int c = 0; c < 2; ++c) {
            auto& entries = pending_[c];
            std::sort(entries.begin(), entries.end());
            auto& lam = lambda_[c];
            auto& bad = bad_prefix_[c];
            std::vector<std::pair<double, bool>> merged;
            merged.reserve(lam.size() + entries.size());
            std::vector<std::pair<double, bool>> old;
            old.reserve(lam.size());
            for (std::size_t j = 0; j < lam.size(); ++j)
                old.push_back({lam[j], bad[j + 1] > bad[j]});
            std::merge(old.begin(), old.end(), entries.begin(), entries.end(),
                       std::back_inserter(merged));
            entries.clear();
            lam.resize(merged.size());
            bad.assign(merged.size() + 1, 0);
            for (std::size_t j = 0; j < merged.size(); ++j) {
                lam[j] = merged[j].first;
                bad[j + 1] = bad[j] + (merged[j].second ? 1 : 0);
            }
        }
        dirty_ = false;
    }

    std::uint64_t frames_[2] = {0, 0};
    std::uint64_t both_erased_[2] = {0, 0};
    std::uint64_t forced_own_[2] = {0, 0};
    std::uint64_t forced_own_bad_[2] = {0, 0};
    std::uint64_t forced_other_[2] = {0, 0};
    mutable std::vector<std::pair<double, bool>> pending_[2];
    mutable std::vector<double> lambda_[2];
    mutable std::vector<std::uint64_t> bad_prefix_[2];  // size lambda+1
    mutable bool dirty_ = true;  // first flush installs the empty prefix
};

inline constexpr std::uint64_t kFrameChunk = 2048;

/// Simulate frames [first, first + count) into out (records in frame
/// order, whatever the worker count).
inline void simulate_chunk(const UmpCode& code, const ExperimentConfig& cfg,
                           const ChannelParams& ch, std::uint64_t first, std::uint64_t count,
                           std::vector<FrameRecord>& out) {
    out.resize(count);
    const std::size_t workers = std::min<std::size_t>(cfg.threads, count ? count : 1);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i)
            out[i] = simulate_frame(code, cfg, ch, first + i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::uint64_t i = w; i < count; i += workers)
                out[i] = simulate_frame(code, cfg, ch, first + i);
        });
    for (auto& t : pool) t.join();
}

inline void finalize(ErrorEstimate& e, const StoppingRule& stop) {
    const auto [lo, hi] = wilson_interval(e.errors(), e.frames);
    e.ci_lo = lo;
    e.ci_hi = hi;
    e.low_confidence = e.errors() < stop.min_errors_per_class;
}

}  // namespace detail

struct RateEstimates {
    ErrorEstimate class0;
    ErrorEstimate class1;
    std::uint64_t frames_total = 0;
};

/// Monte Carlo error rates of both classes at one (SNR, threshold) point.
/// Frames alternate between the classes (or follow the configured prior),
/// each frame drawing from its own stream, until both classes reach the
/// error quota or the frame cap is hit.
inline RateEstimates estimate_rates(const ExperimentConfig& cfg, double esn0_db,
                                    double log_threshold) {
    const UmpCode code = build_ump_code(cfg);
    const ChannelParams ch = ChannelParams::from_esn0_db(esn0_db);

    detail::TallyEngine tally;
    std::vector<detail::FrameRecord> chunk;
    std::uint64_t total = 0;
    while (total < cfg.stop.max_frames) {
        const std::uint64_t count =
            std::min<std::uint64_t>(detail::kFrameChunk, cfg.stop.max_frames - total);
        detail::simulate_chunk(code, cfg, ch, total, count, chunk);
        for (const auto& r : chunk) tally.add(r);
        total += count;
        const auto [e0, e1] = tally.counts_at(log_threshold);
        if (e0.errors() >= cfg.stop.min_errors_per_class &&
            e1.errors() >= cfg.stop.min_errors_per_class)
            break;
    }

    RateEstimates res;
    std::tie(res.class0, res.class1) = tally.counts_at(log_threshold);
    detail::finalize(res.class0, cfg.stop);
    detail::finalize(res.class1, cfg.stop);
    res.frames_total = total;
    return res;
}

struct SweepPoint {
    double esn0_db = 0.0;
    double log_threshold = 0.0;
    ErrorEstimate class0;
    ErrorEstimate class1;
};

struct ThresholdResult {
    double log_threshold = 0.0;         // after refinement
    double coarse_log_threshold = 0.0;  // best point of the coarse grid
    bool satisfied = false;             // Wilson upper bounds within both targets
    double objective = 0.0;             // max(eps0/target0, eps1/target1)
    ErrorEstimate class0;
    ErrorEstimate class1;
    std::uint64_t frames_total = 0;
    std::vector<SweepPoint> sweep;  // every evaluated threshold, final tallies
};

/// Threshold grid: log T in [-20, 20] step 0.25, then one refinement pass
/// at an 8x finer step within one coarse step of the optimum.
inline constexpr double kGridLo = -20.0;
inline constexpr double kGridHi = 20.0;
inline constexpr double kGridStep = 0.25;

namespace detail {

struct GridScore {
    double objective;
    double ci_objective;
    double abs_log_t;
    double log_t;

    bool operator<(const GridScore& o) const {
        if (objective != o.objective) return objective < o.objective;
        if (ci_objective != o.ci_objective) return ci_objective < o.ci_objective;
        if (abs_log_t != o.abs_log_t) return abs_log_t < o.abs_log_t;
        return log_t < o.log_t;
    }
};

inline GridScore score_threshold(const TallyEngine& tally, const ExperimentConfig& cfg,
                                 double log_t) {
    const auto [e0, e1] = tally.counts_at(log_t);
    const double r0 = e0.estimate() / cfg.eps0_target;
    const double r1 = e1.estimate() / cfg.eps1_target;
    const auto w0 = wilson_interval(e0.errors(), e0.frames);
    const auto w1 = wilson_interval(e1.errors(), e1.frames);
    return {std::max(r0, r1),
            std::max(w0.second / cfg.eps0_target, w1.second / cfg.eps1_target),
            std::abs(log_t), log_t};
}

}  // namespace detail

/// Pick the threshold minimizing max(eps0/eps0*, eps1/eps1*) on the grid,
/// reusing the same frames for every candidate (common random numbers) so
/// the per-class error curves are exact staircases in T.
inline ThresholdResult optimize_threshold(const ExperimentConfig& cfg, double esn0_db) {
    const UmpCode code = build_ump_code(cfg);
    const ChannelParams ch = ChannelParams::from_esn0_db(esn0_db);

    std::vector<double> coarse;
    for (double t = kGridLo; t <= kGridHi + 1e-12; t += kGridStep) coarse.push_back(t);

    detail::TallyEngine tally;
    std::vector<detail::FrameRecord> chunk;
    std::uint64_t total = 0;
    double best_coarse = 0.0;
    while (total < cfg.stop.max_frames) {
        const std::uint64_t count =
            std::min<std::uint64_t>(detail::kFrameChunk, cfg.stop.max_frames - total);
        detail::simulate_chunk(code, cfg, ch, total, count, chunk);
        for (const auto& r : chunk) tally.add(r);
        total += count;

        best_coarse = coarse.front();
        detail::GridScore best = detail::score_threshold(tally, cfg, coarse.front());
        for (std::size_t i = 1; i < coarse.size(); ++i) {
            const detail::GridScore s = detail::score_threshold(tally, cfg, coarse[i]);
            if (s < best) {
                best = s;
                best_coarse = coarse[i];
            }
        }
        const auto [e0, e1] = tally.counts_at(best_coarse);
        if (e0.errors() >= cfg.stop.min_errors_per_class &&
            e1.errors() >= cfg.stop.min_errors_per_class)
            break;
    }

    // Refinement: 8x finer within one coarse step of the optimum.
    std::vector<double> fine;
    for (int j = -8; j <= 8; ++j) fine.push_back(best_coarse + j * (kGridStep / 8.0));
    double best_t = fine.front();
    detail::GridScore best = detail::score_threshold(tally, cfg, fine.front());
    for (std::size_t i = 1; i < fine.size(); ++i) {
        const detail::GridScore s = detail::score_threshold(tally, cfg, fine[i]);
        if (s < best) {
            best = s;
            best_t = fine[i];
        }
    }

    ThresholdResult res;
    res.log_threshold = best_t;
    res.coarse_log_threshold = best_coarse;
    res.frames_total = total;
    std::tie(res.class0, res.class1) = tally.counts_at(best_t);
    detail::finalize(res.class0, cfg.stop);
    detail::finalize(res.class1, cfg.stop);
    res.objective = std::max(res.class0.estimate() / cfg.eps0_target,
                             res.class1.estimate() / cfg.eps1_target);
    res.satisfied =
        res.class0.ci_hi <= cfg.eps0_target && res.class1.ci_hi <= cfg.eps1_target;

    auto record = [&](double t) {
        SweepPoint p;
        p.esn0_db = esn0_db;
        p.log_threshold = t;
        std::tie(p.class0, p.class1) = tally.counts_at(t);
        detail::finalize(p.class0, cfg.stop);
        detail::finalize(p.class1, cfg.stop);
        res.sweep.push_back(p);
    };
    for (double t : coarse) record(t);
    for (double t : fine)
        if (std::abs(std::remainder(t, kGridStep)) > 1e-12) record(t);
    return res;
}

struct MinSnrResult {
    bool found = false;
    bool bracket_low_feasible = false;  // the whole bracket already satisfies the targets
    double esn0_star_db = 0.0;
    ThresholdResult at_star;
    std::vector<std::pair<double, ThresholdResult>> evaluations;
};

/// Bisection (resolution 0.05 dB) for the smallest SNR whose optimized
/// threshold certifies both targets via the Wilson upper bounds.
inline MinSnrResult find_min_snr(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (!(cfg.snr_lo_db < cfg.snr_hi_db))
        throw std::invalid_argument("find_min_snr: empty bracket");
    constexpr double kResolution = 0.05;

    MinSnrResult res;
    auto eval = [&](double snr) -> const ThresholdResult& {
        res.evaluations.emplace_back(snr, optimize_threshold(cfg, snr));
        return res.evaluations.back().second;
    };

    const ThresholdResult& hi_r = eval(cfg.snr_hi_db);
    if (!hi_r.satisfied) return res;  // bracket failure: top end infeasible
    double lo = cfg.snr_lo_db, hi = cfg.snr_hi_db;
    ThresholdResult best = hi_r;

    const ThresholdResult& lo_r = eval(cfg.snr_lo_db);
    if (lo_r.satisfied) {
        res.found = true;
        res.bracket_low_feasible = true;
        res.esn0_star_db = lo;
        res.at_star = lo_r;
        return res;
    }

    while (hi - lo > kResolution) {
        const double mid = 0.5 * (lo + hi);
        const ThresholdResult& r = eval(mid);
        if (r.satisfied) {
            hi = mid;
            best = r;
        } else {
            lo = mid;
        }
    }
    res.found = true;
    res.esn0_star_db = hi;
    res.at_star = std::move(best);
    return res;
}

struct MaxRatesResult {
    bool feasible = false;
    std::size_t k0 = 0;
    std::size_t k1 = 0;
    double r0 = 0.0;
    double r1 = 0.0;
    ThresholdResult at_optimum;
    std::vector<std::tuple<std::size_t, std::size_t, bool>> trace;  // (k0, k1, satisfied)
};

namespace detail {

inline std::size_t min_k(const ExperimentConfig& cfg, const std::vector<unsigned>& gens) {
    if (cfg.family == CodeFamily::polar) return 1;
    const std::size_t g = gens.size();
    const std::size_t ceil_div = (cfg.n + g - 1) / g;
    return std::max<std::size_t>(1, ceil_div > cfg.nu ? ceil_div - cfg.nu : 1);
}

inline std::size_t max_k(const ExperimentConfig& cfg) {
    if (cfg.family == CodeFamily::polar) return cfg.n - cfg.crc.r - 1;
    return cfg.n - 1;
}

}  // namespace detail

/// Largest (k0, k1) meeting both targets at a fixed SNR: coordinate ascent
/// over the integer grid from the normal-approximation prediction (equal
/// split), descending first if that starting point is infeasible.
inline MaxRatesResult find_max_rates(const ExperimentConfig& cfg, double esn0_db) {
    validate_config(cfg);
    MaxRatesResult res;

    const std::size_t lo0 = detail::min_k(cfg, cfg.generators0);
    const std::size_t lo1 = detail::min_k(cfg, cfg.generators1);
    const std::size_t hi_k = detail::max_k(cfg);
    auto clamp = [&](double v, std::size_t lo) {
        if (!(v > 0)) return lo;
        const std::size_t k = static_cast<std::size_t>(v);
        return std::min(std::max(k, lo), hi_k);
    };
    std::size_t k0 = clamp(std::floor(na_message_size(cfg.n, esn0_db, cfg.eps0_target, 0.5)),
                           lo0);
    std::size_t k1 = clamp(std::floor(na_message_size(cfg.n, esn0_db, cfg.eps1_target, 0.5)),
                           lo1);

    std::map<std::pair<std::size_t, std::size_t>, ThresholdResult> cache;
    auto feasible = [&](std::size_t a, std::size_t b) -> const ThresholdResult& {
        const auto key = std::make_pair(a, b);
        auto it = cache.find(key);
        if (it == cache.end()) {
            ExperimentConfig sub = cfg;
            sub.k0 = a;
            sub.k1 = b;
            ThresholdResult r;  // rate pairs without disjoint offsets stay unsatisfied
            try {
                r = optimize_threshold(sub, esn0_db);
            } catch (const OffsetSearchError&) {
            }
            it = cache.emplace(key, std::move(r)).first;
            res.trace.emplace_back(a, b, it->second.satisfied);
        }
        return it->second;
    };

    // Descend alternately until the starting point is feasible.
    while (!feasible(k0, k1).satisfied) {
        if (k1 > lo1)
            --k1;
        else if (k0 > lo0)
            --k0;
        else
            return res;  // infeasible everywhere reachable
    }

    // Ascend: grow the critical class first when possible.
    for (;;) {
        if (k0 < hi_k && feasible(k0 + 1, k1).satisfied) {
            ++k0;
        } else if (k1 < hi_k && feasible(k0, k1 + 1).satisfied) {
            ++k1;
        } else {
            break;
        }
    }

    res.feasible = true;
    res.k0 = k0;
    res.k1 = k1;
    res.r0 = static_cast<double>(k0) / static_cast<double>(cfg.n);
    res.r1 = static_cast<double>(k1) / static_cast<double>(cfg.n);
    res.at_optimum = feasible(k0, k1);
    return res;
}

inline const char* family_name(CodeFamily f) {
    return f == CodeFamily::ztcc ? "ztcc" : "polar";
}
inline const char* mode_name(TestMode m) { return m == TestMode::lrt ? "lrt" : "alrt"; }

inline void write_csv_header(std::ostream& os) {
    os << "family,n,k0,k1,mode,esn0_db,log_threshold,"
          "frames0,wrong_class0,wrong_codeword0,erasure0,errors0,estimate0,ci_lo0,ci_hi0,"
          "frames1,wrong_class1,wrong_codeword1,erasure1,errors1,estimate1,ci_lo1,ci_hi1,"
          "seed\n";
}

inline void write_csv_row(std::ostream& os, const ExperimentConfig& cfg, const SweepPoint& p) {
    const auto prec = os.precision(17);
    os << family_name(cfg.family) << ',' << cfg.n << ',' << cfg.k0 << ',' << cfg.k1 << ','
       << mode_name(cfg.mode) << ',' << p.esn0_db << ',' << p.log_threshold << ',';
    for (const ErrorEstimate* e : {&p.class0, &p.class1}) {
        os << e->frames << ',' << e->wrong_class << ',' << e->wrong_codeword << ','
           << e->erasure << ',' << e->errors() << ',' << e->estimate() << ',' << e->ci_lo
           << ',' << e->ci_hi << ',';
    }
    os << cfg.seed << '\n';
    os.precision(prec);
}

}  // namespace ump
