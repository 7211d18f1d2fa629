#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ump/gf2.hpp"
#include "ump/nr_sequence.hpp"

namespace ump {

/// CRC generator polynomial, hex form including the leading term
/// (0xE21 = x^11 + x^10 + x^9 + x^5 + 1).
struct CrcSpec {
    unsigned long poly = 0;
    std::size_t r = 0;  // parity bits = degree
};

inline CrcSpec parse_crc_hex(const std::string& text) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos, 16);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_crc_hex: bad hexadecimal literal '" + text + "'");
    }
    if (pos != text.size() || v < 2)
        throw std::invalid_argument("parse_crc_hex: bad hexadecimal literal '" + text + "'");
    CrcSpec crc;
    crc.poly = v;
    crc.r = static_cast<std::size_t>(std::bit_width(v)) - 1;
    return crc;
}

/// msg followed by r parity bits (remainder of long division, highest
/// degree coefficient first).
inline BitVector crc_encode(const BitVector& msg, const CrcSpec& crc) {
    unsigned long reg = 0;
    const unsigned long top = 1ul << crc.r;
    auto feed = [&](bool bit) {
        reg = (reg << 1) | static_cast<unsigned long>(bit);
        if (reg & top) reg ^= crc.poly;
    };
    for (std::size_t i = 0; i < msg.size(); ++i) feed(msg.get(i));
    for (std::size_t i = 0; i < crc.r; ++i) feed(false);

    BitVector out(msg.size() + crc.r);
    for (std::size_t i = 0; i < msg.size(); ++i) out.set(i, msg.get(i));
    for (std::size_t i = 0; i < crc.r; ++i)
        out.set(msg.size() + i, (reg >> (crc.r - 1 - i)) & 1ul);
    return out;
}

inline bool crc_check(const BitVector& word, const CrcSpec& crc) {
    if (word.size() < crc.r) throw std::invalid_argument("crc_check: word shorter than parity");
    unsigned long reg = 0;
    const unsigned long top = 1ul << crc.r;
    for (std::size_t i = 0; i < word.size(); ++i) {
        reg = (reg << 1) | static_cast<unsigned long>(word.get(i));
        if (reg & top) reg ^= crc.poly;
    }
    return reg == 0;
}

/// x = u F^{(x) m} with kernel rows (1,0),(1,1): each stage folds the
/// second half of a block into the first. Involutive over GF(2).
inline BitVector polar_transform(BitVector u) {
    const std::size_t n = u.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("polar_transform: length must be a power of 2");
    for (std::size_t len = n / 2; len >= 1; len /= 2)
        for (std::size_t blk = 0; blk < n; blk += 2 * len)
            for (std::size_t j = 0; j < len; ++j)
                if (u.get(blk + j + len)) u.flip(blk + j);
    return u;
}

/// Synthetic-channel indices in ascending reliability order, from the 5G
/// universal sequence truncated to n.
inline std::vector<std::size_t> nr_reliability_sequence(std::size_t n) {
    if (n > 1024) throw std::invalid_argument("nr_reliability_sequence: n must be <= 1024");
    std::vector<std::size_t> seq;
    seq.reserve(n);
    for (std::uint16_t idx : detail::kNrReliabilitySequence)
        if (idx < n) seq.push_back(idx);
    return seq;
}

/// Alternative ordering: Bhattacharyya parameter recursion from a BEC(1/2)
/// design point, worst channel first. The first split separates the low
/// half (minus branch) from the high half, matching the transform above.
inline std::vector<std::size_t> bhattacharyya_sequence(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("bhattacharyya_sequence: n must be a power of 2");
    std::size_t m = 0;
    while ((std::size_t{1} << m) < n) ++m;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double zi = 0.5;
        for (std::size_t j = m; j-- > 0;) {
            zi = ((i >> j) & 1) ? zi * zi : 2.0 * zi - zi * zi;
        }
        z[i] = zi;
    }
    std::vector<std::size_t> seq(n);
    for (std::size_t i = 0; i < n; ++i) seq[i] = i;
    std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
        return z[a] > z[b];  // less reliable first
    });
    return seq;
}

struct PolarSpec {
    std::size_t n = 0;  // mother code length, power of 2
    std::size_t k = 0;  // payload bits (CRC excluded)
    CrcSpec crc;
    std::size_t list_size = 1;
    std::vector<std::size_t> info_set;  // k + r indices, ascending
    std::vector<bool> is_info;          // size n
};

/// Build a spec from a reliability order (ascending; defaults to the 5G
/// sequence): the k + r most reliable indices carry CRC-coded payload.
inline PolarSpec make_polar_spec(std::size_t n, std::size_t k, const CrcSpec& crc,
                                 std::size_t list_size,
                                 std::vector<std::size_t> reliability = {}) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("make_polar_spec: n must be a power of 2");
    if (k < 1) throw std::invalid_argument("make_polar_spec: k must be >= 1");
    if (k + crc.r > n) throw std::invalid_argument("make_polar_spec: k + r exceeds n");
    if (list_size < 1) throw std::invalid_argument("make_polar_spec: list size must be >= 1");
    if (reliability.empty()) reliability = nr_reliability_sequence(n);
    if (reliability.size() != n)
        throw std::invalid_argument("make_polar_spec: reliability order must cover 0..n-1");

    PolarSpec spec;
    spec.n = n;
    spec.k = k;
    spec.crc = crc;
    spec.list_size = list_size;
    const std::size_t n_info = k + crc.r;
    spec.info_set.assign(reliability.end() - n_info, reliability.end());
    std::sort(spec.info_set.begin(), spec.info_set.end());
    spec.is_info.assign(n, false);
    for (std::size_t idx : spec.info_set) {
        if (idx >= n) throw std::invalid_argument("make_polar_spec: reliability index out of range");
        if (spec.is_info[idx])
            throw std::invalid_argument("make_polar_spec: duplicate reliability index");
        spec.is_info[idx] = true;
    }
    return spec;
}

/// CRC-coded payload on the information set (ascending), zeros elsewhere,
/// then the polar transform.
inline BitVector ca_polar_encode(const PolarSpec& spec, const BitVector& msg) {
    if (msg.size() != spec.k) throw std::invalid_argument("ca_polar_encode: message length mismatch");
    BitVector with_crc = crc_encode(msg, spec.crc);
    BitVector u(spec.n);
    for (std::size_t i = 0; i < spec.info_set.size(); ++i)
        u.set(spec.info_set[i], with_crc.get(i));
    return polar_transform(std::move(u));
}

struct SclOutcome {
    bool erasure = true;
    BitVector message;   // payload without CRC (valid when !erasure)
    BitVector codeword;  // length n (valid when !erasure)
    double score = 0.0;  // channel log-likelihood advantage of the winner
    bool pruned = false; // true if any path was discarded by the list limit
};

namespace detail {

inline double scl_log1pexp(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

/// min-sum-with-correction form of ln((1 + e^{a+b}) / (e^a + e^b)).
inline double boxplus(double a, double b) {
    const double sign = (a < 0) == (b < 0) ? 1.0 : -1.0;
    const double mag = std::min(std::abs(a), std::abs(b));
    return sign * mag + std::log1p(std::exp(-(std::abs(a) + std::abs(b)))) -
           std::log1p(std::exp(-std::abs(std::abs(a) - std::abs(b))));
}

/// Successive-cancellation list workspace with lazily copied per-level
/// arrays shared between paths via reference counts. Level 0 holds the n
/// channel values; level m holds the single decision value. Subproblems
/// pair index beta with beta + half (the transform folds second halves
/// into first halves), and each level keeps two bit banks: bank 0 is the
/// even-phase child codeword needed by the g-step, bank 1 the odd-phase
/// child for the combine.
class SclWorkspace {
  public:
    SclWorkspace(const PolarSpec& spec, std::span<const double> llrs)
        : spec_(spec), n_(spec.n), L_(spec.list_size) {
        m_ = 0;
        while ((std::size_t{1} << m_) < n_) ++m_;

        p_.resize(m_ + 1);
        c_.resize(m_ + 1);
        path_to_array_.assign(m_ + 1, std::vector<std::size_t>(L_, 0));
        ref_count_.assign(m_ + 1, std::vector<std::size_t>(L_, 0));
        free_arrays_.resize(m_ + 1);
        for (std::size_t lv = 0; lv <= m_; ++lv) {
            const std::size_t len = n_ >> lv;
            p_[lv].assign(L_, {});
            c_[lv].assign(L_, {});
            for (std::size_t s = 0; s < L_; ++s) {
                p_[lv][s].assign(len, 0.0);
                c_[lv][s].assign(2 * len, 0);
                free_arrays_[lv].push_back(L_ - 1 - s);
            }
        }
        active_.assign(L_, false);
        pm_.assign(L_, 0.0);
        u_hist_.assign(L_, std::vector<std::uint8_t>(n_, 0));
        for (std::size_t l = L_; l-- > 0;) free_paths_.push_back(l);

        const std::size_t first = new_path();
        std::copy(llrs.begin(), llrs.end(), writable_p(0, first));
    }

    /// Run the decision loop; returns the surviving path ids.
    std::vector<std::size_t> run(bool* pruned) {
        for (std::size_t phase = 0; phase < n_; ++phase) {
            compute_llrs(m_, phase);
            if (spec_.is_info[phase])
                extend_info(phase, pruned);
            else
                extend_frozen(phase);
            if (phase & 1) propagate_bits(m_, phase);
        }
        std::vector<std::size_t> alive;
        for (std::size_t l = 0; l < L_; ++l)
            if (active_[l]) alive.push_back(l);
        return alive;
    }

    const std::vector<std::uint8_t>& decisions(std::size_t l) const { return u_hist_[l]; }
    double path_metric(std::size_t l) const { return pm_[l]; }

  private:
    std::size_t new_path() {
        const std::size_t l = free_paths_.back();
        free_paths_.pop_back();
        active_[l] = true;
        pm_[l] = 0.0;
        for (std::size_t lv = 0; lv <= m_; ++lv) {
            const std::size_t s = free_arrays_[lv].back();
            free_arrays_[lv].pop_back();
            path_to_array_[lv][l] = s;
            ref_count_[lv][s] = 1;
        }
        return l;
    }

    std::size_t clone_path(std::size_t src) {
        const std::size_t l = free_paths_.back();
        free_paths_.pop_back();
        active_[l] = true;
        pm_[l] = pm_[src];
        u_hist_[l] = u_hist_[src];
        for (std::size_t lv = 0; lv <= m_; ++lv) {
            const std::size_t s = path_to_array_[lv][src];
            path_to_array_[lv][l] = s;
            ++ref_count_[lv][s];
        }
        return l;
    }

    void kill_path(std::size_t l) {
        active_[l] = false;
        free_paths_.push_back(l);
        for (std::size_t lv = 0; lv <= m_; ++lv) {
            const std::size_t s = path_to_array_[lv][l];
            if (--ref_count_[lv][s] == 0) free_arrays_[lv].push_back(s);
        }
    }

    /// Array for (level, path), copied first if shared.
    std::size_t own_array(std::size_t lv, std::size_t l) {
        const std::size_t s = path_to_array_[lv][l];
        if (ref_count_[lv][s] == 1) return s;
        const std::size_t t = free_arrays_[lv].back();
        free_arrays_[lv].pop_back();
        p_[lv][t] = p_[lv][s];
        c_[lv][t] = c_[lv][s];
        --ref_count_[lv][s];
        ref_count_[lv][t] = 1;
        path_to_array_[lv][l] = t;
        return t;
    }

    double* writable_p(std::size_t lv, std::size_t l) { return p_[lv][own_array(lv, l)].data(); }
    std::uint8_t* writable_c(std::size_t lv, std::size_t l) {
        return c_[lv][own_array(lv, l)].data();
    }
    const double* read_p(std::size_t lv, std::size_t l) const {
        return p_[lv][path_to_array_[lv][l]].data();
    }
    const std::uint8_t* read_c(std::size_t lv, std::size_t l) const {
        return c_[lv][path_to_array_[lv][l]].data();
    }

    void compute_llrs(std::size_t lv, std::size_t phase) {
        if (lv == 0) return;
        if ((phase & 1) == 0) compute_llrs(lv - 1, phase >> 1);
        const std::size_t len = n_ >> lv;  // entries at this level
        for (std::size_t l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            const double* up = read_p(lv - 1, l);
            const std::uint8_t* cb = read_c(lv, l);
            double* out = writable_p(lv, l);
            if ((phase & 1) == 0) {
                for (std::size_t b = 0; b < len; ++b) out[b] = boxplus(up[b], up[b + len]);
            } else {
                for (std::size_t b = 0; b < len; ++b)
                    out[b] = up[b + len] + (cb[b] ? -up[b] : up[b]);
            }
        }
    }

    void propagate_bits(std::size_t lv, std::size_t phase) {
        const std::size_t half = n_ >> lv;
        const std::size_t parent_phase = phase >> 1;
        const std::size_t bank = parent_phase & 1;
        for (std::size_t l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            std::uint8_t* up = writable_c(lv - 1, l);
            const std::uint8_t* cur = read_c(lv, l);
            std::uint8_t* dst = up + bank * 2 * half;
            for (std::size_t b = 0; b < half; ++b) {
                dst[b] = cur[b] ^ cur[half + b];
                dst[half + b] = cur[half + b];
            }
        }
        if (lv > 1 && (parent_phase & 1)) propagate_bits(lv - 1, parent_phase);
    }

    void extend_frozen(std::size_t phase) {
        for (std::size_t l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            const double llr = read_p(m_, l)[0];
            pm_[l] += scl_log1pexp(-llr);  // cost of forcing u = 0
            writable_c(m_, l)[phase & 1] = 0;
            u_hist_[l][phase] = 0;
        }
    }

    void extend_info(std::size_t phase, bool* pruned) {
        struct Cand {
            double pm;
            std::size_t l;
            std::uint8_t u;
        };
        std::vector<Cand> cands;
        cands.reserve(2 * L_);
        for (std::size_t l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            const double llr = read_p(m_, l)[0];
            cands.push_back({pm_[l] + scl_log1pexp(-llr), l, 0});
            cands.push_back({pm_[l] + scl_log1pexp(llr), l, 1});
        }
        if (cands.size() > L_) {
            if (pruned) *pruned = true;
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.pm != b.pm) return a.pm < b.pm;
                if (a.l != b.l) return a.l < b.l;
                return a.u < b.u;
            });
            cands.resize(L_);
        }

        std::vector<std::uint8_t> keep0(L_, 0), keep1(L_, 0);
        for (const Cand& c : cands) (c.u ? keep1 : keep0)[c.l] = 1;
        std::vector<double> pm0(L_, 0.0), pm1(L_, 0.0);
        for (const Cand& c : cands) (c.u ? pm1 : pm0)[c.l] = c.pm;

        for (std::size_t l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            if (!keep0[l] && !keep1[l]) kill_path(l);
        }
        std::vector<std::size_t> was_active;
        for (std::size_t l = 0; l < L_; ++l)
            if (active_[l] && (keep0[l] || keep1[l])) was_active.push_back(l);
        for (std::size_t l : was_active) {
            if (keep0[l] && keep1[l]) {
                const std::size_t l2 = clone_path(l);
                pm_[l] = pm0[l];
                writable_c(m_, l)[phase & 1] = 0;
                u_hist_[l][phase] = 0;
                pm_[l2] = pm1[l];
                writable_c(m_, l2)[phase & 1] = 1;
                u_hist_[l2][phase] = 1;
            } else {
                const std::uint8_t u = keep1[l] ? 1 : 0;
                pm_[l] = u ? pm1[l] : pm0[l];
                writable_c(m_, l)[phase & 1] = u;
                u_hist_[l][phase] = u;
            }
        }
    }

    const PolarSpec& spec_;
    std::size_t n_, L_, m_ = 0;
    std::vector<std::vector<std::vector<double>>> p_;        // [level][slot]
    std::vector<std::vector<std::vector<std::uint8_t>>> c_;  // [level][slot]
    std::vector<std::vector<std::size_t>> path_to_array_;
    std::vector<std::vector<std::size_t>> ref_count_;
    std::vector<std::vector<std::size_t>> free_arrays_;
    std::vector<std::size_t> free_paths_;
    std::vector<bool> active_;
    std::vector<double> pm_;
    std::vector<std::vector<std::uint8_t>> u_hist_;
};

}  // namespace detail

/// List decoding with CRC selection: among list entries passing the CRC,
/// the one with the largest channel log-likelihood (recomputed from the
/// codeword) wins; an empty selection is an erasure.
inline SclOutcome scl_decode(const PolarSpec& spec, std::span<const double> llrs) {
    if (llrs.size() != spec.n) throw std::invalid_argument("scl_decode: llr length mismatch");

    SclOutcome out;
    detail::SclWorkspace ws(spec, llrs);
    const std::vector<std::size_t> alive = ws.run(&out.pruned);

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t l : alive) {
        const auto& u = ws.decisions(l);
        BitVector info_bits(spec.info_set.size());
        for (std::size_t i = 0; i < spec.info_set.size(); ++i)
            info_bits.set(i, u[spec.info_set[i]] != 0);
        if (!crc_check(info_bits, spec.crc)) continue;

        BitVector uu(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
            if (u[i]) uu.set(i, true);
        BitVector cw = polar_transform(std::move(uu));
        // log p(y|cw) - log p(y|0) = sum over flipped bits of -llr_i.
        double score = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i)
            if (cw.get(i)) score -= llrs[i];
        if (score > best) {
            best = score;
            out.erasure = false;
            out.codeword = std::move(cw);
            out.score = score;
            BitVector msg(spec.k);
            for (std::size_t i = 0; i < spec.k; ++i) msg.set(i, info_bits.get(i));
            out.message = std::move(msg);
        }
    }
    return out;
}

}  // namespace ump
