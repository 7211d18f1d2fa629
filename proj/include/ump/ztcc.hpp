#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ump/gf2.hpp"

namespace ump {

/// Zero-tail convolutional code description. Generators use the classic
/// octal convention in which the most significant bit of the (nu+1)-bit
/// expansion is the degree-0 tap (e.g. 133 -> 1 + D^2 + D^3 + D^5 + D^6).
struct ZtccSpec {
    std::vector<unsigned> generators;  // octal-parsed values, one per output
    std::size_t nu = 0;                // encoder memory
    std::size_t k = 0;                 // message bits
    std::size_t n = 0;                 // codeword length after puncturing
    std::vector<std::size_t> puncture_pattern;  // dropped stream positions, increasing

    std::size_t rate_denominator() const { return generators.size(); }
    std::size_t unpunctured_length() const { return (k + nu) * generators.size(); }
};

inline std::vector<unsigned> parse_generators_octal(const std::string& text) {
    std::vector<unsigned> gens;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos, 8);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_generators_octal: bad octal literal '" + item + "'");
        }
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size() || item.empty())
            throw std::invalid_argument("parse_generators_octal: bad octal literal '" + item + "'");
        gens.push_back(static_cast<unsigned>(v));
    }
    if (gens.empty()) throw std::invalid_argument("parse_generators_octal: no generators");
    return gens;
}

/// Drop positions floor(l * total / drop_count), spread evenly over the
/// unpunctured stream.
inline std::vector<std::size_t> even_puncture_pattern(std::size_t total, std::size_t drops) {
    if (drops > total) throw std::invalid_argument("even_puncture_pattern: more drops than symbols");
    std::vector<std::size_t> pattern(drops);
    for (std::size_t l = 0; l < drops; ++l) pattern[l] = l * total / drops;
    return pattern;
}

inline ZtccSpec make_ztcc_spec(std::vector<unsigned> generators, std::size_t nu, std::size_t k,
                               std::size_t n, std::vector<std::size_t> puncture_pattern = {}) {
    ZtccSpec spec;
    spec.generators = std::move(generators);
    spec.nu = nu;
    spec.k = k;
    spec.n = n;
    if (spec.generators.empty()) throw std::invalid_argument("ztcc: no generators");
    if (nu < 1) throw std::invalid_argument("ztcc: memory must be >= 1");
    if (k < 1) throw std::invalid_argument("ztcc: message length must be >= 1");
    for (unsigned g : spec.generators) {
        if (g == 0) throw std::invalid_argument("ztcc: zero generator");
        if (nu + 1 < 32 && g >= (1u << (nu + 1)))
            throw std::invalid_argument("ztcc: generator degree exceeds memory");
    }
    const std::size_t total = spec.unpunctured_length();
    if (n > total) throw std::invalid_argument("ztcc: blocklength exceeds unpunctured length");
    if (puncture_pattern.empty() && total != n)
        spec.puncture_pattern = even_puncture_pattern(total, total - n);
    else
        spec.puncture_pattern = std::move(puncture_pattern);
    if (spec.puncture_pattern.size() != total - n)
        throw std::invalid_argument("ztcc: puncture pattern size must be unpunctured length - n");
    for (std::size_t i = 0; i < spec.puncture_pattern.size(); ++i) {
        if (spec.puncture_pattern[i] >= total)
            throw std::invalid_argument("ztcc: puncture position out of range");
        if (i > 0 && spec.puncture_pattern[i] <= spec.puncture_pattern[i - 1])
            throw std::invalid_argument("ztcc: puncture pattern must be strictly increasing");
    }
    return spec;
}

/// Branch structure shared by the decoders. State bit i holds the input
/// from i+1 steps ago, so state s with input b steps to ((s<<1)|b) masked
/// to nu bits, and the predecessors of s' are s'>>1 (oldest dropped bit 0)
/// and s'>>1 with the top bit set (oldest dropped bit 1); both predecessors
/// share the input bit s'&1.
struct Trellis {
    std::size_t nu = 0;
    std::size_t num_states = 0;
    std::size_t n_out = 0;
    std::vector<std::uint32_t> labels;  // labels[(s << 1) | b], bit j = output j

    std::uint32_t label(std::size_t state, unsigned bit) const {
        return labels[(state << 1) | bit];
    }
    std::size_t next_state(std::size_t state, unsigned bit) const {
        return ((state << 1) | bit) & (num_states - 1);
    }
};

inline Trellis build_trellis(const ZtccSpec& spec) {
    Trellis tr;
    tr.nu = spec.nu;
    tr.num_states = std::size_t{1} << spec.nu;
    tr.n_out = spec.generators.size();
    tr.labels.assign(tr.num_states * 2, 0);

    // Split each generator into its degree-0 tap and a mask over the state
    // bits (degree d tap applies to state bit d-1).
    std::vector<unsigned> tap0(tr.n_out), smask(tr.n_out);
    for (std::size_t j = 0; j < tr.n_out; ++j) {
        const unsigned g = spec.generators[j];
        tap0[j] = (g >> spec.nu) & 1u;
        unsigned m = 0;
        for (std::size_t d = 1; d <= spec.nu; ++d)
            m |= (((g >> (spec.nu - d)) & 1u) << (d - 1));
        smask[j] = m;
    }
    for (std::size_t s = 0; s < tr.num_states; ++s) {
        for (unsigned b = 0; b < 2; ++b) {
            std::uint32_t label = 0;
            for (std::size_t j = 0; j < tr.n_out; ++j) {
                const unsigned bit =
                    (tap0[j] & b) ^ (std::popcount(static_cast<unsigned>(s) & smask[j]) & 1u);
                label |= (bit << j);
            }
            tr.labels[(s << 1) | b] = label;
        }
    }
    return tr;
}

struct ViterbiResult {
    BitVector message;   // length k
    BitVector codeword;  // length n
    double metric = 0.0;
};

/// Zero-tail convolutional code with its trellis built once.
class ZtccCode {
  public:
    explicit ZtccCode(ZtccSpec spec) : spec_(std::move(spec)), trellis_(build_trellis(spec_)) {
        // Map unpunctured stream positions to output indices (-1 = dropped).
        const std::size_t total = spec_.unpunctured_length();
        stream_to_out_.assign(total, 0);
        std::size_t p = 0;
        std::ptrdiff_t out = 0;
        for (std::size_t i = 0; i < total; ++i) {
            if (p < spec_.puncture_pattern.size() && spec_.puncture_pattern[p] == i) {
                stream_to_out_[i] = -1;
                ++p;
            } else {
                stream_to_out_[i] = out++;
            }
        }
    }

    const ZtccSpec& spec() const { return spec_; }
    const Trellis& trellis() const { return trellis_; }

    BitVector encode(const BitVector& msg) const {
        if (msg.size() != spec_.k) throw std::invalid_argument("ztcc encode: message length mismatch");
        const std::size_t n_out = trellis_.n_out;
        BitVector cw(spec_.n);
        std::size_t state = 0;
        for (std::size_t t = 0; t < spec_.k + spec_.nu; ++t) {
            const unsigned b = t < spec_.k ? static_cast<unsigned>(msg.get(t)) : 0u;
            const std::uint32_t label = trellis_.label(state, b);
            for (std::size_t j = 0; j < n_out; ++j) {
                const std::ptrdiff_t pos = stream_to_out_[t * n_out + j];
                if (pos >= 0 && ((label >> j) & 1u)) cw.set(static_cast<std::size_t>(pos), true);
            }
            state = trellis_.next_state(state, b);
        }
        return cw;
    }

    /// Exact ML decoding: maximizes <y, modulate(c)> / sigma^2 over the
    /// zero-tail codebook. Punctured positions contribute nothing. On path
    /// metric ties the survivor comes through the predecessor whose dropped
    /// oldest bit is 0, which selects the smallest message (read as an
    /// integer with bit t = input at time t) among the maximizers.
    ViterbiResult viterbi_decode(std::span<const double> y, double sigma) const {
        check_observation(y);
        const std::size_t S = trellis_.num_states;
        const std::size_t T = spec_.k + spec_.nu;
        const auto tables = section_metric_tables(y, sigma);

        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        std::vector<double> cur(S, kNegInf), nxt(S);
        cur[0] = 0.0;
        std::vector<std::uint8_t> dropped(T * S, 0);
        const std::size_t top = S >> 1;

        for (std::size_t t = 0; t < T; ++t) {
            const double* tab = tables.data() + (t << trellis_.n_out);
            const bool tail = t >= spec_.k;
            for (std::size_t s2 = 0; s2 < S; ++s2) {
                const unsigned b = static_cast<unsigned>(s2 & 1);
                if (tail && b) {
                    nxt[s2] = kNegInf;
                    continue;
                }
                const std::size_t p0 = s2 >> 1;
                const std::size_t p1 = p0 | top;
                const double a0 = cur[p0] + tab[trellis_.label(p0, b)];
                const double a1 = cur[p1] + tab[trellis_.label(p1, b)];
                if (a1 > a0) {
                    nxt[s2] = a1;
                    dropped[t * S + s2] = 1;
                } else {
                    nxt[s2] = a0;
                }
            }
            cur.swap(nxt);
        }

        ViterbiResult res;
        res.metric = cur[0];
        res.message = BitVector(spec_.k);
        std::size_t s = 0;
        for (std::size_t t = T; t-- > 0;) {
            const unsigned b = static_cast<unsigned>(s & 1);
            if (t < spec_.k && b) res.message.set(t, true);
            s = (s >> 1) | (static_cast<std::size_t>(dropped[t * S + s]) << (spec_.nu - 1));
        }
        res.codeword = encode(res.message);
        return res;
    }

    /// log sum_{c in codebook} exp(<y, modulate(c)> / sigma^2) by the
    /// forward recursion over the trellis (log-sum-exp per state, shifted
    /// by the larger term).
    double forward_log_likelihood(std::span<const double> y, double sigma) const {
        check_observation(y);
        const std::size_t S = trellis_.num_states;
        const std::size_t T = spec_.k + spec_.nu;
        const auto tables = section_metric_tables(y, sigma);

        constexpr double kNegInf = -std::numeric_limits<double>::infinity();
        std::vector<double> cur(S, kNegInf), nxt(S);
        cur[0] = 0.0;
        const std::size_t top = S >> 1;

        for (std::size_t t = 0; t < T; ++t) {
            const double* tab = tables.data() + (t << trellis_.n_out);
            const bool tail = t >= spec_.k;
            for (std::size_t s2 = 0; s2 < S; ++s2) {
                const unsigned b = static_cast<unsigned>(s2 & 1);
                if (tail && b) {
                    nxt[s2] = kNegInf;
                    continue;
                }
                const std::size_t p0 = s2 >> 1;
                const std::size_t p1 = p0 | top;
                double a0 = cur[p0] + tab[trellis_.label(p0, b)];
                double a1 = cur[p1] + tab[trellis_.label(p1, b)];
                if (a0 < a1) std::swap(a0, a1);
                nxt[s2] = a0 == kNegInf ? kNegInf : a0 + std::log1p(std::exp(a1 - a0));
            }
            cur.swap(nxt);
        }
        return cur[0];
    }

  private:
    void check_observation(std::span<const double> y) const {
        if (y.size() != spec_.n)
            throw std::invalid_argument("ztcc decode: observation length mismatch");
    }

    /// Per-section branch metrics for every output label:
    /// tables[t][label] = sum_j s_j y_{t,j} / sigma^2 with s_j = +1 for bit
    /// 0 and -1 for bit 1; punctured positions contribute 0.
    std::vector<double> section_metric_tables(std::span<const double> y, double sigma) const {
        const std::size_t n_out = trellis_.n_out;
        const std::size_t T = spec_.k + spec_.nu;
        const double inv_sigma2 = 1.0 / (sigma * sigma);
        std::vector<double> tables(T << n_out, 0.0);
        std::vector<double> contrib(n_out);
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t j = 0; j < n_out; ++j) {
                const std::ptrdiff_t pos = stream_to_out_[t * n_out + j];
                contrib[j] = pos < 0 ? 0.0 : y[static_cast<std::size_t>(pos)] * inv_sigma2;
            }
            double* tab = tables.data() + (t << n_out);
            for (std::size_t label = 0; label < (std::size_t{1} << n_out); ++label) {
                double m = 0.0;
                for (std::size_t j = 0; j < n_out; ++j)
                    m += ((label >> j) & 1u) ? -contrib[j] : contrib[j];
                tab[label] = m;
            }
        }
        return tables;
    }

    ZtccSpec spec_;
    Trellis trellis_;
    std::vector<std::ptrdiff_t> stream_to_out_;
};

}  // namespace ump
