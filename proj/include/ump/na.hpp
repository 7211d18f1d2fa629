#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ump {

namespace detail {

struct GaussHermite {
    std::vector<double> nodes;    // roots of H_n, symmetric about 0
    std::vector<double> weights;  // for the weight function exp(-t^2)
};

/// Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the
/// Hermite recurrence (diagonal 0, off-diagonal sqrt(j/2)) and each weight
/// is sqrt(pi) times the squared first component of the eigenvector. The
/// eigenproblem is solved by implicit-shift QL on the tridiagonal matrix,
/// tracking only the first row of the rotation product.
inline GaussHermite compute_gauss_hermite(int n) {
    std::vector<double> d(n, 0.0);   // diagonal -> eigenvalues
    std::vector<double> e(n, 0.0);   // subdiagonal
    std::vector<double> q0(n, 0.0);  // first row of the eigenvector matrix
    for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(j / 2.0);
    q0[0] = 1.0;

    for (int l = 0; l < n; ++l) {
        for (int iter = 0;; ++iter) {
            int m = l;
            while (m < n - 1 &&
                   std::abs(e[m]) > 1e-16 * (std::abs(d[m]) + std::abs(d[m + 1])))
                ++m;
            if (m == l) break;
            if (iter >= 60) throw std::runtime_error("gauss_hermite: QL iteration stalled");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = q0[i + 1];
                q0[i + 1] = s * q0[i] + c * f;
                q0[i] = c * q0[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    GaussHermite gh;
    gh.nodes.resize(n);
    gh.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        gh.nodes[i] = d[order[i]];
        gh.weights[i] = mu0 * q0[order[i]] * q0[order[i]];
    }
    return gh;
}

inline const GaussHermite& gauss_hermite(int n) {
    static std::map<int, GaussHermite> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
    return it->second;
}

/// log(1 + exp(a)) without overflow.
inline double log1pexp(double a) {
    return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
}

struct InfoDensityMoments {
    double mean = 0.0;
    double var = 0.0;
};

/// First two moments of the information density
/// i(y) = 1 - log2(1 + exp(-2y/sigma^2)) with y = 1 + sigma z, z ~ N(0,1):
/// Gauss-Hermite quadrature, node count doubled until converged.
inline InfoDensityMoments info_density_moments(double esn0) {
    if (!(esn0 > 0.0)) throw std::invalid_argument("info_density_moments: esn0 must be > 0");
    const double sigma2 = 1.0 / (2.0 * esn0);
    const double sigma = std::sqrt(sigma2);
    const double inv_ln2 = 1.0 / std::numbers::ln2;
    const double sqrt2 = std::numbers::sqrt2;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

    auto moments = [&](int nodes) {
        const GaussHermite& gh = gauss_hermite(nodes);
        double m1 = 0.0, m2 = 0.0;
        for (int j = 0; j < nodes; ++j) {
            const double zz = sqrt2 * gh.nodes[j];
            const double a = -2.0 * (1.0 + sigma * zz) / sigma2;
            const double i = 1.0 - log1pexp(a) * inv_ln2;
            m1 += gh.weights[j] * i;
            m2 += gh.weights[j] * i * i;
        }
        return std::pair{m1 * inv_sqrt_pi, m2 * inv_sqrt_pi};
    };

    auto [m1, m2] = moments(64);
    for (int nodes = 128; nodes <= 4096; nodes *= 2) {
        auto [n1, n2] = moments(nodes);
        const bool done = std::abs(n1 - m1) < 1e-9 && std::abs(n2 - m2) < 1e-9;
        m1 = n1;
        m2 = n2;
        if (done) break;
    }
    return {.mean = m1, .var = std::max(0.0, m2 - m1 * m1)};
}

}  // namespace detail

/// biAWGN capacity in bits per channel use at linear SNR Es/N0.
inline double biawgn_capacity(double esn0) {
    return detail::info_density_moments(esn0).mean;
}

/// biAWGN dispersion in bits^2 per channel use at linear SNR Es/N0.
inline double biawgn_dispersion(double esn0) {
    return detail::info_density_moments(esn0).var;
}

/// Gaussian tail probability Q(x).
inline double q_func(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Inverse of q_func: rational initial estimate, polished by two Halley
/// steps on Q(x) - p.
inline double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_inv: p must be in (0, 1)");

    // Inverse standard normal CDF (Acklam's approximation).
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    x = -x;  // Q^{-1}(p) = -Phi^{-1}(p)

    for (int it = 0; it < 2; ++it) {
        const double f = q_func(x) - p;
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        x += 2.0 * f / (2.0 * phi - f * x);
    }
    return x;
}

/// Largest message size (real-valued, in bits) supported at blocklength n,
/// linear SNR esn0, error target eps and class weight lambda:
/// n C - sqrt(n V) Q^{-1}(eps) - (1/2) log2 n + log2(1/lambda).
inline double na_message_size(std::size_t n, double esn0, double eps, double lambda) {
    if (n < 1) throw std::invalid_argument("na_message_size: n must be >= 1");
    if (!(esn0 > 0.0)) throw std::invalid_argument("na_message_size: esn0 must be > 0");
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("na_message_size: eps must be in (0, 0.5)");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("na_message_size: lambda must be in (0, 1]");
    auto mom = detail::info_density_moments(esn0);
    const double nn = static_cast<double>(n);
    return nn * mom.mean - std::sqrt(nn * mom.var) * q_inv(eps) - 0.5 * std::log2(nn) +
           std::log2(1.0 / lambda);
}

struct NaClass {
    double k = 0.0;  // message bits (treated as real-valued)
    double eps = 0.0;
};

struct NaProblem {
    std::size_t n = 0;
    std::vector<NaClass> classes;
    std::vector<double> lambdas;  // empty until optimized; else sums to 1
};

struct NaMinSnrResult {
    double esn0_star_db = 0.0;
    std::vector<double> lambdas;
};

/// Smallest SNR (dB) at which na_message_size(n, ., eps, lambda) >= k.
/// The starting bracket is widened automatically, so the result does not
/// depend on it beyond bisection tolerance.
inline double na_required_snr_db(std::size_t n, double k, double eps, double lambda,
                                 double lo_db = -30.0, double hi_db = 30.0) {
    if (!(k >= 1.0)) throw std::invalid_argument("na_required_snr_db: k must be >= 1");
    if (k >= static_cast<double>(n))
        throw std::invalid_argument("na_required_snr_db: k must be < n");
    auto slack = [&](double db) {
        return na_message_size(n, std::pow(10.0, db / 10.0), eps, lambda) - k;
    };
    while (slack(hi_db) < 0.0) {
        hi_db += 10.0;
        if (hi_db > 90.0) throw std::invalid_argument("na_required_snr_db: target not achievable");
    }
    while (slack(lo_db) > 0.0) {
        lo_db -= 10.0;
        if (lo_db < -100.0) return lo_db;  // constraint slack at any practical SNR
    }
    for (int it = 0; it < 200 && hi_db - lo_db > 1e-9; ++it) {
        const double mid = 0.5 * (lo_db + hi_db);
        (slack(mid) >= 0.0 ? hi_db : lo_db) = mid;
    }
    return hi_db;
}

/// Minimal SNR at which every class meets its (k_i, eps_i) target for some
/// weight assignment, together with the optimizing weights.
///
/// Two classes: bisect on lambda_0; the class-0 required SNR rises with
/// lambda_0 while the class-1 required SNR falls, so the minimax sits where
/// they are equal. More classes: bisect on SNR for the point where the
/// per-class weights that make each constraint tight sum to one.
inline NaMinSnrResult na_min_snr(std::size_t n, const std::vector<NaClass>& classes,
                                 double lo_db = -30.0, double hi_db = 30.0) {
    if (classes.size() < 2) throw std::invalid_argument("na_min_snr: need at least two classes");
    for (const auto& c : classes) {
        if (!(c.k >= 1.0)) throw std::invalid_argument("na_min_snr: k must be >= 1");
        if (c.k >= static_cast<double>(n)) throw std::invalid_argument("na_min_snr: k must be < n");
        if (!(c.eps > 0.0 && c.eps < 0.5))
            throw std::invalid_argument("na_min_snr: eps must be in (0, 0.5)");
    }

    if (classes.size() == 2) {
        auto gap = [&](double l0) {
            return na_required_snr_db(n, classes[0].k, classes[0].eps, l0, lo_db, hi_db) -
                   na_required_snr_db(n, classes[1].k, classes[1].eps, 1.0 - l0, lo_db, hi_db);
        };
        double lo = 1e-12, hi = 1.0 - 1e-12;
        if (gap(lo) >= 0.0)
            hi = lo;  // class 0 binding for every split
        else if (gap(hi) <= 0.0)
            lo = hi;  // class 1 binding for every split
        else
            for (int it = 0; it < 120 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                (gap(mid) >= 0.0 ? hi : lo) = mid;
            }
        const double l0 = 0.5 * (lo + hi);
        const double snr =
            std::max(na_required_snr_db(n, classes[0].k, classes[0].eps, l0, lo_db, hi_db),
                     na_required_snr_db(n, classes[1].k, classes[1].eps, 1.0 - l0, lo_db, hi_db));
        return {.esn0_star_db = snr, .lambdas = {l0, 1.0 - l0}};
    }

    // General m: lambda_i^req(esn0) makes class i exactly tight; the sum is
    // decreasing in SNR and equals 1 at the optimum.
    auto tight_lambdas = [&](double db) {
        const double esn0 = std::pow(10.0, db / 10.0);
        auto mom = detail::info_density_moments(esn0);
        const double nn = static_cast<double>(n);
        std::vector<double> ls(classes.size());
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const double need = classes[i].k - nn * mom.mean +
                                std::sqrt(nn * mom.var) * q_inv(classes[i].eps) +
                                0.5 * std::log2(nn);
            ls[i] = std::exp2(-need);
        }
        return ls;
    };
    // Feasible at a given SNR iff the tight weights sum to at least 1.
    auto excess = [&](double db) {
        double s = 0.0;
        for (double l : tight_lambdas(db)) s += l;
        return s - 1.0;
    };
    while (excess(hi_db) < 0.0) {
        hi_db += 10.0;
        if (hi_db > 90.0) throw std::invalid_argument("na_min_snr: targets not achievable");
    }
    while (excess(lo_db) > 0.0 && lo_db > -100.0) lo_db -= 10.0;
    for (int it = 0; it < 200 && hi_db - lo_db > 1e-9; ++it) {
        const double mid = 0.5 * (lo_db + hi_db);
        (excess(mid) >= 0.0 ? hi_db : lo_db) = mid;
    }
    std::vector<double> ls = tight_lambdas(hi_db);
    double sum = 0.0;
    for (double l : ls) sum += l;
    for (double& l : ls) l /= sum;
    return {.esn0_star_db = hi_db, .lambdas = std::move(ls)};
}

}  // namespace ump
