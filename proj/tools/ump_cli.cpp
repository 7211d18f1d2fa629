// Command-line driver for the unequal-message-protection library: the
// finite-blocklength benchmark, codebook-intersection reports, and the
// Monte Carlo experiment protocols, all reproducible from --seed and
// scriptable through a JSON config file whose values any flag overrides.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ump/na.hpp"
#include "ump/sim.hpp"

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::pair<std::string, std::string> split_colon(const std::string& s, const char* what) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        fail(std::string(what) + ": expected '<a>:<b>', got '" + s + "'");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

double parse_double(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size()) fail(std::string(what) + ": not a number: '" + s + "'");
    return v;
}

std::vector<unsigned> parse_octal_list(const std::string& s, const char* what) {
    std::vector<unsigned> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos, 8);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (tok.empty() || pos != tok.size())
            fail(std::string(what) + ": not an octal number: '" + tok + "'");
        out.push_back(static_cast<unsigned>(v));
    }
    if (out.empty()) fail(std::string(what) + ": empty generator list");
    return out;
}

std::string format_octal(unsigned v) {
    std::ostringstream os;
    os << std::oct << v;
    return os.str();
}

std::string format_hex(unsigned long v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
}

/// Offsets travel as hex text, first digit covering bits 0..3 with bit 0 at
/// the digit's most significant position; trailing pad bits must be zero.
std::string offset_to_hex(const ump::BitVector& v) {
    static const char* digits = "0123456789abcdef";
    std::vector<unsigned> nib((v.size() + 3) / 4, 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(i)) nib[i / 4] |= 8u >> (i % 4);
    std::string s;
    for (unsigned x : nib) s.push_back(digits[x]);
    return s;
}

ump::BitVector offset_from_hex(const std::string& s, std::size_t n, const char* what) {
    const std::size_t want = (n + 3) / 4;
    if (s.size() != want)
        fail(std::string(what) + ": expected " + std::to_string(want) +
             " hex digits for blocklength " + std::to_string(n) + ", got " +
             std::to_string(s.size()));
    ump::BitVector v(n);
    for (std::size_t d = 0; d < s.size(); ++d) {
        const char c = s[d];
        unsigned x = 0;
        if (c >= '0' && c <= '9')
            x = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            x = static_cast<unsigned>(c - 'a') + 10;
        else if (c >= 'A' && c <= 'F')
            x = static_cast<unsigned>(c - 'A') + 10;
        else
            fail(std::string(what) + ": not a hex digit: '" + std::string(1, c) + "'");
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t i = 4 * d + b;
            const bool on = (x >> (3 - b)) & 1u;
            if (i < n)
                v.set(i, on);
            else if (on)
                fail(std::string(what) + ": pad bits beyond the blocklength must be zero");
        }
    }
    return v;
}

ump::CodeFamily parse_family(const std::string& s) {
    if (s == "ztcc") return ump::CodeFamily::ztcc;
    if (s == "polar") return ump::CodeFamily::polar;
    fail("--family: expected 'ztcc' or 'polar', got '" + s + "'");
}

ump::TestMode parse_mode(const std::string& s) {
    if (s == "lrt") return ump::TestMode::lrt;
    if (s == "alrt") return ump::TestMode::alrt;
    fail("--mode: expected 'lrt' or 'alrt', got '" + s + "'");
}

json config_to_json(const ump::ExperimentConfig& c) {
    std::vector<std::string> g0, g1;
    for (unsigned g : c.generators0) g0.push_back(format_octal(g));
    for (unsigned g : c.generators1) g1.push_back(format_octal(g));
    return json{{"family", ump::family_name(c.family)},
                {"n", c.n},
                {"k0", c.k0},
                {"k1", c.k1},
                {"eps0", c.eps0_target},
                {"eps1", c.eps1_target},
                {"mode", ump::mode_name(c.mode)},
                {"nu", c.nu},
                {"generators0", g0},
                {"generators1", g1},
                {"crc", format_hex(c.crc.poly)},
                {"list_size", c.list_size},
                {"zero_offsets", c.zero_offsets},
                {"offset_search_tries", c.offset_search_tries},
                {"snr_bracket", json::array({c.snr_lo_db, c.snr_hi_db})},
                {"class0_prior", c.class0_prior},
                {"min_errors", c.stop.min_errors_per_class},
                {"max_frames", c.stop.max_frames},
                {"seed", c.seed},
                {"threads", c.threads}};
}

ump::ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) fail("config: expected a JSON object");
    static const std::set<std::string> known = {
        "family",      "n",           "k0",           "k1",
        "eps0",        "eps1",        "mode",         "nu",
        "generators0", "generators1", "crc",          "list_size",
        "zero_offsets", "offset_search_tries", "snr_bracket", "class0_prior",
        "min_errors",  "max_frames",  "seed",         "threads"};
    for (const auto& item : j.items())
        if (known.find(item.key()) == known.end())
            fail("config: unknown key '" + item.key() + "'");

    ump::ExperimentConfig c;
    auto gens = [](const json& a, const char* what) {
        if (!a.is_array()) fail(std::string(what) + ": expected an array of octal strings");
        std::vector<unsigned> out;
        for (const auto& e : a) {
            std::string joined = e.get<std::string>();
            for (unsigned g : parse_octal_list(joined, what)) out.push_back(g);
        }
        if (out.empty()) fail(std::string(what) + ": empty generator list");
        return out;
    };
    if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("k0")) c.k0 = j.at("k0").get<std::size_t>();
    if (j.contains("k1")) c.k1 = j.at("k1").get<std::size_t>();
    if (j.contains("eps0")) c.eps0_target = j.at("eps0").get<double>();
    if (j.contains("eps1")) c.eps1_target = j.at("eps1").get<double>();
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("nu")) c.nu = j.at("nu").get<std::size_t>();
    if (j.contains("generators0")) c.generators0 = gens(j.at("generators0"), "generators0");
    if (j.contains("generators1")) c.generators1 = gens(j.at("generators1"), "generators1");
    if (j.contains("crc")) c.crc = ump::parse_crc_hex(j.at("crc").get<std::string>());
    if (j.contains("list_size")) c.list_size = j.at("list_size").get<std::size_t>();
    if (j.contains("zero_offsets")) c.zero_offsets = j.at("zero_offsets").get<bool>();
    if (j.contains("offset_search_tries"))
        c.offset_search_tries = j.at("offset_search_tries").get<std::size_t>();
    if (j.contains("snr_bracket")) {
        const json& b = j.at("snr_bracket");
        if (!b.is_array() || b.size() != 2) fail("config: snr_bracket must be [lo, hi]");
        c.snr_lo_db = b[0].get<double>();
        c.snr_hi_db = b[1].get<double>();
    }
    if (j.contains("class0_prior")) c.class0_prior = j.at("class0_prior").get<double>();
    if (j.contains("min_errors"))
        c.stop.min_errors_per_class = j.at("min_errors").get<std::uint64_t>();
    if (j.contains("max_frames")) c.stop.max_frames = j.at("max_frames").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
    return c;
}

json load_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail("cannot open config file: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        fail("config file " + path + ": " + e.what());
    }
    return j;
}

/// Experiment flags shared by intersect/simulate/min-snr/max-rate. Every
/// config-file field has a flag; explicitly passed flags win over the file.
struct CodeOptions {
    std::string config_path, family_s, mode_s, gens0_s, gens1_s, crc_s, rates_s, bracket_s;
    std::size_t n = 0, k0 = 0, k1 = 0, nu = 0, list_size = 0, offset_tries = 0, threads = 0;
    double eps0 = 0.0, eps1 = 0.0, prior = 0.0;
    std::uint64_t min_errors = 0, max_frames = 0, seed = 0;
    bool zero_offsets = false;

    CLI::Option *o_config{}, *o_family{}, *o_n{}, *o_k0{}, *o_k1{}, *o_rates{}, *o_eps0{},
        *o_eps1{}, *o_mode{}, *o_nu{}, *o_g0{}, *o_g1{}, *o_crc{}, *o_list{}, *o_zero{},
        *o_tries{}, *o_bracket{}, *o_prior{}, *o_min_errors{}, *o_max_frames{}, *o_seed{},
        *o_threads{};

    void attach(CLI::App& cmd) {
        o_config = cmd.add_option("--config", config_path,
                                  "JSON config file; explicit flags override its values");
        o_family = cmd.add_option("--family", family_s, "code family: ztcc | polar");
        o_n = cmd.add_option("--n", n, "blocklength");
        o_k0 = cmd.add_option("--k0", k0, "class-0 (critical) message bits");
        o_k1 = cmd.add_option("--k1", k1, "class-1 message bits");
        o_rates = cmd.add_option("--rates", rates_s,
                                 "rates r0:r1, converted to k_i = round(r_i * n)");
        o_rates->excludes(o_k0)->excludes(o_k1);
        o_eps0 = cmd.add_option("--eps0", eps0, "class-0 error target (must be < eps1)");
        o_eps1 = cmd.add_option("--eps1", eps1, "class-1 error target");
        o_mode = cmd.add_option("--mode", mode_s, "two-step test statistic: lrt | alrt");
        o_nu = cmd.add_option("--nu", nu, "convolutional memory (ztcc)");
        o_g0 = cmd.add_option("--generators0", gens0_s,
                              "class-0 generator polynomials, octal, comma-separated");
        o_g1 = cmd.add_option("--generators1", gens1_s,
                              "class-1 generator polynomials, octal, comma-separated");
        o_crc = cmd.add_option("--crc", crc_s, "checksum polynomial, hex (polar)");
        o_list = cmd.add_option("--list-size", list_size, "list decoder size (polar)");
        o_zero = cmd.add_flag("--zero-offsets", zero_offsets,
                              "use all-zero coset offsets (codebooks overlap)");
        o_tries = cmd.add_option("--offset-tries", offset_tries,
                                 "random draws in the disjoint-offset search");
        o_bracket = cmd.add_option("--bracket", bracket_s, "SNR search bracket lo:hi, dB");
        o_prior = cmd.add_option("--prior", prior,
                                 "class-0 prior; 0.5 gives strict class alternation");
        o_min_errors = cmd.add_option("--min-errors", min_errors,
                                      "per-class error quota before a point may stop");
        o_max_frames = cmd.add_option("--max-frames", max_frames, "frame cap per point");
        o_seed = cmd.add_option("--seed", seed, "simulation seed");
        o_threads = cmd.add_option("--threads", threads, "worker threads per point");
    }

    ump::ExperimentConfig resolve() const {
        ump::ExperimentConfig c;
        if (o_config->count()) c = config_from_json(load_json_file(config_path));
        if (o_family->count()) c.family = parse_family(family_s);
        if (o_n->count()) c.n = n;
        if (o_k0->count()) c.k0 = k0;
        if (o_k1->count()) c.k1 = k1;
        if (o_rates->count()) {
            const auto [a, b] = split_colon(rates_s, "--rates");
            const double r0 = parse_double(a, "--rates");
            const double r1 = parse_double(b, "--rates");
            if (!(r0 > 0.0 && r0 < 1.0 && r1 > 0.0 && r1 < 1.0))
                fail("--rates: rates must be in (0, 1)");
            c.k0 = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(r0 * static_cast<double>(c.n))));
            c.k1 = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(r1 * static_cast<double>(c.n))));
        }
        if (o_eps0->count()) c.eps0_target = eps0;
        if (o_eps1->count()) c.eps1_target = eps1;
        if (o_mode->count()) c.mode = parse_mode(mode_s);
        if (o_nu->count()) c.nu = nu;
        if (o_g0->count()) c.generators0 = parse_octal_list(gens0_s, "--generators0");
        if (o_g1->count()) c.generators1 = parse_octal_list(gens1_s, "--generators1");
        if (o_crc->count()) c.crc = ump::parse_crc_hex(crc_s);
        if (o_list->count()) c.list_size = list_size;
        if (o_zero->count()) c.zero_offsets = zero_offsets;
        if (o_tries->count()) c.offset_search_tries = offset_tries;
        if (o_bracket->count()) {
            const auto [a, b] = split_colon(bracket_s, "--bracket");
            c.snr_lo_db = parse_double(a, "--bracket");
            c.snr_hi_db = parse_double(b, "--bracket");
        }
        if (o_prior->count()) c.class0_prior = prior;
        if (o_min_errors->count()) c.stop.min_errors_per_class = min_errors;
        if (o_max_frames->count()) c.stop.max_frames = max_frames;
        if (o_seed->count()) c.seed = seed;
        if (o_threads->count()) c.threads = threads;
        return c;
    }
};

/// Write content to --out (or stdout when no path). Files are the machine
/// output; a caller printing progress should do so only when a path is set.
void deliver(const std::string& out_path, const std::string& content, const char* kind) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(out_path);
    os << content;
    if (!os) fail(std::string("failed to write ") + out_path);
    std::cout << kind << " written to " << out_path << "\n";
}

std::string csv_document(const ump::ExperimentConfig& cfg, const std::vector<std::string>& notes,
                         const std::vector<ump::SweepPoint>& rows) {
    std::ostringstream os;
    os << "# config = " << config_to_json(cfg).dump() << "\n";
    for (const std::string& s : notes) os << "# " << s << "\n";
    ump::write_csv_header(os);
    for (const ump::SweepPoint& p : rows) ump::write_csv_row(os, cfg, p);
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// --- na: finite-blocklength benchmark for the class targets -------------

void run_na(std::size_t n, const std::vector<std::string>& class_specs,
            const std::string& out) {
    if (n < 2) fail("na: --n must be >= 2");
    std::vector<ump::NaClass> classes;
    for (const std::string& s : class_specs) {
        const auto [ks, es] = split_colon(s, "--class");
        classes.push_back({parse_double(ks, "--class"), parse_double(es, "--class")});
    }

    ump::NaMinSnrResult res;
    if (classes.size() == 1) {
        res.esn0_star_db =
            ump::na_required_snr_db(n, classes[0].k, classes[0].eps, 1.0);
        res.lambdas = {1.0};
    } else {
        res = ump::na_min_snr(n, classes);
    }
    const double esn0 = std::pow(10.0, res.esn0_star_db / 10.0);

    json report;
    report["config"]["n"] = n;
    report["config"]["classes"] = json::array();
    for (const auto& c : classes)
        report["config"]["classes"].push_back({{"k", c.k}, {"eps", c.eps}});
    report["esn0_star_db"] = res.esn0_star_db;
    report["capacity_bits_per_use"] = ump::biawgn_capacity(esn0);
    report["dispersion_bits2_per_use"] = ump::biawgn_dispersion(esn0);
    report["lambda"] = res.lambdas;
    json per = json::array();
    for (std::size_t i = 0; i < classes.size(); ++i)
        per.push_back({{"k", classes[i].k},
                       {"eps", classes[i].eps},
                       {"lambda", res.lambdas[i]},
                       {"message_size_at_star",
                        ump::na_message_size(n, esn0, classes[i].eps, res.lambdas[i])}});
    report["classes"] = per;
    deliver(out, report.dump(2) + "\n", "report");
}

// --- intersect: disjointness certificate for a code pair ----------------

void run_intersect(const CodeOptions& code, const CLI::Option* o_v0, const CLI::Option* o_v1,
                   const std::string& v0_hex, const std::string& v1_hex,
                   const std::string& out) {
    const ump::ExperimentConfig cfg = code.resolve();
    auto [base0, base1] = ump::make_base_codes(cfg);

    ump::BitVector v0(cfg.n), v1(cfg.n);
    std::string source = "zero";
    json offsets;
    if (o_v0->count() || o_v1->count()) {
        if (!(o_v0->count() && o_v1->count()))
            fail("intersect: --v0 and --v1 must be given together");
        v0 = offset_from_hex(v0_hex, cfg.n, "--v0");
        v1 = offset_from_hex(v1_hex, cfg.n, "--v1");
        source = "given";
    } else if (!cfg.zero_offsets) {
        ump::RngStream rng(cfg.seed, ump::kOffsetSearchStream);
        const ump::OffsetSearchResult sr =
            ump::search_disjoint_offsets(base0, base1, rng, cfg.offset_search_tries);
        offsets["search_tries"] = sr.tries;
        offsets["search_found"] = sr.found;
        if (sr.found) {
            v0 = sr.v0;
            v1 = sr.v1;
        }
        source = "searched";
    }
    offsets["source"] = source;
    offsets["v0"] = offset_to_hex(v0);
    offsets["v1"] = offset_to_hex(v1);

    const ump::UmpCode pair =
        ump::make_ump_code(ump::with_offset(std::move(base0), v0),
                           ump::with_offset(std::move(base1), v1), 0.0, ump::TestMode::alrt);
    const ump::CosetIntersection& cert = pair.certificate;

    std::string verdict = cert.empty ? "empty" : "nonempty, dim " + std::to_string(cert.dim);
    std::cout << "intersection: " << verdict << "\n";

    json report;
    report["config"] = config_to_json(cfg);
    report["offsets"] = offsets;
    report["disjoint"] = cert.empty;
    report["verdict"] = verdict;
    if (!cert.empty) {
        report["dimension"] = cert.dim;
        report["intersection_size"] = ump::intersection_size(cert);
        report["error_floor_class0"] = ump::error_floor_prediction(
            ump::intersection_size(cert), std::uint64_t{1} << cfg.k0);
    }
    deliver(out, report.dump(2) + "\n", "report");
}

// --- simulate: operating points on an SNR list --------------------------

void run_simulate(const CodeOptions& code, const std::vector<double>& esn0_list,
                  const CLI::Option* o_logt, double log_threshold, const CLI::Option* o_t,
                  double threshold, bool optimize, const std::string& out) {
    const ump::ExperimentConfig cfg = code.resolve();
    ump::validate_config(cfg);

    std::vector<std::string> notes;
    std::vector<ump::SweepPoint> rows;
    for (const double esn0 : esn0_list) {
        if (optimize) {
            const ump::ThresholdResult r = ump::optimize_threshold(cfg, esn0);
            rows.push_back({esn0, r.log_threshold, r.class0, r.class1});
            notes.push_back("esn0_db=" + fmt(esn0) + " optimized log_threshold=" +
                            fmt(r.log_threshold) + " satisfied=" +
                            (r.satisfied ? "true" : "false"));
        } else {
            double log_t = ump::operational_log_threshold(1.0, cfg.k0, cfg.k1);
            if (o_t->count()) log_t = ump::operational_log_threshold(threshold, cfg.k0, cfg.k1);
            if (o_logt->count()) log_t = log_threshold;
            const ump::RateEstimates r = ump::estimate_rates(cfg, esn0, log_t);
            rows.push_back({esn0, log_t, r.class0, r.class1});
        }
    }
    if (!out.empty())
        for (const std::string& s : notes) std::cout << s << "\n";
    deliver(out, csv_document(cfg, notes, rows), "csv");
}

// --- min-snr: smallest SNR certifying both targets ----------------------

void run_min_snr(const CodeOptions& code, const std::string& out) {
    const ump::ExperimentConfig cfg = code.resolve();
    ump::validate_config(cfg);

    const ump::MinSnrResult res = ump::find_min_snr(cfg);

    std::vector<std::string> notes;
    notes.push_back(std::string("found=") + (res.found ? "true" : "false"));
    if (res.found) {
        notes.push_back("esn0_star_db=" + fmt(res.esn0_star_db));
        notes.push_back("log_threshold_star=" + fmt(res.at_star.log_threshold));
        if (res.bracket_low_feasible)
            notes.push_back("bracket_low_feasible=true (tighten the bracket to go lower)");
    } else {
        notes.push_back("diagnostic=bracket top " + fmt(cfg.snr_hi_db) +
                        " dB does not certify the targets; raise the bracket, the frame "
                        "cap, or the targets");
    }
    try {
        const ump::NaMinSnrResult na = ump::na_min_snr(
            cfg.n, {{static_cast<double>(cfg.k0), cfg.eps0_target},
                    {static_cast<double>(cfg.k1), cfg.eps1_target}});
        notes.push_back("na_esn0_star_db=" + fmt(na.esn0_star_db));
    } catch (const std::exception&) {
        // benchmark undefined for these targets; omit the reference line
    }

    std::vector<ump::SweepPoint> rows;
    for (const auto& [snr, tr] : res.evaluations)
        rows.push_back({snr, tr.log_threshold, tr.class0, tr.class1});

    if (!out.empty())
        for (const std::string& s : notes) std::cout << s << "\n";
    deliver(out, csv_document(cfg, notes, rows), "csv");
}

// --- max-rate: largest message sizes at a fixed SNR ---------------------

void run_max_rate(const CodeOptions& code, double esn0_db, const std::string& out) {
    const ump::ExperimentConfig cfg = code.resolve();
    ump::validate_config(cfg);

    const ump::MaxRatesResult res = ump::find_max_rates(cfg, esn0_db);

    ump::ExperimentConfig echo = cfg;
    std::vector<std::string> notes;
    notes.push_back("esn0_db=" + fmt(esn0_db));
    notes.push_back(std::string("feasible=") + (res.feasible ? "true" : "false"));
    if (res.feasible) {
        echo.k0 = res.k0;
        echo.k1 = res.k1;
        notes.push_back("k0_star=" + std::to_string(res.k0));
        notes.push_back("k1_star=" + std::to_string(res.k1));
        notes.push_back("r0_star=" + fmt(res.r0));
        notes.push_back("r1_star=" + fmt(res.r1));
        notes.push_back("log_threshold_star=" + fmt(res.at_optimum.log_threshold));
    } else {
        notes.push_back(
            "diagnostic=no feasible rate pair in the search range; raise the SNR, the "
            "frame cap, or the targets");
    }
    for (const auto& [a, b, ok] : res.trace)
        notes.push_back("probe k0=" + std::to_string(a) + " k1=" + std::to_string(b) +
                        " satisfied=" + (ok ? "true" : "false"));

    if (!out.empty())
        for (const std::string& s : notes) std::cout << s << "\n";
    deliver(out, csv_document(echo, notes, res.at_optimum.sweep), "csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coset-coded unequal message protection: finite-blocklength benchmark "
                 "and Monte Carlo experiment protocols"};
    app.require_subcommand(1);

    // na
    auto* na = app.add_subcommand(
        "na", "normal-approximation benchmark: minimum SNR and weights for class targets");
    std::size_t na_n = 0;
    std::vector<std::string> na_classes;
    std::string na_out;
    na->add_option("--n", na_n, "blocklength")->required();
    na->add_option("--class", na_classes, "class target k:eps (repeat per class)")
        ->required();
    na->add_option("--out", na_out, "write the JSON report here (default: stdout)");
    na->callback([&]() { run_na(na_n, na_classes, na_out); });

    // intersect
    auto* intersect = app.add_subcommand(
        "intersect", "certify whether the two class codebooks share any codeword");
    CodeOptions ic;
    ic.attach(*intersect);
    std::string iv0, iv1, iout;
    CLI::Option* o_iv0 = intersect->add_option("--v0", iv0, "class-0 offset, hex");
    CLI::Option* o_iv1 = intersect->add_option("--v1", iv1, "class-1 offset, hex");
    intersect->add_option("--out", iout, "write the JSON report here");
    intersect->callback([&]() { run_intersect(ic, o_iv0, o_iv1, iv0, iv1, iout); });

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo error rates of both classes on a list of SNR points");
    CodeOptions sc;
    sc.attach(*simulate);
    std::vector<double> s_esn0;
    double s_logt = 0.0, s_t = 0.0;
    bool s_optimize = false;
    std::string s_out;
    simulate->add_option("--esn0-db", s_esn0, "Es/N0 points in dB, comma-separated")
        ->required()
        ->delimiter(',');
    CLI::Option* o_s_logt = simulate->add_option(
        "--log-threshold", s_logt, "decision threshold on the statistic (natural log)");
    CLI::Option* o_s_t = simulate->add_option(
        "--threshold", s_t, "likelihood-ratio threshold T > 0; mapped to the statistic "
                            "scale with the size correction (k0 - k1) ln 2");
    CLI::Option* o_s_opt = simulate->add_flag("--optimize", s_optimize,
                                              "pick the best threshold per SNR point");
    o_s_t->excludes(o_s_logt);
    o_s_opt->excludes(o_s_logt)->excludes(o_s_t);
    simulate->add_option("--out", s_out, "write the CSV here (default: stdout)");
    simulate->callback(
        [&]() { run_simulate(sc, s_esn0, o_s_logt, s_logt, o_s_t, s_t, s_optimize, s_out); });

    // min-snr
    auto* min_snr = app.add_subcommand(
        "min-snr", "bisect for the smallest SNR whose optimized threshold certifies "
                   "both class targets");
    CodeOptions mc;
    mc.attach(*min_snr);
    std::string m_out;
    min_snr->add_option("--out", m_out, "write the CSV here (default: stdout)");
    min_snr->callback([&]() { run_min_snr(mc, m_out); });

    // max-rate
    auto* max_rate = app.add_subcommand(
        "max-rate", "largest (k0, k1) meeting both targets at a fixed SNR");
    CodeOptions rc;
    rc.attach(*max_rate);
    double r_esn0 = 0.0;
    std::string r_out;
    max_rate->add_option("--esn0-db", r_esn0, "operating Es/N0 in dB")->required();
    max_rate->add_option("--out", r_out, "write the CSV here (default: stdout)");
    max_rate->callback([&]() { run_max_rate(rc, r_esn0, r_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
