// csbayes: conjugate Bayesian inference for compound-symmetric Gaussian
// models. Subcommands: fit, sample, evidence, test-ri, em.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csb/conjugate.hpp"
#include "csb/intercept_test.hpp"
#include "csb/io.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "csbayes 0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::vector<double> parse_vector(const std::string& csv, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": cannot parse '" + tok + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

std::pair<double, double> parse_pair(const std::string& csv, const char* flag) {
    const auto v = parse_vector(csv, flag);
    if (v.size() != 2) throw UsageError(std::string(flag) + ": expected two values");
    return {v[0], v[1]};
}

std::pair<int, int> parse_drop(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw UsageError("--drop: expected group:position, got '" + s + "'");
    try {
        return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw UsageError("--drop: cannot parse '" + s + "'");
    }
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw csb::data_error("cannot open output file '" + out_path + "'");
    out << report.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw csb::data_error("cannot open output file '" + out_path + "'");
    out << text;
}

json provenance(std::uint64_t seed) {
    return json{{"artifact", kVersion}, {"seed", seed}, {"timestamp", iso_timestamp()}};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json pair_json(const csb::CsPair& p, const char* first, const char* second) {
    return json{{"d", p.d}, {first, p.a1}, {second, p.a2}};
}

// ---------------------------------------------------------------------------

struct CommonPriorFlags {
    std::string family = "eta";
    std::string alpha = "1,1";
    std::string lambda = "1,1";
    std::string beta = "1,0";
    double m_h = 1.0;
    double m_sigma = 1.0;
    double m_mu = 1.0;
    std::string nu; // comma list, defaults to zeros
    std::string known_mean;
    int d = 0;
};

void add_prior_flags(CLI::App* cmd, CommonPriorFlags& f) {
    cmd->add_option("--family", f.family, "prior family: eta, sigma, mean-eta, mean-sigma")
        ->check(CLI::IsMember({"eta", "sigma", "mean-eta", "mean-sigma"}));
    cmd->add_option("--alpha", f.alpha, "gamma shapes a1,a2 (eta/sigma families)");
    cmd->add_option("--lambda", f.lambda, "rates l1,l2 (eta/sigma/mean-sigma families)");
    cmd->add_option("--beta", f.beta, "rate-cone pair b1,b2 (mean-eta family)");
    cmd->add_option("--m-h", f.m_h, "prior strength for the half-precision (mean-eta)");
    cmd->add_option("--m-sigma", f.m_sigma, "prior strength for the covariance (mean-sigma)");
    cmd->add_option("--m-mu", f.m_mu, "prior strength for the mean (mean-* families)");
    cmd->add_option("--nu", f.nu, "prior mean vector v1,v2,... (defaults to zeros)");
    cmd->add_option("--known-mean", f.known_mean,
                    "known mean vector v1,v2,... (selects the known-mean families)");
}

std::vector<double> nu_or_zeros(const CommonPriorFlags& f, int d) {
    if (f.nu.empty()) return std::vector<double>(static_cast<std::size_t>(d), 0.0);
    auto v = parse_vector(f.nu, "--nu");
    if (static_cast<int>(v.size()) != d)
        throw UsageError("--nu: expected " + std::to_string(d) + " entries");
    return v;
}

json run_fit(const std::string& input, const CommonPriorFlags& f, const std::string& out) {
    const csb::Matrix data = csb::ingest_matrix_csv(input);
    const int d = static_cast<int>(data.cols);
    json results;
    if (f.family == "eta" || f.family == "sigma") {
        if (f.known_mean.empty())
            throw UsageError("--family " + f.family + " requires --known-mean");
        const auto mu = parse_vector(f.known_mean, "--known-mean");
        if (static_cast<int>(mu.size()) != d)
            throw UsageError("--known-mean: expected " + std::to_string(d) + " entries");
        const auto s = csb::suff_stats_known_mean(data, mu);
        const auto [a1, a2] = parse_pair(f.alpha, "--alpha");
        const auto [l1, l2] = parse_pair(f.lambda, "--lambda");
        if (f.family == "eta") {
            const csb::PrecisionPrior post =
                update_precision_prior({d, a1, a2, l1, l2}, s);
            results = {{"family", "eta"},
                       {"d", d},
                       {"n", s.n},
                       {"alpha1", post.alpha1},
                       {"alpha2", post.alpha2},
                       {"lambda1", post.lambda1},
                       {"lambda2", post.lambda2}};
        } else {
            const csb::VariancePrior post = update_variance_prior({d, a1, a2, l1, l2}, s);
            results = {{"family", "sigma"},
                       {"d", d},
                       {"n", s.n},
                       {"alpha1", post.alpha1},
                       {"alpha2", post.alpha2},
                       {"lambda1", post.lambda1},
                       {"lambda2", post.lambda2}};
        }
    } else {
        const auto s = csb::suff_stats_unknown_mean(data);
        const auto nu = nu_or_zeros(f, d);
        if (f.family == "mean-eta") {
            const auto [b1, b2] = parse_pair(f.beta, "--beta");
            const csb::MeanPrecisionPrior post =
                update_mean_precision_prior({d, f.m_h, b1, b2, f.m_mu, nu}, s);
            results = {{"family", "mean-eta"}, {"d", d},         {"n", s.n},
                       {"m_h", post.m_h},      {"beta1", post.beta1},
                       {"beta2", post.beta2},  {"m_mu", post.m_mu},
                       {"nu", post.nu}};
        } else {
            const auto [l1, l2] = parse_pair(f.lambda, "--lambda");
            const csb::MeanVariancePrior post =
                update_mean_variance_prior({d, f.m_sigma, l1, l2, f.m_mu, nu}, s);
            results = {{"family", "mean-sigma"},  {"d", d},
                       {"n", s.n},                {"m_sigma", post.m_sigma},
                       {"lambda1", post.lambda1}, {"lambda2", post.lambda2},
                       {"m_mu", post.m_mu},       {"nu", post.nu}};
        }
    }
    json report{{"command", "fit"},
                {"config",
                 {{"input", input},
                  {"family", f.family},
                  {"known_mean", f.known_mean}}},
                {"results", results},
                {"provenance", provenance(0)}};
    emit(report, out);
    return report;
}

json run_evidence(const std::string& input, const CommonPriorFlags& f,
                  const std::string& out) {
    const csb::Matrix data = csb::ingest_matrix_csv(input);
    const int d = static_cast<int>(data.cols);
    if (f.known_mean.empty()) throw UsageError("evidence requires --known-mean");
    const auto mu = parse_vector(f.known_mean, "--known-mean");
    if (static_cast<int>(mu.size()) != d)
        throw UsageError("--known-mean: expected " + std::to_string(d) + " entries");
    const auto [a1, a2] = parse_pair(f.alpha, "--alpha");
    const auto [l1, l2] = parse_pair(f.lambda, "--lambda");
    const csb::PrecisionPrior prior{d, a1, a2, l1, l2};
    const auto s = csb::suff_stats_known_mean(data, mu);
    const double le = log_evidence_known_mean(prior, s);
    json report{{"command", "evidence"},
                {"config",
                 {{"input", input},
                  {"alpha", f.alpha},
                  {"lambda", f.lambda},
                  {"known_mean", f.known_mean}}},
                {"results", {{"d", d}, {"n", s.n}, {"log_evidence", le}}},
                {"provenance", provenance(0)}};
    emit(report, out);
    return report;
}

void run_sample(const CommonPriorFlags& f, const std::string& input, long count,
                std::uint64_t seed, const std::string& out) {
    if (count < 1) throw UsageError("--count must be positive");
    csb::RngStream rng(seed);
    std::string text;
    const auto row_pair = [&](const csb::CsPair& p) {
        text += fmt(p.a1) + "," + fmt(p.a2) + "\n";
    };

    if (f.family == "eta" || f.family == "sigma") {
        int d = f.d;
        csb::SuffStatsKnownMean stats{};
        bool have_stats = false;
        if (!input.empty()) {
            const csb::Matrix data = csb::ingest_matrix_csv(input);
            d = static_cast<int>(data.cols);
            if (f.known_mean.empty())
                throw UsageError("posterior sampling requires --known-mean");
            const auto mu = parse_vector(f.known_mean, "--known-mean");
            if (static_cast<int>(mu.size()) != d)
                throw UsageError("--known-mean: expected " + std::to_string(d) + " entries");
            stats = csb::suff_stats_known_mean(data, mu);
            have_stats = true;
        }
        if (d < 2) throw UsageError("--d must be given (>= 2) when sampling a prior");
        const auto [a1, a2] = parse_pair(f.alpha, "--alpha");
        const auto [l1, l2] = parse_pair(f.lambda, "--lambda");
        if (f.family == "eta") {
            csb::PrecisionPrior p{d, a1, a2, l1, l2};
            if (have_stats) p = update_precision_prior(p, stats);
            text = "eta1,eta2\n";
            for (const auto& e : sample_eta(p, rng, count)) row_pair(e);
        } else {
            csb::VariancePrior p{d, a1, a2, l1, l2};
            if (have_stats) p = update_variance_prior(p, stats);
            text = "sigma1,sigma2\n";
            for (const auto& s : sample_sigma(p, rng, count)) row_pair(s);
        }
        emit_text(text, out);
        return;
    }

    // hierarchical families: draw (mu, pair) jointly
    int d = f.d;
    csb::SuffStatsUnknownMean stats{};
    bool have_stats = false;
    if (!input.empty()) {
        const csb::Matrix data = csb::ingest_matrix_csv(input);
        d = static_cast<int>(data.cols);
        stats = csb::suff_stats_unknown_mean(data);
        have_stats = true;
    }
    if (d < 2) throw UsageError("--d must be given (>= 2) when sampling a prior");
    const auto nu = nu_or_zeros(f, d);
    const auto header = [&](const char* a, const char* b) {
        std::string h;
        for (int i = 1; i <= d; ++i) h += "mu_" + std::to_string(i) + ",";
        h += std::string(a) + "," + b + "\n";
        return h;
    };
    if (f.family == "mean-eta") {
        const auto [b1, b2] = parse_pair(f.beta, "--beta");
        csb::MeanPrecisionPrior p{d, f.m_h, b1, b2, f.m_mu, nu};
        if (have_stats) p = update_mean_precision_prior(p, stats);
        const csb::PrecisionPrior marg =
            csb::precision_prior_from_mbeta({d, p.m_h, p.beta1, p.beta2});
        text = header("eta1", "eta2");
        for (long i = 0; i < count; ++i) {
            const csb::CsPair eta = sample_eta(marg, rng, 1).front();
            for (const double m : sample_mean_given_cov(p, eta, rng)) text += fmt(m) + ",";
            text += fmt(eta.a1) + "," + fmt(eta.a2) + "\n";
        }
    } else {
        const auto [l1, l2] = parse_pair(f.lambda, "--lambda");
        csb::MeanVariancePrior p{d, f.m_sigma, l1, l2, f.m_mu, nu};
        if (have_stats) p = update_mean_variance_prior(p, stats);
        const csb::VariancePrior marg{d, (p.m_sigma + 2.0) / 2.0,
                                      (p.m_sigma * (d - 1) + 2.0) / 2.0, p.lambda1,
                                      p.lambda2};
        text = header("sigma1", "sigma2");
        for (long i = 0; i < count; ++i) {
            const csb::CsPair sig = sample_sigma(marg, rng, 1).front();
            for (const double m : sample_mean_given_cov(p, sig, rng)) text += fmt(m) + ",";
            text += fmt(sig.a1) + "," + fmt(sig.a2) + "\n";
        }
    }
    emit_text(text, out);
}

json test_report_json(const csb::TestReport& r) {
    json j{{"p_h0", r.p_h0},
           {"method", r.method == csb::TestMethod::direct    ? "direct"
                      : r.method == csb::TestMethod::gibbs   ? "gibbs"
                                                             : "quadrature"},
           {"samples_used", r.samples_used},
           {"mc_standard_error", r.mc_standard_error},
           {"conclusion", r.reject_h0 ? "reject H0: positive within-class covariance"
                                      : "fail to reject H0"}};
    if (r.em_estimates) {
        j["em_estimates"] = {{"mu", r.em_estimates->mu},
                             {"sigma1", r.em_estimates->sigma.a1},
                             {"sigma2", r.em_estimates->sigma.a2}};
    }
    if (r.chain_diagnostics) {
        j["chain_diagnostics"] = {
            {"cone_violations", r.chain_diagnostics->cone_violations},
            {"indicator_autocorrelation_time", r.chain_diagnostics->indicator_act}};
    }
    return j;
}

json run_test_ri(const std::string& input, const csb::GibbsConfig& cfg,
                 const std::string& method, bool oracle,
                 const std::vector<std::pair<int, int>>& drops, const std::string& out) {
    csb::GroupedData data = csb::ingest_grouped_csv(input);
    if (!drops.empty()) data = csb::remove_entries(data, drops);

    std::optional<csb::TestMethod> override;
    if (method == "direct") override = csb::TestMethod::direct;
    if (method == "gibbs") override = csb::TestMethod::gibbs;
    if (method == "quadrature") override = csb::TestMethod::quadrature;

    const csb::TestReport r = test_positivity(data, cfg, override);
    json results = test_report_json(r);
    if (oracle) {
        if (!data.balanced())
            throw UsageError("--oracle requires balanced data (quadrature method)");
        results["quadrature_p_h0"] = csb::posterior_prob_h0_quadrature(data);
    }
    json report{
        {"command", "test-ri"},
        {"config",
         {{"input", input},
          {"burn_in", cfg.burn_in},
          {"samples", cfg.samples},
          {"seed", cfg.seed},
          {"init", cfg.init == csb::GibbsInit::em_map ? "em" : "prior"},
          {"method", method},
          {"groups", data.group_count()},
          {"observations", data.total_count()}}},
        {"results", results},
        {"provenance", provenance(cfg.seed)}};
    emit(report, out);
    return report;
}

json run_em(const std::string& input, double tol, long max_iter,
            const std::vector<std::pair<int, int>>& drops, const std::string& out) {
    csb::GroupedData data = csb::ingest_grouped_csv(input);
    if (!drops.empty()) data = csb::remove_entries(data, drops);
    const csb::EmResult r = csb::em_fit(data, tol, max_iter);
    json report{{"command", "em"},
                {"config", {{"input", input}, {"tol", tol}, {"max_iter", max_iter}}},
                {"results",
                 {{"mu", r.params.mu},
                  {"sigma1", r.params.sigma.a1},
                  {"sigma2", r.params.sigma.a2},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"cone_projections", r.cone_projections},
                  {"loglik_trajectory", r.loglik_trajectory}}},
                {"provenance", provenance(0)}};
    emit(report, out);
    return report;
}

// Replaces every "--args-file FILE" with the whitespace-separated tokens of FILE.
std::vector<std::string> expand_args(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--args-file") {
            if (i + 1 >= argc) throw UsageError("--args-file needs a path");
            std::ifstream in(argv[++i]);
            if (!in) throw csb::data_error(std::string("cannot open args file '") +
                                           argv[i] + "'");
            std::string tok;
            while (in >> tok) args.push_back(tok);
        } else {
            args.push_back(a);
        }
    }
    return args;
}

int fail(int code, const std::string& message) {
    const json err{{"error", {{"exit", code}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conjugate Bayesian inference for compound-symmetric Gaussian models"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output path (default: stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "posterior hyperparameters from data");
    std::string fit_input;
    CommonPriorFlags fit_flags;
    fit->add_option("input", fit_input, "matrix CSV, one observation per row")->required();
    add_prior_flags(fit, fit_flags);

    // sample
    auto* sample = app.add_subcommand("sample", "draw from a prior or posterior");
    CommonPriorFlags sample_flags;
    std::string sample_input;
    long sample_count = 1;
    std::uint64_t sample_seed = 0;
    add_prior_flags(sample, sample_flags);
    sample->add_option("--d", sample_flags.d, "dimension (prior sampling)");
    sample->add_option("--input", sample_input, "optional data to update the prior first");
    sample->add_option("--count", sample_count, "number of draws")->required();
    sample->add_option("--seed", sample_seed, "rng seed");

    // evidence
    auto* evidence = app.add_subcommand("evidence", "log evidence of the known-mean model");
    std::string ev_input;
    CommonPriorFlags ev_flags;
    evidence->add_option("input", ev_input, "matrix CSV")->required();
    add_prior_flags(evidence, ev_flags);

    // test-ri
    auto* testri = app.add_subcommand("test-ri", "positivity test for the within-class covariance");
    std::string ri_input, ri_method = "auto", ri_init = "em";
    std::vector<std::string> ri_drops;
    csb::GibbsConfig ri_cfg;
    bool ri_oracle = false;
    testri->add_option("input", ri_input, "grouped CSV with header group,value")->required();
    testri->add_option("--burn-in", ri_cfg.burn_in, "Gibbs burn-in iterations");
    testri->add_option("--samples", ri_cfg.samples, "posterior sample size");
    testri->add_option("--seed", ri_cfg.seed, "rng seed");
    testri->add_option("--init", ri_init, "gibbs initialization: em or prior")
        ->check(CLI::IsMember({"em", "prior"}));
    testri->add_option("--method", ri_method, "auto, direct, gibbs or quadrature")
        ->check(CLI::IsMember({"auto", "direct", "gibbs", "quadrature"}));
    testri->add_flag("--oracle", ri_oracle, "add the quadrature cross-check (balanced only)");
    testri->add_option("--drop", ri_drops,
                       "remove observation group:position (1-based, repeatable)");

    // em
    auto* em = app.add_subcommand("em", "EM fit of the marginal random-intercept model");
    std::string em_input;
    double em_tol = 1e-10;
    long em_max_iter = 1000;
    std::vector<std::string> em_drops;
    em->add_option("input", em_input, "grouped CSV with header group,value")->required();
    em->add_option("--tol", em_tol, "log-likelihood gain threshold");
    em->add_option("--max-iter", em_max_iter, "iteration cap");
    em->add_option("--drop", em_drops,
                   "remove observation group:position (1-based, repeatable)");

    try {
        const auto args = expand_args(argc, argv);
        std::vector<const char*> cargs{argv[0]};
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());

        if (fit->parsed()) {
            run_fit(fit_input, fit_flags, out_path);
        } else if (sample->parsed()) {
            run_sample(sample_flags, sample_input, sample_count, sample_seed, out_path);
        } else if (evidence->parsed()) {
            run_evidence(ev_input, ev_flags, out_path);
        } else if (testri->parsed()) {
            ri_cfg.init = ri_init == "em" ? csb::GibbsInit::em_map : csb::GibbsInit::prior_draw;
            std::vector<std::pair<int, int>> drops;
            for (const auto& s : ri_drops) drops.push_back(parse_drop(s));
            run_test_ri(ri_input, ri_cfg, ri_method, ri_oracle, drops, out_path);
        } else if (em->parsed()) {
            std::vector<std::pair<int, int>> drops;
            for (const auto& s : em_drops) drops.push_back(parse_drop(s));
            run_em(em_input, em_tol, em_max_iter, drops, out_path);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(kExitUsage, e.what());
    } catch (const UsageError& e) {
        return fail(kExitUsage, e.what());
    } catch (const csb::data_error& e) {
        return fail(kExitData, e.what());
    } catch (const csb::numeric_error& e) {
        return fail(kExitNumeric, e.what());
    } catch (const csb::dimension_error& e) {
        return fail(kExitUsage, e.what());
    } catch (const csb::domain_error& e) {
        return fail(kExitUsage, e.what());
    } catch (const std::exception& e) {
        return fail(kExitNumeric, e.what());
    }
}
