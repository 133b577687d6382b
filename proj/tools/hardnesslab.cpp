// hardnesslab: config-driven experiment runner. Every subcommand writes a
// result table (CSV with a header row and/or a JSON mirror of the same rows)
// plus a run-manifest recording the full configuration, the resolved seed,
// and library versions, so any output file can be regenerated exactly.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlab/constrained_pca.hpp"
#include "hlab/detection.hpp"
#include "hlab/ensembles.hpp"
#include "hlab/hermite.hpp"
#include "hlab/lowdeg.hpp"
#include "hlab/quiet_planting.hpp"
#include "hlab/spike_priors.hpp"
#include "hlab/wishart.hpp"

using json = nlohmann::json;
using namespace hlab;

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(long x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(std::uint64_t x) { return std::to_string(x); }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' line endings on every platform
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
    for (const auto& row : t.rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
}

void write_json_mirror(const Table& t, const std::string& path) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = row[c];
        arr.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << arr.dump(2) << "\n";
}

struct RunContext {
    std::string command;
    std::string out_prefix;
    std::string format = "both";  // csv | json | both
    std::uint64_t seed = 1;
    int threads = 1;
    std::map<std::string, std::string> config;  // every resolved parameter

    std::vector<std::string> emit(const Table& t) const {
        std::vector<std::string> files;
        if (format == "csv" || format == "both") {
            write_csv(t, out_prefix + ".csv");
            files.push_back(out_prefix + ".csv");
        }
        if (format == "json" || format == "both") {
            write_json_mirror(t, out_prefix + ".json");
            files.push_back(out_prefix + ".json");
        }
        json manifest;
        manifest["command"] = command;
        manifest["config"] = config;
        manifest["seed"] = seed;
        manifest["threads"] = threads;
        manifest["outputs"] = files;
        manifest["versions"] = {
            {"hardnesslab", kToolVersion},
            {"compiler", __VERSION__},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"cli11", CLI11_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        };
        std::ofstream out(out_prefix + ".manifest.json", std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open output file: " + out_prefix + ".manifest.json");
        out << manifest.dump(2) << "\n";
        return files;
    }
};

std::uint64_t default_seed() {
    const char* env = std::getenv("HARDNESSLAB_SEED");
    if (env == nullptr) return 1;
    return std::strtoull(env, nullptr, 10);
}

SpikePrior make_prior(const std::string& name, std::optional<double> trunc) {
    SpikePrior prior{base_dist_from_string(name), trunc};
    prior.validate();
    return prior;
}

// attaches the options shared by every subcommand
void add_common(CLI::App* sub, RunContext& ctx) {
    ctx.seed = default_seed();
    ctx.out_prefix = sub->get_name();
    sub->add_option("--seed", ctx.seed,
                    "RNG seed (default: HARDNESSLAB_SEED environment variable, else 1)")
        ->capture_default_str();
    sub->add_option("--out", ctx.out_prefix, "output path prefix")->capture_default_str();
    sub->add_option("--format", ctx.format, "result table format: csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    sub->add_option("--threads", ctx.threads,
                    "cap on worker threads; results are independent of thread count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--config", "key=value config file; command-line flags override it");
}

// Expands `--config file` into `--key=value` arguments placed right after the
// subcommand name, skipping keys the command line already sets, so explicit
// flags always win. Plain text: one key=value per line, '#' comments.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    std::string path;
    std::size_t subcommand_pos = 0;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (subcommand_pos == 0 && args[i][0] != '-') subcommand_pos = i;
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || subcommand_pos == 0) return args;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config file line is not key=value: " + line);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        bool overridden = false;
        for (std::size_t i = subcommand_pos + 1; i < args.size(); ++i)
            if (args[i] == "--" + key || args[i].rfind("--" + key + "=", 0) == 0)
                overridden = true;
        if (!overridden) injected.push_back("--" + key + "=" + value);
    }
    std::vector<std::string> out(args.begin(), args.begin() + subcommand_pos + 1);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + subcommand_pos + 1, args.end());
    return out;
}

// --- subcommand bodies; each returns the process exit code -------------------

int run_goe_spectrum(RunContext& ctx, int n, int instances) {
    Table t{{"instance", "n", "lambda_min", "lambda_max", "semicircle_ks", "seed"}, {}};
    Rng base(Seed{ctx.seed});
    for (int i = 0; i < instances; ++i) {
        Rng rng = base.substream("goe-spectrum", static_cast<std::uint64_t>(i));
        Vector lam = symmetric_eigenvalues(sample_goe(n, rng));
        std::vector<double> sorted(lam.data(), lam.data() + n);
        double ks = 0.0;
        for (int j = 0; j < n; ++j) {
            double f = semicircle_cdf(sorted[j]);
            ks = std::max(ks, std::abs(f - static_cast<double>(j) / n));
            ks = std::max(ks, std::abs(f - static_cast<double>(j + 1) / n));
        }
        t.add_row({fmt(i), fmt(n), fmt(lam(0)), fmt(lam(n - 1)), fmt(ks), fmt(ctx.seed)});
    }
    ctx.emit(t);
    return 0;
}

int run_sk_baselines(RunContext& ctx, int n, int instances) {
    Table t{{"instance", "n", "bruteforce_optimum", "spectral_certificate", "rounding_value",
             "seed"},
            {}};
    Rng base(Seed{ctx.seed});
    for (int i = 0; i < instances; ++i) {
        Rng rng = base.substream("sk-survey", static_cast<std::uint64_t>(i));
        Matrix w = sample_goe(n, rng);
        double optimum = sk_bruteforce(w).first;
        double cert = spectral_certificate(w).bound;
        double rounded = spectral_rounding(w).second;
        t.add_row({fmt(i), fmt(n), fmt(optimum), fmt(cert), fmt(rounded), fmt(ctx.seed)});
    }
    ctx.emit(t);
    return 0;
}

int run_wishart_detect(RunContext& ctx, const WishartParams& params, long trials) {
    DetectionReport rep =
        run_detection_experiment(params, spectral_detect, "spectral", trials, Seed{ctx.seed});
    Table t{{"n", "N", "gamma", "beta", "prior", "detector", "trials", "type1", "type2",
             "total_error", "seed"},
            {}};
    t.add_row({fmt(params.n), fmt(params.sample_count()), fmt(params.gamma), fmt(params.beta),
               to_string(params.prior.base), rep.detector_name, fmt(rep.trials), fmt(rep.type1),
               fmt(rep.type2), fmt(rep.total_error()), fmt(ctx.seed)});
    ctx.emit(t);
    return 0;
}

int run_quiet_plant(RunContext& ctx, double epsilon, int n, int trials) {
    PlantParams pp = choose_parameters(epsilon);
    WishartParams params{n, pp.gamma, pp.beta, SpikePrior{BaseDist::Rademacher, std::nullopt}};
    params.validate();
    Table t{{"trial", "kind", "n", "N", "gamma", "beta", "epsilon", "lambda_max",
             "planted_value", "spike_mass_V", "seed"},
            {}};
    Rng base(Seed{ctx.seed});
    for (int i = 0; i < trials; ++i) {
        Seed draw{base.substream("quiet-null", static_cast<std::uint64_t>(i)).next_u64()};
        Seed plant{base.substream("quiet-null-plant", static_cast<std::uint64_t>(i)).next_u64()};
        QuietPlantFrame frame(sample_null(params, draw), plant);
        t.add_row({fmt(i), "null", fmt(n), fmt(params.sample_count()), fmt(pp.gamma),
                   fmt(pp.beta), fmt(epsilon), fmt(frame.lambda_max()), "", "", fmt(ctx.seed)});
    }
    for (int i = 0; i < trials; ++i) {
        Seed draw{base.substream("quiet-planted", static_cast<std::uint64_t>(i)).next_u64()};
        Seed plant{base.substream("quiet-planted-plant", static_cast<std::uint64_t>(i)).next_u64()};
        SampleSet s = sample_planted(params, draw);
        QuietPlantFrame frame(s, plant);
        const Vector& x = *s.spike;
        t.add_row({fmt(i), "planted", fmt(n), fmt(params.sample_count()), fmt(pp.gamma),
                   fmt(pp.beta), fmt(epsilon), fmt(frame.lambda_max()),
                   fmt(frame.quadratic_form(x)), fmt(frame.projection_norm_sq(x)),
                   fmt(ctx.seed)});
    }
    ctx.emit(t);
    return 0;
}

int run_lowdeg_scan(RunContext& ctx, double gamma, const std::vector<double>& betas, int degree,
                    const std::vector<int>& ns, const std::string& prior_name) {
    SpikePrior prior = make_prior(prior_name, std::nullopt);
    std::vector<ScanRow> rows = threshold_scan(gamma, betas, degree, ns, prior);
    Table t{{"n", "N", "gamma", "beta", "D", "method", "lr_norm_sq", "stderr", "seed"}, {}};
    for (const ScanRow& r : rows)
        t.add_row({fmt(r.n), fmt(r.N), fmt(r.gamma), fmt(r.beta), fmt(r.D), r.method,
                   fmt(r.lr_norm_sq), fmt(r.stderr_), fmt(ctx.seed)});
    ctx.emit(t);
    return 0;
}

int run_hermite_check(RunContext& ctx, int kmax, long mc_samples) {
    Table t{{"check", "k", "v", "residual", "tolerance", "status"}, {}};
    bool all_ok = true;
    auto record = [&](const std::string& check, int k, const std::string& v, double residual,
                      double tol) {
        bool ok = residual <= tol;
        all_ok = all_ok && ok;
        t.add_row({check, fmt(k), v, fmt(residual), fmt(tol), ok ? "pass" : "fail"});
    };

    std::vector<std::pair<Rational, std::string>> variances = {
        {Rational(1), "1"}, {Rational(-1), "-1"}, {Rational(1, 2), "1/2"}, {Rational(-3, 2), "-3/2"}};
    for (const auto& [v, vname] : variances) {
        std::vector<HermitePoly> fam;
        for (int k = 0; k <= kmax; ++k) fam.push_back(hermite_coeffs(k, v));
        for (int k = 0; k <= kmax; ++k) {
            HermitePoly alt = hermite_coeffs_derivative_recursion(k, v);
            record("alternate-recursion", k, vname, alt.coeffs == fam[k].coeffs ? 0.0 : 1.0, 0.0);
            if (k >= 1) {
                std::vector<Rational> der = polynomial_derivative(fam[k].coeffs);
                std::vector<Rational> want(fam[k - 1].coeffs);
                for (Rational& c : want) c *= k;
                want.resize(std::max(want.size(), der.size()), Rational(0));
                der.resize(want.size(), Rational(0));
                record("differentiation", k, vname, der == want ? 0.0 : 1.0, 0.0);
            }
        }
    }

    std::vector<double> grid;
    for (double x = -3.0; x <= 3.0 + 1e-12; x += 0.25) grid.push_back(x);
    for (int k = 1; k <= std::min(kmax, 10); ++k) {
        record("rodrigues", k, "1", check_rodrigues(k, Rational(1), grid), 1e-8);
        record("rodrigues", k, "-1/2", check_rodrigues(k, Rational(-1, 2), grid), 1e-8);
    }

    for (int k = 0; k <= std::min(kmax, 8); ++k) {
        std::vector<Rational> f = {Rational(1, 3), Rational(-2), Rational(0), Rational(5, 7),
                                   Rational(0),    Rational(0),  Rational(0), Rational(0),
                                   Rational(1, 9)};
        Rational gap = check_integration_by_parts(k, f);
        record("integration-by-parts", k, "1", gap == 0 ? 0.0 : 1.0, 0.0);
    }

    // closed-form mismatched-variance expectation against Monte Carlo, 3 SE
    Rng rng(Seed{ctx.seed});
    for (double sigma2 : {0.5, 2.0}) {
        std::vector<double> g(mc_samples);
        for (long i = 0; i < mc_samples; ++i) g[i] = rng.gaussian(0.0, std::sqrt(sigma2));
        for (const auto& [v, vname] : variances) {
            double vd = v.convert_to<double>();
            for (int k = 1; k <= std::min(kmax, 8); ++k) {
                HermitePoly h = hermite_coeffs(k, v);
                double mean = 0.0, sq = 0.0;
                for (long i = 0; i < mc_samples; ++i) {
                    double val = h.evaluate(g[i]);
                    mean += val;
                    sq += val * val;
                }
                mean /= mc_samples;
                sq /= mc_samples;
                double se = std::sqrt(std::max(sq - mean * mean, 1e-300) / mc_samples);
                double diff = std::abs(mean - mismatched_expectation(k, vd, sigma2));
                record("mismatched-expectation-mc", k, vname, diff, 3.0 * se);
            }
        }
    }

    ctx.emit(t);
    return all_ok ? 0 : 1;
}

int run_chernoff_fit(RunContext& ctx, const std::string& prior_name, std::optional<double> trunc,
                     int n, long trials) {
    SpikePrior prior = make_prior(prior_name, trunc);
    ChernoffFit fit = fit_local_chernoff(prior, n, trials, Seed{ctx.seed});
    Table t{{"n", "prior", "trials", "fitted", "eta", "delta", "c", "t", "tail_prob", "seed"}, {}};
    for (const auto& [tt, prob] : fit.tail)
        t.add_row({fmt(n), to_string(prior.base), fmt(fit.trials), fit.fitted ? "1" : "0",
                   fmt(fit.eta), fmt(fit.delta), fmt(fit.c), fmt(tt), fmt(prob), fmt(ctx.seed)});
    ctx.emit(t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for spiked-Wishart detection, quiet planting, and "
                 "low-degree likelihood-ratio diagnostics"};
    app.require_subcommand(1);

    // one context per subcommand so config files bind to the right options
    RunContext goe_ctx, sk_ctx, wd_ctx, qp_ctx, ld_ctx, hm_ctx, cf_ctx;

    auto* goe = app.add_subcommand(
        "goe-spectrum", "eigenvalues of GOE draws; columns: instance,n,lambda_min,lambda_max,"
                        "semicircle_ks,seed");
    int goe_n = 200, goe_instances = 10;
    goe->add_option("--n", goe_n, "matrix dimension")->check(CLI::PositiveNumber);
    goe->add_option("--instances", goe_instances, "number of draws")->check(CLI::PositiveNumber);
    add_common(goe, goe_ctx);

    auto* sk = app.add_subcommand(
        "sk-baselines", "brute-force optimum vs spectral certificate vs sign rounding; columns: "
                        "instance,n,bruteforce_optimum,spectral_certificate,rounding_value,seed");
    int sk_n = 12, sk_instances = 20;
    sk->add_option("--n", sk_n, "dimension (brute force requires n <= 20)")
        ->check(CLI::PositiveNumber);
    sk->add_option("--instances", sk_instances, "number of instances")->check(CLI::PositiveNumber);
    add_common(sk, sk_ctx);

    auto* wd = app.add_subcommand(
        "wishart-detect", "spectral detection experiment on the spiked Wishart model; columns: "
                          "n,N,gamma,beta,prior,detector,trials,type1,type2,total_error,seed");
    int wd_n = 200;
    double wd_gamma = 0.5, wd_beta = -0.9;
    std::string wd_prior = "rademacher";
    std::optional<double> wd_trunc;
    long wd_trials = 100;
    wd->add_option("--n", wd_n, "dimension")->check(CLI::PositiveNumber);
    wd->add_option("--gamma", wd_gamma, "aspect ratio n/N");
    wd->add_option("--beta", wd_beta, "spike strength");
    wd->add_option("--prior", wd_prior, "spike prior: rademacher, gaussian, uniform");
    wd->add_option("--trunc", wd_trunc, "optional truncation level beta_t");
    wd->add_option("--trials", wd_trials, "balanced null/planted trial count")
        ->check(CLI::PositiveNumber);
    add_common(wd, wd_ctx);

    auto* qp = app.add_subcommand(
        "quiet-plant", "parameter selection plus planted-frame statistics; columns: trial,kind,"
                       "n,N,gamma,beta,epsilon,lambda_max,planted_value,spike_mass_V,seed");
    double qp_eps = 0.4;
    int qp_n = 600, qp_trials = 5;
    qp->add_option("--epsilon", qp_eps, "certification slack in (0, 2)");
    qp->add_option("--n", qp_n, "dimension")->check(CLI::PositiveNumber);
    qp->add_option("--trials", qp_trials, "trials per hypothesis")->check(CLI::PositiveNumber);
    add_common(qp, qp_ctx);

    auto* ld = app.add_subcommand(
        "lowdeg-scan", "low-degree likelihood-ratio norm over a (beta, n) grid; columns: "
                       "n,N,gamma,beta,D,method,lr_norm_sq,stderr,seed");
    double ld_gamma = 0.5;
    std::vector<double> ld_betas = {0.5, 0.9};
    int ld_degree = 6;
    std::vector<int> ld_ns = {100, 800};
    std::string ld_prior = "rademacher";
    ld->add_option("--gamma", ld_gamma, "aspect ratio n/N");
    ld->add_option("--beta", ld_betas, "spike strengths (comma separated)")->delimiter(',');
    ld->add_option("--D", ld_degree, "polynomial degree bound")->check(CLI::PositiveNumber);
    ld->add_option("--n", ld_ns, "dimensions (comma separated)")->delimiter(',');
    ld->add_option("--prior", ld_prior, "spike prior (exact scan requires rademacher)");
    add_common(ld, ld_ctx);

    auto* hm = app.add_subcommand(
        "hermite-check", "Hermite identity suites; columns: check,k,v,residual,tolerance,status");
    int hm_kmax = 30;
    long hm_samples = 200000;
    hm->add_option("--kmax", hm_kmax, "largest degree for the exact identities")
        ->check(CLI::PositiveNumber);
    hm->add_option("--mc-samples", hm_samples, "Monte Carlo sample count")
        ->check(CLI::PositiveNumber);
    add_common(hm, hm_ctx);

    auto* cf = app.add_subcommand(
        "chernoff-fit", "empirical local Chernoff tail fit for spike overlaps; columns: "
                        "n,prior,trials,fitted,eta,delta,c,t,tail_prob,seed");
    std::string cf_prior = "rademacher";
    std::optional<double> cf_trunc;
    int cf_n = 100;
    long cf_trials = 100000;
    cf->add_option("--prior", cf_prior, "spike prior");
    cf->add_option("--trunc", cf_trunc, "optional truncation level beta_t");
    cf->add_option("--n", cf_n, "dimension")->check(CLI::PositiveNumber);
    cf->add_option("--trials", cf_trials, "Monte Carlo pair count")->check(CLI::PositiveNumber);
    add_common(cf, cf_ctx);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = apply_config_file(args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hardnesslab: %s\n", e.what());
        return 1;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        reversed.pop_back();  // CLI11 takes the argument list reversed, sans program name
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ConversionError& e) {
        app.exit(e, std::cout, std::cerr);
        return 1;
    } catch (const CLI::ValidationError& e) {
        app.exit(e, std::cout, std::cerr);
        return 1;
    } catch (const CLI::ExtrasError& e) {
        // unrecognized option or config key on an otherwise valid command
        app.exit(e, std::cout, std::cerr);
        return 1;
    } catch (const CLI::ParseError& e) {
        // unknown command / malformed invocation
        app.exit(e, std::cout, std::cerr);
        return 2;
    }

    auto fill = [](RunContext& ctx, const CLI::App* sub) {
        ctx.command = sub->get_name();
        for (const CLI::Option* opt : sub->get_options()) {
            std::string name = opt->get_name();
            if (name.rfind("--", 0) == 0) name = name.substr(2);
            if (name == "help") continue;
            std::string value;
            for (const std::string& r : opt->results()) {
                if (!value.empty()) value += ",";
                value += r;
            }
            if (value.empty()) value = opt->get_default_str();
            ctx.config[name] = value;
        }
    };

    try {
        if (goe->parsed()) {
            fill(goe_ctx, goe);
            return run_goe_spectrum(goe_ctx, goe_n, goe_instances);
        }
        if (sk->parsed()) {
            fill(sk_ctx, sk);
            return run_sk_baselines(sk_ctx, sk_n, sk_instances);
        }
        if (wd->parsed()) {
            fill(wd_ctx, wd);
            WishartParams params{wd_n, wd_gamma, wd_beta, make_prior(wd_prior, wd_trunc)};
            params.validate();
            return run_wishart_detect(wd_ctx, params, wd_trials);
        }
        if (qp->parsed()) {
            fill(qp_ctx, qp);
            return run_quiet_plant(qp_ctx, qp_eps, qp_n, qp_trials);
        }
        if (ld->parsed()) {
            fill(ld_ctx, ld);
            return run_lowdeg_scan(ld_ctx, ld_gamma, ld_betas, ld_degree, ld_ns, ld_prior);
        }
        if (hm->parsed()) {
            fill(hm_ctx, hm);
            return run_hermite_check(hm_ctx, hm_kmax, hm_samples);
        }
        if (cf->parsed()) {
            fill(cf_ctx, cf);
            return run_chernoff_fit(cf_ctx, cf_prior, cf_trunc, cf_n, cf_trials);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hardnesslab: %s\n", e.what());
        return 1;
    }
    return 2;
}
