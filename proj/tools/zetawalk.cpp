// zetawalk: batch command-line front end.
//
//   zetawalk eval        truncated zeta value and the Euler-Maclaurin reference
//   zetawalk verify      Monte Carlo check of the second moments of Z_n(x)
//   zetawalk constants   constant C, K_n table, phi identity scan
//   zetawalk trajectory  running sums of zeta(1/2 + i S_k) along Cauchy walks
//   zetawalk walk        dump one walk as CSV
//
// Exit codes: 0 success, 1 verification ran but failed, 2 usage or
// precondition error, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_manifest.hpp"
#include "zetawalk/cauchy_walk.hpp"
#include "zetawalk/csv.hpp"
#include "zetawalk/errors.hpp"
#include "zetawalk/monte_carlo.hpp"
#include "zetawalk/second_order.hpp"
#include "zetawalk/zeta_eval.hpp"

namespace zw = zetawalk;
namespace cli = zetawalk::cli;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string complex_str(zw::ComplexValue v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.re, v.im);
    return buf;
}

json complex_json(zw::ComplexValue v) { return json::array({v.re, v.im}); }

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw zw::DomainError("cannot write " + path.string());
    return out;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    double t = 0.0;
    double sigma = 0.5;
    std::uint64_t x = 0;
    bool oracle = false;
    zw::ZetaEvalConfig cfg;
};

int run_eval(const EvalArgs& a) {
    zw::ZetaEvalConfig cfg = a.cfg;
    cfg.sigma = a.sigma;
    cfg.validate();
    if (!std::isfinite(a.t) || std::fabs(a.t) > cfg.t_cap) throw zw::CapExceededError(std::fabs(a.t), cfg.t_cap);

    zw::ComplexValue value;
    std::uint64_t x = a.x;
    if (x > 0) {
        value = zw::truncated_zeta(a.sigma, a.t, x);
    } else {
        const zw::CriticalValue cv = zw::zeta_critical(a.t, cfg);
        value = cv.value;
        x = cv.x;
    }
    std::printf("s          = %.17g%+.17gi\n", a.sigma, a.t);
    std::printf("truncated  = %s  (x = %llu, |value| = %.6e)\n", complex_str(value).c_str(),
                static_cast<unsigned long long>(x), value.abs());
    if (a.oracle) {
        const zw::ComplexValue ref = zw::zeta_em_oracle(a.sigma, a.t);
        std::printf("oracle     = %s  (|value| = %.6e)\n", complex_str(ref).c_str(), ref.abs());
        std::printf("gap        = %.6e\n", (value - ref).abs());
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double x = 500.0;
    double sigma = 0.5;
    std::size_t replicates = 200000;
    std::uint64_t seed = 1;
    double threshold = 4.0;
    std::string out = "verify.csv";
};

json report_json(const zw::VerificationReport& r, std::uint64_t seed) {
    json j;
    j["query"] = {{"n", r.query.n}, {"m", r.query.m}, {"sigma", r.query.sigma}, {"x", r.query.x}};
    j["replicates"] = r.estimate.replicates;
    j["seed"] = seed;
    j["quadrature_fallback"] = r.exact.c22_from_quadrature;
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"block", c.name},
                          {"exact", c.exact},
                          {"estimate", complex_json(c.estimate.value)},
                          {"stderr", {c.estimate.std_error_re, c.estimate.std_error_im}},
                          {"z", c.z},
                          {"z_imag", c.z_imag}});
    }
    j["checks"] = checks;
    j["z_score"] = r.z_score;
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    if (r.query.sigma == 0.5 && r.query.m > r.query.n + 1) {
        const zw::CovariancePrediction p = zw::predicted_cov_interval(r.query.n, r.query.m);
        j["limit_prediction"] = {{"lo", p.interval.lo}, {"hi", p.interval.hi}, {"c0_required", p.c0_required}};
    }
    return j;
}

int run_verify(const VerifyArgs& a, const zw::RunOptions& opts) {
    cli::RunManifest manifest("verify");
    const zw::MomentQuery q{a.n, a.m, a.sigma, a.x};
    q.validate();
    const zw::VerificationReport r = zw::verify_second_order(q, a.replicates, a.seed, opts, a.threshold);

    std::printf("E Z_n conj Z_m at n=%llu m=%llu sigma=%g x=%g, R=%zu, seed=%llu%s\n",
                static_cast<unsigned long long>(a.n), static_cast<unsigned long long>(a.m), a.sigma, a.x,
                a.replicates, static_cast<unsigned long long>(a.seed),
                r.exact.c22_from_quadrature ? " (c22 by quadrature)" : "");
    std::printf("%-9s %16s %16s %12s %8s %8s\n", "block", "exact", "estimate", "stderr", "z", "z_imag");
    for (const auto& c : r.checks) {
        std::printf("%-9s %16.8g %16.8g %12.4g %8.3f %8.3f\n", c.name.c_str(), c.exact, c.estimate.value.re,
                    c.estimate.std_error_re, c.z, c.z_imag);
    }
    std::printf("result: %s (max |z| = %.3f)\n", r.pass ? "PASS" : "FAIL", r.z_score);

    const std::filesystem::path path = cli::resolve_output(a.out);
    {
        std::ofstream out = open_output(path);
        if (path.extension() == ".json") {
            out << report_json(r, a.seed).dump(2) << '\n';
        } else {
            zw::CsvWriter csv(out, {"block", "exact", "estimate_re", "estimate_im", "stderr_re", "stderr_im", "z",
                                    "z_imag", "quadrature"});
            for (const auto& c : r.checks) {
                csv.row(c.name, c.exact, c.estimate.value.re, c.estimate.value.im, c.estimate.std_error_re,
                        c.estimate.std_error_im, c.z, c.z_imag, c.name == "c22" && r.exact.c22_from_quadrature);
            }
        }
    }
    manifest.parameter("n", a.n);
    manifest.parameter("m", a.m);
    manifest.parameter("sigma", a.sigma);
    manifest.parameter("x", a.x);
    manifest.parameter("replicates", a.replicates);
    manifest.parameter("threshold", a.threshold);
    manifest.parameter("quadrature_fallback", r.exact.c22_from_quadrature);
    manifest.parameter("pass", r.pass);
    manifest.seed(a.seed);
    manifest.output(path);
    manifest.write_beside(path);
    return r.pass ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- constants

struct ConstantsArgs {
    bool c = false;
    std::vector<std::uint64_t> kn;
    bool phi_scan = false;
    std::string out;
};

int run_constants(const ConstantsArgs& a) {
    if (!a.c && a.kn.empty() && !a.phi_scan) throw CLI::ValidationError("constants", "give --c, --kn or --phi-scan");
    const zw::ConstantCBreakdown cb = zw::constant_C();
    if (a.c) {
        std::printf("euler_const      %.15f\n", cb.euler_const);
        std::printf("integral_0_1     %.15f\n", cb.integral_0_1);
        std::printf("integral_1_inf   %.15f\n", cb.integral_1_inf);
        std::printf("c_eq222          %.15f\n", cb.c_eq222);
        std::printf("c_theorem1       %.15f\n", cb.c_theorem1);
        std::printf("kn_limit         %.15f  (limit of K_n - log n)\n", cb.kn_limit);
        const bool ok = cb.c_theorem1 == cb.c_eq222 - 1.0 &&
                        cb.c_eq222 == cb.euler_const - 1.0 + 2.0 * cb.integral_0_1 + 2.0 * cb.integral_1_inf;
        std::printf("invariants       %s\n", ok ? "hold" : "VIOLATED");
    }
    if (!a.kn.empty()) {
        std::unique_ptr<std::ofstream> file;
        std::unique_ptr<zw::CsvWriter> csv;
        std::filesystem::path path;
        cli::RunManifest manifest("constants");
        if (!a.out.empty()) {
            path = cli::resolve_output(a.out);
            file = std::make_unique<std::ofstream>(open_output(path));
            csv = std::make_unique<zw::CsvWriter>(*file, std::initializer_list<std::string_view>{
                                                             "n", "K_n", "K_n_minus_log_n", "gap_to_kn_limit"});
        }
        std::printf("%10s %20s %20s\n", "n", "K_n", "K_n - log n");
        for (std::uint64_t n : a.kn) {
            const double k = zw::compute_Kn(n);
            const double centred = k - std::log(static_cast<double>(n));
            std::printf("%10llu %20.12f %20.12f\n", static_cast<unsigned long long>(n), k, centred);
            if (csv) csv->row(n, k, centred, centred - cb.kn_limit);
        }
        if (file) {
            file->close();
            manifest.parameter("kn", a.kn);
            manifest.output(path);
            manifest.write_beside(path);
        }
    }
    if (a.phi_scan) {
        double worst = 0.0;
        double worst_alpha = 0.0;
        for (double alpha = 0.01; alpha <= 50.0; alpha *= 1.3) {
            const zw::PhiValues p = zw::phi_funcs(alpha);
            const double r = std::fabs(p.phi1 + p.phi2 - (p.phi - 0.5 / alpha));
            if (r > worst) {
                worst = r;
                worst_alpha = alpha;
            }
        }
        std::printf("phi identity: max |phi1 + phi2 - (phi - 1/(2 alpha))| = %.3e at alpha = %.6g\n", worst,
                    worst_alpha);
        std::printf("phi(1e-4) = %.12f\n", zw::phi_funcs(1e-4).phi);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- trajectory

struct TrajectoryArgs {
    std::uint64_t N = 0;
    double b = 2.5;
    std::string seeds = "1";
    std::uint64_t seed = 1;
    double t_cap = 1e9;
    std::string out = "trajectory.csv";
    bool sup = false;
};

struct SeedPlan {
    std::vector<zw::RngStreamKey> keys;
};

// A single integer is a count of replicates of --seed; a comma list names
// seeds explicitly.
SeedPlan parse_seeds(const std::string& text, std::uint64_t base_seed) {
    SeedPlan plan;
    std::vector<std::uint64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw CLI::ValidationError("--seeds", "not an integer: '" + item + "'");
        values.push_back(v);
    }
    if (values.empty()) throw CLI::ValidationError("--seeds", "empty");
    if (text.find(',') == std::string::npos) {
        if (values[0] == 0) throw CLI::ValidationError("--seeds", "count must be positive");
        for (std::uint64_t r = 0; r < values[0]; ++r) plan.keys.push_back({base_seed, r});
    } else {
        for (std::uint64_t s : values) plan.keys.push_back({s, 0});
    }
    return plan;
}

int run_trajectory(const TrajectoryArgs& a, const zw::RunOptions& opts) {
    if (!(a.b > 2.0)) std::fprintf(stderr, "warning: b = %g <= 2; the normalised sums need not vanish below b = 2\n", a.b);
    if (a.N < 3) throw zw::DomainError("--N must be at least 3");
    cli::RunManifest manifest("trajectory");
    zw::ZetaEvalConfig cfg;
    cfg.t_cap = a.t_cap;
    cfg.validate();
    const SeedPlan plan = parse_seeds(a.seeds, a.seed);
    if (a.sup && plan.keys.size() < 20) throw zw::DomainError("--sup needs at least 20 trajectories");

    std::vector<zw::ZetaTrajectory> trajs;
    const bool one_seed = std::all_of(plan.keys.begin(), plan.keys.end(),
                                      [&](const zw::RngStreamKey& k) { return k.seed == plan.keys[0].seed; });
    if (one_seed && plan.keys.back().replicate + 1 == plan.keys.size()) {
        trajs = zw::simulate_trajectories(a.N, plan.keys[0].seed, 0, plan.keys.size(), cfg, opts);
    } else {
        for (const zw::RngStreamKey& key : plan.keys) {
            trajs.push_back(zw::simulate_trajectories(a.N, key.seed, key.replicate, 1, cfg, opts).front());
        }
    }

    const std::filesystem::path path = cli::resolve_output(a.out);
    std::size_t capped = 0;
    {
        std::ofstream out = open_output(path);
        zw::CsvWriter csv(out, {"seed", "replicate", "n", "S_n", "zeta_re", "zeta_im", "sum_re", "sum_im",
                                "normalized_stat", "capped"});
        for (const zw::ZetaTrajectory& traj : trajs) {
            const zw::TrajectoryRun run = zw::summarize_trajectory(traj, a.b, a.N);
            capped += run.capped_count;
            for (const zw::TrajectoryRecord& rec : run.records) {
                csv.row(traj.key.seed, traj.key.replicate, rec.n, rec.s_n, rec.zeta_n.re, rec.zeta_n.im,
                        rec.running_sum.re, rec.running_sum.im, rec.normalized_stat, rec.capped);
            }
        }
    }
    const double capped_fraction =
        static_cast<double>(capped) / (static_cast<double>(a.N) * static_cast<double>(trajs.size()));
    std::printf("%zu trajectories, N = %llu, b = %g, capped fraction = %.3e\n", trajs.size(),
                static_cast<unsigned long long>(a.N), a.b, capped_fraction);
    manifest.output(path);

    if (a.sup) {
        std::vector<std::uint64_t> grid;
        for (std::uint64_t n = 100; n < a.N; n *= 10) grid.push_back(n);
        grid.push_back(a.N);
        std::filesystem::path sup_path = path;
        sup_path.replace_extension(".sup.csv");
        std::ofstream out = open_output(sup_path);
        zw::CsvWriter csv(out, {"N", "b", "replicates", "sup_second_moment", "stderr", "capped_fraction"});
        std::printf("%10s %18s %14s\n", "N", "E sup^2", "stderr");
        for (std::uint64_t n : grid) {
            const zw::SupStatEstimate e = zw::sup_stat_from(trajs, a.b, n);
            csv.row(n, a.b, e.replicates, e.second_moment.value, e.second_moment.std_error, e.capped_fraction);
            std::printf("%10llu %18.8g %14.4g\n", static_cast<unsigned long long>(n), e.second_moment.value,
                        e.second_moment.std_error);
        }
        manifest.output(sup_path);
    }

    manifest.parameter("N", a.N);
    manifest.parameter("b", a.b);
    manifest.parameter("seeds", a.seeds);
    manifest.parameter("t_cap", a.t_cap);
    manifest.parameter("trajectories", trajs.size());
    manifest.parameter("sup", a.sup);
    manifest.seed(a.seed);
    manifest.capped_fraction(capped_fraction);
    manifest.write_beside(path);
    return kExitOk;
}

// ---------------------------------------------------------------- walk

struct WalkArgs {
    std::uint64_t N = 0;
    std::uint64_t seed = 1;
    std::uint64_t replicate = 0;
    std::string out = "walk.csv";
};

int run_walk(const WalkArgs& a) {
    cli::RunManifest manifest("walk");
    const zw::WalkPath walk = zw::generate_walk(a.N, {a.seed, a.replicate});
    const std::filesystem::path path = cli::resolve_output(a.out);
    {
        std::ofstream out = open_output(path);
        zw::write_walk_csv(out, walk);
    }
    manifest.parameter("N", a.N);
    manifest.parameter("replicate", a.replicate);
    manifest.seed(a.seed);
    manifest.output(path);
    manifest.write_beside(path);
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random sampling of zeta(1/2 + it) along Cauchy walks"};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("--workers", workers, "Worker threads (0: all cores); never changes results");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Truncated zeta value, optionally against the reference evaluator");
    eval_cmd->add_option("--t", eval.t, "Imaginary part")->required();
    eval_cmd->add_option("--sigma", eval.sigma, "Real part")->capture_default_str();
    eval_cmd->add_option("--x", eval.x, "Truncation (default: chosen from |t|)");
    eval_cmd->add_flag("--oracle", eval.oracle, "Also print the Euler-Maclaurin reference value");
    eval_cmd->add_option("--safety-constant", eval.cfg.safety_constant)->capture_default_str();
    eval_cmd->add_option("--x-min", eval.cfg.x_min)->capture_default_str();
    eval_cmd->add_option("--t-cap", eval.cfg.t_cap)->capture_default_str();

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo check of E Z_n conj Z_m against the exact moments");
    verify_cmd->add_option("--n", verify.n)->required();
    verify_cmd->add_option("--m", verify.m)->required();
    verify_cmd->add_option("--x", verify.x)->capture_default_str();
    verify_cmd->add_option("--sigma", verify.sigma)->capture_default_str();
    verify_cmd->add_option("--replicates", verify.replicates)->capture_default_str();
    verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
    verify_cmd->add_option("--threshold", verify.threshold, "|z| gate")->capture_default_str();
    verify_cmd->add_option("--out", verify.out, "Report path (.csv or .json)")->capture_default_str();

    ConstantsArgs constants;
    auto* constants_cmd = app.add_subcommand("constants", "Constant C, K_n and the phi identity");
    constants_cmd->add_flag("--c", constants.c, "Print the breakdown of C");
    constants_cmd->add_option("--kn", constants.kn, "Comma-separated n values for a K_n table")->delimiter(',');
    constants_cmd->add_flag("--phi-scan", constants.phi_scan, "Residual of phi1 + phi2 = phi - 1/(2 alpha)");
    constants_cmd->add_option("--out", constants.out, "CSV for the K_n table");

    TrajectoryArgs traj;
    auto* traj_cmd = app.add_subcommand("trajectory", "Running sums of zeta(1/2 + i S_k)");
    traj_cmd->add_option("--N", traj.N, "Walk length")->required();
    traj_cmd->add_option("--b", traj.b, "Log exponent of the normaliser")->capture_default_str();
    traj_cmd->add_option("--seeds", traj.seeds, "Replicate count, or comma-separated seeds")->capture_default_str();
    traj_cmd->add_option("--seed", traj.seed, "Seed used with a replicate count")->capture_default_str();
    traj_cmd->add_option("--t-cap", traj.t_cap)->capture_default_str();
    traj_cmd->add_option("--out", traj.out)->capture_default_str();
    traj_cmd->add_flag("--sup", traj.sup, "Also estimate E sup^2 for N = 100, 1000, ...");

    WalkArgs walk;
    auto* walk_cmd = app.add_subcommand("walk", "Write one Cauchy walk as CSV");
    walk_cmd->add_option("--N", walk.N)->required();
    walk_cmd->add_option("--seed", walk.seed)->capture_default_str();
    walk_cmd->add_option("--replicate", walk.replicate)->capture_default_str();
    walk_cmd->add_option("--out", walk.out)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const zw::RunOptions opts{workers, {}};
    try {
        if (*eval_cmd) return run_eval(eval);
        if (*verify_cmd) return run_verify(verify, opts);
        if (*constants_cmd) return run_constants(constants);
        if (*traj_cmd) return run_trajectory(traj, opts);
        if (*walk_cmd) return run_walk(walk);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const zw::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const zw::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
