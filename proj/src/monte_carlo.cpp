#include "zetawalk/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zetawalk/compensated.hpp"
#include "zetawalk/errors.hpp"
#include "zetawalk/parallel.hpp"

namespace zetawalk {

namespace {

constexpr std::size_t kBatches = 30;

ComplexEstimate complex_estimate(const std::vector<double>& re, const std::vector<double>& im) {
    const Estimate r = batch_means(re);
    const Estimate i = batch_means(im);
    return {{r.value, i.value}, r.std_error, i.std_error};
}

// Component-wise sample buffer for one complex quantity.
struct ComplexSamples {
    std::vector<double> re;
    std::vector<double> im;

    explicit ComplexSamples(std::size_t n) : re(n), im(n) {}
    void set(std::size_t i, ComplexValue v) {
        re[i] = v.re;
        im[i] = v.im;
    }
    ComplexEstimate estimate() const { return complex_estimate(re, im); }
};

AuxiliaryParts parts_at(const DirichletTable& table, double t, double x) {
    return {table.sum(t, x), correction_term(table.sigma(), t, x)};
}

Estimate iid_mean(const std::vector<double>& v) {
    CompensatedSum sum;
    for (double x : v) sum.add(x);
    const double mean = sum.value() / static_cast<double>(v.size());
    CompensatedSum sq;
    for (double x : v) sq.add((x - mean) * (x - mean));
    const double var = sq.value() / static_cast<double>(v.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

Estimate batch_means(std::span<const double> samples) {
    const std::size_t total = samples.size();
    if (total < 2) throw DomainError("batch_means needs at least 2 samples");
    const std::size_t batches = std::min(kBatches, total);
    CompensatedSum all;
    for (double v : samples) all.add(v);
    const double mean = all.value() / static_cast<double>(total);

    // Batch b covers [b*total/B, (b+1)*total/B); sizes differ by at most 1.
    // Var(mean) ~ B/(B-1) sum_b (n_b/R)^2 (mean_b - mean)^2.
    CompensatedSum spread;
    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t lo = b * total / batches;
        const std::size_t hi = (b + 1) * total / batches;
        CompensatedSum part;
        for (std::size_t i = lo; i < hi; ++i) part.add(samples[i]);
        const double size = static_cast<double>(hi - lo);
        const double dev = part.value() / size - mean;
        const double w = size / static_cast<double>(total);
        spread.add(w * w * dev * dev);
    }
    const double bd = static_cast<double>(batches);
    return {mean, std::sqrt(bd / (bd - 1.0) * spread.value())};
}

ComplexValue simulate_Z(std::uint64_t n, double sigma, double x, const WalkPath& walk) {
    if (n < 1 || n > walk.length()) throw DomainError("walk is shorter than n");
    return auxiliary_parts(sigma, walk.at(n), x).value();
}

MomentEstimate estimate_moments(std::uint64_t n, std::uint64_t m, double sigma, double x, std::size_t replicates,
                                std::uint64_t seed, const RunOptions& opts) {
    if (n < 1 || m < 1) throw DomainError("n and m must be positive");
    if (replicates < 100) throw DomainError("estimate_moments requires R >= 100");
    MomentQuery{std::min(n, m), std::max(n, m), sigma, x}.validate();

    const DirichletTable table(sigma, static_cast<std::uint64_t>(std::floor(x)));
    const std::uint64_t steps = std::max(n, m);
    ComplexSamples mean_n(replicates), mean_m(replicates), cross(replicates);
    std::array<ComplexSamples, 4> blocks{ComplexSamples(replicates), ComplexSamples(replicates),
                                         ComplexSamples(replicates), ComplexSamples(replicates)};
    std::vector<double> abs2(replicates);

    parallel_for(replicates, opts.workers, opts.stop, [&](std::size_t r) {
        const WalkPath walk = generate_walk(steps, {seed, r});
        const AuxiliaryParts zn = parts_at(table, walk.at(n), x);
        const AuxiliaryParts zm = n == m ? zn : parts_at(table, walk.at(m), x);
        const ComplexValue vn = zn.value();
        const ComplexValue vm = zm.value();
        mean_n.set(r, vn);
        mean_m.set(r, vm);
        abs2[r] = vn.norm();
        cross.set(r, mul_conj(vn, vm));
        blocks[0].set(r, mul_conj(zn.sum, zm.sum));
        blocks[1].set(r, mul_conj(zn.sum, zm.correction));
        blocks[2].set(r, mul_conj(zn.correction, zm.sum));
        blocks[3].set(r, mul_conj(zn.correction, zm.correction));
    });

    MomentEstimate out;
    out.mean_n = mean_n.estimate();
    out.mean_m = mean_m.estimate();
    out.second_moment_abs = batch_means(abs2);
    out.cross_moment = cross.estimate();
    for (std::size_t i = 0; i < 4; ++i) out.blocks[i] = blocks[i].estimate();
    out.replicates = replicates;
    return out;
}

VerificationReport verify_second_order(const MomentQuery& query, std::size_t replicates, std::uint64_t seed,
                                       const RunOptions& opts, double threshold) {
    query.validate();
    VerificationReport report;
    report.query = query;
    report.threshold = threshold;
    report.exact = second_moment(query, true);
    report.estimate = estimate_moments(query.n, query.m, query.sigma, query.x, replicates, seed, opts);

    const std::array<std::pair<const char*, ComplexValue>, 5> exact = {{
        {"c11", report.exact.c11},
        {"c12", report.exact.c12},
        {"c21", report.exact.c21},
        {"c22", report.exact.c22},
        {"combined", report.exact.combined},
    }};
    std::size_t above_threshold = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const ComplexEstimate& est = i < 4 ? report.estimate.blocks[i] : report.estimate.cross_moment;
        BlockCheck check;
        check.name = exact[i].first;
        check.exact = exact[i].second.re;
        check.estimate = est;
        check.z = est.std_error_re > 0.0 ? (est.value.re - check.exact) / est.std_error_re
                                         : (est.value.re == check.exact ? 0.0 : INFINITY);
        check.z_imag = est.std_error_im > 0.0 ? est.value.im / est.std_error_im : 0.0;
        const double az = std::fabs(check.z);
        report.z_score = std::max(report.z_score, az);
        if (az > threshold) ++above_threshold;
        report.checks.push_back(check);
    }
    report.pass = above_threshold <= 1 && report.z_score <= report.hard_limit;
    return report;
}

std::vector<GapPoint> approximation_gap(std::uint64_t n, const std::vector<double>& x_list, double x_ref,
                                        std::size_t replicates, std::uint64_t seed, const RunOptions& opts) {
    if (n < 1) throw DomainError("n must be positive");
    if (replicates < 2) throw DomainError("approximation_gap requires R >= 2");
    if (x_list.empty()) throw DomainError("x_list is empty");
    if (!(x_ref >= 1.0) || !std::isfinite(x_ref)) throw DomainError("x_ref must be finite and >= 1");
    for (std::size_t i = 0; i < x_list.size(); ++i) {
        const double x = x_list[i];
        if (!(x >= 1.0)) throw DomainError("x values must be >= 1");
        if (i > 0 && !(x > x_list[i - 1])) throw DomainError("x_list must be strictly ascending");
        if (x != x_ref && !(10.0 * x <= x_ref)) throw DomainError("x_ref must be at least 10 times every other x");
    }

    constexpr double sigma = 0.5;
    const DirichletTable table(sigma, static_cast<std::uint64_t>(std::floor(x_ref)));
    std::vector<double> cuts = x_list;
    if (cuts.back() != x_ref) cuts.push_back(x_ref);
    std::vector<std::vector<double>> gaps(x_list.size(), std::vector<double>(replicates));

    parallel_for(replicates, opts.workers, opts.stop, [&](std::size_t r) {
        const double t = generate_walk(n, {seed, r}).at(n);
        const std::vector<ComplexValue> sums = table.prefix_sums(t, cuts);
        const ComplexValue ref = sums.back() - correction_term(sigma, t, x_ref);
        for (std::size_t i = 0; i < x_list.size(); ++i) {
            const ComplexValue z = sums[i] - correction_term(sigma, t, x_list[i]);
            gaps[i][r] = (z - ref).norm();
        }
    });

    std::vector<GapPoint> out;
    for (std::size_t i = 0; i < x_list.size(); ++i) {
        const Estimate e = batch_means(gaps[i]);
        out.push_back({x_list[i], e.value, e.std_error});
    }
    return out;
}

ZetaMomentEstimate estimate_zeta_moments(std::uint64_t n, std::size_t replicates, std::uint64_t seed,
                                         const ZetaEvalConfig& cfg, const RunOptions& opts) {
    if (n < 1) throw DomainError("n must be positive");
    if (replicates < 2) throw DomainError("estimate_zeta_moments requires R >= 2");
    cfg.validate();
    ComplexSamples values(replicates);
    std::vector<double> abs2(replicates);
    std::vector<std::uint8_t> capped(replicates, 0);

    parallel_for(replicates, opts.workers, opts.stop, [&](std::size_t r) {
        const double t = generate_walk(n, {seed, r}).at(n);
        ComplexValue z{1.0, 0.0};
        if (std::fabs(t) > cfg.t_cap) {
            capped[r] = 1;
        } else {
            z = zeta_critical(t, cfg).value;
        }
        values.set(r, z);
        abs2[r] = z.norm();
    });

    ZetaMomentEstimate out;
    out.mean = values.estimate();
    out.mean_abs2 = batch_means(abs2);
    out.variance = out.mean_abs2.value - out.mean.value.norm();
    out.replicates = replicates;
    out.capped = static_cast<std::size_t>(std::count(capped.begin(), capped.end(), 1));
    return out;
}

std::size_t ZetaTrajectory::capped_count() const {
    return static_cast<std::size_t>(std::count(capped.begin(), capped.end(), 1));
}

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t N) {
    if (N < 3) throw DomainError("checkpoint grid requires N >= 3");
    std::vector<std::uint64_t> grid{3};
    for (int j = 2;; ++j) {
        const double v = std::pow(10.0, j / 4.0);
        const double nearest = std::round(v);
        const double c = std::fabs(v - nearest) <= 1e-9 * v ? nearest : std::ceil(v);
        if (c > static_cast<double>(N)) break;
        const auto point = static_cast<std::uint64_t>(c);
        if (point > grid.back()) grid.push_back(point);
    }
    return grid;
}

double normalized_stat(ComplexValue running_sum, std::uint64_t n, double b) {
    if (n < 3) throw DomainError("normalized_stat requires n >= 3");
    const double nd = static_cast<double>(n);
    const ComplexValue centered{running_sum.re - nd, running_sum.im};
    return centered.abs() / (std::sqrt(nd) * std::pow(std::log(nd), b));
}

namespace {

void evaluate_into(ZetaTrajectory& traj, std::size_t k, const ZetaEvalConfig& cfg) {
    const double t = traj.s[k];
    if (std::fabs(t) > cfg.t_cap || !std::isfinite(t)) {
        traj.zeta[k] = {1.0, 0.0};
        traj.capped[k] = 1;
    } else {
        traj.zeta[k] = zeta_critical(t, cfg).value;
    }
}

ZetaTrajectory blank_trajectory(const WalkPath& walk) {
    ZetaTrajectory traj;
    traj.key = walk.key;
    traj.s = walk.values;
    traj.zeta.assign(walk.length(), {});
    traj.capped.assign(walk.length(), 0);
    return traj;
}

}  // namespace

ZetaTrajectory evaluate_trajectory(const WalkPath& walk, const ZetaEvalConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    ZetaTrajectory traj = blank_trajectory(walk);
    parallel_for(traj.length(), opts.workers, opts.stop, [&](std::size_t k) { evaluate_into(traj, k, cfg); });
    return traj;
}

std::vector<ZetaTrajectory> simulate_trajectories(std::uint64_t N, std::uint64_t seed, std::uint64_t first_replicate,
                                                  std::size_t count, const ZetaEvalConfig& cfg,
                                                  const RunOptions& opts) {
    if (N < 1) throw DomainError("trajectory length must be positive");
    cfg.validate();
    std::vector<ZetaTrajectory> trajs;
    trajs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        trajs.push_back(blank_trajectory(generate_walk(N, {seed, first_replicate + i})));
    }
    // Work items run from the last step backwards so the expensive large-|S_k|
    // evaluations are claimed first and the pool drains evenly.
    const std::size_t total = count * N;
    parallel_for(total, opts.workers, opts.stop, [&](std::size_t item) {
        const std::size_t step = N - 1 - item / count;
        evaluate_into(trajs[item % count], step, cfg);
    });
    return trajs;
}

TrajectoryRun summarize_trajectory(const ZetaTrajectory& traj, double b, std::uint64_t N) {
    if (N < 3) throw DomainError("trajectories require N >= 3");
    if (N > traj.length()) throw DomainError("trajectory is shorter than N");
    const std::vector<std::uint64_t> grid = checkpoint_grid(N);
    TrajectoryRun run;
    run.key = traj.key;
    run.steps = N;
    CompensatedComplexSum sum;
    bool capped_since = false;
    std::size_t next = 0;
    for (std::uint64_t k = 1; k <= N; ++k) {
        sum.add(traj.zeta[k - 1]);
        if (traj.capped[k - 1]) {
            capped_since = true;
            ++run.capped_count;
        }
        if (k >= 3) run.sup_stat = std::max(run.sup_stat, normalized_stat(sum.value(), k, b));
        if (next < grid.size() && grid[next] == k) {
            run.records.push_back(
                {k, traj.s[k - 1], traj.zeta[k - 1], sum.value(), normalized_stat(sum.value(), k, b), capped_since});
            capped_since = false;
            ++next;
        }
    }
    return run;
}

TrajectoryRun theorem2_run(std::uint64_t N, double b, RngStreamKey key, const ZetaEvalConfig& cfg,
                           const RunOptions& opts) {
    if (N < 3) throw DomainError("trajectories require N >= 3");
    return theorem2_run(generate_walk(N, key), b, cfg, opts);
}

TrajectoryRun theorem2_run(const WalkPath& walk, double b, const ZetaEvalConfig& cfg, const RunOptions& opts) {
    return summarize_trajectory(evaluate_trajectory(walk, cfg, opts), b, walk.length());
}

SupStatEstimate sup_stat_from(const std::vector<ZetaTrajectory>& trajs, double b, std::uint64_t N) {
    if (trajs.size() < 2) throw DomainError("sup statistic needs at least 2 trajectories");
    std::vector<double> squares;
    std::size_t capped = 0;
    for (const ZetaTrajectory& traj : trajs) {
        const TrajectoryRun run = summarize_trajectory(traj, b, N);
        squares.push_back(run.sup_stat * run.sup_stat);
        capped += run.capped_count;
    }
    SupStatEstimate out;
    out.N = N;
    out.b = b;
    out.second_moment = iid_mean(squares);
    out.replicates = trajs.size();
    out.capped_fraction = static_cast<double>(capped) / (static_cast<double>(N) * static_cast<double>(trajs.size()));
    return out;
}

std::vector<SupStatEstimate> ensemble_sup_stats(double b, const std::vector<std::uint64_t>& Ns,
                                                std::size_t replicates, std::uint64_t seed,
                                                const ZetaEvalConfig& cfg, const RunOptions& opts) {
    if (!(b > 2.0)) throw DomainError("ensemble_sup_stat requires b > 2");
    if (replicates < 20) throw DomainError("ensemble_sup_stat requires R >= 20");
    if (Ns.empty()) throw DomainError("no N given");
    for (std::uint64_t N : Ns) {
        if (N < 3) throw DomainError("ensemble_sup_stat requires N >= 3");
    }
    const std::uint64_t longest = *std::max_element(Ns.begin(), Ns.end());
    const std::vector<ZetaTrajectory> trajs = simulate_trajectories(longest, seed, 0, replicates, cfg, opts);
    std::vector<SupStatEstimate> out;
    for (std::uint64_t N : Ns) out.push_back(sup_stat_from(trajs, b, N));
    return out;
}

SupStatEstimate ensemble_sup_stat(double b, std::uint64_t N, std::size_t replicates, std::uint64_t seed,
                                  const ZetaEvalConfig& cfg, const RunOptions& opts) {
    return ensemble_sup_stats(b, {N}, replicates, seed, cfg, opts).front();
}

}  // namespace zetawalk
