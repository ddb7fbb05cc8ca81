#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "zetawalk/errors.hpp"
#include "zetawalk/monte_carlo.hpp"
#include "zetawalk/second_order.hpp"
#include "zetawalk/zeta_eval.hpp"

using namespace zetawalk;

namespace {

WalkPath flat_walk(std::size_t n, double value = 0.0) {
    WalkPath w;
    w.values.assign(n, value);
    return w;
}

void check_same(const ComplexEstimate& a, const ComplexEstimate& b) {
    CHECK(a.value == b.value);
    CHECK(a.std_error_re == b.std_error_re);
    CHECK(a.std_error_im == b.std_error_im);
}

}  // namespace

TEST_CASE("batch means") {
    std::vector<double> v(60);
    std::iota(v.begin(), v.end(), 1.0);
    const Estimate e = batch_means(v);
    CHECK(e.value == 30.5);
    CHECK(e.std_error > 0.0);

    const std::vector<double> flat(90, 2.5);
    CHECK(batch_means(flat).std_error == 0.0);
    CHECK(batch_means(std::vector<double>{1.0, 3.0}).value == 2.0);
    CHECK_THROWS_AS(batch_means(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("simulate_Z at fixed walk values") {
    const WalkPath zero = flat_walk(2);
    CHECK(simulate_Z(1, 0.5, 1.0, zero) == ComplexValue{-1.0, 0.0});
    CHECK(simulate_Z(2, 0.5, 4.0, zero).re == doctest::Approx(-1.2155429496238267).epsilon(1e-15));

    const WalkPath w = generate_walk(5, {3, 1});
    WalkPath mirrored = w;
    for (double& s : mirrored.values) s = -s;
    for (double x : {1.0, 17.0, 400.5}) {
        const ComplexValue a = simulate_Z(5, 0.5, x, w);
        const ComplexValue b = simulate_Z(5, 0.5, x, mirrored);
        CHECK(a.re == b.re);
        CHECK(a.im == -b.im);
    }
    CHECK_THROWS_AS(simulate_Z(6, 0.5, 10.0, w), DomainError);
}

TEST_CASE("moment estimates do not depend on the worker count") {
    const MomentEstimate a = estimate_moments(2, 4, 0.5, 50.0, 600, 11, {1, {}});
    const MomentEstimate b = estimate_moments(2, 4, 0.5, 50.0, 600, 11, {3, {}});
    check_same(a.mean_n, b.mean_n);
    check_same(a.cross_moment, b.cross_moment);
    for (std::size_t i = 0; i < 4; ++i) check_same(a.blocks[i], b.blocks[i]);
    CHECK(a.second_moment_abs.value == b.second_moment_abs.value);
    CHECK(a.replicates == 600);
}

TEST_CASE("swapping n and m conjugates the cross moment exactly") {
    const MomentEstimate nm = estimate_moments(2, 5, 0.5, 80.0, 300, 4);
    const MomentEstimate mn = estimate_moments(5, 2, 0.5, 80.0, 300, 4);
    CHECK(nm.cross_moment.value.re == mn.cross_moment.value.re);
    CHECK(nm.cross_moment.value.im == -mn.cross_moment.value.im);
}

TEST_CASE("moment estimates match the exact values") {
    const MomentEstimate e = estimate_moments(1, 1, 0.5, 4.0, 20000, 21);
    const double mean = mean_Zn({1, 1, 0.5, 4.0});
    CHECK(std::fabs(e.mean_n.value.re - mean) < 4.0 * e.mean_n.std_error_re);
    CHECK(std::fabs(e.mean_n.value.im) < 4.0 * e.mean_n.std_error_im);

    const MomentEstimate big = estimate_moments(1, 1, 0.5, 100.0, 20000, 22);
    const ComplexEstimate& c22 = big.blocks[3];
    CHECK(std::fabs(c22.value.re - 400.0 / 3.0) < 4.0 * c22.std_error_re);
    CHECK(big.second_moment_abs.value >= std::norm(std::complex<double>(big.mean_n.value.re, big.mean_n.value.im)) -
                                             4.0 * big.second_moment_abs.std_error);
}

TEST_CASE("standard errors shrink like R^{-1/2}") {
    const MomentEstimate a = estimate_moments(2, 2, 0.5, 30.0, 10000, 5);
    const MomentEstimate b = estimate_moments(2, 2, 0.5, 30.0, 20000, 5);
    const double ratio = b.mean_n.std_error_re / a.mean_n.std_error_re;
    CHECK(ratio >= 0.8 / std::sqrt(2.0));
    CHECK(ratio <= 1.25 / std::sqrt(2.0));
}

TEST_CASE("moment estimate preconditions") {
    CHECK_THROWS_AS(estimate_moments(1, 1, 0.5, 10.0, 99, 1), DomainError);
    CHECK_THROWS_AS(estimate_moments(0, 1, 0.5, 10.0, 100, 1), DomainError);
    CHECK_THROWS_AS(estimate_moments(1, 1, 1.0, 10.0, 100, 1), DomainError);
    CHECK_THROWS_AS(estimate_moments(1, 1, 0.5, 0.5, 100, 1), DomainError);
}

TEST_CASE("verification report at small R") {
    const VerificationReport r = verify_second_order({2, 5, 0.5, 60.0}, 100, 3);
    CHECK(r.checks.size() == 5);
    CHECK(r.estimate.replicates == 100);
    double worst = 0.0;
    for (const auto& c : r.checks) worst = std::max(worst, std::fabs(c.z));
    CHECK(r.z_score == worst);
    const VerificationReport s = verify_second_order({2, 3, 0.5, 60.0}, 100, 3);
    CHECK(s.exact.c22_from_quadrature);
}

TEST_CASE("approximation gap") {
    const auto gaps = approximation_gap(2, {10.0, 100.0, 1e4}, 1e4, 200, 8);
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[2].gap == 0.0);
    CHECK(gaps[2].std_error == 0.0);
    CHECK(gaps[0].gap > gaps[1].gap);
    CHECK_THROWS_AS(approximation_gap(2, {10.0, 2e3}, 1e4, 200, 8), DomainError);
    CHECK_THROWS_AS(approximation_gap(2, {100.0, 10.0}, 1e4, 200, 8), DomainError);
}

TEST_CASE("mean of zeta(1/2 + i S_n)") {
    const ZetaMomentEstimate e = estimate_zeta_moments(2, 20000, 17);
    CHECK(std::fabs(e.mean.value.re - mean_zeta(2)) < 4.0 * e.mean.std_error_re);
    CHECK(std::fabs(e.mean.value.im) < 4.0 * e.mean.std_error_im);
    CHECK(e.capped == 0);
    CHECK(e.variance == doctest::Approx(e.mean_abs2.value - std::norm(std::complex<double>(e.mean.value.re,
                                                                                         e.mean.value.im))));
}

TEST_CASE("checkpoint grid") {
    CHECK(checkpoint_grid(3) == std::vector<std::uint64_t>{3});
    CHECK(checkpoint_grid(100) == std::vector<std::uint64_t>{3, 4, 6, 10, 18, 32, 57, 100});
    const auto g = checkpoint_grid(10000);
    CHECK(g.back() == 10000);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK_THROWS_AS(checkpoint_grid(2), DomainError);
}

TEST_CASE("trajectory along a walk held at zero") {
    const TrajectoryRun run = theorem2_run(flat_walk(3), 2.5);
    REQUIRE(run.records.size() == 1);
    const TrajectoryRecord& r = run.records.front();
    const ComplexValue z0 = zeta_critical(0.0).value;
    CHECK(r.n == 3);
    CHECK(r.running_sum.re == doctest::Approx(3.0 * z0.re).epsilon(1e-15));
    CHECK(r.running_sum.im == 0.0);
    const double expect = std::fabs(3.0 * z0.re - 3.0) / (std::sqrt(3.0) * std::pow(std::log(3.0), 2.5));
    CHECK(r.normalized_stat == doctest::Approx(expect).epsilon(1e-14));
    CHECK(run.sup_stat == r.normalized_stat);
    CHECK(normalized_stat(ComplexValue{3.0, 0.0}, 3, 2.5) == 0.0);
    CHECK_THROWS_AS(normalized_stat(ComplexValue{}, 2, 2.5), DomainError);
}

TEST_CASE("running sums accumulate between checkpoints") {
    const WalkPath w = generate_walk(120, {2, 0});
    const ZetaTrajectory traj = evaluate_trajectory(w);
    const TrajectoryRun run = summarize_trajectory(traj, 2.5, 120);
    CompensatedComplexSum sum;
    std::size_t next = 0;
    for (std::size_t k = 0; k < traj.length() && next < run.records.size(); ++k) {
        sum.add(traj.zeta[k]);
        if (k + 1 == run.records[next].n) {
            CHECK((sum.value() - run.records[next].running_sum).abs() < 1e-9 * (1.0 + sum.value().abs()));
            CHECK(run.records[next].s_n == w.at(k + 1));
            ++next;
        }
    }
    CHECK(next == run.records.size());
    CHECK(run.records.back().n == 100);
}

TEST_CASE("samples beyond the cap are imputed with 1 and flagged") {
    WalkPath w = flat_walk(10, 0.0);
    w.values[4] = 50.0;
    w.values[8] = -60.0;
    ZetaEvalConfig cfg;
    cfg.t_cap = 40.0;
    const ZetaTrajectory traj = evaluate_trajectory(w, cfg);
    CHECK(traj.capped_count() == 2);
    CHECK(traj.zeta[4] == ComplexValue{1.0, 0.0});
    CHECK(traj.capped[8] == 1);
    const TrajectoryRun run = summarize_trajectory(traj, 2.5, 10);
    CHECK(run.capped_count == 2);
    bool any_flag = false;
    for (const auto& r : run.records) any_flag = any_flag || r.capped;
    CHECK(any_flag);
}

TEST_CASE("trajectories are independent of the worker count and of batching") {
    const auto a = simulate_trajectories(200, 9, 0, 4, {}, {1, {}});
    const auto b = simulate_trajectories(200, 9, 0, 4, {}, {3, {}});
    const auto c = simulate_trajectories(200, 9, 2, 1);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a[i].zeta == b[i].zeta);
        CHECK(a[i].key == RngStreamKey{9, i});
    }
    CHECK(c.front().zeta == a[2].zeta);
}

TEST_CASE("sup statistic") {
    const auto trajs = simulate_trajectories(300, 12, 0, 20);
    const SupStatEstimate loose = sup_stat_from(trajs, 2.5, 300);
    const SupStatEstimate tight = sup_stat_from(trajs, 10.0, 300);
    CHECK(tight.second_moment.value < loose.second_moment.value);
    CHECK(loose.replicates == 20);
    CHECK(loose.second_moment.std_error > 0.0);
    const SupStatEstimate shorter = sup_stat_from(trajs, 2.5, 100);
    CHECK(shorter.second_moment.value <= loose.second_moment.value);

    const auto many = ensemble_sup_stats(2.5, {100, 300}, 20, 12);
    CHECK(many[1].second_moment.value == loose.second_moment.value);
    CHECK(ensemble_sup_stat(2.5, 300, 20, 12).second_moment.value == loose.second_moment.value);
    CHECK_THROWS_AS(ensemble_sup_stat(2.5, 100, 1, 1), DomainError);
    CHECK_THROWS_AS(ensemble_sup_stat(2.0, 100, 20, 1), DomainError);
    CHECK_THROWS_AS(ensemble_sup_stat(2.5, 2, 20, 1), DomainError);
}
