#pragma once

// Monte Carlo estimates over independent Cauchy walks.
//
// Every replicate r draws its walk from the substream (seed, r). Per-replicate
// results are stored by index and reduced sequentially, so estimates depend
// on (seed, R, query) only, never on the worker count.

#include <array>
#include <cstdint>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "zetawalk/cauchy_walk.hpp"
#include "zetawalk/complex_value.hpp"
#include "zetawalk/second_order.hpp"
#include "zetawalk/zeta_eval.hpp"

namespace zetawalk {

struct RunOptions {
    unsigned workers = 0;  // 0: hardware concurrency
    std::stop_token stop{};
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct ComplexEstimate {
    ComplexValue value;
    double std_error_re = 0.0;
    double std_error_im = 0.0;
};

/// Sample mean with a 30-batch batch-means standard error (fewer batches
/// when there are fewer than 30 samples). Requires at least 2 samples.
Estimate batch_means(std::span<const double> samples);

/// Sample moments of Z_n(x), Z_m(x) over R walks.
/// blocks = {Z_{n1} conj Z_{m1}, Z_{n1} conj Z_{m2}, Z_{n2} conj Z_{m1},
/// Z_{n2} conj Z_{m2}}.
struct MomentEstimate {
    ComplexEstimate mean_n;
    ComplexEstimate mean_m;
    Estimate second_moment_abs;  // |Z_n|^2
    ComplexEstimate cross_moment;  // Z_n conj Z_m
    std::array<ComplexEstimate, 4> blocks;
    std::size_t replicates = 0;
};

/// Z_n(x) = sum_{k<=x} k^{-(sigma + i S_n)} - x^{1-sigma-i S_n}/(1-sigma-i S_n).
ComplexValue simulate_Z(std::uint64_t n, double sigma, double x, const WalkPath& walk);

/// Requires n, m >= 1, sigma in [1/2, 1), x >= 1, R >= 100. m < n is allowed
/// and gives the conjugate of the (m, n) cross moment on the same walks.
MomentEstimate estimate_moments(std::uint64_t n, std::uint64_t m, double sigma, double x, std::size_t replicates,
                                std::uint64_t seed, const RunOptions& opts = {});

struct BlockCheck {
    std::string name;  // c11, c12, c21, c22, combined
    double exact = 0.0;
    ComplexEstimate estimate;
    double z = 0.0;  // (Re estimate - exact) / stderr
    double z_imag = 0.0;  // Im estimate / stderr; the exact values are real
};

/// Monte Carlo against the exact second moments. Passes when at most one
/// comparison has |z| above `threshold` and none exceeds `hard_limit`.
struct VerificationReport {
    MomentQuery query;
    SecondMomentSet exact;
    MomentEstimate estimate;
    std::vector<BlockCheck> checks;
    double z_score = 0.0;  // largest |z|
    double threshold = 4.0;
    double hard_limit = 6.0;
    bool pass = false;
};

VerificationReport verify_second_order(const MomentQuery& query, std::size_t replicates, std::uint64_t seed,
                                       const RunOptions& opts = {}, double threshold = 4.0);

struct GapPoint {
    double x = 0.0;
    double gap = 0.0;
    double std_error = 0.0;
};

/// Estimates E|Z_n(x) - Z_n(x_ref)|^2 at sigma = 1/2 for each x in x_list
/// using one walk per replicate for all x. Requires x_list ascending and
/// each entry either equal to x_ref or at most x_ref / 10.
std::vector<GapPoint> approximation_gap(std::uint64_t n, const std::vector<double>& x_list, double x_ref,
                                        std::size_t replicates, std::uint64_t seed, const RunOptions& opts = {});

/// Sample moments of zeta(1/2 + i S_n) evaluated through zeta_critical.
/// Capped samples contribute 1 and are counted.
struct ZetaMomentEstimate {
    ComplexEstimate mean;
    Estimate mean_abs2;
    double variance = 0.0;  // mean_abs2 - |mean|^2
    std::size_t replicates = 0;
    std::size_t capped = 0;
};

ZetaMomentEstimate estimate_zeta_moments(std::uint64_t n, std::size_t replicates, std::uint64_t seed,
                                         const ZetaEvalConfig& cfg = {}, const RunOptions& opts = {});

/// zeta(1/2 + i S_k) along one walk, k = 1..N.
struct ZetaTrajectory {
    RngStreamKey key;
    std::vector<double> s;
    std::vector<ComplexValue> zeta;
    std::vector<std::uint8_t> capped;

    std::size_t length() const { return s.size(); }
    std::size_t capped_count() const;
};

struct TrajectoryRecord {
    std::uint64_t n = 0;
    double s_n = 0.0;
    ComplexValue zeta_n;
    ComplexValue running_sum;  // sum_{k<=n} zeta(1/2 + i S_k)
    double normalized_stat = 0.0;  // |running_sum - n| / (sqrt(n) (log n)^b)
    bool capped = false;  // a sample since the previous checkpoint was capped
};

struct TrajectoryRun {
    RngStreamKey key;
    std::vector<TrajectoryRecord> records;
    std::size_t steps = 0;
    std::size_t capped_count = 0;
    double sup_stat = 0.0;  // sup over 3 <= n <= N of normalized_stat
};

/// {3} together with ceil(10^{j/4}) for j >= 2, all <= N, ascending.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t N);

/// |M_n - n| / (sqrt(n) (log n)^b), n >= 3.
double normalized_stat(ComplexValue running_sum, std::uint64_t n, double b);

/// Evaluates zeta along a given walk. Values with |S_k| > cfg.t_cap are
/// replaced by 1 and flagged.
ZetaTrajectory evaluate_trajectory(const WalkPath& walk, const ZetaEvalConfig& cfg = {}, const RunOptions& opts = {});

/// Trajectories for replicates first..first+count-1 of `seed`, all
/// (replicate, step) evaluations sharing one worker pool.
std::vector<ZetaTrajectory> simulate_trajectories(std::uint64_t N, std::uint64_t seed, std::uint64_t first_replicate,
                                                  std::size_t count, const ZetaEvalConfig& cfg = {},
                                                  const RunOptions& opts = {});

/// Checkpoint records and the sup statistic over the first N steps.
TrajectoryRun summarize_trajectory(const ZetaTrajectory& traj, double b, std::uint64_t N);

/// Requires N >= 3.
TrajectoryRun theorem2_run(std::uint64_t N, double b, RngStreamKey key, const ZetaEvalConfig& cfg = {},
                           const RunOptions& opts = {});
TrajectoryRun theorem2_run(const WalkPath& walk, double b, const ZetaEvalConfig& cfg = {},
                           const RunOptions& opts = {});

struct SupStatEstimate {
    std::uint64_t N = 0;
    double b = 0.0;
    Estimate second_moment;  // mean of sup^2 over replicates, i.i.d. stderr
    std::size_t replicates = 0;
    double capped_fraction = 0.0;
};

/// Second moment of sup_{3<=n<=N} normalized_stat over R trajectories.
/// Requires b > 2, R >= 20, N >= 3.
SupStatEstimate ensemble_sup_stat(double b, std::uint64_t N, std::size_t replicates, std::uint64_t seed,
                                  const ZetaEvalConfig& cfg = {}, const RunOptions& opts = {});

/// The same for several N, from one set of trajectories of length max(N).
std::vector<SupStatEstimate> ensemble_sup_stats(double b, const std::vector<std::uint64_t>& Ns,
                                                std::size_t replicates, std::uint64_t seed,
                                                const ZetaEvalConfig& cfg = {}, const RunOptions& opts = {});

/// Estimates from already simulated trajectories (for comparing several b
/// on identical walks).
SupStatEstimate sup_stat_from(const std::vector<ZetaTrajectory>& trajs, double b, std::uint64_t N);

}  // namespace zetawalk
