#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zetawalk {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is
/// a pure function of (key, counter), which makes substreams independent of
/// how replicates are scheduled across threads.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key);
};

/// Identifies one independent substream: all replicates of a run share
/// `seed` and differ in `replicate`.
struct RngStreamKey {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    bool operator==(const RngStreamKey&) const = default;
};

/// Sequential uniform draws on the open interval (0, 1) from a keyed
/// substream. A value type; copies continue independently.
class UniformStream {
public:
    explicit UniformStream(RngStreamKey key);

    /// 53-bit uniform in (0, 1); an exact 0 is rejected and redrawn.
    double next();

    RngStreamKey key() const { return key_; }

private:
    std::uint64_t next_bits();

    RngStreamKey key_;
    std::uint64_t block_index_ = 0;
    Philox4x32::Counter buffer_{};
    int buffered_words_ = 0;  // 32-bit words left in buffer_
};

/// Inverse CDF of the standard Cauchy law, tan(pi (u - 1/2)).
/// Throws DomainError unless 0 < u < 1.
double cauchy_quantile(double u);

/// Standard Cauchy draw from a stream.
double cauchy_draw(UniformStream& stream);

/// Partial sums S_1..S_N of i.i.d. standard Cauchy steps.
struct WalkPath {
    RngStreamKey key;
    std::vector<double> values;  // values[i] = S_{i+1}

    std::size_t length() const { return values.size(); }
    /// S_n for 1 <= n <= length().
    double at(std::size_t n) const { return values.at(n - 1); }
};

/// Deterministic per key; throws DomainError for N == 0.
WalkPath generate_walk(std::size_t steps, RngStreamKey key);

/// Density of S_n: n / (pi (n^2 + u^2)).
double walk_density(std::uint64_t n, double u);

/// CSV with header "n,S_n".
void write_walk_csv(std::ostream& out, const WalkPath& walk);

}  // namespace zetawalk
