#include "zetawalk/cauchy_walk.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "zetawalk/csv.hpp"
#include "zetawalk/errors.hpp"

namespace zetawalk {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

UniformStream::UniformStream(RngStreamKey key) : key_(key) {}

std::uint64_t UniformStream::next_bits() {
    if (buffered_words_ == 0) {
        const Philox4x32::Counter counter = {
            static_cast<std::uint32_t>(block_index_),
            static_cast<std::uint32_t>(block_index_ >> 32),
            static_cast<std::uint32_t>(key_.replicate),
            static_cast<std::uint32_t>(key_.replicate >> 32),
        };
        const Philox4x32::Key k = {static_cast<std::uint32_t>(key_.seed),
                                   static_cast<std::uint32_t>(key_.seed >> 32)};
        buffer_ = Philox4x32::block(counter, k);
        ++block_index_;
        buffered_words_ = 4;
    }
    const int i = 4 - buffered_words_;
    buffered_words_ -= 2;
    return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double UniformStream::next() {
    while (true) {
        const double u = static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double cauchy_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("cauchy_quantile requires 0 < u < 1");
    return std::tan(std::numbers::pi * (u - 0.5));
}

double cauchy_draw(UniformStream& stream) { return cauchy_quantile(stream.next()); }

WalkPath generate_walk(std::size_t steps, RngStreamKey key) {
    if (steps == 0) throw DomainError("walk length must be at least 1");
    WalkPath walk{key, {}};
    walk.values.reserve(steps);
    UniformStream stream(key);
    double position = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        position += cauchy_draw(stream);
        walk.values.push_back(position);
    }
    return walk;
}

double walk_density(std::uint64_t n, double u) {
    if (n == 0) throw DomainError("walk_density requires n >= 1");
    const double scale = static_cast<double>(n);
    return scale / (std::numbers::pi * (scale * scale + u * u));
}

void write_walk_csv(std::ostream& out, const WalkPath& walk) {
    CsvWriter csv(out, {"n", "S_n"});
    for (std::size_t i = 0; i < walk.values.size(); ++i) {
        csv.row(static_cast<std::uint64_t>(i + 1), walk.values[i]);
    }
}

}  // namespace zetawalk
