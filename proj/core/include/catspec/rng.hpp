#pragma once

#include <cstdint>
#include <random>

namespace catspec {

/// Reproducible random stream. The engine is mt19937_64 (fully specified by
/// the standard) and every distribution is implemented here rather than taken
/// from <random>, whose distributions are implementation-defined. The same
/// (seed, stream_id) therefore yields the same sequence on every toolchain.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Independent child stream; children of distinct ids never share state.
    RngStream substream(std::uint64_t id) const;

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                   // [0, 1)
    double uniform(double lo, double hi);
    double normal();                    // standard normal
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    double exponential(double mean);
    bool bernoulli(double p) { return uniform() < p; }
    std::uint64_t poisson(double mean);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finaliser, used to derive engine seeds.
std::uint64_t mix64(std::uint64_t x);

} // namespace catspec
