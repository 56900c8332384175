#include "catspec/rng.hpp"

#include <cmath>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"

namespace catspec {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix64(mix64(seed) ^ mix64(~stream_id))) {}

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(seed_, mix64(stream_id_ * 0x100000001b3ULL + id + 1));
}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = constants::two_pi * u2;
    spare_normal_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

double RngStream::exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidParameter("poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    // Sequential inversion; exp(-mean) stays normal for mean below ~700.
    if (mean > 500.0) return poisson(0.5 * mean) + poisson(0.5 * mean);
    const double u = uniform();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        cdf += pmf;
        if (pmf < 1e-300 && static_cast<double>(k) > mean) break;
    }
    return k;
}

} // namespace catspec
