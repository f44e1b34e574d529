#pragma once

#include <cstdint>
#include <vector>

namespace prqpe {

// Counter-based random streams: every draw is a pure function of
// (seed, a, b, c, counter), so shots can run in any order on any number of
// threads and still reproduce bit-identical values. The mixer is the
// splitmix64 finalizer applied to the combined words.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                        std::uint64_t c = 0)
        : state_(mix(mix(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) + a) + b) + c)), counter_(0) {}

    std::uint64_t next_u64() { return mix(state_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // +1 with probability p, else -1.
    int bernoulli_pm1(double p) { return uniform() < p ? +1 : -1; }

    // Index sampled from the distribution whose inclusive prefix sums are
    // `cdf` (cdf.back() == total weight).
    std::size_t pick(const std::vector<double>& cdf) {
        const double u = uniform() * cdf.back();
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
    std::uint64_t counter_;
};

}  // namespace prqpe
