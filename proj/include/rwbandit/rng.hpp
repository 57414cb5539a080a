#pragma once

#include <cstdint>
#include <random>

namespace rwb {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Named stream purposes inside one run.
enum class Stream : std::uint64_t {
    Policy = 1,
    Walk = 2,
    Lengths = 3,
    Schedule = 4,
};

// Seedable generator. Streams are derived from a master seed by hashing
// (master, run index, purpose) counters, so runs never share state.
class Rng {
public:
    using engine_type = std::mt19937_64;
    using result_type = engine_type::result_type;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t run, Stream purpose);

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal(double mean, double stddev);
    bool bernoulli(double p) { return uniform() < p; }
    // Index drawn from a probability vector summing to 1.
    template <typename Range>
    int categorical(const Range& probs)
    {
        const double u = uniform();
        double acc = 0.0;
        int last = 0;
        int i = 0;
        for (double p : probs) {
            acc += p;
            if (p > 0.0)
                last = i;
            if (u < acc)
                return i;
            ++i;
        }
        return last;
    }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return engine_type::min(); }
    static constexpr result_type max() { return engine_type::max(); }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rwb
