#pragma once

#include <cstdint>
#include <random>

namespace infoprop {

/// Random stream used throughout the toolkit.
///
/// Wraps std::mt19937_64 but implements the distributions itself so that a
/// given seed produces the same numbers with every standard library.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    /// Independent stream for one run of an ensemble. The seed is derived by
    /// hashing (master, index) with splitmix64, so streams do not depend on
    /// the order in which runs are scheduled.
    static Rng for_stream(std::uint64_t master_seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Exponential waiting time with the given rate (> 0).
    double exponential(double rate);
    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace infoprop
