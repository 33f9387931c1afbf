// Seedable, splittable random stream. The raw engine is the standard
// mt19937_64 (its 64-bit output sequence is fully specified), and uniform
// doubles are derived from the top 53 bits, so the event sequence is
// reproducible across platforms for a given seed. Replication streams are
// split deterministically: stream k uses the k-th output of a SplitMix64
// sequence started at the base seed.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoi {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng split(std::uint64_t base_seed, int stream_index) {
        std::uint64_t state = base_seed;
        std::uint64_t s = 0;
        for (int i = 0; i <= stream_index; ++i) s = splitmix64(state);
        return Rng(s);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double u01() { return (engine_() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate; u < 1 keeps the log argument > 0.
    double exponential(double rate) { return -std::log1p(-u01()) / rate; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace aoi
