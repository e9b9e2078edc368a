#ifndef DEGENLAB_SAMPLING_HPP
#define DEGENLAB_SAMPLING_HPP

#include <cstdint>
#include <random>

namespace dgl {

// Every sample draws from its own stream so that sharding a sample set
// never changes which values are drawn.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double normal(std::mt19937_64& g) { return std::normal_distribution<double>(0.0, 1.0)(g); }

}  // namespace dgl

#endif
