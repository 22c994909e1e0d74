#ifndef ETN_RNG_HPP
#define ETN_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace etn {

/// Derives an independent stream seed from a base seed and a stream name.
/// All randomness in a run flows from one seed through named sub-streams
/// ("init", "batching", "data", ...), so runs are reproducible bit for bit.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream);

inline std::mt19937_64 make_rng(std::uint64_t base, std::string_view stream) {
  return std::mt19937_64(derive_seed(base, stream));
}

}  // namespace etn

#endif  // ETN_RNG_HPP
