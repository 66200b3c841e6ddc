#pragma once

#include <cstdint>

namespace kicked {

// Position-indexed SplitMix64 stream: draw i of a stream is a pure function of
// (seed, i), so parallel scans can pull from any index without shared state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// uniform in [0, 1)
inline double stream_unit(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(stream_u64(seed, index) >> 11) * 0x1.0p-53;
}

// uniform in [lo, hi)
inline double stream_range(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
  return lo + (hi - lo) * stream_unit(seed, index);
}

// substream derivation, e.g. per-task seeds
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ (0x6a09e667f3bcc909ULL + tag * 0x9e3779b97f4a7c15ULL));
}

}  // namespace kicked
