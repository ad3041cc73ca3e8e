#pragma once

// Counter-based random streams. A stream is a (key, counter) pair; output n is
// the SplitMix64 finalizer applied to key + n * golden, so any stream can be
// re-derived from its key and nothing depends on execution order.

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace hent {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

class Stream {
 public:
  using result_type = std::uint64_t;

  Stream() = default;
  explicit Stream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Child stream keyed by this stream's key and `index`; does not advance *this.
  Stream child(std::uint64_t index) const {
    return Stream(detail::mix64(key_ ^ detail::mix64(index + detail::kGolden)));
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Stream for an index tuple under a master seed. Folding is order-sensitive,
// and the tuple length is mixed in so (1) and (1, 0) differ.
inline Stream derive_stream(std::uint64_t master_seed, const std::vector<std::uint64_t>& indices) {
  std::uint64_t h = detail::mix64(master_seed ^ 0x6A09E667F3BCC909ull);
  for (std::uint64_t idx : indices) h = detail::mix64(h + detail::kGolden + detail::mix64(idx));
  h = detail::mix64(h ^ static_cast<std::uint64_t>(indices.size()));
  return Stream(h);
}

inline Stream derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> indices) {
  return derive_stream(master_seed, std::vector<std::uint64_t>(indices));
}

}  // namespace hent
