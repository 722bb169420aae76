#pragma once

#include <array>
#include <cstdint>

namespace fprmt {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// A deterministic random stream addressed by (seed, stream index).
///
/// The seed is the Philox key and the stream index occupies the upper 64
/// bits of the counter, so any two (seed, stream) pairs yield disjoint
/// sequences and a sample can be regenerated without replaying the streams
/// before it. Normal variates use Box-Muller on the stream's own uniforms, so
/// output does not depend on the standard library's distribution code.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on (0, 1), 53-bit resolution; never returns 0 or 1.
  double uniform();
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fprmt
