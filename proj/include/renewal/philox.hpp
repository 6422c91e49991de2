#pragma once

#include <array>
#include <cstdint>

namespace renewal {

// Philox4x32-10 counter-based generator.  Streams are keyed by
// (seed, path index), so any path's variates can be produced independently
// of scheduling; this is what makes the Monte Carlo reductions reproducible
// across worker counts.
class Philox4x32 {
 public:
  static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                            std::uint64_t ctr_hi,
                                            std::uint64_t ctr_lo) {
    std::uint32_t k0 = (std::uint32_t)key, k1 = (std::uint32_t)(key >> 32);
    std::array<std::uint32_t, 4> x = {
        (std::uint32_t)ctr_lo, (std::uint32_t)(ctr_lo >> 32),
        (std::uint32_t)ctr_hi, (std::uint32_t)(ctr_hi >> 32)};
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = 0xD2511F53ULL * x[0];
      std::uint64_t p1 = 0xCD9E8D57ULL * x[2];
      std::array<std::uint32_t, 4> y = {
          (std::uint32_t)(p1 >> 32) ^ x[1] ^ k0, (std::uint32_t)p1,
          (std::uint32_t)(p0 >> 32) ^ x[3] ^ k1, (std::uint32_t)p0};
      x = y;
      k0 += 0x9E3779B9U;
      k1 += 0xBB67AE85U;
    }
    return x;
  }
};

// Per-path uniform stream: counter = (path, draw index), key = seed.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}

  // uniform in (0,1)
  double uniform() {
    if (have_ == 0) {
      auto b = Philox4x32::block(seed_, path_, ctr_++);
      buf_[0] = ((std::uint64_t)b[0] << 32) | b[1];
      buf_[1] = ((std::uint64_t)b[2] << 32) | b[3];
      have_ = 2;
    }
    std::uint64_t u = buf_[--have_];
    // 53 significant bits, shifted off zero
    return ((u >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_, path_;
  std::uint64_t ctr_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int have_ = 0;
};

}  // namespace renewal
