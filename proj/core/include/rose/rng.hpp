#pragma once

#include "rose/types.hpp"

#include <cstdint>
#include <random>

namespace rose {

/// Derives the stream for replication `rep`. Pure and platform independent;
/// injective in `rep` for a fixed input spec.
SeedSpec derive_seed(const SeedSpec& s, std::uint64_t rep);

/// Deterministic random source bound to one SeedSpec.
///
/// Only the raw 64-bit engine output is taken from the standard library;
/// uniforms and normals are derived here so that draws are bit-identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rose
