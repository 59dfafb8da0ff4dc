//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_RNG_H_
#define NOMENKIT_RNG_H_

#include <cstdint>
#include <vector>

namespace nomenkit {

// splitmix64 step: state += 0x9E3779B97F4A7C15, then the standard
// finalizer. Used to expand a 64-bit seed.
std::uint64_t splitmix64(std::uint64_t &state);

// xoshiro256** seeded with four consecutive splitmix64 outputs. Every
// sampling routine in the toolkit draws from this generator so that other
// implementations can reproduce artifacts bit for bit.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
  // bound must be positive.
  std::uint64_t below(std::uint64_t bound);

private:
  std::uint64_t s_[4];
};

// First `k` entries of a forward Fisher-Yates shuffle of 0..n-1: for
// i = 0..k-1, swap position i with i + below(n - i). The result for k is a
// prefix of the result for any larger k under the same seed.
std::vector<std::uint64_t> shuffled_prefix(std::uint64_t n, std::uint64_t k, std::uint64_t seed);

// Exact decimal value of a parameter such as 0.8, as num / den with den a
// power of ten (the shortest decimal that round-trips the double).
struct DecimalRatio {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
DecimalRatio decimal_ratio(double value);
// floor(value * n) and round-half-up(value * n), computed exactly.
std::uint64_t floor_times(double value, std::uint64_t n);
std::uint64_t round_times(double value, std::uint64_t n);

}  // namespace nomenkit

#endif  // NOMENKIT_RNG_H_
