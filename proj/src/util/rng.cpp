//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/rng.h"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace nomenkit {
namespace {

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t &state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  for (auto &word : s_) word = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::uint64_t> shuffled_prefix(std::uint64_t n, std::uint64_t k, std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("shuffled_prefix: k exceeds n");
  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  Rng rng(seed);
  for (std::uint64_t i = 0; i < k; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
  order.resize(k);
  return order;
}

DecimalRatio decimal_ratio(double value) {
  if (!std::isfinite(value) || value < 0) throw std::invalid_argument("ratio must be finite and non-negative");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  const std::string text(buf, res.ptr);
  DecimalRatio r;
  std::string digits = text;
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::size_t scale = text.size() - dot - 1;
    if (scale > 15) throw std::invalid_argument("ratio has more than 15 decimals: " + text);
    digits.erase(dot, 1);
    for (std::size_t i = 0; i < scale; ++i) r.den *= 10;
  }
  if (digits.size() > 18) throw std::invalid_argument("ratio too large: " + text);
  r.num = std::stoll(digits);
  return r;
}

std::uint64_t floor_times(double value, std::uint64_t n) {
  const DecimalRatio r = decimal_ratio(value);
  const unsigned __int128 p = static_cast<unsigned __int128>(r.num) * n;
  return static_cast<std::uint64_t>(p / static_cast<std::uint64_t>(r.den));
}

std::uint64_t round_times(double value, std::uint64_t n) {
  const DecimalRatio r = decimal_ratio(value);
  const unsigned __int128 p = static_cast<unsigned __int128>(r.num) * n * 2 + static_cast<std::uint64_t>(r.den);
  return static_cast<std::uint64_t>(p / (2 * static_cast<unsigned __int128>(r.den)));
}

}  // namespace nomenkit
