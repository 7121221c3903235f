#include "spgarch/indicator.hpp"

#include <bit>

#include "spgarch/error.hpp"

namespace spgarch {
namespace {

std::uint32_t low_bits(std::size_t k) {
  return k >= 32 ? 0xFFFFFFFFU : ((1U << k) - 1U);
}

}  // namespace

Indicator::Indicator(std::size_t k) : Indicator(k, 0U) {}

Indicator::Indicator(std::size_t k, std::uint32_t mask) : mask_(mask), size_(k) {
  if (k > kMaxKnots) throw ContractViolation("Indicator supports at most 32 knots");
  if ((mask & ~low_bits(k)) != 0U) throw ContractViolation("Indicator mask has bits beyond K");
}

Indicator Indicator::from_bitstring(std::string_view bits) {
  if (bits == "-") return Indicator(0);
  Indicator m(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      m.set(i, true);
    } else if (bits[i] != '0') {
      throw ParseError("indicator bitstring may only contain 0/1: '" + std::string(bits) + "'");
    }
  }
  return m;
}

void Indicator::set(std::size_t i, bool on) {
  if (i >= size_) throw ContractViolation("Indicator index out of range");
  if (on) mask_ |= (1U << i); else mask_ &= ~(1U << i);
}

void Indicator::flip(std::size_t i) {
  if (i >= size_) throw ContractViolation("Indicator index out of range");
  mask_ ^= (1U << i);
}

std::size_t Indicator::count() const noexcept {
  return static_cast<std::size_t>(std::popcount(mask_));
}

Indicator Indicator::complement() const noexcept {
  Indicator m = *this;
  m.mask_ = ~mask_ & low_bits(size_);
  return m;
}

std::string Indicator::bitstring() const {
  if (size_ == 0) return "-";
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

}  // namespace spgarch
