#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace spgarch {

/**
 * @brief Knot-inclusion vector m = (m_1, ..., m_K), m_i = 1 when knot i is active.
 *
 * Stored as a bit mask (bit i-1 holds m_i); K is limited to 32.
 */
class Indicator {
 public:
  static constexpr std::size_t kMaxKnots = 32;

  Indicator() = default;
  /// All-zero indicator of length k.
  explicit Indicator(std::size_t k);
  Indicator(std::size_t k, std::uint32_t mask);

  /// Parses "0101..." with m_1 first.
  static Indicator from_bitstring(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  std::uint32_t mask() const noexcept { return mask_; }

  bool operator[](std::size_t i) const noexcept { return ((mask_ >> i) & 1U) != 0; }
  void set(std::size_t i, bool on);
  void flip(std::size_t i);

  std::size_t count() const noexcept;
  Indicator complement() const noexcept;

  /// "m_1 m_2 ... m_K" without separators; "-" for K = 0.
  std::string bitstring() const;

  friend bool operator==(const Indicator&, const Indicator&) = default;
  friend auto operator<=>(const Indicator&, const Indicator&) = default;

 private:
  std::uint32_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace spgarch

template <>
struct std::hash<spgarch::Indicator> {
  std::size_t operator()(const spgarch::Indicator& m) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(m.size()) << 32) | m.mask());
  }
};
