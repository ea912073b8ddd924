#ifndef FNA_COUNT_HPP
#define FNA_COUNT_HPP

#include <compare>
#include <cstdint>
#include <string>

#include "fna/errors.hpp"

namespace fna {

// Exact non-negative integer with 128-bit capacity. All arithmetic is
// checked; an overflow throws OverflowError instead of wrapping.
class Count {
 public:
  constexpr Count() : v_(0) {}
  constexpr Count(std::uint64_t v) : v_(v) {}

  // 2^k for k < 128.
  static Count pow2(unsigned k) {
    if (k >= 128) throw OverflowError("Count::pow2: exponent out of range");
    return Count(static_cast<unsigned __int128>(1) << k);
  }

  Count& operator+=(Count o) {
    unsigned __int128 r;
    if (__builtin_add_overflow(v_, o.v_, &r))
      throw OverflowError("Count: addition overflow");
    v_ = r;
    return *this;
  }
  Count& operator*=(Count o) {
    unsigned __int128 r;
    if (__builtin_mul_overflow(v_, o.v_, &r))
      throw OverflowError("Count: multiplication overflow");
    v_ = r;
    return *this;
  }
  friend Count operator+(Count a, Count b) { return a += b; }
  friend Count operator*(Count a, Count b) { return a *= b; }

  friend bool operator==(Count a, Count b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(Count a, Count b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  bool is_zero() const { return v_ == 0; }
  bool fits_u64() const { return v_ >> 64 == 0; }
  std::uint64_t low64() const { return static_cast<std::uint64_t>(v_); }
  unsigned __int128 raw() const { return v_; }

  std::string str() const;  // decimal
  static Count parse(const std::string& s);

 private:
  explicit constexpr Count(unsigned __int128 v) : v_(v) {}
  unsigned __int128 v_;
};

}  // namespace fna

#endif
