#include "fna/count.hpp"

#include <algorithm>

namespace fna {

std::string Count::str() const {
  if (v_ == 0) return "0";
  std::string out;
  unsigned __int128 v = v_;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Count Count::parse(const std::string& s) {
  if (s.empty()) throw ParseError("Count::parse: empty string");
  unsigned __int128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("Count::parse: bad digit");
    unsigned __int128 next;
    if (__builtin_mul_overflow(v, static_cast<unsigned __int128>(10), &next) ||
        __builtin_add_overflow(next, static_cast<unsigned __int128>(c - '0'), &next))
      throw OverflowError("Count::parse: value too large");
    v = next;
  }
  Count out;
  out.v_ = v;
  return out;
}

}  // namespace fna
