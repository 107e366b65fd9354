#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

namespace cellia {

/// Lattice label z = a + b*w with w = (-1 + i*sqrt(3))/2. All lattice logic
/// is exact integer arithmetic; the complex embedding is only for output.
struct Eisenstein {
  std::int64_t a = 0;  // coefficient of 1
  std::int64_t b = 0;  // coefficient of w

  friend constexpr Eisenstein operator+(Eisenstein x, Eisenstein y) {
    return {x.a + y.a, x.b + y.b};
  }
  friend constexpr Eisenstein operator-(Eisenstein x, Eisenstein y) {
    return {x.a - y.a, x.b - y.b};
  }
  friend constexpr Eisenstein operator-(Eisenstein x) { return {-x.a, -x.b}; }
  friend constexpr bool operator==(Eisenstein x, Eisenstein y) {
    return x.a == y.a && x.b == y.b;
  }
  friend constexpr bool operator!=(Eisenstein x, Eisenstein y) { return !(x == y); }
};

inline constexpr Eisenstein kOne{1, 0};
inline constexpr Eisenstein kOmega{0, 1};

enum class Coset : int { Square = 0, Circle = 1, Diamond = 2 };

/// Non-negative residue of (a + b) mod 3; result is in {0,1,2} for all signs.
constexpr Coset coset_of(Eisenstein z) {
  std::int64_t m = (z.a + z.b) % 3;
  if (m < 0) m += 3;
  return static_cast<Coset>(static_cast<int>(m));
}

/// Complex embedding: Re = a - b/2, Im = b*sqrt(3)/2.
std::complex<double> embed(Eisenstein z);

/// Membership in the box |Re(z)| <= r, |Im(z)| <= sqrt(3)*r/2, boundary
/// inclusive. Exact integer form: |2a - b| <= 2r and |b| <= r.
constexpr bool in_region(Eisenstein z, std::int64_t r) {
  const std::int64_t re2 = 2 * z.a - z.b;
  return (re2 <= 2 * r) && (re2 >= -2 * r) && (z.b <= r) && (z.b >= -r);
}

/// Raster comparison: x decodes before y iff Im(x) > Im(y), or equal Im and
/// Re(x) < Re(y). Exact: b descending, then a ascending.
constexpr bool raster_precedes(Eisenstein x, Eisenstein y) {
  if (x.b != y.b) return x.b > y.b;
  return x.a < y.a;
}

const char* coset_name(Coset c);
std::string to_string(Eisenstein z);

struct EisensteinHash {
  std::size_t operator()(Eisenstein z) const {
    const std::uint64_t ua = static_cast<std::uint64_t>(z.a);
    const std::uint64_t ub = static_cast<std::uint64_t>(z.b);
    std::uint64_t h = ua * 0x9E3779B97F4A7C15ULL ^ (ub + 0x7F4A7C15ULL + (ua << 6) + (ua >> 2));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace cellia
