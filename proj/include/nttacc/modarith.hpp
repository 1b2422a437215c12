#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nttacc {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// A prime modulus with its Barrett constants.
///
/// `k` is the bit count ceil(log2 q) and `m` = floor(2^(2k) / q), which always
/// has exactly k+1 bits. The primitive root and the 2N value the prime was
/// generated for are optional and filled in by `ntt_modulus`.
struct Modulus {
  u64 q = 0;
  unsigned k = 0;
  u64 m = 0;
  std::optional<u64> g;
  std::optional<u64> two_n;

  friend bool operator==(const Modulus&, const Modulus&) = default;
};

/// A product of two step-multiplier operands split at `width` bits:
/// value = hi * 2^width + lo, with lo < 2^width.
struct WordProduct {
  u64 lo = 0;
  u64 hi = 0;
  unsigned width = 32;

  [[nodiscard]] u128 value() const { return (static_cast<u128>(hi) << width) + lo; }
};

/// Intermediates of one Barrett multiplication, exposed for the
/// software/hardware equivalence checks.
struct BarrettTrace {
  u128 t1 = 0;
  u64 t1_high = 0;  // hardware path only
  u64 t2 = 0;
  u128 t3 = 0;
  u64 t4 = 0;
  u64 z = 0;
};

bool is_prime(u64 x);

/// Prime factors of x (distinct, ascending). Trial division plus Pollard rho.
std::vector<u64> prime_factors(u64 x);

Modulus barrett_precompute(u64 q);

/// Barrett precompute plus primitive root, and checks q = 1 (mod 2N).
Modulus ntt_modulus(u64 q, u64 n);

u64 barrett_mul_soft(u64 a, u64 b, const Modulus& mod);
BarrettTrace barrett_mul_soft_traced(u64 a, u64 b, const Modulus& mod);

/// Step-multiplier width used by the hardware path for a k-bit modulus.
unsigned default_step_width(unsigned k);

/// Hardware-friendly Barrett multiplication. Requires mod.k <= width.
u64 barrett_mul_hw(u64 a, u64 b, const Modulus& mod, unsigned width);
inline u64 barrett_mul_hw(u64 a, u64 b, const Modulus& mod) {
  return barrett_mul_hw(a, b, mod, default_step_width(mod.k));
}
BarrettTrace barrett_mul_hw_traced(u64 a, u64 b, const Modulus& mod, unsigned width);

/// Split-operand multiplication: each operand is cut into MSBs [W:W/2] and
/// LSBs [W/2-1:0], the four partial products are shifted and added. Operands
/// may carry one extra MSB (< 2^(W+1)) for W < 64.
WordProduct step_multiply(u64 a, u64 b, unsigned width = 32);

/// x/2 mod q for odd q.
u64 half_mod(u64 x, u64 q);

inline u64 add_mod(u64 a, u64 b, u64 q) {
  const u64 s = a + b;  // a, b < q < 2^63
  return s >= q ? s - q : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }

u64 mod_pow(u64 base, u64 exp, const Modulus& mod);

u64 find_primitive_root(u64 q);

/// The index-th largest prime q < 2^bits with q = 1 (mod 2N), searching down
/// from the top in steps of 2N.
u64 find_ntt_prime(unsigned bits, u64 n, unsigned index);

}  // namespace nttacc
