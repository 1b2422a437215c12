#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "nttacc/modarith.hpp"

namespace nttacc {

/// An element of Z_q[x]/(x^N + 1), coefficients in ascending degree.
struct Polynomial {
  std::vector<u64> coeffs;
  Modulus mod;

  Polynomial() = default;
  Polynomial(std::vector<u64> c, Modulus m);

  static Polynomial zero(std::size_t n, const Modulus& m);

  [[nodiscard]] std::size_t size() const { return coeffs.size(); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.mod.q == b.mod.q && a.coeffs == b.coeffs;
  }
};

/// Merged powers of psi (a primitive 2N-th root of unity) for the forward
/// CT transform and of psi^-1 for the inverse GS transform. Entry j holds
/// psi^bitrev(j); stage s, group r uses entry 2^s + r.
struct TwiddleTable {
  std::vector<u64> forward;
  std::vector<u64> inverse;
  u64 psi = 0;
  u64 psi_inv = 0;
  Modulus mod;

  [[nodiscard]] std::size_t size() const { return forward.size(); }
};

/// One butterfly as executed by a reference transform, reported to an
/// optional observer. `stage` is the execution order.
struct ButterflyEvent {
  unsigned stage;
  std::size_t top;
  std::size_t bottom;
  std::size_t twiddle_index;
};
using ButterflyObserver = std::function<void(const ButterflyEvent&)>;

unsigned log2_exact(std::size_t n);
std::size_t bit_reverse(std::size_t x, unsigned bits);

TwiddleTable gen_twiddles(const Modulus& mod, std::size_t n);

// Butterfly kernels shared with the simulator's CBU model.
struct Pair {
  u64 top;
  u64 bottom;
};
Pair ct_butterfly(u64 a, u64 b, u64 w, const Modulus& mod);
Pair gs_butterfly(u64 a, u64 b, u64 w_inv, const Modulus& mod);

/// Natural order in, bit-reversed order out.
Polynomial ntt_ct(const Polynomial& poly, const TwiddleTable& tw,
                  const ButterflyObserver& observer = {});
/// Bit-reversed order in, natural order out. Each stage halves its outputs,
/// so no final N^-1 scaling is applied.
Polynomial intt_gs(const Polynomial& evals, const TwiddleTable& tw,
                   const ButterflyObserver& observer = {});

Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b, const Modulus& mod);
Polynomial polymul_ntt(const Polynomial& a, const Polynomial& b, const Modulus& mod);
Polynomial schoolbook_negacyclic(const Polynomial& a, const Polynomial& b, const Modulus& mod);

// Text format: "N q" header, then N decimal coefficients, one per line.
void write_polynomial(std::ostream& os, const Polynomial& p);
/// Reads the text format. The modulus is rebuilt from q via barrett_precompute.
Polynomial read_polynomial(std::istream& is);

}  // namespace nttacc
