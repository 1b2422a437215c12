#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <vector>

#include "nttacc/ntt.hpp"

namespace nttacc {

using BigInt = boost::multiprecision::cpp_int;

/// Pairwise-coprime word-sized moduli q_1..q_Nq with the Gauss CRT weights
/// for reconstruction modulo Q = prod q_i.
struct RnsBasis {
  std::vector<Modulus> moduli;
  BigInt big_q;
  std::vector<BigInt> q_hat;      // Q / q_i
  std::vector<u64> q_hat_inv;     // (Q / q_i)^-1 mod q_i
  std::size_t n = 0;              // polynomial length the basis serves; 0 if unchecked

  [[nodiscard]] std::size_t size() const { return moduli.size(); }
};

struct RnsPolynomial {
  std::vector<Polynomial> residue_polys;

  [[nodiscard]] std::size_t channels() const { return residue_polys.size(); }
  [[nodiscard]] std::size_t length() const {
    return residue_polys.empty() ? 0 : residue_polys.front().size();
  }
};

/// Basis over explicit primes. With `n` > 0 every prime must be 1 mod 2n and
/// carries a primitive root; `n` = 0 skips the NTT-friendliness check (small
/// CRT-only bases).
RnsBasis make_basis(const std::vector<u64>& primes, std::size_t n);

/// Deterministic chain find_ntt_prime(word_bits, n, 0..n_q-1).
RnsBasis gen_basis(unsigned word_bits, std::size_t n_q, std::size_t n);

RnsPolynomial decompose(const std::vector<BigInt>& coeffs, const RnsBasis& basis);
std::vector<BigInt> reconstruct(const RnsPolynomial& poly, const RnsBasis& basis);
RnsPolynomial rns_polymul(const RnsPolynomial& a, const RnsPolynomial& b, const RnsBasis& basis);

unsigned bit_length(const BigInt& x);

}  // namespace nttacc
