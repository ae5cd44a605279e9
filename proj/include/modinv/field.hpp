#pragma once

#include <cstdint>

#include "modinv/error.hpp"

namespace modinv {

using Scalar = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Arithmetic in F_p for a word-sized prime p (p < 2^31).
class PrimeField {
 public:
  PrimeField() = default;
  explicit PrimeField(Scalar p);

  Scalar p() const { return p_; }

  Scalar reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar a, Scalar b) const {
    Scalar s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const {
    return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Scalar pow(Scalar a, std::uint64_t e) const;
  Scalar inv(Scalar a) const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  Scalar p_ = 2;
};

}  // namespace modinv
