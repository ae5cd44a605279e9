#include "modinv/field.hpp"

#include <string>

namespace modinv {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ModulusMismatch: return "modulus-mismatch";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::GroupTooLarge: return "group-too-large";
    case ErrorCode::NotASubgroup: return "not-a-subgroup";
    case ErrorCode::NotEquivariant: return "not-equivariant";
    case ErrorCode::NotPGroup: return "not-a-p-group";
    case ErrorCode::CapExceeded: return "cap-exceeded";
    case ErrorCode::CertificationFailure: return "certification-failure";
    case ErrorCode::InternalError: return "internal-error";
    case ErrorCode::Inconclusive: return "inconclusive";
    case ErrorCode::IoFailure: return "io-failure";
  }
  return "unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(Scalar p) : p_(p) {
  if (p < 2 || p >= (1u << 31) || !is_prime(p))
    throw Error(ErrorCode::InvalidInput, "modulus " + std::to_string(p) + " is not a supported prime");
}

Scalar PrimeField::pow(Scalar a, std::uint64_t e) const {
  Scalar result = 1 % p_;
  Scalar base = a % p_;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Scalar PrimeField::inv(Scalar a) const {
  if (a % p_ == 0) throw Error(ErrorCode::InvalidInput, "inverse of zero");
  return pow(a, p_ - 2);
}

}  // namespace modinv
