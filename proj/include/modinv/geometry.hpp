#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modinv/graded.hpp"

namespace modinv {

struct ParameterSystem {
  std::vector<Parameter> params;
  std::string provenance;  ///< dickson | norm | user
  std::vector<std::size_t> degrees() const;
};

/// c_{n,0}, ..., c_{n,n-1} with c_{n,i} of degree p^n - p^i. Built by the
/// additive recursion F_k(X) = F_{k-1}(X)^p - F_{k-1}(x_k)^{p-1} F_{k-1}(X)
/// for the product of X + v over the span of x_1..x_k.
ParameterSystem dickson(std::size_t n, Scalar p, std::size_t cap = 6561);

/// Points of V fixed by H, as columns (n x m). With forms convention A_g this
/// is the common solution space of A_h^T v = v.
Matrix fixed_points(const Subgroup& h);

/// Restriction of f to the span of the columns of w (m variables).
Poly restrict_to_span(const Poly& f, const Matrix& w);

/// True when homogeneous f_1..f_m in m variables have only the origin as
/// common zero, tested by the ideal filling degree sum(deg f_i - 1) + 1.
bool is_system_of_parameters(const std::vector<Poly>& fs);

/// Invariants of the parent group whose restrictions to V^H form a system of
/// parameters there. H trivial gives the Dickson system when it fits the cap.
ParameterSystem restricted_parameters(const Subgroup& h);

/// A certified system of parameters for k[V] made of invariants: norms of
/// forms first, the Dickson system as the last resort.
ParameterSystem default_parameters(const GroupPtr& g);

struct RationalSeries {
  std::vector<long long> numerator;        ///< coefficients in t, trailing zeros stripped
  std::vector<std::size_t> denominator;    ///< exponents e_i of prod (1 - t^{e_i})
  std::size_t window = 0;                  ///< validated on degrees 0..window
  std::vector<long long> expand(std::size_t D) const;
  std::string to_string() const;
};

enum class FitStatus { Ok, NoFit, Inconclusive };
std::string fit_status_name(FitStatus s);

struct FitResult {
  FitStatus status = FitStatus::NoFit;
  RationalSeries series;  ///< meaningful only for Ok
  std::string message;
};

/// numerator = (sum dims_d t^d) * prod (1 - t^{e_i}) truncated at D, accepted
/// when its top max(e_i) coefficients vanish.
FitResult series_fit(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& denominator);

/// Pole order at t = 1; nullopt for the zero series.
std::optional<std::size_t> krull_dim(const RationalSeries& s);

struct DepthCertificate {
  std::vector<std::string> params;
  std::vector<std::size_t> degrees;
  std::size_t max_degree = 0;
  std::size_t window = 0;  ///< D - sum of degrees; (window, D] is the guard band
  /// homology[j][t] = dim H_j(y; M)_t for t <= D.
  std::vector<std::vector<std::size_t>> homology;
  std::optional<std::size_t> depth;  ///< nullopt: the zero module
  bool certified = false;
  std::string confidence() const { return certified ? "certified" : "truncation-limited"; }
  /// Total homology dimension of H_j over degrees 0..window.
  std::size_t window_total(std::size_t j) const;
};

/// Koszul homology of the parameter action on M in internal degrees <= D.
/// Requires D >= sum of parameter degrees + slack.
DepthCertificate koszul_depth(const GradedModule& m, std::size_t D, std::size_t slack = 4, std::size_t threads = 1);
DepthCertificate koszul_depth(const GradedModule& m);

/// A module graded by the multidegree over the blocks of the action, for
/// parameters that are homogeneous in every block separately.
struct MultigradedModule {
  std::size_t max_degree = 0;
  std::vector<std::vector<std::size_t>> multidegrees;  ///< all with total degree <= max_degree
  std::map<std::vector<std::size_t>, std::size_t> dims;
  std::vector<Parameter> params;
  std::vector<std::vector<std::size_t>> param_multidegree;
  /// action[i][md] : dims[md] -> dims[md + e_i], present when the target fits.
  std::vector<std::map<std::vector<std::size_t>, Matrix>> action;
  std::vector<std::size_t> total_dims() const;
};

/// Block multidegree of a polynomial, or nullopt when it is not multihomogeneous.
std::optional<std::vector<std::size_t>> block_multidegree(const Poly& f, const std::vector<Block>& blocks);

/// T_G({1}, S) = image of the full transfer, one multidegree at a time.
MultigradedModule transfer_ideal_multigraded(const GroupPtr& g, const std::vector<Parameter>& params, std::size_t D,
                                             std::size_t threads = 1);

DepthCertificate koszul_depth(const MultigradedModule& m, std::size_t slack = 4, std::size_t threads = 1);

/// Length of the longest prefix y_1..y_k acting injectively, each modulo the
/// previous ones, in every degree where the check fits below D.
std::size_t regular_prefix(const GradedModule& m, std::size_t D);

}  // namespace modinv
