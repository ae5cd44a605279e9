#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modinv/geometry.hpp"

namespace modinv {

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

using Witness = std::vector<std::pair<std::string, std::string>>;

struct Check {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  Witness witness;
};

/// Outcome of a verification suite. Findings are computed values that are
/// reported but never judged.
struct Report {
  std::string suite;
  std::vector<Check> checks;
  Witness findings;

  std::size_t count(Verdict v) const;
  bool passed() const { return count(Verdict::Fail) == 0; }
  void add(std::string name, Verdict v, std::string detail = {}, Witness w = {});
  void append(const Report& other);
};

/// S T_G(X, S) is contained in I(S_p \ X, S) in every degree up to D.
Report verify_transfer_inclusion(const GroupPtr& g, const SubgroupClass& x, std::size_t D);
/// The inclusion for the trivial, non-Sylow and all-p classes.
Report verify_inclusion_suite(const GroupPtr& g, std::size_t D);

struct EquivOptions {
  std::size_t power_bound = 0;     ///< largest exponent tried on kernel elements; 0 means |G|
  std::size_t p_power_bound = 0;   ///< largest j for p^j powers; 0 means ceil(log_p |G|) + 1
};

/// Degreewise checks of the square of rings built from the non-Sylow transfer
/// ideal and the Sylow fixed-point ideal. Powers of degree-d elements are
/// tested in their own degree, which may exceed D.
Report verify_equiv_diagram(GradedEngine& e, std::size_t D, EquivOptions opt = {});

/// dim Hom_G(M, S_d) <= dim Hom_P(M, S_d) for a Sylow subgroup P.
Report verify_mackey(const GroupPtr& g, const std::vector<GModule>& modules, std::size_t D);

/// Dimension and depth bounds for the Hom, Tate, Brauer and Hom-oplus modules
/// of an indecomposable M. Parameters default to default_parameters(G).
Report verify_depth_bounds(GradedEngine& e, const GModule& m, std::size_t D,
                           const std::optional<ParameterSystem>& params = std::nullopt, std::size_t slack = 4);

/// Checks on the invariant summand algebra and on every registered class:
/// growth of Hom-oplus bounded by the Sylow fixed points, and the algebra is
/// Cohen-Macaulay over the given parameters.
Report verify_summand(GradedEngine& e, std::size_t D, const std::optional<ParameterSystem>& params = std::nullopt,
                      std::size_t slack = 4);

/// The Sylow subgroups of G, all conjugates.
std::vector<Subgroup> sylow_conjugates(const GroupPtr& g);

}  // namespace modinv
