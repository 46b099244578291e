#pragma once

#include <map>
#include <string>
#include <vector>

#include "vweb/forms.hpp"
#include "vweb/models.hpp"

namespace vweb {

// Jets of the chart's unknowns. Jets of univariate functions (lambda_i) and
// everything else count as coefficients.
bool is_unknown_jet(const Symbol& s, const Chart& chart);
bool is_jet_free(const Poly& p, const Chart& chart);
// Unknown-jet monomial -> coefficient polynomial.
std::map<Monomial, Poly, MonomialGreater> split_by_jets(const Poly& p, const Chart& chart);
// Divides out the jet-free polynomial content and fixes the rational scale.
Poly remove_jet_free_content(const Poly& p, const Chart& chart);
// Content removal, deduplication and greedy interreduction of generators.
std::vector<Poly> reduce_generators(std::vector<Poly> gens, const Chart& chart);

DifferentialForm integrability_residual(const DifferentialForm& alpha);
PdeSystem lambda_reduce(const DifferentialForm& residual, const Symbol& lambda, const std::string& name = "reduced");

enum class Verdict { Equal, EqualUpToFactor, Different };
std::string to_string(Verdict v);

// p = (factor_num / factor_den) * q when the verdict is not Different.
struct Equivalence {
  Verdict verdict = Verdict::Different;
  Poly factor_num;
  Poly factor_den;
  std::string factor_text(const Chart* chart = nullptr) const;
};

Equivalence equivalent_up_to_factor(const Expr& p, const Expr& q, const Chart& chart);
Equivalence equivalent_up_to_factor(const Pde& p, const Pde& q);

// True if m * extra is a combination sum c_ij v_j member_i with jet-free c_ij,
// v_j ranging over first-order unknown jets and 1, for some first-order jet m.
bool is_consequence(const Expr& extra, const std::vector<Expr>& members, const Chart& chart);

struct MemberMatch {
  int target = -1;  // index into the target system, -1 if none
  Equivalence equivalence;
  bool consequence = false;
};

struct SystemComparison {
  std::vector<MemberMatch> derived;  // one per derived member
  std::vector<bool> target_covered;
  bool ok = false;
  bool all_equal = false;  // every match has factor 1 and no extras
};

SystemComparison compare_systems(const std::vector<Expr>& derived, const PdeSystem& target);
SystemComparison compare_systems(const PdeSystem& derived, const PdeSystem& target);

PdeSystem frobenius_conditions(const std::vector<VectorField>& fields, const Symbol& lambda,
                               const std::string& name = "frobenius");

enum class Eliminate { F, H };
PdeSystem cross_compatibility(const PdeSystem& system, Eliminate which);

}  // namespace vweb
