#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lorch/algebra.hpp"
#include "lorch/field.hpp"
#include "lorch/types.hpp"

namespace lorch {

struct EquationResidual {
  std::string label;
  double value;
};

/// Residuals of the generalized Cauchy-Riemann system of A at one point:
/// `generic` enumerates sum_i c_ijk df_i/dx_m - sum_i c_imk df_i/dx_j over all
/// (j < m, k); `labeled` is the family-specific schoolbook form of the same
/// system, kept for reporting.
struct GcreResiduals {
  std::vector<EquationResidual> generic;
  std::vector<EquationResidual> labeled;
  double max_generic() const;
  double max_labeled() const;
};

GcreResiduals gcre_residuals(const FieldDef& F, const AlgebraSpec& A, const Vec& w);

/// Same equations evaluated on a raw Jacobian matrix (no field needed).
GcreResiduals gcre_residuals_of_jacobian(const Mat& J, const AlgebraSpec& A);

/// Frobenius distance of J to span{R(e_1),...,R(e_n)}, normalized by
/// ||J||_F + 1, plus the least-squares coordinates of the projection.
struct MembershipResult {
  Vec coords;
  double residual;
};
MembershipResult representation_membership(const Mat& J, const AlgebraSpec& A);

struct GcreSample {
  Vec point;
  double membership_residual = 0.0;
  std::vector<EquationResidual> equations;  // labeled family form
  double max_equation_residual = 0.0;
  bool skipped = false;
  std::string message;
};

struct GcreReport {
  std::vector<GcreSample> samples;
  double tol = 0.0;
  bool verdict = false;
  double max_membership = 0.0;
  double max_equation = 0.0;
  std::string equation_set;  // name of the family form used
};

/// Default check tolerance: tighter when F differentiates exactly.
double default_tolerance(const FieldDef& F);

/// Verdict is positive iff membership and every GCRE residual stay within tol
/// at every (non-skipped) sample.
GcreReport check_algebrizable(const FieldDef& F, const AlgebraSpec& A,
                              const std::vector<Vec>& samples, double tol);

/// R^{-1}(JF(w)) by least squares; throws NotAlgebrizable when the membership
/// residual exceeds tol (default chosen from F's differentiation mode).
Vec a_derivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w,
                 std::optional<double> tol = std::nullopt);

struct InferenceResult {
  Family family;
  std::array<int, 3> roles{0, 1, 2};
  std::vector<double> params;        // fitted p1.. (empty for parameterless families)
  std::array<double, 3> fitted_tail{0, 0, 0};  // p7..p9 as fitted (A3_r only)
  std::array<double, 3> derived_tail{0, 0, 0}; // p7..p9 from the fitted p1..p6
  double fit_residual = 0.0;
  double ceq_residual = 0.0;         // |fitted_tail - derived_tail|, max
  bool degenerate = false;           // LS system rank-deficient
  bool verdict = false;              // passes check_algebrizable on the samples
  int n_samples = 0;
  AlgebraSpec algebra() const;
};

/// Fits every candidate family/role assignment to the sampled Jacobians and
/// returns all candidates, best first: verdict, then fit residual, with the
/// most constrained family winning ties.
std::vector<InferenceResult> infer_algebra(const FieldDef& F,
                                           const std::vector<Vec>& samples,
                                           std::optional<double> tol = std::nullopt);

/// Best passing candidate; throws NoAlgebraFound if none passes.
InferenceResult require_algebra(const FieldDef& F, const std::vector<Vec>& samples,
                                std::optional<double> tol = std::nullopt);

}  // namespace lorch
