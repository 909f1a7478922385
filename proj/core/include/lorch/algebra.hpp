#pragma once

#include <array>
#include <string>
#include <vector>

#include "lorch/errors.hpp"
#include "lorch/types.hpp"

namespace lorch {

/// The supported families of commutative unital algebras on R^2 and R^3.
///
///   A2_r    : unit e_r, parameters (p1, p2); e_s e_s = p1 e_r + p2 e_s.
///   A2_12   : componentwise product on R^2, unit (1, 1).
///   A3_r    : unit e_r, parameters (p1..p6); the derived constants p7..p9
///             are determined by the commutativity/associativity relations.
///   A3_rs   : unit e_r + e_s, parameters (p1, p2); e_t e_t = p1 e_s + p2 e_t.
///   A3_123  : componentwise product on R^3, unit (1, 1, 1).
enum class Family { A2_r, A2_12, A3_r, A3_rs, A3_123 };

const char* family_name(Family f);
Family family_from_name(const std::string& name);
int family_dim(Family f);
int family_param_count(Family f);

/// An algebra: R^n (n = 2, 3) with a commutative associative unital product,
/// stored as the full structure-constant table c[i][j][k] (a_i b_j -> e_k).
/// Immutable after construction; all operations on it are pure.
class AlgebraSpec {
 public:
  int dim() const { return dim_; }
  Family family() const { return family_; }
  /// Basis index (0-based) playing each role; roles()[0] = r, [1] = s, [2] = t.
  const std::array<int, 3>& roles() const { return roles_; }
  const std::vector<double>& params() const { return params_; }
  /// p7, p8, p9 for A3_r; zeros otherwise.
  const std::array<double, 3>& derived() const { return derived_; }
  const Vec& unit() const { return unit_; }

  double c(int i, int j, int k) const { return c_[i][j][k]; }

  /// Scale-aware regularity guard: |det R(a)| must exceed this for a to count
  /// as regular.
  double regularity_tolerance(const Vec& a) const;

  friend AlgebraSpec make_algebra(Family, std::array<int, 3>, const std::vector<double>&);

 private:
  AlgebraSpec() = default;

  int dim_ = 0;
  Family family_ = Family::A3_r;
  std::array<int, 3> roles_{0, 1, 2};
  std::vector<double> params_;
  std::array<double, 3> derived_{0, 0, 0};
  Vec unit_;
  double c_[3][3][3] = {};
};

/// Derived constants (p7, p8, p9) of the six-parameter 3D family, fixed by
/// requiring the product table to be associative.
std::array<double, 3> derived_constants(const std::vector<double>& p);

/// Builds an algebra from a family tag, a role permutation and parameters.
/// `roles` maps (r, s, t) to 0-based basis indices; for 2D families only the
/// first two entries are used. Throws on a wrong parameter count or if roles
/// is not a permutation.
AlgebraSpec make_algebra(Family family, std::array<int, 3> roles,
                         const std::vector<double>& params);

/// Convenience: role r = `r` (0-based), remaining indices in increasing order.
AlgebraSpec make_algebra(Family family, int r = 0, const std::vector<double>& params = {});

/// Product in the algebra. Summation is symmetrized so ab == ba holds exactly
/// in floating point.
Vec product(const Vec& a, const Vec& b, const AlgebraSpec& A);

/// First fundamental representation: R(a) b = ab for all b.
Mat representation(const Vec& a, const AlgebraSpec& A);

double det_representation(const Vec& a, const AlgebraSpec& A);

/// Multiplicative inverse; solves R(a) x = e with one refinement pass.
/// Throws SingularElement when |det R(a)| is at or below the regularity
/// tolerance.
Vec inverse(const Vec& a, const AlgebraSpec& A);

/// a^k, with a^0 = e and negative powers taken as powers of the inverse.
Vec power(const Vec& a, int k, const AlgebraSpec& A);

inline bool is_regular(const Vec& a, const AlgebraSpec& A) {
  return std::abs(det_representation(a, A)) > A.regularity_tolerance(a);
}

}  // namespace lorch
