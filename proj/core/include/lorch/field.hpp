#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lorch/algebra.hpp"
#include "lorch/errors.hpp"
#include "lorch/types.hpp"

namespace lorch {

enum class ExprKind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class ExprFn { Sin, Cos, Exp, Log, Sqrt };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression AST over {constants, x1..x3, + - * /, integer ^,
/// unary -, sin cos exp log sqrt}.
struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Const
  int var = 0;         // Var, 0-based
  int exponent = 0;    // Pow
  ExprFn fn = ExprFn::Sin;
  Expr a, b;
};

double eval_expr(const Expr& e, const Vec& w);
std::string to_string(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);

/// A vector field on R^dim: either one parsed expression per component, or an
/// algebra polynomial a0 + a1 w + ... + am w^m with coefficients in the
/// algebra. Immutable after construction; eval/jacobian are pure.
class FieldDef {
 public:
  static FieldDef components(int dim, std::vector<Expr> comps);
  static FieldDef polynomial(const AlgebraSpec& A, std::vector<Vec> coeffs);

  int dim() const { return dim_; }
  bool is_polynomial() const { return !coeffs_.empty(); }
  const std::vector<Expr>& component_exprs() const { return comps_; }
  const std::vector<Vec>& coefficients() const { return coeffs_; }
  const AlgebraSpec& coefficient_algebra() const;

  Vec eval(const Vec& w) const;
  Vec operator()(const Vec& w) const { return eval(w); }

  /// Central differences for expression fields; the polynomial form uses the
  /// exact derivative sum k a_k w^(k-1) through the representation.
  Mat jacobian(const Vec& w) const;
  bool exact_jacobian() const { return is_polynomial() && !force_fd_; }

  /// Copy that always differentiates by central differences.
  FieldDef with_fd_jacobian() const;

  FieldFn fn() const;

 private:
  FieldDef() = default;
  int dim_ = 0;
  std::vector<Expr> comps_;
  std::shared_ptr<const AlgebraSpec> alg_;
  std::vector<Vec> coeffs_;
  bool force_fd_ = false;
};

/// Parses the field-definition text: one `fi = <expr>` binding per component
/// (separated by `;` or newlines, `#` comments), or the polynomial form
/// `poly = [a0; a1; ...]` with comma-separated coordinate tuples, which
/// requires `poly_algebra`.
FieldDef parse_field(const std::string& text, int dim,
                     const AlgebraSpec* poly_algebra = nullptr);

/// Central-difference Jacobian of an arbitrary evaluator with per-coordinate
/// steps h_j = step_scale * max(1, |w_j|). The default scale cbrt(eps) is the
/// usual optimum for O(h^2) stencils.
Mat fd_jacobian(const FieldFn& f, const Vec& w, double step_scale = 6.055454452393343e-06);

/// Central-difference gradient of a scalar function.
Vec fd_gradient(const ScalarFn& f, const Vec& w, double step_scale = 6.055454452393343e-06);

}  // namespace lorch
