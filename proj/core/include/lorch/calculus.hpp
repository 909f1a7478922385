#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lorch/algebra.hpp"
#include "lorch/field.hpp"
#include "lorch/types.hpp"

namespace lorch {

/// Composite Gauss-Legendre settings: panels are split dyadically until two
/// successive levels agree to atol/rtol, up to 2^max_depth panels.
struct QuadratureConfig {
  double atol = 1e-10;
  double rtol = 1e-10;
  int max_depth = 14;
};

/// An oriented integration contour: a polyline or a parametric curve on
/// [0, t_end] (derivative supplied analytically or taken by differences).
class PathSpec {
 public:
  static PathSpec polyline(std::vector<Vec> points);
  static PathSpec segment(const Vec& from, const Vec& to);
  static PathSpec parametric(std::function<Vec(double)> gamma, double t_end,
                             std::function<Vec(double)> dgamma = nullptr);

  bool is_polyline() const { return !points_.empty(); }
  const std::vector<Vec>& points() const { return points_; }
  Vec at(double t) const;        // parametric form
  Vec velocity(double t) const;  // parametric form
  double t_end() const { return t_end_; }

  Vec start() const;
  Vec end() const;

 private:
  PathSpec() = default;
  std::vector<Vec> points_;
  std::function<Vec(double)> gamma_;
  std::function<Vec(double)> dgamma_;
  double t_end_ = 0.0;
};

/// Line integral of G relative to the algebra: int G(gamma(t)) gamma'(t) dt
/// with the product taken in A.
Vec line_integral_algebra(const FieldFn& G, const PathSpec& path, const AlgebraSpec& A,
                          const QuadratureConfig& quad = {});
Vec line_integral_algebra(const FieldDef& G, const PathSpec& path, const AlgebraSpec& A,
                          const QuadratureConfig& quad = {});

/// Ordinary line integral int <G, ds>.
double line_integral_euclidean(const FieldFn& G, const PathSpec& path,
                               const QuadratureConfig& quad = {});

/// Frame fields E_i(w) = e_i F(w), in basis order.
std::vector<FieldFn> frame_fields(const FieldDef& F, const AlgebraSpec& A);

/// Dual gradient fields: (G_k)_j = sum_i c_ijk g_i with (g_i) = e/F(w).
/// Satisfy <E_i, G_j> = delta_ij on the regular domain.
std::vector<FieldFn> g_fields(const FieldDef& F, const AlgebraSpec& A);

/// Central-difference curl; 3 components in 3D, the single rotation scalar
/// in 2D.
Vec fd_curl(const FieldFn& G, const Vec& w, double step_scale = 6.055454452393343e-06);

/// The rectifying antiderivative H(w) = base_value + int_{w0}^{w} e/F dxi,
/// evaluated along an admissible path (straight first, then random waypoint
/// retries inside the bounding box). Pure given (F, A, w0, base).
class Antiderivative {
 public:
  Antiderivative(FieldDef F, AlgebraSpec A, Vec base_point, Vec base_value,
                 QuadratureConfig quad = {}, std::uint64_t path_seed = 0x1005u);

  Vec operator()(const Vec& w) const { return eval(w); }
  Vec eval(const Vec& w) const;

  /// Evaluates along a caller-supplied path from the base point; values over
  /// non-homotopic paths may differ (path dependence is reported, not hidden).
  Vec eval_along(const PathSpec& path) const;

  /// Closed-form Jacobian R(inverse(F(w))).
  Mat exact_jacobian(const Vec& w) const;

  const Vec& base_point() const { return w0_; }
  const Vec& base_value() const { return h0_; }
  const AlgebraSpec& algebra() const { return A_; }
  const FieldDef& field() const { return F_; }
  const QuadratureConfig& quadrature() const { return quad_; }

 private:
  FieldDef F_;
  AlgebraSpec A_;
  Vec w0_;
  Vec h0_;
  QuadratureConfig quad_;
  std::uint64_t path_seed_;
};

Antiderivative antiderivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w0,
                              const Vec& base_value);
Antiderivative antiderivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w0);

/// Finds a piecewise-straight path from `from` to `to` whose samples stay
/// regular for F; throws PathThroughSingularSet after the waypoint retries.
PathSpec admissible_path(const FieldDef& F, const AlgebraSpec& A, const Vec& from,
                         const Vec& to, std::uint64_t seed);

enum class PotentialMode { LineIntegral, Prim10 };

/// Potential of a conservative field: h(w) - h(w0), either as int <G, ds>
/// along the straight path or by the nested coordinate-direction quadrature
/// (which needs G defined on the axis-aligned box spanned by w0, w).
double potential(const FieldFn& G, const Vec& w0, const Vec& w,
                 PotentialMode mode = PotentialMode::LineIntegral,
                 const QuadratureConfig& quad = {});

struct FirstIntegralPair {
  ScalarFn first;
  ScalarFn second;
  std::string label_first;
  std::string label_second;
};

/// The two first integrals of F built from the components of H (family
/// dependent combination). 3D only.
FirstIntegralPair first_integral_pair(const FieldDef& F, const AlgebraSpec& A,
                                      const Antiderivative& H);

}  // namespace lorch
