#include "lorch/calculus.hpp"

#include <cmath>

#include "lorch/errors.hpp"
#include "lorch/rng.hpp"

namespace lorch {

namespace {

// 8-node Gauss-Legendre rule on [-1, 1].
constexpr int kNodes = 8;
constexpr double kAbscissa[kNodes] = {
    -0.9602898564975362316835609, -0.7966664774136267395915539,
    -0.5255324099163289858177390, -0.1834346424956498049394761,
    0.1834346424956498049394761,  0.5255324099163289858177390,
    0.7966664774136267395915539,  0.9602898564975362316835609};
constexpr double kWeight[kNodes] = {
    0.1012285362903762591525314, 0.2223810344533744705443560,
    0.3137066458778872873379622, 0.3626837833783619829651504,
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

// Composite rule with 2^depth panels over [a, b].
template <typename F, typename Acc>
Acc composite(const F& f, double a, double b, int depth, Acc zero) {
  const int panels = 1 << depth;
  const double len = (b - a) / panels;
  Acc total = zero;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * len;
    const double mid = lo + 0.5 * len;
    const double rad = 0.5 * len;
    for (int q = 0; q < kNodes; ++q) {
      total += (rad * kWeight[q]) * f(mid + rad * kAbscissa[q]);
    }
  }
  return total;
}

template <typename F, typename Acc, typename Norm>
Acc refine(const F& f, double a, double b, const QuadratureConfig& quad, Acc zero,
           const Norm& norm) {
  Acc prev = composite(f, a, b, 0, zero);
  for (int depth = 1; depth <= quad.max_depth; ++depth) {
    Acc cur = composite(f, a, b, depth, zero);
    if (norm(cur - prev) <= quad.atol + quad.rtol * norm(cur)) return cur;
    prev = cur;
  }
  throw NonConvergence("quadrature did not settle within the refinement depth cap");
}

double vec_norm(const Vec& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

// ---------------------------------------------------------------------------
// PathSpec

PathSpec PathSpec::polyline(std::vector<Vec> points) {
  if (points.size() < 2) throw std::invalid_argument("polyline needs at least two points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if ((points[i] - points[i - 1]).norm() == 0.0) {
      throw std::invalid_argument("consecutive polyline points must be distinct");
    }
  }
  PathSpec p;
  p.points_ = std::move(points);
  return p;
}

PathSpec PathSpec::segment(const Vec& from, const Vec& to) {
  return polyline({from, to});
}

PathSpec PathSpec::parametric(std::function<Vec(double)> gamma, double t_end,
                              std::function<Vec(double)> dgamma) {
  if (t_end <= 0.0) throw std::invalid_argument("parametric domain must be nondegenerate");
  PathSpec p;
  p.gamma_ = std::move(gamma);
  p.dgamma_ = std::move(dgamma);
  p.t_end_ = t_end;
  return p;
}

Vec PathSpec::at(double t) const { return gamma_(t); }

Vec PathSpec::velocity(double t) const {
  if (dgamma_) return dgamma_(t);
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (gamma_(t + h) - gamma_(t - h)) / (2.0 * h);
}

Vec PathSpec::start() const { return is_polyline() ? points_.front() : gamma_(0.0); }
Vec PathSpec::end() const { return is_polyline() ? points_.back() : gamma_(t_end_); }

// ---------------------------------------------------------------------------
// Line integrals

Vec line_integral_algebra(const FieldFn& G, const PathSpec& path, const AlgebraSpec& A,
                          const QuadratureConfig& quad) {
  const int n = A.dim();
  const Vec zero = Vec::Zero(n);
  if (path.is_polyline()) {
    Vec total = zero;
    const auto& pts = path.points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Vec from = pts[i - 1];
      const Vec dir = pts[i] - pts[i - 1];
      auto f = [&](double t) { return product(G(from + t * dir), dir, A); };
      total += refine(f, 0.0, 1.0, quad, zero, vec_norm);
    }
    return total;
  }
  auto f = [&](double t) { return product(G(path.at(t)), path.velocity(t), A); };
  return refine(f, 0.0, path.t_end(), quad, zero, vec_norm);
}

Vec line_integral_algebra(const FieldDef& G, const PathSpec& path, const AlgebraSpec& A,
                          const QuadratureConfig& quad) {
  return line_integral_algebra(G.fn(), path, A, quad);
}

double line_integral_euclidean(const FieldFn& G, const PathSpec& path,
                               const QuadratureConfig& quad) {
  auto norm = [](double x) { return std::abs(x); };
  if (path.is_polyline()) {
    double total = 0.0;
    const auto& pts = path.points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Vec from = pts[i - 1];
      const Vec dir = pts[i] - pts[i - 1];
      auto f = [&](double t) { return G(from + t * dir).dot(dir); };
      total += refine(f, 0.0, 1.0, quad, 0.0, norm);
    }
    return total;
  }
  auto f = [&](double t) { return G(path.at(t)).dot(path.velocity(t)); };
  return refine(f, 0.0, path.t_end(), quad, 0.0, norm);
}

// ---------------------------------------------------------------------------
// Frame and dual fields

std::vector<FieldFn> frame_fields(const FieldDef& F, const AlgebraSpec& A) {
  std::vector<FieldFn> out;
  for (int i = 0; i < A.dim(); ++i) {
    Vec ei = Vec::Zero(A.dim());
    ei[i] = 1.0;
    out.push_back([F, A, ei](const Vec& w) { return product(ei, F.eval(w), A); });
  }
  return out;
}

std::vector<FieldFn> g_fields(const FieldDef& F, const AlgebraSpec& A) {
  std::vector<FieldFn> out;
  for (int k = 0; k < A.dim(); ++k) {
    out.push_back([F, A, k](const Vec& w) {
      const Vec g = inverse(F.eval(w), A);
      const int n = A.dim();
      Vec Gk = Vec::Zero(n);
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += A.c(i, j, k) * g[i];
        Gk[j] = acc;
      }
      return Gk;
    });
  }
  return out;
}

Vec fd_curl(const FieldFn& G, const Vec& w, double step_scale) {
  const Mat J = fd_jacobian(G, w, step_scale);
  if (w.size() == 2) {
    Vec c(1);
    c[0] = J(1, 0) - J(0, 1);
    return c;
  }
  return vec3(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
}

// ---------------------------------------------------------------------------
// Admissible paths and the antiderivative

namespace {

constexpr int kPathSamples = 64;

// True when |det R(F)| clears the regularity tolerance at every sample of the
// segment; returns the first failing point otherwise.
bool segment_regular(const FieldDef& F, const AlgebraSpec& A, const Vec& from,
                     const Vec& to, Vec* blocking) {
  for (int i = 0; i < kPathSamples; ++i) {
    const double t = static_cast<double>(i) / (kPathSamples - 1);
    const Vec w = from + t * (to - from);
    bool ok = false;
    try {
      const Vec fw = F.eval(w);
      ok = std::abs(det_representation(fw, A)) > A.regularity_tolerance(fw);
    } catch (const DomainError&) {
      ok = false;
    }
    if (!ok) {
      if (blocking) *blocking = w;
      return false;
    }
  }
  return true;
}

bool polyline_regular(const FieldDef& F, const AlgebraSpec& A,
                      const std::vector<Vec>& pts, Vec* blocking) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!segment_regular(F, A, pts[i - 1], pts[i], blocking)) return false;
  }
  return true;
}

}  // namespace

PathSpec admissible_path(const FieldDef& F, const AlgebraSpec& A, const Vec& from,
                         const Vec& to, std::uint64_t seed) {
  const Vec f_from = F.eval(from);
  const double det_from = det_representation(f_from, A);
  if (std::abs(det_from) <= A.regularity_tolerance(f_from)) throw SingularElement(det_from);
  const Vec f_to = F.eval(to);
  const double det_to = det_representation(f_to, A);
  if (std::abs(det_to) <= A.regularity_tolerance(f_to)) throw SingularElement(det_to);

  Vec blocking = from;
  if (segment_regular(F, A, from, to, &blocking)) return PathSpec::segment(from, to);
  const Vec first_block = blocking;

  // Bounding box of the endpoints, inflated by half its diagonal.
  Vec lo = from.cwiseMin(to);
  Vec hi = from.cwiseMax(to);
  const Vec pad = 0.5 * (hi - lo) + Vec::Constant(lo.size(), 0.25);
  lo -= pad;
  hi += pad;

  Rng rng(seed_mix(seed, to));
  for (int attempt = 1; attempt <= 8; ++attempt) {
    std::vector<Vec> pts;
    pts.push_back(from);
    for (int k = 0; k < attempt; ++k) pts.push_back(rng.uniform_vec(lo, hi));
    pts.push_back(to);
    if (polyline_regular(F, A, pts, nullptr)) return PathSpec::polyline(std::move(pts));
  }
  throw PathThroughSingularSet(first_block);
}

Antiderivative::Antiderivative(FieldDef F, AlgebraSpec A, Vec base_point, Vec base_value,
                               QuadratureConfig quad, std::uint64_t path_seed)
    : F_(std::move(F)), A_(std::move(A)), w0_(std::move(base_point)),
      h0_(std::move(base_value)), quad_(quad), path_seed_(path_seed) {
  if (w0_.size() != A_.dim() || h0_.size() != A_.dim()) {
    throw DimensionMismatch("antiderivative base point/value dimension mismatch");
  }
  const Vec f0 = F_.eval(w0_);
  const double det = det_representation(f0, A_);
  if (std::abs(det) <= A_.regularity_tolerance(f0)) throw SingularElement(det);
}

Vec Antiderivative::eval(const Vec& w) const {
  if ((w - w0_).norm() == 0.0) return h0_;
  const PathSpec path = admissible_path(F_, A_, w0_, w, path_seed_);
  return eval_along(path);
}

Vec Antiderivative::eval_along(const PathSpec& path) const {
  auto inv = [this](const Vec& w) { return inverse(F_.eval(w), A_); };
  return h0_ + line_integral_algebra(inv, path, A_, quad_);
}

Mat Antiderivative::exact_jacobian(const Vec& w) const {
  return representation(inverse(F_.eval(w), A_), A_);
}

Antiderivative antiderivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w0,
                              const Vec& base_value) {
  return Antiderivative(F, A, w0, base_value);
}

Antiderivative antiderivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w0) {
  return Antiderivative(F, A, w0, Vec::Zero(A.dim()));
}

// ---------------------------------------------------------------------------
// Potentials

namespace {

// Fixed-depth composite rule for the inner integrals of the nested form, so
// that differentiating through it stays quiet.
double fixed_quad(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return composite(f, a, b, 6, 0.0);
}

}  // namespace

double potential(const FieldFn& G, const Vec& w0, const Vec& w, PotentialMode mode,
                 const QuadratureConfig& quad) {
  if (mode == PotentialMode::LineIntegral) {
    if ((w - w0).norm() == 0.0) return 0.0;
    return line_integral_euclidean(G, PathSpec::segment(w0, w), quad);
  }

  const int n = static_cast<int>(w.size());
  // phi1(x) = int_{w0_1}^{x_1} G_1(t, x_2, x_3) dt
  auto phi1 = [&](const Vec& x) {
    auto f = [&](double t) {
      Vec p = x;
      p[0] = t;
      return G(p)[0];
    };
    return fixed_quad(f, w0[0], x[0]);
  };
  auto d_phi1_dx2 = [&](const Vec& x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x[1]));
    Vec xp = x, xm = x;
    xp[1] += h;
    xm[1] -= h;
    return (phi1(xp) - phi1(xm)) / (2.0 * h);
  };
  // term2 = int_{w0_2}^{x_2} [G_2 - d/dx2 phi1](x_1, t, x_3) dt
  auto term12 = [&](const Vec& x) {
    auto f = [&](double t) {
      Vec p = x;
      p[1] = t;
      return G(p)[1] - d_phi1_dx2(p);
    };
    return phi1(x) + fixed_quad(f, w0[1], x[1]);
  };
  if (n == 2) return term12(w);

  // Third coordinate direction, same construction on top of the first two.
  auto d_term12_dx3 = [&](const Vec& x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x[2]));
    Vec xp = x, xm = x;
    xp[2] += h;
    xm[2] -= h;
    return (term12(xp) - term12(xm)) / (2.0 * h);
  };
  auto f3 = [&](double t) {
    Vec p = w;
    p[2] = t;
    return G(p)[2] - d_term12_dx3(p);
  };
  return term12(w) + fixed_quad(f3, w0[2], w[2]);
}

// ---------------------------------------------------------------------------
// First integrals

FirstIntegralPair first_integral_pair(const FieldDef& F, const AlgebraSpec& A,
                                      const Antiderivative& H) {
  if (A.dim() != 3) {
    throw UnsupportedAlgebra("first-integral pairs are defined for 3D algebras");
  }
  const int r = A.roles()[0], s = A.roles()[1], t = A.roles()[2];
  auto comp = [H](int i) {
    return ScalarFn([H, i](const Vec& w) { return H.eval(w)[i]; });
  };
  auto name = [](int i) { return "h" + std::to_string(i + 1); };
  FirstIntegralPair pair;
  switch (A.family()) {
    case Family::A3_r:
      pair.first = comp(s);
      pair.second = comp(t);
      pair.label_first = name(s);
      pair.label_second = name(t);
      break;
    case Family::A3_rs:
      pair.first = [H, r, s](const Vec& w) {
        const Vec h = H.eval(w);
        return h[r] - h[s];
      };
      pair.second = [H, r, s, t](const Vec& w) {
        const Vec h = H.eval(w);
        return h[r] - h[s] + h[t];
      };
      pair.label_first = name(r) + "-" + name(s);
      pair.label_second = name(r) + "-" + name(s) + "+" + name(t);
      break;
    case Family::A3_123:
      pair.first = [H, r, t](const Vec& w) {
        const Vec h = H.eval(w);
        return h[r] - h[t];
      };
      pair.second = [H, r, s](const Vec& w) {
        const Vec h = H.eval(w);
        return h[r] - h[s];
      };
      pair.label_first = name(r) + "-" + name(t);
      pair.label_second = name(r) + "-" + name(s);
      break;
    default:
      throw UnsupportedAlgebra("first-integral pairs are defined for 3D algebras");
  }
  return pair;
}

}  // namespace lorch
