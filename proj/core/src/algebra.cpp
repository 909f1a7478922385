#include "lorch/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace lorch {

const char* family_name(Family f) {
  switch (f) {
    case Family::A2_r: return "A2_r";
    case Family::A2_12: return "A2_12";
    case Family::A3_r: return "A3_r";
    case Family::A3_rs: return "A3_rs";
    case Family::A3_123: return "A3_123";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "A2_r") return Family::A2_r;
  if (name == "A2_12") return Family::A2_12;
  if (name == "A3_r") return Family::A3_r;
  if (name == "A3_rs") return Family::A3_rs;
  if (name == "A3_123") return Family::A3_123;
  throw UnsupportedAlgebra("unknown algebra family: " + name);
}

int family_dim(Family f) {
  switch (f) {
    case Family::A2_r:
    case Family::A2_12: return 2;
    default: return 3;
  }
}

int family_param_count(Family f) {
  switch (f) {
    case Family::A2_r: return 2;
    case Family::A3_rs: return 2;
    case Family::A3_r: return 6;
    default: return 0;
  }
}

std::array<double, 3> derived_constants(const std::vector<double>& p) {
  const double p1 = p[0], p2 = p[1], p3 = p[2], p4 = p[3], p5 = p[4], p6 = p[5];
  // Forced by associativity of the product table on the triples (s,s,t) and
  // (s,t,t); see the errata comparison `derived_constants_sign`.
  return {p2 * p3 + p4 * p4 - p1 * p4 - p2 * p6,
          p2 * p5 - p3 * p4,
          p3 * p3 + p4 * p5 - p1 * p5 - p3 * p6};
}

double AlgebraSpec::regularity_tolerance(const Vec& a) const {
  return 1e-9 * std::pow(1.0 + a.norm(), dim_);
}

AlgebraSpec make_algebra(Family family, std::array<int, 3> roles,
                         const std::vector<double>& params) {
  const int dim = family_dim(family);
  const int nparams = family_param_count(family);
  if (static_cast<int>(params.size()) != nparams) {
    throw std::invalid_argument(std::string(family_name(family)) + " takes " +
                                std::to_string(nparams) + " parameters, got " +
                                std::to_string(params.size()));
  }
  {
    std::array<int, 3> sorted = roles;
    if (dim == 2) sorted[2] = 2;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2}) {
      throw std::invalid_argument("roles must be a permutation of the basis indices");
    }
  }

  AlgebraSpec A;
  A.dim_ = dim;
  A.family_ = family;
  A.roles_ = roles;
  A.params_ = params;
  A.unit_ = Vec::Zero(dim);

  const int r = roles[0], s = roles[1], t = roles[2];
  auto& c = A.c_;

  switch (family) {
    case Family::A2_r: {
      const double p1 = params[0], p2 = params[1];
      for (int j = 0; j < 2; ++j) c[r][j][j] = 1.0;  // e_r is the unit
      c[s][r][s] = 1.0;
      c[s][s][r] = p1;
      c[s][s][s] = p2;
      A.unit_[r] = 1.0;
      break;
    }
    case Family::A2_12: {
      c[0][0][0] = 1.0;
      c[1][1][1] = 1.0;
      A.unit_ = vec2(1.0, 1.0);
      break;
    }
    case Family::A3_r: {
      const double p1 = params[0], p2 = params[1], p3 = params[2];
      const double p4 = params[3], p5 = params[4], p6 = params[5];
      A.derived_ = derived_constants(params);
      const double p7 = A.derived_[0], p8 = A.derived_[1], p9 = A.derived_[2];
      for (int j = 0; j < 3; ++j) {
        c[r][j][j] = 1.0;
        if (j != r) c[j][r][j] = 1.0;
      }
      c[s][s][r] = p7; c[s][s][s] = p1; c[s][s][t] = p2;
      c[s][t][r] = p8; c[s][t][s] = p3; c[s][t][t] = p4;
      c[t][s][r] = p8; c[t][s][s] = p3; c[t][s][t] = p4;
      c[t][t][r] = p9; c[t][t][s] = p5; c[t][t][t] = p6;
      A.unit_[r] = 1.0;
      break;
    }
    case Family::A3_rs: {
      const double p1 = params[0], p2 = params[1];
      c[r][r][r] = 1.0;
      c[s][s][s] = 1.0;
      c[s][t][t] = 1.0;
      c[t][s][t] = 1.0;
      c[t][t][s] = p1;
      c[t][t][t] = p2;
      A.unit_[r] = 1.0;
      A.unit_[s] = 1.0;
      break;
    }
    case Family::A3_123: {
      for (int i = 0; i < 3; ++i) c[i][i][i] = 1.0;
      A.unit_ = vec3(1.0, 1.0, 1.0);
      break;
    }
  }
  return A;
}

AlgebraSpec make_algebra(Family family, int r, const std::vector<double>& params) {
  const int dim = family_dim(family);
  std::array<int, 3> roles{0, 1, 2};
  if (r < 0 || r >= dim) throw std::invalid_argument("role index out of range");
  int next = 0;
  roles[0] = r;
  for (int i = 0; i < dim; ++i) {
    if (i != r) roles[1 + next++] = i;
  }
  if (dim == 2) roles[2] = 2;
  return make_algebra(family, roles, params);
}

static void check_dims(const Vec& a, const AlgebraSpec& A) {
  if (a.size() != A.dim()) {
    throw DimensionMismatch("element has dimension " + std::to_string(a.size()) +
                            ", algebra has dimension " + std::to_string(A.dim()));
  }
}

Vec product(const Vec& a, const Vec& b, const AlgebraSpec& A) {
  check_dims(a, A);
  check_dims(b, A);
  const int n = A.dim();
  Vec out = Vec::Zero(n);
  // Symmetric accumulation: the (i,j) and (j,i) contributions are combined
  // before multiplying by c_ijk, so swapping a and b cannot change rounding.
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += a[i] * b[i] * A.c(i, i, k);
      for (int j = i + 1; j < n; ++j) {
        acc += (a[i] * b[j] + a[j] * b[i]) * A.c(i, j, k);
      }
    }
    out[k] = acc;
  }
  return out;
}

Mat representation(const Vec& a, const AlgebraSpec& A) {
  check_dims(a, A);
  const int n = A.dim();
  Mat R = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += a[i] * A.c(i, k, j);
      R(j, k) = acc;
    }
  }
  return R;
}

double det_representation(const Vec& a, const AlgebraSpec& A) {
  return representation(a, A).determinant();
}

Vec inverse(const Vec& a, const AlgebraSpec& A) {
  check_dims(a, A);
  const Mat R = representation(a, A);
  const double det = R.determinant();
  if (std::abs(det) <= A.regularity_tolerance(a)) throw SingularElement(det);
  Vec x = R.partialPivLu().solve(A.unit());
  // One refinement pass keeps the product residual near machine precision
  // even when R(a) is poorly conditioned.
  const Vec res = A.unit() - product(a, x, A);
  x += product(x, res, A);
  return x;
}

Vec power(const Vec& a, int k, const AlgebraSpec& A) {
  check_dims(a, A);
  if (k == 0) return A.unit();
  Vec base = k > 0 ? a : inverse(a, A);
  int m = k > 0 ? k : -k;
  Vec acc = A.unit();
  while (m > 0) {
    if (m & 1) acc = product(acc, base, A);
    base = product(base, base, A);
    m >>= 1;
  }
  return acc;
}

}  // namespace lorch
