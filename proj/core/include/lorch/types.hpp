#pragma once

#include <Eigen/Dense>

#include <functional>
#include <initializer_list>

namespace lorch {

// All ambient spaces here are R^2 or R^3, so vectors and matrices use
// fixed-capacity Eigen storage (no heap) with a runtime dimension.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

/// A point-to-vector map, the common currency between modules.
using FieldFn = std::function<Vec(const Vec&)>;

/// A point-to-scalar map (first integrals, potentials).
using ScalarFn = std::function<double(const Vec&)>;

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec vec2(double a, double b) { return make_vec({a, b}); }
inline Vec vec3(double a, double b, double c) { return make_vec({a, b, c}); }

inline Vec zero_vec(int dim) { return Vec::Zero(dim); }

}  // namespace lorch
