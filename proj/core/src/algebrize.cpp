#include "lorch/algebrize.hpp"

#include <algorithm>
#include <cmath>

#include "lorch/errors.hpp"

namespace lorch {

namespace {

std::string dname(int i, int j) {
  return "df" + std::to_string(i + 1) + "/dx" + std::to_string(j + 1);
}

std::vector<EquationResidual> generic_residuals(const Mat& J, const AlgebraSpec& A) {
  const int n = A.dim();
  std::vector<EquationResidual> out;
  for (int j = 0; j < n; ++j) {
    for (int m = j + 1; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < n; ++i) {
          lhs += A.c(i, j, k) * J(i, m);
          rhs += A.c(i, m, k) * J(i, j);
        }
        out.push_back({"cre(j=" + std::to_string(j + 1) + ",m=" + std::to_string(m + 1) +
                           ",k=" + std::to_string(k + 1) + ")",
                       lhs - rhs});
      }
    }
  }
  return out;
}

std::vector<EquationResidual> labeled_residuals(const Mat& J, const AlgebraSpec& A) {
  const auto& roles = A.roles();
  const int r = roles[0], s = roles[1], t = roles[2];
  const auto& p = A.params();
  std::vector<EquationResidual> out;
  switch (A.family()) {
    case Family::A2_r: {
      const double p1 = p[0], p2 = p[1];
      out.push_back({dname(r, s) + " = p1 " + dname(s, r), J(r, s) - p1 * J(s, r)});
      out.push_back({dname(s, s) + " = " + dname(r, r) + " + p2 " + dname(s, r),
                     J(s, s) - J(r, r) - p2 * J(s, r)});
      break;
    }
    case Family::A2_12: {
      out.push_back({dname(0, 1) + " = 0", J(0, 1)});
      out.push_back({dname(1, 0) + " = 0", J(1, 0)});
      break;
    }
    case Family::A3_r: {
      const double p1 = p[0], p2 = p[1], p3 = p[2], p4 = p[3], p5 = p[4], p6 = p[5];
      const double p7 = A.derived()[0], p8 = A.derived()[1], p9 = A.derived()[2];
      const double a = J(s, r), b = J(t, r);
      out.push_back({dname(r, s) + " = p7 " + dname(s, r) + " + p8 " + dname(t, r),
                     J(r, s) - p7 * a - p8 * b});
      out.push_back({dname(r, t) + " = p8 " + dname(s, r) + " + p9 " + dname(t, r),
                     J(r, t) - p8 * a - p9 * b});
      out.push_back({dname(s, s) + " = " + dname(r, r) + " + p1 " + dname(s, r) +
                         " + p3 " + dname(t, r),
                     J(s, s) - J(r, r) - p1 * a - p3 * b});
      out.push_back({dname(s, t) + " = p3 " + dname(s, r) + " + p5 " + dname(t, r),
                     J(s, t) - p3 * a - p5 * b});
      out.push_back({dname(t, s) + " = p2 " + dname(s, r) + " + p4 " + dname(t, r),
                     J(t, s) - p2 * a - p4 * b});
      out.push_back({dname(t, t) + " = " + dname(r, r) + " + p4 " + dname(s, r) +
                         " + p6 " + dname(t, r),
                     J(t, t) - J(r, r) - p4 * a - p6 * b});
      break;
    }
    case Family::A3_rs: {
      const double p1 = p[0], p2 = p[1];
      out.push_back({dname(r, s) + " = 0", J(r, s)});
      out.push_back({dname(r, t) + " = 0", J(r, t)});
      out.push_back({dname(s, r) + " = 0", J(s, r)});
      out.push_back({dname(t, r) + " = 0", J(t, r)});
      out.push_back({dname(s, t) + " = p1 " + dname(t, s), J(s, t) - p1 * J(t, s)});
      out.push_back({dname(t, t) + " = " + dname(s, s) + " + p2 " + dname(t, s),
                     J(t, t) - J(s, s) - p2 * J(t, s)});
      break;
    }
    case Family::A3_123: {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i != j) out.push_back({dname(i, j) + " = 0", J(i, j)});
        }
      }
      break;
    }
  }
  return out;
}

double max_abs(const std::vector<EquationResidual>& v) {
  double m = 0.0;
  for (const auto& e : v) m = std::max(m, std::abs(e.value));
  return m;
}

const char* equation_set_name(Family f) {
  switch (f) {
    case Family::A2_r: return "planar-two-parameter";
    case Family::A2_12: return "planar-componentwise";
    case Family::A3_r: return "six-parameter";
    case Family::A3_rs: return "split-pair";
    case Family::A3_123: return "componentwise";
  }
  return "?";
}

}  // namespace

double GcreResiduals::max_generic() const { return max_abs(generic); }
double GcreResiduals::max_labeled() const { return max_abs(labeled); }

GcreResiduals gcre_residuals_of_jacobian(const Mat& J, const AlgebraSpec& A) {
  GcreResiduals out;
  out.generic = generic_residuals(J, A);
  out.labeled = labeled_residuals(J, A);
  return out;
}

GcreResiduals gcre_residuals(const FieldDef& F, const AlgebraSpec& A, const Vec& w) {
  return gcre_residuals_of_jacobian(F.jacobian(w), A);
}

MembershipResult representation_membership(const Mat& J, const AlgebraSpec& A) {
  const int n = A.dim();
  Eigen::MatrixXd M(n * n, n);
  for (int i = 0; i < n; ++i) {
    Vec ei = Vec::Zero(n);
    ei[i] = 1.0;
    const Mat Ri = representation(ei, A);
    for (int col = 0; col < n; ++col) {
      for (int row = 0; row < n; ++row) M(col * n + row, i) = Ri(row, col);
    }
  }
  Eigen::VectorXd b(n * n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) b(col * n + row) = J(row, col);
  }
  const Eigen::VectorXd u = M.colPivHouseholderQr().solve(b);
  const double dist = (M * u - b).norm();
  MembershipResult res;
  res.coords = Vec(n);
  for (int i = 0; i < n; ++i) res.coords[i] = u(i);
  res.residual = dist / (J.norm() + 1.0);
  return res;
}

double default_tolerance(const FieldDef& F) {
  return F.exact_jacobian() ? 1e-9 : 1e-5;
}

GcreReport check_algebrizable(const FieldDef& F, const AlgebraSpec& A,
                              const std::vector<Vec>& samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample point");
  GcreReport report;
  report.tol = tol;
  report.equation_set = equation_set_name(A.family());
  bool all_ok = true;
  int evaluated = 0;
  for (const Vec& w : samples) {
    GcreSample entry;
    entry.point = w;
    try {
      const Mat J = F.jacobian(w);
      entry.membership_residual = representation_membership(J, A).residual;
      entry.equations = labeled_residuals(J, A);
      entry.max_equation_residual = max_abs(entry.equations);
      ++evaluated;
    } catch (const DomainError& e) {
      entry.skipped = true;
      entry.message = e.what();
      report.samples.push_back(std::move(entry));
      continue;
    }
    report.max_membership = std::max(report.max_membership, entry.membership_residual);
    report.max_equation = std::max(report.max_equation, entry.max_equation_residual);
    if (entry.membership_residual > tol || entry.max_equation_residual > tol) {
      all_ok = false;
    }
    report.samples.push_back(std::move(entry));
  }
  if (evaluated == 0) {
    throw DomainError("every sample point left the field's domain", "check_algebrizable");
  }
  report.verdict = all_ok;
  return report;
}

Vec a_derivative(const FieldDef& F, const AlgebraSpec& A, const Vec& w,
                 std::optional<double> tol) {
  const double t = tol.value_or(default_tolerance(F));
  const Mat J = F.jacobian(w);
  const MembershipResult m = representation_membership(J, A);
  if (m.residual > t) throw NotAlgebrizable(m.residual);
  return m.coords;
}

// ---------------------------------------------------------------------------
// Inference

namespace {

struct CandidateSpec {
  Family family;
  std::array<int, 3> roles;
};

std::vector<CandidateSpec> candidates_for_dim(int dim) {
  std::vector<CandidateSpec> out;
  if (dim == 2) {
    out.push_back({Family::A2_12, {0, 1, 2}});
    out.push_back({Family::A2_r, {0, 1, 2}});
    out.push_back({Family::A2_r, {1, 0, 2}});
  } else {
    out.push_back({Family::A3_123, {0, 1, 2}});
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) {
        if (s == r) continue;
        const int t = 3 - r - s;
        out.push_back({Family::A3_rs, {r, s, t}});
      }
    }
    for (int r = 0; r < 3; ++r) {
      std::array<int, 3> roles{r, 0, 0};
      int next = 1;
      for (int i = 0; i < 3; ++i) {
        if (i != r) roles[next++] = i;
      }
      out.push_back({Family::A3_r, roles});
    }
  }
  return out;
}

int family_rank(Family f) {
  switch (f) {
    case Family::A3_123: return 0;
    case Family::A3_rs: return 1;
    case Family::A3_r: return 2;
    case Family::A2_12: return 0;
    case Family::A2_r: return 1;
  }
  return 9;
}

// Linear least-squares rows for one candidate at one Jacobian. Rows without
// parameter dependence contribute only to the residual.
void candidate_rows(const CandidateSpec& cand, const Mat& J,
                    std::vector<std::vector<double>>* coeffs, std::vector<double>* rhs) {
  const int r = cand.roles[0], s = cand.roles[1], t = cand.roles[2];
  auto add = [&](std::vector<double> row, double b) {
    coeffs->push_back(std::move(row));
    rhs->push_back(b);
  };
  switch (cand.family) {
    case Family::A2_r: {
      // unknowns (p1, p2)
      add({J(s, r), 0.0}, J(r, s));
      add({0.0, J(s, r)}, J(s, s) - J(r, r));
      break;
    }
    case Family::A2_12: {
      add({}, J(0, 1));
      add({}, J(1, 0));
      break;
    }
    case Family::A3_r: {
      // unknowns (p1..p9)
      const double a = J(s, r), b = J(t, r), drr = J(r, r);
      auto row9 = [](std::initializer_list<std::pair<int, double>> terms) {
        std::vector<double> row(9, 0.0);
        for (auto [i, v] : terms) row[i] = v;
        return row;
      };
      add(row9({{6, a}, {7, b}}), J(r, s));
      add(row9({{7, a}, {8, b}}), J(r, t));
      add(row9({{0, a}, {2, b}}), J(s, s) - drr);
      add(row9({{2, a}, {4, b}}), J(s, t));
      add(row9({{1, a}, {3, b}}), J(t, s));
      add(row9({{3, a}, {5, b}}), J(t, t) - drr);
      break;
    }
    case Family::A3_rs: {
      // unknowns (p1, p2)
      add({}, J(r, s));
      add({}, J(r, t));
      add({}, J(s, r));
      add({}, J(t, r));
      add({J(t, s), 0.0}, J(s, t));
      add({0.0, J(t, s)}, J(t, t) - J(s, s));
      break;
    }
    case Family::A3_123: {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i != j) add({}, J(i, j));
        }
      }
      break;
    }
  }
}

int param_count_for(Family f) {
  switch (f) {
    case Family::A3_r: return 9;  // p1..p9 fitted as independent linears
    case Family::A2_r:
    case Family::A3_rs: return 2;
    default: return 0;
  }
}

}  // namespace

AlgebraSpec InferenceResult::algebra() const {
  return make_algebra(family, roles, params);
}

std::vector<InferenceResult> infer_algebra(const FieldDef& F,
                                           const std::vector<Vec>& samples,
                                           std::optional<double> tol) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample point");
  const double tolerance = tol.value_or(default_tolerance(F));

  std::vector<Mat> jacobians;
  std::vector<Vec> usable;
  for (const Vec& w : samples) {
    try {
      jacobians.push_back(F.jacobian(w));
      usable.push_back(w);
    } catch (const DomainError&) {
      // skipped; inference works from the evaluable samples
    }
  }
  if (jacobians.empty()) {
    throw DomainError("every sample point left the field's domain", "infer_algebra");
  }

  // General-position guard: all-scalar Jacobians fit every family.
  bool all_scalar = true;
  for (const Mat& J : jacobians) {
    const int n = static_cast<int>(J.rows());
    const double mean = J.trace() / n;
    Mat D = J;
    for (int i = 0; i < n; ++i) D(i, i) -= mean;
    if (D.norm() > 1e-10 * (1.0 + J.norm())) {
      all_scalar = false;
      break;
    }
  }

  std::vector<InferenceResult> results;
  for (const CandidateSpec& cand : candidates_for_dim(F.dim())) {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const Mat& J : jacobians) candidate_rows(cand, J, &rows, &rhs);

    const int nparams = param_count_for(cand.family);
    InferenceResult res;
    res.family = cand.family;
    res.roles = cand.roles;
    res.n_samples = static_cast<int>(jacobians.size());
    res.degenerate = all_scalar;

    Eigen::VectorXd p = Eigen::VectorXd::Zero(nparams);
    if (nparams > 0) {
      Eigen::MatrixXd Amat(rows.size(), nparams);
      Eigen::VectorXd bvec(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < nparams; ++j) {
          Amat(i, j) = rows[i].empty() ? 0.0 : rows[i][j];
        }
        bvec(i) = rhs[i];
      }
      Eigen::BDCSVD<Eigen::MatrixXd> svd(Amat, Eigen::ComputeThinU | Eigen::ComputeThinV);
      p = svd.solve(bvec);
      const auto& sv = svd.singularValues();
      const double thresh =
          sv.size() ? sv(0) * 1e-12 * std::max(Amat.rows(), Amat.cols()) : 0.0;
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > thresh) ++rank;
      }
      if (rank < nparams) res.degenerate = true;
    }

    double fit = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double pred = 0.0;
      if (!rows[i].empty()) {
        for (int j = 0; j < nparams; ++j) pred += rows[i][j] * p(j);
      }
      fit = std::max(fit, std::abs(pred - rhs[i]));
    }
    res.fit_residual = fit;

    if (cand.family == Family::A3_r) {
      res.params = {p(0), p(1), p(2), p(3), p(4), p(5)};
      res.fitted_tail = {p(6), p(7), p(8)};
      res.derived_tail = derived_constants(res.params);
      res.ceq_residual = std::max({std::abs(res.fitted_tail[0] - res.derived_tail[0]),
                                   std::abs(res.fitted_tail[1] - res.derived_tail[1]),
                                   std::abs(res.fitted_tail[2] - res.derived_tail[2])});
    } else if (nparams > 0) {
      res.params = {p(0), p(1)};
    }

    const AlgebraSpec alg = res.algebra();
    res.verdict = check_algebrizable(F, alg, usable, tolerance).verdict;
    results.push_back(std::move(res));
  }

  std::sort(results.begin(), results.end(),
            [](const InferenceResult& a, const InferenceResult& b) {
              if (a.verdict != b.verdict) return a.verdict;
              const double lo = std::min(a.fit_residual, b.fit_residual);
              if (std::abs(a.fit_residual - b.fit_residual) <= 1e-12 * (1.0 + lo)) {
                return family_rank(a.family) < family_rank(b.family);
              }
              return a.fit_residual < b.fit_residual;
            });
  return results;
}

InferenceResult require_algebra(const FieldDef& F, const std::vector<Vec>& samples,
                                std::optional<double> tol) {
  const auto results = infer_algebra(F, samples, tol);
  for (const auto& r : results) {
    if (r.verdict) return r;
  }
  throw NoAlgebraFound("no candidate family passed at tolerance " +
                       std::to_string(tol.value_or(default_tolerance(F))));
}

}  // namespace lorch
