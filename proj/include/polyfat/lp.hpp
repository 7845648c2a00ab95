#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "polyfat/error.hpp"
#include "polyfat/geometry.hpp"
#include "polyfat/perceptron.hpp"

namespace polyfat {

/// System A x < b (strict) or A x <= b, depending on the solver.
struct StrictLp {
  Eigen::MatrixXd a;
  Vector b;

  StrictLp(Eigen::MatrixXd a_, Vector b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.rows() != b.size()) throw DimensionMismatch(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.size()));
    if (!a.allFinite() || !b.allFinite()) throw DomainError("linear system has non-finite entries");
  }
  std::size_t rows() const { return static_cast<std::size_t>(a.rows()); }
  std::size_t vars() const { return static_cast<std::size_t>(a.cols()); }
};

/// Homogeneous separator: w with p.w > 0 for every supplied point, or a failure.
using Separator = std::function<Result<Vector>(std::span<const Vector>)>;

inline Separator perceptron_separator(std::size_t max_updates = 200'000) {
  return [max_updates](std::span<const Vector> points) -> Result<Vector> {
    auto fit = homogeneous_perceptron(points, 0.0, max_updates);
    if (!fit) return fit.failure();
    return fit->w;
  };
}

enum class LpStatus { Solved, InfeasibleOrTimeout, Degenerate };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Solved: return "solved";
    case LpStatus::InfeasibleOrTimeout: return "infeasible_or_timeout";
    case LpStatus::Degenerate: return "degenerate";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::InfeasibleOrTimeout;
  Vector x;
  std::string detail;
  std::size_t oracle_calls = 0;

  bool solved() const { return status == LpStatus::Solved; }
};

/// Solves A x < b with one separator call on the unit-normalized points
/// (-A_i, b_i) and (0, ..., 0, 1): a separating w = (x', t) has t > 0 and
/// x = x' / t. The answer is re-checked before it is returned.
inline LpResult lp_strict_solve(const StrictLp& lp, const Separator& sep) {
  const auto n = static_cast<Eigen::Index>(lp.vars());
  LpResult out;
  out.oracle_calls = 1;
  std::vector<Vector> pts;
  pts.reserve(lp.rows() + 1);
  for (Eigen::Index i = 0; i < lp.a.rows(); ++i) {
    Vector p(n + 1);
    p.head(n) = -lp.a.row(i).transpose();
    p[n] = lp.b[i];
    const double norm = p.norm();
    if (norm == 0.0) {
      out.detail = "row " + std::to_string(i) + " reads 0 < 0";
      return out;
    }
    pts.push_back(p / norm);
  }
  Vector top = Vector::Zero(n + 1);
  top[n] = 1.0;
  pts.push_back(top);

  auto w = sep(pts);
  if (!w) {
    out.detail = std::string("separator failed: ") + w.failure().detail;
    return out;
  }
  const Vector& wv = *w;
  if (wv.size() != n + 1) throw DimensionMismatch(static_cast<std::size_t>(n + 1), static_cast<std::size_t>(wv.size()));
  if (!(wv[n] > 0.0)) {
    out.detail = "separator returned a hyperplane without positive last coordinate";
    return out;
  }
  Vector x = wv.head(n) / wv[n];
  if (lp.rows() > 0 && !((lp.a * x - lp.b).maxCoeff() < 0.0)) {
    out.detail = "separator output does not satisfy the strict system in floating point";
    return out;
  }
  out.status = LpStatus::Solved;
  out.x = std::move(x);
  return out;
}

using StrictSolver = std::function<LpResult(const StrictLp&)>;

inline StrictSolver perceptron_strict_solver(std::size_t max_updates = 200'000) {
  return [sep = perceptron_separator(max_updates)](const StrictLp& lp) { return lp_strict_solve(lp, sep); };
}

struct LpTolerances {
  double pivot = 1e-10;     // smallest acceptable elimination pivot
  double zero_row = 1e-13;  // rows below this are treated as 0 <= b
  double feasibility = 1e-8;
};

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline LpResult lp_solve_rec(const Eigen::MatrixXd& a, const Vector& b, const StrictSolver& z, const LpTolerances& tol,
                             std::size_t& calls) {
  const Eigen::Index n = a.cols();
  LpResult out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (n == 0 || a.row(i).cwiseAbs().maxCoeff() <= tol.zero_row) {
      if (b[i] < -tol.feasibility) {
        out.detail = "row " + std::to_string(i) + " reduces to 0 <= " + num(b[i]);
        return out;
      }
      continue;
    }
    keep.push_back(i);
  }
  if (keep.empty()) {
    out.status = LpStatus::Solved;
    out.x = Vector::Zero(n);
    return out;
  }
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd ak(m, n);
  Vector bk(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    ak.row(r) = a.row(keep[static_cast<std::size_t>(r)]);
    bk[r] = b[keep[static_cast<std::size_t>(r)]];
  }

  // Forward sweep: grow a maximal strictly feasible row set.
  std::vector<Eigen::Index> in_s;
  Vector x_s;
  std::vector<Eigen::Index> outside;
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<Eigen::Index> trial = in_s;
    trial.push_back(i);
    Eigen::MatrixXd at(static_cast<Eigen::Index>(trial.size()), n);
    Vector bt(static_cast<Eigen::Index>(trial.size()));
    for (std::size_t r = 0; r < trial.size(); ++r) {
      at.row(static_cast<Eigen::Index>(r)) = ak.row(trial[r]);
      bt[static_cast<Eigen::Index>(r)] = bk[trial[r]];
    }
    ++calls;
    auto res = z(StrictLp(at, bt));
    if (res.solved()) {
      in_s = std::move(trial);
      x_s = std::move(res.x);
    } else {
      outside.push_back(i);
    }
  }
  if (outside.empty()) {
    out.status = LpStatus::Solved;
    out.x = std::move(x_s);
    return out;
  }

  // Row j outside the set must hold with equality; solve it for the variable
  // with the largest coefficient and substitute.
  const Eigen::Index j = outside.front();
  Eigen::Index p = 0;
  const double piv_abs = ak.row(j).cwiseAbs().maxCoeff(&p);
  if (piv_abs < tol.pivot) {
    out.status = LpStatus::Degenerate;
    out.detail = "equality row pivot " + num(piv_abs) + " is below tolerance";
    return out;
  }
  const double piv = ak(j, p);
  // x_p = (b_j - sum_{q != p} a_jq x_q) / piv = c + g . x_rest
  Vector g(n - 1);
  for (Eigen::Index q = 0, r = 0; q < n; ++q)
    if (q != p) g[r++] = -ak(j, q) / piv;
  const double c = bk[j] / piv;

  Eigen::MatrixXd a2(m - 1, n - 1);
  Vector b2(m - 1);
  for (Eigen::Index i = 0, r = 0; i < m; ++i) {
    if (i == j) continue;
    for (Eigen::Index q = 0, s = 0; q < n; ++q)
      if (q != p) a2(r, s++) = ak(i, q);
    a2.row(r) += ak(i, p) * g.transpose();
    b2[r] = bk[i] - ak(i, p) * c;
    ++r;
  }
  LpResult sub = lp_solve_rec(a2, b2, z, tol, calls);
  if (!sub.solved()) return sub;
  Vector x(n);
  for (Eigen::Index q = 0, r = 0; q < n; ++q)
    if (q != p) x[q] = sub.x[r++];
  x[p] = c + g.dot(sub.x);
  out.status = LpStatus::Solved;
  out.x = std::move(x);
  return out;
}

}  // namespace detail

/// Solves A x <= b through a strict solver: find a maximal strictly feasible
/// row set with one query per row; if some rows are left out, the first of
/// them is an implicit equality, so eliminate one variable with it and
/// recurse. The final x is checked against the original system.
inline LpResult lp_solve(const StrictLp& lp, const StrictSolver& z, const LpTolerances& tol = {}) {
  std::size_t calls = 0;
  LpResult r = detail::lp_solve_rec(lp.a, lp.b, z, tol, calls);
  r.oracle_calls = calls;
  if (!r.solved()) return r;
  if (lp.rows() > 0) {
    const double worst = (lp.a * r.x - lp.b).maxCoeff();
    if (!(worst <= tol.feasibility)) {
      r.status = LpStatus::InfeasibleOrTimeout;
      r.detail = "candidate violates the original system by " + detail::num(worst);
    }
  }
  return r;
}

}  // namespace polyfat
