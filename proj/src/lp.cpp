#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "errors.hpp"

namespace coflow {

double f_value(const LoadMatrix& mu, int port, std::span<const int> coflows) {
  double sum = 0.0, sumsq = 0.0;
  for (int k : coflows) {
    double m = mu.at(port, k);
    sum += m;
    sumsq += m * m;
  }
  return 0.5 * (sum * sum + sumsq);
}

SeparationResult separate(const LoadMatrix& mu, const std::vector<double>& c, double tol) {
  const int L = mu.num_ports;
  const int n = mu.num_coflows;
  SeparationResult best;
  best.violation = -tol;

  std::vector<int> ordered;
  ordered.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < L; ++l) {
    ordered.clear();
    for (int k = 0; k < n; ++k)
      if (mu.at(l, k) > 0.0) ordered.push_back(k);
    if (ordered.empty()) continue;
    std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
      if (c[static_cast<std::size_t>(a)] != c[static_cast<std::size_t>(b)])
        return c[static_cast<std::size_t>(a)] < c[static_cast<std::size_t>(b)];
      return a < b;
    });

    // Violation of every prefix of the ascending-C order in one sweep.
    double run_mu = 0.0, run_mu2 = 0.0, run_lhs = 0.0;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      int k = ordered[i];
      double m = mu.at(l, k);
      run_mu += m;
      run_mu2 += m * m;
      run_lhs += m * c[static_cast<std::size_t>(k)];
      double f = 0.5 * (run_mu * run_mu + run_mu2);
      double viol = run_lhs - f;
      if (viol < best.violation) {
        best.found = true;
        best.violation = viol;
        best.cut.port = l;
        best.cut.rhs = f;
        best.cut.coflows.assign(ordered.begin(), ordered.begin() + static_cast<long>(i) + 1);
      }
    }
  }
  if (best.found) std::sort(best.cut.coflows.begin(), best.cut.coflows.end());
  return best;
}

namespace detail {

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b, const std::vector<double>& c,
                          long max_pivots) {
  const int m = static_cast<int>(a.size());
  const int nv = static_cast<int>(c.size());
  const double tol = 1e-9;

  // Tableau rows: m constraint rows + objective row; columns: nv structural
  // variables, m slacks, rhs. Slack basis is feasible because b >= 0.
  const int cols = nv + m + 1;
  std::vector<std::vector<double>> t(static_cast<std::size_t>(m + 1),
                                     std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  for (int i = 0; i < m; ++i) {
    if (b[static_cast<std::size_t>(i)] < 0.0)
      throw ValidationError("simplex_max requires nonnegative right-hand sides");
    for (int j = 0; j < nv; ++j) t[i][static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    t[i][static_cast<std::size_t>(nv + i)] = 1.0;
    t[i][static_cast<std::size_t>(cols - 1)] = b[static_cast<std::size_t>(i)];
  }
  // Objective row holds z_j - c_j.
  for (int j = 0; j < nv; ++j) t[m][static_cast<std::size_t>(j)] = -c[static_cast<std::size_t>(j)];

  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = nv + i;

  for (long pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw LimitError("simplex pivot cap exceeded");

    // Bland: entering column = lowest index with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < nv + m; ++j) {
      if (t[m][static_cast<std::size_t>(j)] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    // Ratio test; ties break to the smallest basis variable index (Bland).
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double aij = t[i][static_cast<std::size_t>(enter)];
      if (aij <= tol) continue;
      double ratio = t[i][static_cast<std::size_t>(cols - 1)] / aij;
      if (ratio < 0.0) ratio = 0.0;  // rounding on a degenerate row
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      // Unbounded direction; cannot happen for the duals of a feasible
      // bounded primal, so treat it as an internal failure.
      throw LimitError("simplex_max: unbounded objective");
    }

    double piv = t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(enter)];
    auto& lrow = t[static_cast<std::size_t>(leave)];
    for (double& v : lrow) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double factor = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (factor == 0.0) continue;
      auto& row = t[static_cast<std::size_t>(i)];
      for (int j = 0; j < cols; ++j) row[static_cast<std::size_t>(j)] -= factor * lrow[static_cast<std::size_t>(j)];
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  SimplexResult res;
  res.optimal = true;
  res.objective = t[static_cast<std::size_t>(m)][static_cast<std::size_t>(cols - 1)];
  res.x.assign(static_cast<std::size_t>(nv), 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < nv)
      res.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols - 1)];
  res.duals.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double y = t[static_cast<std::size_t>(m)][static_cast<std::size_t>(nv + i)];
    res.duals[static_cast<std::size_t>(i)] = y > 0.0 ? y : 0.0;
  }
  return res;
}

}  // namespace detail

namespace {

// Solves the restricted primal  min w^T C  s.t. the given cuts, C >= 0  by
// handing its dual  max f^T y  s.t.  M^T y <= w, y >= 0  to the simplex core.
// The restricted primal solution is read off the row duals.
LpSolution solve_restricted(const LoadMatrix& mu, const std::vector<double>& weights,
                            const std::vector<ParallelInequality>& cuts) {
  const int n = mu.num_coflows;
  const int m = static_cast<int>(cuts.size());

  std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::vector<double> obj(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    const auto& cut = cuts[static_cast<std::size_t>(j)];
    obj[static_cast<std::size_t>(j)] = cut.rhs;
    for (int k : cut.coflows)
      a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = mu.at(cut.port, k);
  }

  long cap = 2000L + 50L * static_cast<long>(n + m);
  auto res = detail::simplex_max(a, weights, obj, cap);

  LpSolution sol;
  sol.objective = res.objective;
  sol.c = res.duals;
  sol.num_cuts = m;
  return sol;
}

std::vector<ParallelInequality> initial_cuts(const LoadMatrix& mu) {
  std::vector<ParallelInequality> cuts;
  const int L = mu.num_ports;
  const int n = mu.num_coflows;
  for (int l = 0; l < L; ++l) {
    std::vector<int> support;
    for (int k = 0; k < n; ++k) {
      if (mu.at(l, k) <= 0.0) continue;
      support.push_back(k);
      ParallelInequality cut;
      cut.port = l;
      cut.coflows = {k};
      cut.rhs = f_value(mu, l, cut.coflows);
      cuts.push_back(std::move(cut));
    }
    if (support.size() > 1) {
      ParallelInequality cut;
      cut.port = l;
      cut.coflows = support;
      cut.rhs = f_value(mu, l, cut.coflows);
      cuts.push_back(std::move(cut));
    }
  }
  return cuts;
}

}  // namespace

LpSolution solve_lp(const LoadMatrix& mu, const std::vector<double>& weights) {
  const int n = mu.num_coflows;
  const int L = mu.num_ports;
  if (static_cast<int>(weights.size()) != n)
    throw ValidationError("weight vector does not match load matrix");

  std::vector<ParallelInequality> cuts = initial_cuts(mu);
  std::set<std::pair<int, std::vector<int>>> seen;
  for (const auto& cut : cuts) seen.emplace(cut.port, cut.coflows);

  const std::size_t cap = static_cast<std::size_t>(10) * static_cast<std::size_t>(std::max(1, n)) *
                          static_cast<std::size_t>(std::max(1, L)) + cuts.size();
  LpSolution sol;
  for (int round = 0;; ++round) {
    sol = solve_restricted(mu, weights, cuts);
    sol.iterations = round;
    auto sep = separate(mu, sol.c);
    if (!sep.found) break;
    if (!seen.emplace(sep.cut.port, sep.cut.coflows).second)
      throw LimitError("separation returned an already-present cut; numerical stall");
    cuts.push_back(std::move(sep.cut));
    if (cuts.size() > cap)
      throw LimitError("cutting-plane cap exceeded at " + std::to_string(cuts.size()) + " cuts");
  }
  sol.num_cuts = static_cast<int>(cuts.size());
  return sol;
}

LpSolution brute_force_lp(const LoadMatrix& mu, const std::vector<double>& weights) {
  const int n = mu.num_coflows;
  const int L = mu.num_ports;
  if (n > 12) throw ValidationError("brute_force_lp is limited to n <= 12");
  if (static_cast<int>(weights.size()) != n)
    throw ValidationError("weight vector does not match load matrix");

  std::vector<ParallelInequality> cuts;
  for (int l = 0; l < L; ++l) {
    std::vector<int> support;
    for (int k = 0; k < n; ++k)
      if (mu.at(l, k) > 0.0) support.push_back(k);
    const int s = static_cast<int>(support.size());
    for (std::uint32_t bits = 1; bits < (1u << s); ++bits) {
      ParallelInequality cut;
      cut.port = l;
      for (int i = 0; i < s; ++i)
        if ((bits >> i) & 1u) cut.coflows.push_back(support[static_cast<std::size_t>(i)]);
      cut.rhs = f_value(mu, l, cut.coflows);
      cuts.push_back(std::move(cut));
    }
  }
  LpSolution sol = solve_restricted(mu, weights, cuts);
  sol.iterations = 1;
  return sol;
}

}  // namespace coflow
