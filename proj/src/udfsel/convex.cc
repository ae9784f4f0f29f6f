// Copyright 2026 The udfsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "udfsel/convex.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace udfsel {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-group quantities after accounting for already-sampled tuples.
struct Term {
  double u = 0.0;       // unsampled tuples
  double s = 0.0;       // selectivity mean
  double v = 0.0;       // selectivity variance
  double f_plus = 0.0;  // sampled correct tuples
};

std::vector<Term> Terms(const ConvexInstance& inst) {
  std::vector<Term> terms;
  for (const auto& g : inst.groups) {
    Term t;
    t.s = g.selectivity;
    t.v = g.variance;
    if (inst.sampling_aware) {
      t.u = static_cast<double>(g.Unsampled());
      t.f_plus = static_cast<double>(g.sampled_positive);
    } else {
      t.u = static_cast<double>(g.size);
    }
    terms.push_back(t);
  }
  return terms;
}

// The program in the variables x = (R_0, E_0, R_1, E_1, ..., z...) over the
// groups with unsampled tuples. Auxiliary z_k >= |R_k - beta| linearize the
// recall deviation in unknown-correlation mode.
class Program {
 public:
  explicit Program(const ConvexInstance& inst)
      : alpha_(inst.constraints.alpha),
        beta_(inst.constraints.beta),
        e_rho_(1.0 / std::sqrt(1.0 - inst.constraints.rho)),
        unknown_(inst.mode == CorrelationMode::kUnknown) {
    const std::vector<Term> terms = Terms(inst);
    double p_const = 0.0, r_const = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
      const Term& t = terms[i];
      p_const += (1.0 - alpha_) * t.f_plus;
      r_const += t.f_plus - beta_ * (t.f_plus + t.u * t.s);
      noise_ += 0.25 * t.u;
      root_noise_ += 0.5 * std::sqrt(t.u);
      if (t.u > 0.0) {
        group_.push_back(i);
        term_.push_back(t);
      }
    }
    k_ = static_cast<int>(group_.size());
    int next = 2 * k_;
    z_.assign(k_, -1);
    if (unknown_) {
      for (int k = 0; k < k_; ++k) {
        if (term_[k].v > 0.0) z_[k] = next++;
      }
    }
    n_ = next;

    double scale = 0.0;
    for (const Term& t : term_) scale += t.u * inst.cost.Full();
    scale_ = scale > 0.0 ? scale : 1.0;
    c_ = VectorXd::Zero(n_);
    for (int k = 0; k < k_; ++k) {
      c_[2 * k] = term_[k].u * inst.cost.retrieve / scale_;
      c_[2 * k + 1] = term_[k].u * inst.cost.evaluate / scale_;
    }

    // Linear pieces of both margins.
    p_lin_ = VectorXd::Zero(n_);
    r_lin_ = VectorXd::Zero(n_);
    p_const_ = p_const;
    r_const_ = r_const;
    for (int k = 0; k < k_; ++k) {
      const Term& t = term_[k];
      p_lin_[2 * k] = (1.0 - alpha_) * t.u * t.s - alpha_ * t.u * (1.0 - t.s);
      p_lin_[2 * k + 1] = alpha_ * t.u * (1.0 - t.s);
      r_lin_[2 * k] = t.u * t.s;
    }

    // Box rows a x <= b.
    std::vector<std::pair<VectorXd, double>> rows;
    for (int k = 0; k < k_; ++k) {
      VectorXd a = VectorXd::Zero(n_);
      a[2 * k + 1] = -1.0;
      rows.push_back({a, 0.0});  // E >= 0
      a.setZero();
      a[2 * k + 1] = 1.0;
      a[2 * k] = -1.0;
      rows.push_back({a, 0.0});  // E <= R
      a.setZero();
      a[2 * k] = 1.0;
      rows.push_back({a, 1.0});  // R <= 1
      if (z_[k] >= 0) {
        a.setZero();
        a[2 * k] = 1.0;
        a[z_[k]] = -1.0;
        rows.push_back({a, beta_});  // R - beta <= z
        a[2 * k] = -1.0;
        rows.push_back({a, -beta_});  // beta - R <= z
      }
    }
    a_ = MatrixXd::Zero(static_cast<int>(rows.size()), n_);
    b_ = VectorXd::Zero(static_cast<int>(rows.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
      a_.row(static_cast<int>(r)) = rows[r].first.transpose();
      b_[static_cast<int>(r)] = rows[r].second;
    }
  }

  int n() const { return n_; }
  int groups() const { return k_; }
  size_t group(int k) const { return group_[k]; }
  int z(int k) const { return z_[k]; }
  double beta() const { return beta_; }
  double scale() const { return scale_; }
  const VectorXd& c() const { return c_; }
  const MatrixXd& a() const { return a_; }
  const VectorXd& b() const { return b_; }
  int constraint_count() const { return 2 + static_cast<int>(b_.size()); }

  // Value of constraint j (0 precision, 1 recall) in the form g(x) <= 0,
  // with optional gradient and Hessian.
  double G(int j, const VectorXd& x, VectorXd* grad, MatrixXd* hess) const {
    const bool precision = j == 0;
    const VectorXd& lin = precision ? p_lin_ : r_lin_;
    double value = -(precision ? p_const_ : r_const_) - lin.dot(x);
    if (grad) *grad = -lin;
    if (hess) *hess = MatrixXd::Zero(n_, n_);
    if (unknown_) {
      value += e_rho_ * root_noise_;
      for (int k = 0; k < k_; ++k) {
        const double w = e_rho_ * std::sqrt(term_[k].v) * term_[k].u;
        if (precision) {
          value += w * (x[2 * k] - alpha_ * x[2 * k + 1]);
          if (grad) {
            (*grad)[2 * k] += w;
            (*grad)[2 * k + 1] -= w * alpha_;
          }
        } else if (z_[k] >= 0) {
          value += w * x[z_[k]];
          if (grad) (*grad)[z_[k]] += w;
        }
      }
      return value;
    }
    // Independent mode: e_rho * sqrt(Q), Q = sum w_k d_k^2 + noise.
    double q = noise_;
    VectorXd dq = VectorXd::Zero(n_);
    MatrixXd d2q = MatrixXd::Zero(n_, n_);
    for (int k = 0; k < k_; ++k) {
      const double w = term_[k].u * term_[k].u * term_[k].v;
      if (w == 0.0) continue;
      const int r = 2 * k, e = 2 * k + 1;
      if (precision) {
        const double d = x[r] - alpha_ * x[e];
        q += w * d * d;
        dq[r] += 2 * w * d;
        dq[e] -= 2 * w * d * alpha_;
        d2q(r, r) += 2 * w;
        d2q(r, e) -= 2 * w * alpha_;
        d2q(e, r) -= 2 * w * alpha_;
        d2q(e, e) += 2 * w * alpha_ * alpha_;
      } else {
        const double d = x[r] - beta_;
        q += w * d * d;
        dq[r] += 2 * w * d;
        d2q(r, r) += 2 * w;
      }
    }
    if (q <= 0.0) return value;
    const double root = std::sqrt(q);
    value += e_rho_ * root;
    if (grad) *grad += e_rho_ * dq / (2 * root);
    if (hess) {
      *hess += e_rho_ * (d2q / (2 * root) -
                         dq * dq.transpose() / (4 * q * root));
    }
    return value;
  }

  // Sets every z to its tight value plus a margin that keeps recall strict.
  void SetZ(VectorXd* x) const {
    if (!unknown_) return;
    double coef = 0.0;
    for (int k = 0; k < k_; ++k) {
      if (z_[k] < 0) continue;
      (*x)[z_[k]] = std::abs((*x)[2 * k] - beta_);
      coef += e_rho_ * std::sqrt(term_[k].v) * term_[k].u;
    }
    if (coef == 0.0) return;
    const double g = G(1, *x, nullptr, nullptr);
    const double eta = g < 0.0 ? std::min(1.0, -0.5 * g / coef) : 0.0;
    for (int k = 0; k < k_; ++k) {
      if (z_[k] >= 0) (*x)[z_[k]] += eta;
    }
  }

  bool StrictlyFeasible(const VectorXd& x) const {
    if (((b_ - a_ * x).array() <= 0.0).any()) return false;
    return G(0, x, nullptr, nullptr) < 0.0 && G(1, x, nullptr, nullptr) < 0.0;
  }

  double Barrier(const VectorXd& x, double tau) const {
    const VectorXd slack = b_ - a_ * x;
    if ((slack.array() <= 0.0).any()) return kInf;
    const double g0 = G(0, x, nullptr, nullptr);
    const double g1 = G(1, x, nullptr, nullptr);
    if (g0 >= 0.0 || g1 >= 0.0) return kInf;
    return tau * c_.dot(x) - std::log(-g0) - std::log(-g1) -
           slack.array().log().sum();
  }

 private:
  double alpha_, beta_, e_rho_;
  bool unknown_;
  double noise_ = 0.0, root_noise_ = 0.0;
  double p_const_ = 0.0, r_const_ = 0.0;
  std::vector<size_t> group_;
  std::vector<Term> term_;
  std::vector<int> z_;
  int k_ = 0, n_ = 0;
  double scale_ = 1.0;
  VectorXd c_, p_lin_, r_lin_, b_;
  MatrixXd a_;
};

Strategy ToStrategy(const Program& prog, const VectorXd& x, size_t groups) {
  Strategy st = Strategy::Uniform(groups, 0.0, 0.0);
  for (int k = 0; k < prog.groups(); ++k) {
    const double r = std::clamp(x[2 * k], 0.0, 1.0);
    const double e = std::clamp(x[2 * k + 1], 0.0, r);
    st[prog.group(k)] = Decision{r, e};
  }
  return st;
}

VectorXd FromStrategy(const Program& prog, const Strategy& st) {
  VectorXd x = VectorXd::Zero(prog.n());
  for (int k = 0; k < prog.groups(); ++k) {
    x[2 * k] = st[prog.group(k)].retrieve;
    x[2 * k + 1] = st[prog.group(k)].evaluate;
    if (prog.z(k) >= 0) x[prog.z(k)] = std::abs(x[2 * k] - prog.beta());
  }
  return x;
}

struct BarrierState {
  VectorXd x;
  double tau = 1.0;
  int iterations = 0;
};

// Minimizes tau c'x - sum log(-g) over a sequence of increasing tau.
BarrierState RunBarrier(const Program& prog, VectorXd x,
                        const SolverSettings& settings) {
  BarrierState st;
  const int m = prog.constraint_count();
  const double gap_target = std::min(1e-10, settings.kkt_tolerance * 1e-4);
  double tau = 1.0;
  const int n = prog.n();
  VectorXd grad_g;
  MatrixXd hess_g;
  while (st.iterations < settings.max_iterations) {
    for (int step = 0; step < 200 && st.iterations < settings.max_iterations;
         ++step) {
      ++st.iterations;
      const VectorXd slack = prog.b() - prog.a() * x;
      VectorXd grad = tau * prog.c();
      MatrixXd hess = MatrixXd::Zero(n, n);
      for (int j = 0; j < 2; ++j) {
        const double g = prog.G(j, x, &grad_g, &hess_g);
        grad += grad_g / -g;
        hess += grad_g * grad_g.transpose() / (g * g) + hess_g / -g;
      }
      const VectorXd inv = slack.cwiseInverse();
      grad += prog.a().transpose() * inv;
      hess += prog.a().transpose() * inv.cwiseAbs2().asDiagonal() * prog.a();
      Eigen::LDLT<MatrixXd> ldlt(hess);
      VectorXd dx = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
        dx = hess.completeOrthogonalDecomposition().solve(-grad);
      }
      const double decrement = -grad.dot(dx);
      if (!(decrement > 1e-14)) break;
      const double phi = prog.Barrier(x, tau);
      double t = 1.0;
      bool moved = false;
      for (int halving = 0; halving < 80; ++halving, t *= 0.5) {
        const VectorXd cand = x + t * dx;
        const double value = prog.Barrier(cand, tau);
        if (value <= phi - 0.25 * t * decrement) {
          x = cand;
          moved = true;
          break;
        }
      }
      if (!moved || decrement / 2 < 1e-12) break;
    }
    if (m / tau < gap_target) break;
    tau *= 20.0;
  }
  st.x = x;
  st.tau = tau;
  return st;
}

// Newton refinement of the KKT system on the constraints the barrier point
// holds nearly tight. Returns false when the iteration does not converge.
bool Polish(const Program& prog, const BarrierState& barrier, VectorXd* out) {
  const int n = prog.n();
  const VectorXd& x0 = barrier.x;
  const VectorXd slack = prog.b() - prog.a() * x0;
  std::vector<int> box;
  for (int i = 0; i < slack.size(); ++i) {
    if (slack[i] < 1e-7) box.push_back(i);
  }
  std::vector<int> nonlinear;
  const double scale = std::max(1.0, prog.scale());
  for (int j = 0; j < 2; ++j) {
    if (-prog.G(j, x0, nullptr, nullptr) / scale < 1e-7) {
      nonlinear.push_back(j);
    }
  }
  const int p = static_cast<int>(box.size() + nonlinear.size());
  if (p == 0) return false;
  VectorXd x = x0;
  VectorXd lambda(p);
  for (size_t i = 0; i < nonlinear.size(); ++i) {
    lambda[static_cast<int>(i)] =
        1.0 / (barrier.tau * -prog.G(nonlinear[i], x0, nullptr, nullptr));
  }
  for (size_t i = 0; i < box.size(); ++i) {
    lambda[static_cast<int>(nonlinear.size() + i)] =
        1.0 / (barrier.tau * slack[box[i]]);
  }
  VectorXd grad_g;
  MatrixXd hess_g;
  for (int iter = 0; iter < 40; ++iter) {
    MatrixXd jac = MatrixXd::Zero(n + p, n + p);
    VectorXd res = VectorXd::Zero(n + p);
    res.head(n) = prog.c();
    for (size_t i = 0; i < nonlinear.size(); ++i) {
      const int row = n + static_cast<int>(i);
      const double g = prog.G(nonlinear[i], x, &grad_g, &hess_g);
      const double l = lambda[static_cast<int>(i)];
      res.head(n) += l * grad_g;
      jac.topLeftCorner(n, n) += l * hess_g;
      jac.block(0, row, n, 1) = grad_g;
      jac.block(row, 0, 1, n) = grad_g.transpose();
      res[row] = g;
    }
    for (size_t i = 0; i < box.size(); ++i) {
      const int idx = static_cast<int>(nonlinear.size() + i);
      const int row = n + idx;
      const VectorXd a = prog.a().row(box[i]).transpose();
      res.head(n) += lambda[idx] * a;
      jac.block(0, row, n, 1) = a;
      jac.block(row, 0, 1, n) = a.transpose();
      res[row] = a.dot(x) - prog.b()[box[i]];
    }
    if (res.lpNorm<Eigen::Infinity>() < 1e-13) break;
    const VectorXd step = jac.completeOrthogonalDecomposition().solve(-res);
    if (!step.allFinite()) return false;
    x += step.head(n);
    lambda += step.tail(p);
  }
  *out = x;
  return true;
}

}  // namespace

void SolverSettings::Validate() const {
  if (max_iterations < 1) {
    throw ValidationError("max_iterations must be positive");
  }
  if (!(kkt_tolerance > 0.0)) {
    throw ValidationError("kkt_tolerance must be positive");
  }
  if (!(feasibility_margin >= 0.0)) {
    throw ValidationError("feasibility_margin must be nonnegative");
  }
}

ConvexSlack EvaluateConvexSlack(const ConvexInstance& inst,
                                const Strategy& strategy) {
  const std::vector<Term> terms = Terms(inst);
  const double alpha = inst.constraints.alpha;
  const double beta = inst.constraints.beta;
  const double e_rho = 1.0 / std::sqrt(1.0 - inst.constraints.rho);
  const bool unknown = inst.mode == CorrelationMode::kUnknown;
  double p_margin = 0.0, r_margin = 0.0, p_dev = 0.0, r_dev = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    const double r = strategy[i].retrieve, e = strategy[i].evaluate;
    p_margin += (1.0 - alpha) * (t.f_plus + t.u * t.s * r) -
                alpha * t.u * (1.0 - t.s) * (r - e);
    r_margin += t.f_plus + t.u * t.s * r - beta * (t.f_plus + t.u * t.s);
    const double dp = r - alpha * e, dr = r - beta;
    if (unknown) {
      p_dev += std::sqrt(t.v) * t.u * std::abs(dp) + 0.5 * std::sqrt(t.u);
      r_dev += std::sqrt(t.v) * t.u * std::abs(dr) + 0.5 * std::sqrt(t.u);
    } else {
      p_dev += t.u * t.u * t.v * dp * dp + 0.25 * t.u;
      r_dev += t.u * t.u * t.v * dr * dr + 0.25 * t.u;
    }
  }
  if (!unknown) {
    p_dev = std::sqrt(p_dev);
    r_dev = std::sqrt(r_dev);
  }
  return ConvexSlack{p_margin - e_rho * p_dev, r_margin - e_rho * r_dev};
}

double ConvexObjective(const ConvexInstance& inst, const Strategy& strategy) {
  return inst.sampling_aware
             ? SamplingAwareCost(strategy, inst.groups, inst.cost)
             : ExpectedCost(strategy, inst.groups, inst.cost);
}

ConvexResult SolveConvex(const ConvexInstance& inst,
                         const SolverSettings& settings) {
  inst.constraints.Validate();
  inst.cost.Validate();
  settings.Validate();
  if (inst.groups.empty()) throw ValidationError("instance has no groups");
  for (const auto& g : inst.groups) g.Validate();

  const Program prog(inst);
  const size_t m = inst.groups.size();
  const double margin = settings.feasibility_margin;
  auto feasible = [&](const Strategy& st, double tol) {
    const ConvexSlack slack = EvaluateConvexSlack(inst, st);
    return slack.precision >= -tol && slack.recall >= -tol;
  };

  ConvexResult result;
  Strategy ones = Strategy::Uniform(m, 0.0, 0.0);
  for (int k = 0; k < prog.groups(); ++k) ones[prog.group(k)] = {1.0, 1.0};
  if (!feasible(ones, margin)) {
    throw InfeasibleError(
        "infeasible by bound: even R = E = 1 violates a constraint");
  }
  if (prog.groups() == 0) {
    result.strategy = ones;
    result.cost = ConvexObjective(inst, ones);
    return result;
  }

  VectorXd x;
  bool interior = false;
  for (double delta = 1e-3; delta >= 1e-13; delta *= 0.1) {
    x = FromStrategy(prog, Strategy::Uniform(m, 1.0 - delta,
                                             1.0 - 2.0 * delta));
    prog.SetZ(&x);
    if (prog.StrictlyFeasible(x)) {
      interior = true;
      break;
    }
  }
  if (!interior) {
    // The feasible set has no interior near R = E = 1; that point is the
    // only certified choice.
    result.strategy = ones;
    result.cost = ConvexObjective(inst, ones);
    return result;
  }

  const BarrierState barrier = RunBarrier(prog, x, settings);
  result.iterations = barrier.iterations;
  Strategy best = ToStrategy(prog, barrier.x, m);
  double best_cost = ConvexObjective(inst, best);

  VectorXd polished;
  if (Polish(prog, barrier, &polished) && polished.allFinite()) {
    const Strategy cand = ToStrategy(prog, polished, m);
    const double cand_cost = ConvexObjective(inst, cand);
    if (feasible(cand, margin) &&
        cand_cost <= best_cost + 1e-12 * std::max(1.0, best_cost)) {
      best = cand;
      best_cost = cand_cost;
      result.polished = true;
    }
  }

  {
    // Clear barrier residue such as R = 1e-33 when that keeps feasibility.
    Strategy snapped = best;
    for (auto& d : snapped.decisions) {
      if (d.retrieve < 1e-12) d.retrieve = 0.0;
      if (d.retrieve > 1.0 - 1e-12) d.retrieve = 1.0;
      if (d.evaluate < 1e-12) d.evaluate = 0.0;
      if (d.evaluate > 1.0 - 1e-12) d.evaluate = 1.0;
      d.evaluate = std::min(d.evaluate, d.retrieve);
    }
    if (feasible(snapped, margin) || !feasible(best, margin)) {
      best = snapped;
      best_cost = ConvexObjective(inst, best);
    }
  }

  if (!feasible(best, margin)) {
    // Move along the segment toward R = E = 1 until both constraints hold.
    double lo = 0.0, hi = 1.0;
    auto blend = [&](double theta) {
      Strategy st = best;
      for (int k = 0; k < prog.groups(); ++k) {
        Decision& d = st[prog.group(k)];
        d.retrieve += theta * (1.0 - d.retrieve);
        d.evaluate += theta * (1.0 - d.evaluate);
      }
      return st;
    };
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(blend(mid), 0.0)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    best = blend(hi);
    best_cost = ConvexObjective(inst, best);
    result.restored = true;
  }
  result.strategy = best;
  result.cost = best_cost;
  return result;
}

}  // namespace udfsel
