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

#include "udfsel/exact.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace udfsel {

namespace {

using Int = __int128;

struct Search {
  const PerfectInfoInstance* inst;
  Rational alpha, beta;
  Int recall_rhs = 0;  // beta.num * sum C
  std::vector<int> codes, best_codes;
  ExactResult best;

  void Leaf(Int recall_lhs, Int precision_lhs, int64_t retrieved,
            int64_t evaluated) {
    if (recall_lhs < recall_rhs) return;
    if (alpha.num != 0 && precision_lhs < 0) return;
    const double cost = inst->cost.retrieve * static_cast<double>(retrieved) +
                        inst->cost.evaluate * static_cast<double>(evaluated);
    if (best.feasible) {
      const double tol = 1e-12 * std::max(1.0, std::abs(best.cost));
      if (cost > best.cost + tol) return;
      if (cost >= best.cost - tol) {
        if (evaluated > best.evaluated) return;
        if (evaluated == best.evaluated && retrieved >= best.retrieved) return;
      }
    }
    best.feasible = true;
    best.cost = cost;
    best.evaluated = evaluated;
    best.retrieved = retrieved;
    best_codes = codes;
  }

  void Visit(size_t i, Int recall_lhs, Int precision_lhs, int64_t retrieved,
             int64_t evaluated) {
    const auto& groups = inst->groups;
    if (i == groups.size()) {
      Leaf(recall_lhs, precision_lhs, retrieved, evaluated);
      return;
    }
    const auto& g = groups[i];
    const Int c = g.correct, w = g.incorrect;
    codes[i] = 0;
    Visit(i + 1, recall_lhs, precision_lhs, retrieved, evaluated);
    const Int rec = recall_lhs + static_cast<Int>(beta.den) * c;
    const Int prec = precision_lhs + (alpha.den - alpha.num) * c -
                     static_cast<Int>(alpha.num) * w;
    codes[i] = 1;
    Visit(i + 1, rec, prec, retrieved + g.size(), evaluated);
    codes[i] = 2;
    Visit(i + 1, rec, prec + static_cast<Int>(alpha.num) * w,
          retrieved + g.size(), evaluated + g.size());
  }
};

}  // namespace

Rational ToRational(double x, int64_t max_den) {
  if (!std::isfinite(x) || x < 0) throw ValidationError("bad rational input");
  // Convergents h/k of the continued fraction of x.
  int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(frac);
    if (a_d > 1e15) break;
    const int64_t a = static_cast<int64_t>(a_d);
    const int64_t k2 = a * k1 + k0;
    if (k2 > max_den) break;
    const int64_t h2 = a * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double rest = frac - a_d;
    if (rest < 1e-12 ||
        std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <
            1e-15 * std::max(1.0, x)) {
      break;
    }
    frac = 1.0 / rest;
  }
  return Rational{h1, k1};
}

ExactResult SolvePerfectInformation(const PerfectInfoInstance& inst) {
  if (inst.groups.size() > kMaxExactGroups) {
    throw ValidationError("instance too large for exact solver");
  }
  inst.constraints.Validate();
  inst.cost.Validate();
  Search search;
  search.inst = &inst;
  search.alpha = ToRational(inst.constraints.alpha);
  search.beta = ToRational(inst.constraints.beta);
  Int total_correct = 0;
  for (const auto& g : inst.groups) {
    if (g.correct < 0 || g.incorrect < 0) {
      throw ValidationError("group '" + g.id + "' has negative counts");
    }
    total_correct += g.correct;
  }
  search.recall_rhs = static_cast<Int>(search.beta.num) * total_correct;
  search.codes.assign(inst.groups.size(), 0);
  search.Visit(0, 0, 0, 0, 0);

  ExactResult result = search.best;
  if (result.feasible) {
    result.strategy = Strategy::Uniform(inst.groups.size(), 0.0, 0.0);
    for (size_t i = 0; i < inst.groups.size(); ++i) {
      const int code = search.best_codes[i];
      result.strategy[i] = Decision{code >= 1 ? 1.0 : 0.0,
                                    code == 2 ? 1.0 : 0.0};
    }
  }
  return result;
}

namespace {

constexpr double kGridTol = 1e-9;

struct Item {
  double weight;  // precision margin per grid step of E
  double cost;    // cost per grid step of E
  int max_count;
  size_t group;
};

// Fractional lower bound on the cost of covering `need` with items[j..].
double FractionalBound(const std::vector<Item>& items, size_t j, double need) {
  double cost = 0.0;
  for (; j < items.size() && need > kGridTol; ++j) {
    const double take = std::min<double>(items[j].max_count,
                                         need / items[j].weight);
    cost += take * items[j].cost;
    need -= take * items[j].weight;
  }
  return need > kGridTol ? std::numeric_limits<double>::infinity() : cost;
}

// Feasible rounding of the fractional cover; infinity when no cover exists.
double RoundedBound(const std::vector<Item>& items, double need,
                    std::vector<int>* counts) {
  double cost = 0.0;
  for (size_t j = 0; j < items.size() && need > kGridTol; ++j) {
    const double want = std::ceil((need - kGridTol) / items[j].weight);
    const int take = static_cast<int>(
        std::clamp<double>(want, 0.0, items[j].max_count));
    (*counts)[j] = take;
    cost += take * items[j].cost;
    need -= take * items[j].weight;
  }
  return need > kGridTol ? std::numeric_limits<double>::infinity() : cost;
}

struct Knapsack {
  const std::vector<Item>* items;
  std::vector<int> counts, best_counts;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  void Visit(size_t j, double need, double cost) {
    if (need <= kGridTol) {
      if (cost < best) {
        found = true;
        best = cost;
        best_counts = counts;
      }
      return;
    }
    if (j == items->size()) return;
    if (cost + FractionalBound(*items, j, need) >= best) return;
    const Item& it = (*items)[j];
    const int top = static_cast<int>(std::min<double>(
        it.max_count, std::ceil((need - kGridTol) / it.weight)));
    for (int x = top; x >= 0; --x) {
      counts[j] = x;
      Visit(j + 1, need - x * it.weight, cost + x * it.cost);
    }
    counts[j] = 0;
  }
};

}  // namespace

GridResult GridOracle(std::span<const GroupStats> groups,
                      const Constraints& constraints, const CostModel& cost,
                      int resolution, std::optional<Thresholds> thresholds) {
  if (groups.size() > kMaxGridGroups || groups.empty()) {
    throw ValidationError("grid oracle supports 1 to 3 groups");
  }
  if (resolution < 1 || resolution > kMaxGridResolution) {
    throw ValidationError("grid resolution must lie in [1, 400]");
  }
  constraints.Validate();
  cost.Validate();
  const Thresholds th =
      thresholds ? *thresholds
                 : HoeffdingThresholds(static_cast<double>(TotalSize(groups)),
                                       constraints.beta, constraints.rho);
  const size_t m = groups.size();
  const double q = resolution;
  const double alpha = constraints.alpha;

  double total_ts = 0.0;
  std::vector<double> ts(m), r_prec(m), r_cost(m), e_weight(m);
  for (size_t i = 0; i < m; ++i) {
    const double t = static_cast<double>(groups[i].size);
    const double s = groups[i].selectivity;
    ts[i] = t * s / q;
    total_ts += t * s;
    r_prec[i] = (t * s * (1.0 - alpha) - t * (1.0 - s) * alpha) / q;
    r_cost[i] = t * cost.retrieve / q;
    e_weight[i] = t * (1.0 - s) * alpha / q;
  }
  const double recall_need = constraints.beta * total_ts + th.h_r - kGridTol;

  // Evaluate items in increasing cost per unit of precision margin.
  std::vector<size_t> order;
  for (size_t i = 0; i < m; ++i) {
    if (e_weight[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return groups[a].size * cost.evaluate / e_weight[a] <
           groups[b].size * cost.evaluate / e_weight[b];
  });

  std::vector<int> k(m, 0);
  std::vector<Item> items;
  auto build = [&](double* r_cost_out, double* need_out) {
    double recall = 0.0, prec = 0.0, rc = 0.0;
    for (size_t i = 0; i < m; ++i) {
      recall += ts[i] * k[i];
      prec += r_prec[i] * k[i];
      rc += r_cost[i] * k[i];
    }
    if (recall < recall_need) return false;
    items.clear();
    for (size_t i : order) {
      if (k[i] > 0) {
        items.push_back(Item{e_weight[i], groups[i].size * cost.evaluate / q,
                             k[i], i});
      }
    }
    *r_cost_out = rc;
    *need_out = th.h_p - prec;
    return true;
  };
  auto advance = [&]() {
    for (size_t i = 0; i < m; ++i) {
      if (++k[i] <= resolution) return true;
      k[i] = 0;
    }
    return false;
  };

  GridResult result;
  double incumbent = std::numeric_limits<double>::infinity();
  std::vector<int> inc_k, inc_counts;
  std::vector<int> counts;
  std::vector<Item> inc_items;

  // Pass 1: cheapest rounded cover over all recall-feasible R vectors.
  std::fill(k.begin(), k.end(), 0);
  do {
    double rc, need;
    if (!build(&rc, &need)) continue;
    if (rc >= incumbent) continue;
    counts.assign(items.size(), 0);
    const double ub = rc + RoundedBound(items, need, &counts);
    if (ub < incumbent) {
      incumbent = ub;
      inc_k = k;
      inc_counts = counts;
      inc_items = items;
    }
  } while (advance());

  if (!std::isfinite(incumbent)) return result;

  // Pass 2: exact covers where the fractional bound could beat the incumbent.
  std::fill(k.begin(), k.end(), 0);
  do {
    double rc, need;
    if (!build(&rc, &need)) continue;
    if (rc + FractionalBound(items, 0, need) >= incumbent - kGridTol) continue;
    Knapsack ks;
    ks.items = &items;
    ks.counts.assign(items.size(), 0);
    ks.best = incumbent - rc - kGridTol;
    ks.Visit(0, need, 0.0);
    if (ks.found) {
      incumbent = rc + ks.best;
      inc_k = k;
      inc_counts = ks.best_counts;
      inc_items = items;
    }
  } while (advance());

  result.feasible = true;
  result.strategy = Strategy::Uniform(m, 0.0, 0.0);
  for (size_t i = 0; i < m; ++i) result.strategy[i].retrieve = inc_k[i] / q;
  for (size_t j = 0; j < inc_items.size(); ++j) {
    result.strategy[inc_items[j].group].evaluate = inc_counts[j] / q;
  }
  result.cost = ExpectedCost(result.strategy, groups, cost);
  return result;
}

}  // namespace udfsel
