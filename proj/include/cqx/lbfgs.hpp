// Copyright 2026 The cqx Authors.
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

#ifndef CQX_LBFGS_HPP_
#define CQX_LBFGS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace cqx {

struct LbfgsOptions {
  int max_iterations = 300;
  // Stop once ||g|| <= tolerance * max(1, ||x||).
  double tolerance = 1e-4;
  std::size_t memory = 10;
  int max_line_search = 40;
  double armijo = 1e-4;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective after the starting point and after every accepted step.
  std::vector<double> history;
  std::string status;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

// Limited-memory BFGS with a backtracking Armijo line search. `eval(x, g)`
// returns f(x) and writes the gradient into g. Every accepted step strictly
// decreases f.
template <typename Eval>
LbfgsResult lbfgs_minimize(Eval&& eval, std::vector<double> x0,
                           const LbfgsOptions& options = {}) {
  const std::size_t n = x0.size();
  LbfgsResult result;
  result.x = std::move(x0);
  std::vector<double> g(n), g_new(n), x_new(n), d(n);
  double f = eval(std::span<const double>(result.x), std::span<double>(g));
  result.history.push_back(f);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> alpha(options.memory);

  auto converged = [&] {
    return detail::norm(g) <=
           options.tolerance * std::max(1.0, detail::norm(result.x));
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (converged()) {
      result.converged = true;
      result.status = "gradient tolerance reached";
      break;
    }
    // Two-loop recursion: d = -H g.
    std::copy(g.begin(), g.end(), d.begin());
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * detail::dot(memory[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * memory[k].y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      double gamma = detail::dot(last.s, last.y) / detail::dot(last.y, last.y);
      for (auto& v : d) v *= gamma;
    } else {
      double gn = detail::norm(g);
      for (auto& v : d) v /= std::max(gn, 1.0);
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      double beta = memory[k].rho * detail::dot(memory[k].y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += memory[k].s[i] * (alpha[k] - beta);
    }
    for (auto& v : d) v = -v;
    double slope = detail::dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      double gn = detail::norm(g);
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(gn, 1.0);
      slope = detail::dot(g, d);
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = result.x[i] + step * d[i];
      f_new = eval(std::span<const double>(x_new), std::span<double>(g_new));
      if (std::isfinite(f_new) && f_new <= f + options.armijo * step * slope &&
          f_new < f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.status = "line search made no progress";
      break;
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - result.x[i];
      p.y[i] = g_new[i] - g[i];
    }
    double sy = detail::dot(p.s, p.y);
    if (sy > 1e-12) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > options.memory) memory.pop_front();
    }
    result.x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    result.history.push_back(f);
    result.iterations = iter + 1;
  }
  if (result.status.empty()) {
    result.converged = converged();
    result.status = result.converged ? "gradient tolerance reached"
                                     : "iteration limit reached";
  }
  result.value = f;
  return result;
}

}  // namespace cqx

#endif  // CQX_LBFGS_HPP_
