#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace dslt {

struct QuadOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  std::size_t max_evals = 10'000'000;
  int initial_split = 4;  // initial uniform partition per axis
};

struct CubatureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t n_evals = 0;
  bool converged = false;
  bool diverging = false;
};

namespace detail {

// Tensor Gauss-Kronrod 15(7) cell rule. Nodes are strictly interior, so
// integrands singular on cell faces are never evaluated there.
struct GaussKronrod15 {
  std::array<double, 15> node;
  std::array<double, 15> wk;  // Kronrod weights
  std::array<double, 15> wg;  // Gauss-7 weights on the embedded nodes, 0 elsewhere
  GaussKronrod15();
};

const GaussKronrod15& gk15();

struct Cell {
  std::array<double, 3> lo;
  std::array<double, 3> hi;
  double value = 0.0;
  double error = 0.0;
  int split_axis = 0;  // axis with the largest embedded-rule defect
  std::uint64_t id = 0;
};

struct CellWorse {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;  // deterministic tie-break: older cell first
  }
};

template <class F>
void evaluate_cell(const F& f, Cell& cell) {
  const auto& rule = gk15();
  std::array<std::array<double, 15>, 3> x;
  std::array<double, 3> h;
  for (int dim = 0; dim < 3; ++dim) {
    const double mid = 0.5 * (cell.lo[dim] + cell.hi[dim]);
    h[dim] = 0.5 * (cell.hi[dim] - cell.lo[dim]);
    for (int i = 0; i < 15; ++i) x[dim][i] = mid + h[dim] * rule.node[i];
  }
  // full Kronrod tensor value, the embedded Gauss value, and per-axis
  // mixed values (Gauss on one axis, Kronrod on the others) that locate
  // where the defect lives
  double ik = 0.0, ig = 0.0;
  std::array<double, 3> ax{0.0, 0.0, 0.0};
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) {
      const double kk = rule.wk[i] * rule.wk[j];
      const double gg = rule.wg[i] * rule.wg[j];
      const double gk = rule.wg[i] * rule.wk[j];
      const double kg = rule.wk[i] * rule.wg[j];
      for (int l = 0; l < 15; ++l) {
        const double v = f(x[0][i], x[1][j], x[2][l]);
        ik += kk * rule.wk[l] * v;
        ig += gg * rule.wg[l] * v;
        ax[0] += gk * rule.wk[l] * v;
        ax[1] += kg * rule.wk[l] * v;
        ax[2] += kk * rule.wg[l] * v;
      }
    }
  }
  const double vol = h[0] * h[1] * h[2];
  cell.value = ik * vol;
  cell.error = std::abs(ik - ig) * vol;
  int axis = 0;
  double worst = -1.0;
  for (int dim = 0; dim < 3; ++dim) {
    const double defect = std::abs(ik - ax[dim]);
    if (defect > worst) {
      worst = defect;
      axis = dim;
    }
  }
  // fall back to the longest axis when the defect is pure noise
  if (worst <= 1e-15 * std::abs(ik)) {
    axis = 0;
    double width = h[0];
    for (int dim = 1; dim < 3; ++dim)
      if (h[dim] > width) {
        width = h[dim];
        axis = dim;
      }
  }
  cell.split_axis = axis;
}

}  // namespace detail

// Globally adaptive cubature on [0,1]^3: tensor GK15(7) per cell, refinement
// of the worst cell (split along its longest axis) in a deterministic order.
// 15^3 = 3375 evaluations per cell.
template <class F>
CubatureResult integrate_unit_cube3(const F& f, const QuadOptions& opt = {}) {
  using detail::Cell;
  constexpr std::size_t kEvalsPerCell = 15 * 15 * 15;

  std::priority_queue<Cell, std::vector<Cell>, detail::CellWorse> heap;
  std::uint64_t next_id = 0;
  std::size_t n_evals = 0;
  const int base = std::max(1, opt.initial_split);

  std::vector<Cell> seeds;
  for (int i = 0; i < base; ++i)
    for (int j = 0; j < base; ++j)
      for (int l = 0; l < base; ++l) {
        Cell c;
        c.lo = {static_cast<double>(i) / base, static_cast<double>(j) / base,
                static_cast<double>(l) / base};
        c.hi = {static_cast<double>(i + 1) / base, static_cast<double>(j + 1) / base,
                static_cast<double>(l + 1) / base};
        c.id = next_id++;
        seeds.push_back(c);
      }
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(seeds.size()); ++i)
    detail::evaluate_cell(f, seeds[i]);
  n_evals += seeds.size() * kEvalsPerCell;

  double total = 0.0, total_err = 0.0;
  for (const Cell& c : seeds) {
    total += c.value;
    total_err += c.error;
    heap.push(c);
  }

  // trend tracking for the divergence flag
  std::vector<double> sweep_totals{total};

  auto tolerance = [&](double value) {
    return std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  };

  CubatureResult out;
  while (total_err > tolerance(total) && n_evals + 2 * kEvalsPerCell <= opt.max_evals) {
    // refine a deterministic batch of the worst cells
    const std::size_t budget_cells = (opt.max_evals - n_evals) / kEvalsPerCell;
    const std::size_t batch =
        std::min<std::size_t>(std::max<std::size_t>(8, heap.size() / 16), budget_cells / 2);
    std::vector<Cell> parents;
    for (std::size_t i = 0; i < batch && !heap.empty(); ++i) {
      parents.push_back(heap.top());
      heap.pop();
    }
    if (parents.empty()) break;

    std::vector<Cell> children;
    children.reserve(2 * parents.size());
    for (const Cell& p : parents) {
      total -= p.value;
      total_err -= p.error;
      const int axis = p.split_axis;
      const double mid = 0.5 * (p.lo[axis] + p.hi[axis]);
      Cell a = p, b = p;
      a.hi[axis] = mid;
      b.lo[axis] = mid;
      a.id = next_id++;
      b.id = next_id++;
      children.push_back(a);
      children.push_back(b);
    }

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(children.size()); ++i)
      detail::evaluate_cell(f, children[i]);
    n_evals += children.size() * kEvalsPerCell;

    for (const Cell& c : children) {
      total += c.value;
      total_err += c.error;
      heap.push(c);
    }
    sweep_totals.push_back(total);
  }

  out.value = total;
  out.abs_error = total_err;
  out.n_evals = n_evals;
  out.converged = total_err <= tolerance(total);
  // growing without bound: the last refinements keep increasing the total
  // while the error estimate does not shrink
  if (!out.converged && sweep_totals.size() >= 4) {
    const std::size_t s = sweep_totals.size();
    bool growing = true;
    for (std::size_t i = s - 3; i < s; ++i) {
      if (!(std::abs(sweep_totals[i]) >
            std::abs(sweep_totals[i - 1]) * (1.0 + 1e-3)))
        growing = false;
    }
    out.diverging = growing;
  }
  return out;
}

// Adaptive 1-d quadrature (Gauss-Kronrod), thin wrapper used for the scalar
// integral checks and test oracles.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, double* abs_error = nullptr);

}  // namespace dslt
