#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "mzqfi/closed_form.hpp"
#include "mzqfi/qfi.hpp"

namespace mzqfi {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Argument scan at fixed resources: alpha1 = sqrt(n1) e^{i theta1},
/// alpha2 = sqrt(n2) e^{i theta2} over theta in [0, 2*pi).  `model` selects
/// the objective that refine_max optimizes; run_scan always tabulates all
/// four models.
template <typename Scalar = double>
struct ScanGrid {
  Scalar n1;
  Scalar n2;
  Scalar r;
  int theta1_steps;
  int theta2_steps;
  ModelKind model;

  ScanGrid(Scalar mean_n1, Scalar mean_n2, Scalar squeeze, int steps1,
           int steps2, ModelKind objective = ModelKind::a_nuisance)
      : n1(mean_n1), n2(mean_n2), r(squeeze), theta1_steps(steps1),
        theta2_steps(steps2), model(objective) {
    if (!(n1 >= Scalar(0)) || !(n2 >= Scalar(0)) || !(r >= Scalar(0)) ||
        !std::isfinite(n1) || !std::isfinite(n2) || !std::isfinite(r))
      throw std::invalid_argument("ScanGrid: resources must be finite and nonnegative");
    if (steps1 < 8 || steps2 < 8)
      throw std::invalid_argument("ScanGrid: need at least 8 steps per angle");
  }
};

template <typename Scalar = double>
struct ScanRow {
  Scalar theta1, theta2;
  Scalar f11, f12, f22;
  Scalar fa, fb, fc, fd;

  Scalar model_value(ModelKind m) const {
    switch (m) {
      case ModelKind::a_nuisance: return fa;
      case ModelKind::b_antisymmetric: return fb;
      case ModelKind::c_upper_arm: return fc;
      case ModelKind::d_lower_arm: return fd;
    }
    return fa;
  }
};

template <typename Scalar = double>
struct ArgMax {
  Scalar theta1 = 0;
  Scalar theta2 = 0;
  Scalar value = 0;
};

template <typename Scalar = double>
struct ScanResult {
  std::vector<ScanRow<Scalar>> rows;
  std::array<ArgMax<Scalar>, 4> argmax_per_model;

  const ArgMax<Scalar>& argmax_for(ModelKind m) const {
    return argmax_per_model[static_cast<std::size_t>(model_index(m))];
  }
};

namespace detail {

template <typename Scalar>
ScanRow<Scalar> scan_point(const ScanGrid<Scalar>& grid, Scalar theta1,
                           Scalar theta2) {
  using Complex = std::complex<Scalar>;
  const Complex alpha1 = std::sqrt(grid.n1) *
                         Complex(std::cos(theta1), std::sin(theta1));
  const Complex alpha2 = std::sqrt(grid.n2) *
                         Complex(std::cos(theta2), std::sin(theta2));
  const QfiMatrix<Scalar> f = qfi_closed_form(alpha1, grid.r, alpha2);
  ScanRow<Scalar> row;
  row.theta1 = theta1;
  row.theta2 = theta2;
  row.f11 = f.f11;
  row.f12 = f.f12;
  row.f22 = f.f22;
  bool degenerate = false;
  row.fa = model_qfi(f, ModelKind::a_nuisance, &degenerate);
  row.fb = model_qfi(f, ModelKind::b_antisymmetric);
  row.fc = model_qfi(f, ModelKind::c_upper_arm);
  row.fd = model_qfi(f, ModelKind::d_lower_arm);
  return row;
}

}  // namespace detail

/// Tabulates the closed-form QFI and all four model values over the full
/// argument grid.  Rows are theta1-major; ties in the per-model maxima
/// resolve to the lexicographically smallest (theta1, theta2) so results
/// are reproducible.
template <typename Scalar>
ScanResult<Scalar> run_scan(const ScanGrid<Scalar>& grid) {
  ScanResult<Scalar> result;
  result.rows.reserve(static_cast<std::size_t>(grid.theta1_steps) *
                      static_cast<std::size_t>(grid.theta2_steps));
  bool first = true;
  for (int i = 0; i < grid.theta1_steps; ++i) {
    const Scalar theta1 = Scalar(kTwoPi) * Scalar(i) / Scalar(grid.theta1_steps);
    for (int j = 0; j < grid.theta2_steps; ++j) {
      const Scalar theta2 = Scalar(kTwoPi) * Scalar(j) / Scalar(grid.theta2_steps);
      ScanRow<Scalar> row = detail::scan_point(grid, theta1, theta2);
      for (ModelKind m : kAllModels) {
        ArgMax<Scalar>& best =
            result.argmax_per_model[static_cast<std::size_t>(model_index(m))];
        const Scalar v = row.model_value(m);
        if (first || v > best.value) best = {theta1, theta2, v};
      }
      first = false;
      result.rows.push_back(row);
    }
  }
  return result;
}

template <typename Scalar = double>
struct RefineResult {
  Scalar theta1;
  Scalar theta2;
  Scalar value;
  bool converged;
};

/// Derivative-free coordinate descent from a grid seed, with step halving,
/// for the grid's objective model.  Converges to 1e-8 in value on this
/// smooth 2-D landscape; never returns a value below the seed's.  Gives up
/// with `converged = false` after 10^4 sweeps.
template <typename Scalar>
RefineResult<Scalar> refine_max(const ScanGrid<Scalar>& grid, Scalar seed_theta1,
                                Scalar seed_theta2) {
  const auto value_at = [&](Scalar t1, Scalar t2) {
    return detail::scan_point(grid, t1, t2).model_value(grid.model);
  };
  Scalar t1 = seed_theta1, t2 = seed_theta2;
  Scalar best = value_at(t1, t2);
  Scalar step = Scalar(kTwoPi) /
                Scalar(std::max(grid.theta1_steps, grid.theta2_steps));
  const Scalar step_floor = Scalar(1e-7);
  const int max_sweeps = 10000;
  int sweeps = 0;
  while (step >= step_floor && sweeps < max_sweeps) {
    ++sweeps;
    bool moved = false;
    for (int coord = 0; coord < 2; ++coord) {
      Scalar& t = (coord == 0) ? t1 : t2;
      for (const Scalar delta : {step, -step}) {
        const Scalar trial = t + delta;
        const Scalar v = (coord == 0) ? value_at(trial, t2) : value_at(t1, trial);
        if (v > best) {
          best = v;
          t = trial;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step /= Scalar(2);
  }
  return {t1, t2, best, step < step_floor};
}

}  // namespace mzqfi
