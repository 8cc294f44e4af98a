#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "mzqfi/errors.hpp"
#include "mzqfi/fock.hpp"
#include "mzqfi/mzi.hpp"
#include "mzqfi/optics.hpp"

namespace mzqfi {

/// Parameter basis the entries of a QfiMatrix refer to: the sum/difference
/// phases (phi+, phi-), the per-arm phases (phi1, phi2), or some other
/// user-supplied pair.
enum class Basis { plus_minus, arm, other };

/// The four single- and two-parameter readings of the interferometer:
/// (a) relative phase with the common phase as nuisance,
/// (b) antisymmetric drive phi1 = -phi2 (common phase fixed),
/// (c) phase in the upper arm only, (d) phase in the lower arm only.
enum class ModelKind { a_nuisance, b_antisymmetric, c_upper_arm, d_lower_arm };

inline constexpr std::array<ModelKind, 4> kAllModels = {
    ModelKind::a_nuisance, ModelKind::b_antisymmetric, ModelKind::c_upper_arm,
    ModelKind::d_lower_arm};

constexpr char model_label(ModelKind m) {
  switch (m) {
    case ModelKind::a_nuisance: return 'a';
    case ModelKind::b_antisymmetric: return 'b';
    case ModelKind::c_upper_arm: return 'c';
    case ModelKind::d_lower_arm: return 'd';
  }
  return '?';
}

constexpr int model_index(ModelKind m) { return static_cast<int>(m); }

/// Symmetric 2x2 quantum Fisher information matrix (rad^-2 units) over the
/// tagged parameter basis; the off-diagonal entry is stored once.
template <typename Scalar = double>
struct QfiMatrix {
  Scalar f11 = 0;
  Scalar f12 = 0;
  Scalar f22 = 0;
  Basis basis = Basis::plus_minus;

  Scalar det() const { return f11 * f22 - f12 * f12; }

  Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << f11, f12, f12, f22;
    return m;
  }
};

/// Enforces positive semidefiniteness up to roundoff: diagonal entries and
/// the determinant may only dip below zero by `slack * max(1, scale)`.
/// Violations abort rather than being clipped.
template <typename Scalar>
void validate_psd(const QfiMatrix<Scalar>& f, Scalar slack = Scalar(1e-9)) {
  const Scalar diag_scale = std::max(Scalar(1), std::max(std::abs(f.f11), std::abs(f.f22)));
  const Scalar det_scale = std::max(Scalar(1), std::abs(f.f11 * f.f22));
  if (f.f11 < -slack * diag_scale || f.f22 < -slack * diag_scale ||
      f.det() < -slack * det_scale)
    throw NumericalQuality(
        "QfiMatrix failed the positive-semidefiniteness check: f11=" +
        std::to_string(static_cast<double>(f.f11)) +
        " f22=" + std::to_string(static_cast<double>(f.f22)) +
        " det=" + std::to_string(static_cast<double>(f.det())));
}

/// Invertible 2x2 reparametrization (phi+, phi-) -> (f, g), stored as the
/// Jacobian d(phi+, phi-)/d(f, g) together with the labels of the new
/// parameters and the basis tag the transform lands in.
template <typename Scalar = double>
struct JacobianSpec {
  Eigen::Matrix<Scalar, 2, 2> j;
  std::array<std::string, 2> labels;
  Basis target = Basis::other;

  JacobianSpec(const Eigen::Matrix<Scalar, 2, 2>& jacobian,
               std::array<std::string, 2> names, Basis target_basis = Basis::other)
      : j(jacobian), labels(std::move(names)), target(target_basis) {
    if (std::abs(j.determinant()) <= Scalar(1e-12))
      throw std::invalid_argument("JacobianSpec: singular jacobian");
  }
};

/// Jacobian of (phi+, phi-) with respect to the arm phases (phi1, phi2).
template <typename Scalar = double>
JacobianSpec<Scalar> arm_jacobian() {
  Eigen::Matrix<Scalar, 2, 2> j;
  j << Scalar(1), Scalar(1), Scalar(1), Scalar(-1);
  return {j, {"phi1", "phi2"}, Basis::arm};
}

template <typename Scalar = double>
JacobianSpec<Scalar> identity_jacobian() {
  return {Eigen::Matrix<Scalar, 2, 2>::Identity(), {"phi_plus", "phi_minus"},
          Basis::plus_minus};
}

/// Variance floor 1/(nu * F) for nu repetitions of the experiment.
template <typename Scalar = double>
struct CramerRaoBound {
  Scalar variance_lower_bound;
  long repetitions;
};

namespace detail {

// 4x covariance matrix of the commuting diagonal generators N/2 and
// J3 = (n1 - n2)/2 in the given state.  In the frame after the first beam
// splitter these generate the (phi+, phi-) evolution, so this is the QFI
// matrix of the phase stage.
template <typename Scalar>
QfiMatrix<Scalar> qfi_from_arm_frame(const FockVector<Scalar>& state) {
  Scalar ea = 0, eb = 0, eaa = 0, ebb = 0, eab = 0;
  for (Eigen::Index n1 = 0; n1 < state.trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < state.trunc.d2; ++n2) {
      const Scalar p = std::norm(state.amps(n1, n2));
      if (p == Scalar(0)) continue;
      const Scalar a = Scalar(n1 + n2) / Scalar(2);
      const Scalar b = Scalar(n1 - n2) / Scalar(2);
      ea += p * a;
      eb += p * b;
      eaa += p * a * a;
      ebb += p * b * b;
      eab += p * a * b;
    }
  QfiMatrix<Scalar> f;
  f.f11 = Scalar(4) * (eaa - ea * ea);
  f.f12 = Scalar(4) * (eab - ea * eb);
  f.f22 = Scalar(4) * (ebb - eb * eb);
  f.basis = Basis::plus_minus;
  return f;
}

template <typename Scalar>
void require_normalized(const FockVector<Scalar>& state, const char* where) {
  const Scalar drift = std::abs(state.flat().squaredNorm() - Scalar(1));
  if (drift > std::max(state.trunc.leak_tol, Scalar(1e-10)))
    throw std::invalid_argument(std::string(where) + ": input state not normalized");
}

}  // namespace detail

/// QFI matrix over (phi+, phi-) from generator covariances: the phase stage
/// is generated by N/2 and J3 in the frame reached through `pre_unitary`
/// (the first beam splitter for the MZI), so the matrix is 4x the covariance
/// of those generators in pre_unitary * input.  Exact in the truncated space.
template <typename Scalar>
QfiMatrix<Scalar> qfi_generator_path(const FockVector<Scalar>& input,
                                     const TwoModeOperator<Scalar>& pre_unitary) {
  detail::require_normalized(input, "qfi_generator_path");
  QfiMatrix<Scalar> f = detail::qfi_from_arm_frame(apply(pre_unitary, input));
  validate_psd(f);
  return f;
}

/// Same computation using the pipeline's cached arm-frame state.
template <typename Scalar>
QfiMatrix<Scalar> qfi_generator_path(const MziPipeline<Scalar>& pipeline) {
  detail::require_normalized(pipeline.input(), "qfi_generator_path");
  QfiMatrix<Scalar> f = detail::qfi_from_arm_frame(pipeline.arm_frame());
  validate_psd(f);
  return f;
}

/// Independent numerical route to the QFI matrix: central-difference
/// derivative states of the full output map in the phi+ and phi- directions
/// plugged into the pure-state formula
///   F_jk = 4 Re( <d_j psi | d_k psi> - <d_j psi|psi><psi|d_k psi> ).
/// Derivative states are used as they come; the projection term absorbs the
/// non-normalized part.  The result does not depend on `at` for this family
/// of unitaries.
template <typename Scalar, typename Pipeline>
QfiMatrix<Scalar> qfi_finite_difference_path(const FockVector<Scalar>& input,
                                             const Pipeline& pipeline,
                                             const PhasePair<Scalar>& at,
                                             Scalar step = Scalar(1e-4)) {
  using Complex = std::complex<Scalar>;
  if (!(step >= Scalar(1e-6) && step <= Scalar(1e-2)))
    throw std::invalid_argument(
        "qfi_finite_difference_path: step must lie in [1e-6, 1e-2]");
  detail::require_normalized(input, "qfi_finite_difference_path");

  const Scalar plus = at.plus(), minus = at.minus();
  const auto state = [&](Scalar p, Scalar m) {
    FockVector<Scalar> out = pipeline(PhasePair<Scalar>::from_plus_minus(p, m));
    require_within_leakage(out, "qfi_finite_difference_path");
    return out;
  };

  const FockVector<Scalar> psi = state(plus, minus);
  FockVector<Scalar> dplus = state(plus + step, minus);
  dplus.flat() -= state(plus - step, minus).flat();
  dplus.flat() /= Scalar(2) * step;
  FockVector<Scalar> dminus = state(plus, minus + step);
  dminus.flat() -= state(plus, minus - step).flat();
  dminus.flat() /= Scalar(2) * step;

  const auto entry = [&](const FockVector<Scalar>& dj, const FockVector<Scalar>& dk) {
    const Complex jk = inner(dj, dk);
    const Complex jpsi = inner(dj, psi);
    const Complex psik = inner(psi, dk);
    return Scalar(4) * std::real(jk - jpsi * psik);
  };

  QfiMatrix<Scalar> f;
  f.f11 = entry(dplus, dplus);
  f.f12 = entry(dplus, dminus);
  f.f22 = entry(dminus, dminus);
  f.basis = Basis::plus_minus;
  // O(step^2) bias widens the admissible determinant dip.
  validate_psd(f, std::max(Scalar(1e-9), Scalar(50) * step * step));
  return f;
}

/// Scalar QFI of the four estimation models, from the (phi+, phi-) matrix:
///   a: F22 - F12²/F11   (common phase unknown and not of interest)
///   b: F22              (common phase pinned)
///   c: F11 + 2 F12 + F22 (upper-arm phase only)
///   d: F11 - 2 F12 + F22 (lower-arm phase only)
/// When F11 = 0 there is no common-phase information to subtract; model a
/// then equals F22 and `*degenerate` (if given) is set instead of failing,
/// provided F12 vanishes too.
template <typename Scalar>
Scalar model_qfi(const QfiMatrix<Scalar>& f, ModelKind model,
                 bool* degenerate = nullptr) {
  if (f.basis != Basis::plus_minus)
    throw std::invalid_argument("model_qfi: matrix must be in the (phi+, phi-) basis");
  if (degenerate) *degenerate = false;
  switch (model) {
    case ModelKind::b_antisymmetric:
      return f.f22;
    case ModelKind::c_upper_arm:
      return (f.f11 + Scalar(2) * f.f12) + f.f22;
    case ModelKind::d_lower_arm:
      return (f.f11 - Scalar(2) * f.f12) + f.f22;
    case ModelKind::a_nuisance: {
      const Scalar scale = std::max(Scalar(1), std::abs(f.f22));
      if (std::abs(f.f11) <= Scalar(1e-12) * scale) {
        if (std::abs(f.f12) <= Scalar(1e-9) * scale) {
          if (degenerate) *degenerate = true;
          return f.f22;
        }
        throw DegenerateNuisance(
            "model_qfi: F11 = 0 with nonzero F12; matrix is not PSD");
      }
      return f.f22 - f.f12 * f.f12 / f.f11;
    }
  }
  throw std::invalid_argument("model_qfi: unknown model");
}

/// Congruence transform F~ = Jᵀ F J onto the new parameter pair.  Written
/// entrywise so that the arm-basis entries reproduce the model expressions
/// bit for bit.
template <typename Scalar>
QfiMatrix<Scalar> reparametrize(const QfiMatrix<Scalar>& f,
                                const JacobianSpec<Scalar>& jac) {
  const Scalar j11 = jac.j(0, 0), j12 = jac.j(0, 1);
  const Scalar j21 = jac.j(1, 0), j22 = jac.j(1, 1);
  QfiMatrix<Scalar> out;
  out.f11 = (j11 * j11 * f.f11 + Scalar(2) * j11 * j21 * f.f12) + j21 * j21 * f.f22;
  out.f12 = j11 * j12 * f.f11 + (j11 * j22 + j21 * j12) * f.f12 + j21 * j22 * f.f22;
  out.f22 = (j12 * j12 * f.f11 + Scalar(2) * j12 * j22 * f.f12) + j22 * j22 * f.f22;
  out.basis = (f.basis == Basis::plus_minus) ? jac.target : Basis::other;
  return out;
}

/// QFI about the remaining free parameter after freezing the other one to a
/// constant: the corresponding diagonal entry of the transformed matrix.
/// With the arm jacobian this reproduces models c (free_index 1) and
/// d (free_index 2); with the identity jacobian and free_index 2, model b.
template <typename Scalar>
Scalar constrained_qfi(const QfiMatrix<Scalar>& f, const JacobianSpec<Scalar>& jac,
                       int free_index) {
  if (free_index != 1 && free_index != 2)
    throw std::invalid_argument("constrained_qfi: free_index must be 1 or 2");
  const QfiMatrix<Scalar> t = reparametrize(f, jac);
  return free_index == 1 ? t.f11 : t.f22;
}

/// Cramér-Rao variance floor 1/(nu * F) for a scalar QFI F > 0.
template <typename Scalar>
CramerRaoBound<Scalar> crb(Scalar qfi_scalar, long repetitions) {
  if (repetitions < 1)
    throw std::invalid_argument("crb: repetitions must be >= 1");
  if (!(qfi_scalar > Scalar(0)))
    throw NoInformation("crb: QFI must be positive to bound a variance");
  return {Scalar(1) / (Scalar(repetitions) * qfi_scalar), repetitions};
}

}  // namespace mzqfi
