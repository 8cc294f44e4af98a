#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mzqfi/errors.hpp"
#include "mzqfi/fock.hpp"

namespace mzqfi {

/// Interferometer input: mode 1 carries D(alpha1) S(r) |0> with squeeze
/// parameter r >= 0 and zero squeeze angle, mode 2 carries the coherent
/// state |alpha2>.
template <typename Scalar = double>
struct InputSpec {
  using Complex = std::complex<Scalar>;

  Complex alpha1;
  Scalar r;
  Complex alpha2;
  Truncation<Scalar> trunc;

  InputSpec(Complex displacement1, Scalar squeeze, Complex coherent2,
            const Truncation<Scalar>& truncation)
      : alpha1(displacement1), r(squeeze), alpha2(coherent2), trunc(truncation) {
    if (!(r >= Scalar(0)))
      throw std::invalid_argument("InputSpec: squeeze parameter must satisfy r >= 0");
  }

  Scalar n1() const { return std::norm(alpha1); }
  Scalar n2() const { return std::norm(alpha2); }
};

/// Arm phases (radians, unrestricted).
template <typename Scalar = double>
struct PhasePair {
  Scalar phi1 = 0;
  Scalar phi2 = 0;

  Scalar plus() const { return phi1 + phi2; }
  Scalar minus() const { return phi1 - phi2; }

  static PhasePair from_plus_minus(Scalar plus, Scalar minus) {
    return {(plus + minus) / Scalar(2), (plus - minus) / Scalar(2)};
  }
};

namespace detail {

// exp(scale * H) for Hermitian H via eigendecomposition; unitary to machine
// precision when scale is purely imaginary.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
expm_hermitian(const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic,
                                   Eigen::Dynamic>& h,
               std::complex<Scalar> scale) {
  using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalQuality("expm_hermitian: eigendecomposition failed");
  Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic> phases =
      (scale * es.eigenvalues().template cast<std::complex<Scalar>>().array())
          .exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Single-mode D(alpha) = exp(alpha a† - alpha* a) on d levels.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
mode_displacement(std::complex<Scalar> alpha, Eigen::Index d) {
  using Complex = std::complex<Scalar>;
  auto a = mode_annihilator<Scalar>(d);
  // exp(K) with anti-Hermitian K written as exp(-i H), H = i K Hermitian.
  auto h = (Complex(0, 1) * (alpha * a.adjoint() - std::conj(alpha) * a)).eval();
  return expm_hermitian<Scalar>(h, Complex(0, -1));
}

// Single-mode S(r) = exp(r (a² - a†²)/2) on d levels, zero squeeze angle.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
mode_squeeze(Scalar r, Eigen::Index d) {
  using Complex = std::complex<Scalar>;
  auto a = mode_annihilator<Scalar>(d);
  auto aa = (a * a).eval();
  auto h = (Complex(0, r / Scalar(2)) * (aa - aa.adjoint())).eval();
  return expm_hermitian<Scalar>(h, Complex(0, -1));
}

// Lift a single-mode matrix to the two-mode grid (row-major (n1, n2)).
template <typename Scalar>
TwoModeOperator<Scalar> lift(
    Mode mode,
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& m,
    const Truncation<Scalar>& trunc, bool hermitian) {
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  const Matrix eye1 = Matrix::Identity(trunc.d1, trunc.d1);
  const Matrix eye2 = Matrix::Identity(trunc.d2, trunc.d2);
  Matrix full = (mode == Mode::one) ? Eigen::kroneckerProduct(m, eye2).eval()
                                    : Eigen::kroneckerProduct(eye1, m).eval();
  return {std::move(full), trunc, hermitian};
}

}  // namespace detail

/// exp(scale * G) for a Hermitian generator G, via eigendecomposition.
/// Purely imaginary scale yields a unitary; real scale is allowed for
/// analytic-continuation checks.
template <typename Scalar>
TwoModeOperator<Scalar> hermitian_expm(const TwoModeOperator<Scalar>& generator,
                                       std::complex<Scalar> scale) {
  if (!generator.hermitian_hint)
    throw ContractViolation("hermitian_expm: generator not marked Hermitian");
  if (!is_hermitian(generator))
    throw ContractViolation("hermitian_expm: generator fails the Hermiticity check");
  return {detail::expm_hermitian<Scalar>(generator.mat, scale), generator.trunc,
          scale.imag() == Scalar(0)};
}

/// Displacement D(alpha) acting on one mode of the two-mode grid.
template <typename Scalar>
TwoModeOperator<Scalar> displacement(Mode mode, std::complex<Scalar> alpha,
                                     const Truncation<Scalar>& trunc) {
  const Eigen::Index d = (mode == Mode::one) ? trunc.d1 : trunc.d2;
  return detail::lift<Scalar>(mode, detail::mode_displacement<Scalar>(alpha, d),
                              trunc, false);
}

/// Squeeze S(r) = exp(r (a² - a†²)/2) acting on one mode.  The sign
/// convention matters: it fixes which quadrature is squeezed and hence the
/// e^{±2r} weighting downstream.
template <typename Scalar>
TwoModeOperator<Scalar> squeeze(Mode mode, Scalar r,
                                const Truncation<Scalar>& trunc) {
  if (!(r >= Scalar(0)))
    throw std::invalid_argument("squeeze: r must satisfy r >= 0");
  const Eigen::Index d = (mode == Mode::one) ? trunc.d1 : trunc.d2;
  return detail::lift<Scalar>(mode, detail::mode_squeeze<Scalar>(r, d), trunc,
                              false);
}

/// One-parameter beam-splitter family exp(-i theta J1) decomposed into its
/// total-photon-number shells.  J1 conserves n1+n2, so each shell is a real
/// symmetric tridiagonal block; exponentiating blockwise is exact, keeps
/// the operator number-conserving, and stays cheap at large truncations.
template <typename Scalar = double>
class BeamSplitterBlocks {
 public:
  using Complex = std::complex<Scalar>;
  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVector = Eigen::Vector<Scalar, Eigen::Dynamic>;

  explicit BeamSplitterBlocks(const Truncation<Scalar>& trunc) : trunc_(trunc) {
    const Eigen::Index shells = trunc.d1 + trunc.d2 - 1;
    eigvecs_.reserve(shells);
    eigvals_.reserve(shells);
    kmin_.reserve(shells);
    for (Eigen::Index n = 0; n < shells; ++n) {
      const Eigen::Index kmin = std::max<Eigen::Index>(0, n - (trunc.d2 - 1));
      const Eigen::Index kmax = std::min(trunc.d1 - 1, n);
      const Eigen::Index m = kmax - kmin + 1;
      RealMatrix j = RealMatrix::Zero(m, m);
      for (Eigen::Index i = 0; i + 1 < m; ++i) {
        const Eigen::Index k = kmin + i;
        const Scalar t = std::sqrt(Scalar((k + 1) * (n - k))) / Scalar(2);
        j(i, i + 1) = t;
        j(i + 1, i) = t;
      }
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(j);
      if (es.info() != Eigen::Success)
        throw NumericalQuality("BeamSplitterBlocks: shell eigendecomposition failed");
      eigvecs_.push_back(es.eigenvectors());
      eigvals_.push_back(es.eigenvalues());
      kmin_.push_back(kmin);
    }
  }

  const Truncation<Scalar>& trunc() const { return trunc_; }

  /// exp(-i theta J1) |v>.
  FockVector<Scalar> apply(const FockVector<Scalar>& v, Scalar theta) const {
    detail::require_same_dims(v.trunc, trunc_, "BeamSplitterBlocks::apply");
    FockVector<Scalar> out(v.trunc);
    for (std::size_t s = 0; s < eigvecs_.size(); ++s) {
      const Eigen::Index n = static_cast<Eigen::Index>(s);
      const Eigen::Index kmin = kmin_[s];
      const Eigen::Index m = eigvecs_[s].rows();
      Eigen::Vector<Complex, Eigen::Dynamic> shell(m);
      for (Eigen::Index i = 0; i < m; ++i)
        shell(i) = v.amps(kmin + i, n - (kmin + i));
      Eigen::Vector<Complex, Eigen::Dynamic> coeffs =
          eigvecs_[s].transpose().template cast<Complex>() * shell;
      coeffs.array() *=
          (Complex(0, -theta) * eigvals_[s].template cast<Complex>().array())
              .exp();
      shell = eigvecs_[s].template cast<Complex>() * coeffs;
      for (Eigen::Index i = 0; i < m; ++i)
        out.amps(kmin + i, n - (kmin + i)) = shell(i);
    }
    return out;
  }

  /// Dense exp(-i theta J1) assembled from the shell blocks.
  TwoModeOperator<Scalar> materialize(Scalar theta) const {
    using Matrix = typename TwoModeOperator<Scalar>::Matrix;
    Matrix full = Matrix::Zero(trunc_.dim(), trunc_.dim());
    for (std::size_t s = 0; s < eigvecs_.size(); ++s) {
      const Eigen::Index n = static_cast<Eigen::Index>(s);
      const Eigen::Index kmin = kmin_[s];
      const Eigen::Index m = eigvecs_[s].rows();
      Eigen::Vector<Complex, Eigen::Dynamic> phases =
          (Complex(0, -theta) * eigvals_[s].template cast<Complex>().array())
              .exp();
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> block =
          eigvecs_[s].template cast<Complex>() * phases.asDiagonal() *
          eigvecs_[s].transpose().template cast<Complex>();
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          full(tensor_basis_index(kmin + i, n - (kmin + i), trunc_),
               tensor_basis_index(kmin + j, n - (kmin + j), trunc_)) =
              block(i, j);
    }
    return {std::move(full), trunc_, false};
  }

 private:
  Truncation<Scalar> trunc_;
  std::vector<RealMatrix> eigvecs_;
  std::vector<RealVector> eigvals_;
  std::vector<Eigen::Index> kmin_;
};

inline constexpr double kBeamSplitterTheta = 1.5707963267948966;  // pi/2

/// 50:50 beam splitter U_BS = exp(-i pi (a1†a2 + a2†a1)/4) = exp(-i pi/2 J1),
/// or its adjoint when `dagger` is set.  Exactly unitary and total-number
/// conserving by construction.
template <typename Scalar>
TwoModeOperator<Scalar> beam_splitter(const Truncation<Scalar>& trunc,
                                      bool dagger = false) {
  const Scalar theta = Scalar(dagger ? -kBeamSplitterTheta : kBeamSplitterTheta);
  return BeamSplitterBlocks<Scalar>(trunc).materialize(theta);
}

/// Phase shift applied in place of the dense unitary: multiplies amplitude
/// (n1, n2) by exp(-i (phi1 n1 + phi2 n2)).
template <typename Scalar>
FockVector<Scalar> apply_phase_shift(const FockVector<Scalar>& v,
                                     const PhasePair<Scalar>& phases) {
  using Complex = std::complex<Scalar>;
  FockVector<Scalar> out(v.trunc);
  for (Eigen::Index n1 = 0; n1 < v.trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < v.trunc.d2; ++n2)
      out.amps(n1, n2) =
          v.amps(n1, n2) *
          std::exp(Complex(0, -(phases.phi1 * Scalar(n1) + phases.phi2 * Scalar(n2))));
  return out;
}

/// Dense two-arm phase unitary exp(-i phi1 a1†a1 - i phi2 a2†a2) (diagonal).
template <typename Scalar>
TwoModeOperator<Scalar> phase_shift(const PhasePair<Scalar>& phases,
                                    const Truncation<Scalar>& trunc) {
  using Complex = std::complex<Scalar>;
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  Matrix m = Matrix::Zero(trunc.dim(), trunc.dim());
  for (Eigen::Index n1 = 0; n1 < trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < trunc.d2; ++n2) {
      const Eigen::Index i = tensor_basis_index(n1, n2, trunc);
      m(i, i) = std::exp(
          Complex(0, -(phases.phi1 * Scalar(n1) + phases.phi2 * Scalar(n2))));
    }
  return {std::move(m), trunc, false};
}

namespace detail {

template <typename Scalar>
FockVector<Scalar> prepare_input_unchecked(const InputSpec<Scalar>& spec) {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Vector<Complex, Eigen::Dynamic>;
  // Mode 1: displacement after squeeze, D(alpha1) S(r) |0>.
  Vector e1 = Vector::Zero(spec.trunc.d1);
  e1(0) = Scalar(1);
  Vector psi1 = mode_displacement<Scalar>(spec.alpha1, spec.trunc.d1) *
                (mode_squeeze<Scalar>(spec.r, spec.trunc.d1) * e1);
  // Mode 2: coherent state D(alpha2) |0>.
  Vector e2 = Vector::Zero(spec.trunc.d2);
  e2(0) = Scalar(1);
  Vector psi2 = mode_displacement<Scalar>(spec.alpha2, spec.trunc.d2) * e2;
  FockVector<Scalar> out(spec.trunc);
  out.amps = psi1 * psi2.transpose();
  return out;
}

}  // namespace detail

/// Throws TruncationTooSmall unless `v` passes the leakage guard: its norm
/// must be within leak_tol of 1 and the weight on the two outermost levels
/// of each mode must not exceed leak_tol.
template <typename Scalar>
void require_within_leakage(const FockVector<Scalar>& v, const char* context) {
  const Scalar tol = v.trunc.leak_tol;
  const Scalar norm_sq = v.flat().squaredNorm();
  const Scalar edge = top_shell_weight(v);
  if (std::abs(norm_sq - Scalar(1)) > tol || edge > tol)
    throw TruncationTooSmall(
        std::string(context) + ": leakage guard failed at d1=" +
        std::to_string(v.trunc.d1) + " d2=" + std::to_string(v.trunc.d2) +
        " (top-shell weight " + std::to_string(static_cast<double>(edge)) +
        ", |norm^2-1| " +
        std::to_string(static_cast<double>(std::abs(norm_sq - Scalar(1)))) +
        ", leak_tol " + std::to_string(static_cast<double>(tol)) + ")");
}

/// Product input state D(alpha1) S(r) |0> ⊗ |alpha2> on the truncated grid.
/// Fails with TruncationTooSmall when the grid cannot hold the state within
/// the leakage tolerance.
template <typename Scalar>
FockVector<Scalar> prepare_input(const InputSpec<Scalar>& spec) {
  FockVector<Scalar> out = detail::prepare_input_unchecked(spec);
  require_within_leakage(out, "prepare_input");
  return out;
}

/// Guard-driven truncation sizing: start from a per-mode occupancy
/// heuristic, then double until prepare_input passes the leakage guard.
template <typename Scalar>
Truncation<Scalar> auto_truncation(std::complex<Scalar> alpha1, Scalar r,
                                   std::complex<Scalar> alpha2,
                                   Scalar leak_tol = Scalar(1e-8)) {
  const auto start = [](Scalar amp, Scalar rr) {
    const Scalar d = std::ceil((amp + Scalar(4)) * (amp + Scalar(4)) *
                               std::exp(Scalar(2) * rr));
    return std::max<Eigen::Index>(2, static_cast<Eigen::Index>(d));
  };
  Eigen::Index d1 = start(std::abs(alpha1), r);
  Eigen::Index d2 = start(std::abs(alpha2), Scalar(0));
  std::string trace;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Truncation<Scalar> trunc(d1, d2, leak_tol);
    FockVector<Scalar> probe =
        detail::prepare_input_unchecked(InputSpec<Scalar>(alpha1, r, alpha2, trunc));
    const Scalar edge = top_shell_weight(probe);
    const Scalar drift = std::abs(probe.flat().squaredNorm() - Scalar(1));
    if (edge <= leak_tol && drift <= leak_tol) return trunc;
    trace += " d1=" + std::to_string(d1) + " d2=" + std::to_string(d2) +
             " top-shell=" + std::to_string(static_cast<double>(edge));
    d1 *= 2;
    d2 *= 2;
  }
  throw TruncationTooSmall("auto_truncation: leakage guard not met; tried" + trace);
}

}  // namespace mzqfi
