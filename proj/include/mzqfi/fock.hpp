#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <utility>

#include "mzqfi/errors.hpp"

namespace mzqfi {

enum class Mode { one = 1, two = 2 };

/// Size of the kept two-mode Fock grid.  Mode j keeps levels 0..dj-1.
/// `leak_tol` is the largest probability weight tolerated outside the
/// reliable interior after a preparation step.
template <typename Scalar = double>
struct Truncation {
  static_assert(std::is_floating_point_v<Scalar>);

  Eigen::Index d1;
  Eigen::Index d2;
  Scalar leak_tol;

  Truncation(Eigen::Index levels1, Eigen::Index levels2,
             Scalar leakage_tolerance = Scalar(1e-8))
      : d1(levels1), d2(levels2), leak_tol(leakage_tolerance) {
    if (d1 < 2 || d2 < 2)
      throw std::invalid_argument("Truncation: need at least 2 levels per mode");
    if (!(leak_tol > Scalar(0)) || !(leak_tol < Scalar(1)))
      throw std::invalid_argument("Truncation: leak_tol must lie in (0,1)");
  }

  Eigen::Index dim() const { return d1 * d2; }

  // Largest total photon number n1+n2 on which truncated ladder operators
  // still act as exact adjoint pairs (two shells of safety margin).
  Eigen::Index interior_total() const { return std::min(d1, d2) - 2; }

  bool same_dims(const Truncation& other) const {
    return d1 == other.d1 && d2 == other.d2;
  }
};

namespace detail {

template <typename Scalar>
void require_same_dims(const Truncation<Scalar>& a, const Truncation<Scalar>& b,
                       const char* where) {
  if (!a.same_dims(b))
    throw DimensionMismatch(std::string(where) + ": truncation mismatch (" +
                            std::to_string(a.d1) + "x" + std::to_string(a.d2) +
                            " vs " + std::to_string(b.d1) + "x" +
                            std::to_string(b.d2) + ")");
}

}  // namespace detail

/// Flat index of the basis state |n1>⊗|n2>, row-major over (n1, n2).
template <typename Scalar>
Eigen::Index tensor_basis_index(Eigen::Index n1, Eigen::Index n2,
                                const Truncation<Scalar>& trunc) {
  if (n1 < 0 || n1 >= trunc.d1 || n2 < 0 || n2 >= trunc.d2)
    throw DimensionMismatch("tensor_basis_index: level outside kept grid");
  return n1 * trunc.d2 + n2;
}

/// Normalized two-mode pure state on the truncated grid.  amps(n1, n2) is
/// the amplitude of |n1>⊗|n2>; storage is row-major so that flat() matches
/// tensor_basis_index ordering.
template <typename Scalar = double>
struct FockVector {
  using Complex = std::complex<Scalar>;
  using Grid =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Grid amps;
  Truncation<Scalar> trunc;

  explicit FockVector(const Truncation<Scalar>& truncation)
      : amps(Grid::Zero(truncation.d1, truncation.d2)), trunc(truncation) {}

  FockVector(Grid amplitudes, const Truncation<Scalar>& truncation)
      : amps(std::move(amplitudes)), trunc(truncation) {
    if (amps.rows() != trunc.d1 || amps.cols() != trunc.d2)
      throw DimensionMismatch("FockVector: amplitude grid does not match truncation");
  }

  Eigen::Map<Eigen::Vector<Complex, Eigen::Dynamic>> flat() {
    return {amps.data(), amps.size()};
  }
  Eigen::Map<const Eigen::Vector<Complex, Eigen::Dynamic>> flat() const {
    return {amps.data(), amps.size()};
  }
};

/// Dense operator on the truncated two-mode space, basis-ordered like
/// FockVector::flat(). `hermitian_hint` marks operators constructed to be
/// Hermitian.
template <typename Scalar = double>
struct TwoModeOperator {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix mat;
  Truncation<Scalar> trunc;
  bool hermitian_hint = false;

  TwoModeOperator(Matrix m, const Truncation<Scalar>& truncation,
                  bool hermitian = false)
      : mat(std::move(m)), trunc(truncation), hermitian_hint(hermitian) {
    if (mat.rows() != trunc.dim() || mat.cols() != trunc.dim())
      throw DimensionMismatch("TwoModeOperator: matrix does not match truncation");
  }
};

template <typename Scalar>
FockVector<Scalar> vacuum(const Truncation<Scalar>& trunc) {
  FockVector<Scalar> v(trunc);
  v.amps(0, 0) = Scalar(1);
  return v;
}

template <typename Scalar>
FockVector<Scalar> basis_state(Eigen::Index n1, Eigen::Index n2,
                               const Truncation<Scalar>& trunc) {
  FockVector<Scalar> v(trunc);
  v.amps(n1, n2) = Scalar(1);  // indices validated below
  tensor_basis_index(n1, n2, trunc);
  return v;
}

template <typename Scalar>
TwoModeOperator<Scalar> identity_op(const Truncation<Scalar>& trunc) {
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  return {Matrix::Identity(trunc.dim(), trunc.dim()), trunc, true};
}

namespace detail {

// d x d single-mode ladder with <n-1|a|n> = sqrt(n).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
mode_annihilator(Eigen::Index d) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n)
    a(n - 1, n) = std::sqrt(Scalar(n));
  return a;
}

}  // namespace detail

/// Annihilation operator of the selected mode, lifted to the two-mode grid
/// (a ⊗ 1 or 1 ⊗ a).
template <typename Scalar>
TwoModeOperator<Scalar> annihilator(Mode mode, const Truncation<Scalar>& trunc) {
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  Matrix m = Matrix::Zero(trunc.dim(), trunc.dim());
  if (mode == Mode::one) {
    for (Eigen::Index n1 = 1; n1 < trunc.d1; ++n1)
      for (Eigen::Index n2 = 0; n2 < trunc.d2; ++n2)
        m(tensor_basis_index(n1 - 1, n2, trunc),
          tensor_basis_index(n1, n2, trunc)) = std::sqrt(Scalar(n1));
  } else {
    for (Eigen::Index n1 = 0; n1 < trunc.d1; ++n1)
      for (Eigen::Index n2 = 1; n2 < trunc.d2; ++n2)
        m(tensor_basis_index(n1, n2 - 1, trunc),
          tensor_basis_index(n1, n2, trunc)) = std::sqrt(Scalar(n2));
  }
  return {std::move(m), trunc, false};
}

/// Photon number operator of one mode (diagonal eigenvalue n1 or n2).
template <typename Scalar>
TwoModeOperator<Scalar> number_op(Mode mode, const Truncation<Scalar>& trunc) {
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  Matrix m = Matrix::Zero(trunc.dim(), trunc.dim());
  for (Eigen::Index n1 = 0; n1 < trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < trunc.d2; ++n2) {
      const Eigen::Index i = tensor_basis_index(n1, n2, trunc);
      m(i, i) = Scalar(mode == Mode::one ? n1 : n2);
    }
  return {std::move(m), trunc, true};
}

/// Total photon number N = a1†a1 + a2†a2 (diagonal eigenvalue n1+n2).
template <typename Scalar>
TwoModeOperator<Scalar> number_op_total(const Truncation<Scalar>& trunc) {
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  Matrix m = Matrix::Zero(trunc.dim(), trunc.dim());
  for (Eigen::Index n1 = 0; n1 < trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < trunc.d2; ++n2) {
      const Eigen::Index i = tensor_basis_index(n1, n2, trunc);
      m(i, i) = Scalar(n1 + n2);
    }
  return {std::move(m), trunc, true};
}

template <typename Scalar>
struct Su2Generators {
  TwoModeOperator<Scalar> j1;
  TwoModeOperator<Scalar> j2;
  TwoModeOperator<Scalar> j3;
};

/// Schwinger-boson angular momentum components:
///   J1 = (a1†a2 + a2†a1)/2,  J2 = (a1†a2 - a2†a1)/(2i),
///   J3 = (a1†a1 - a2†a2)/2.
/// Built entrywise so a and a† enter as exact mutual adjoints.
template <typename Scalar>
Su2Generators<Scalar> su2_generators(const Truncation<Scalar>& trunc) {
  using Complex = std::complex<Scalar>;
  using Matrix = typename TwoModeOperator<Scalar>::Matrix;
  Matrix m1 = Matrix::Zero(trunc.dim(), trunc.dim());
  Matrix m2 = Matrix::Zero(trunc.dim(), trunc.dim());
  Matrix m3 = Matrix::Zero(trunc.dim(), trunc.dim());
  for (Eigen::Index n1 = 0; n1 < trunc.d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < trunc.d2; ++n2) {
      const Eigen::Index col = tensor_basis_index(n1, n2, trunc);
      m3(col, col) = Scalar(n1 - n2) / Scalar(2);
      // a1†a2 |n1,n2> = sqrt((n1+1) n2) |n1+1, n2-1>
      if (n1 + 1 < trunc.d1 && n2 >= 1) {
        const Eigen::Index row = tensor_basis_index(n1 + 1, n2 - 1, trunc);
        const Scalar t = std::sqrt(Scalar((n1 + 1) * n2));
        m1(row, col) += t / Scalar(2);
        m1(col, row) += t / Scalar(2);
        m2(row, col) += Complex(Scalar(0), -t / Scalar(2));
        m2(col, row) += Complex(Scalar(0), t / Scalar(2));
      }
    }
  return {TwoModeOperator<Scalar>{std::move(m1), trunc, true},
          TwoModeOperator<Scalar>{std::move(m2), trunc, true},
          TwoModeOperator<Scalar>{std::move(m3), trunc, true}};
}

template <typename Scalar>
TwoModeOperator<Scalar> adjoint(const TwoModeOperator<Scalar>& op) {
  return {op.mat.adjoint().eval(), op.trunc, op.hermitian_hint};
}

template <typename Scalar>
TwoModeOperator<Scalar> operator*(const TwoModeOperator<Scalar>& a,
                                  const TwoModeOperator<Scalar>& b) {
  detail::require_same_dims(a.trunc, b.trunc, "operator*");
  return {(a.mat * b.mat).eval(), a.trunc, false};
}

template <typename Scalar>
TwoModeOperator<Scalar> operator+(const TwoModeOperator<Scalar>& a,
                                  const TwoModeOperator<Scalar>& b) {
  detail::require_same_dims(a.trunc, b.trunc, "operator+");
  return {(a.mat + b.mat).eval(), a.trunc, a.hermitian_hint && b.hermitian_hint};
}

template <typename Scalar>
TwoModeOperator<Scalar> operator-(const TwoModeOperator<Scalar>& a,
                                  const TwoModeOperator<Scalar>& b) {
  detail::require_same_dims(a.trunc, b.trunc, "operator-");
  return {(a.mat - b.mat).eval(), a.trunc, a.hermitian_hint && b.hermitian_hint};
}

template <typename Scalar>
TwoModeOperator<Scalar> operator*(std::complex<Scalar> c,
                                  const TwoModeOperator<Scalar>& op) {
  return {(c * op.mat).eval(), op.trunc,
          op.hermitian_hint && c.imag() == Scalar(0)};
}

template <typename Scalar>
bool is_hermitian(const TwoModeOperator<Scalar>& op,
                  Scalar rel_tol = Scalar(1e-12)) {
  const Scalar scale = op.mat.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) return true;
  return (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

/// <u|v>, conjugate-linear in the first argument.
template <typename Scalar>
std::complex<Scalar> inner(const FockVector<Scalar>& u,
                           const FockVector<Scalar>& v) {
  detail::require_same_dims(u.trunc, v.trunc, "inner");
  return u.flat().dot(v.flat());
}

template <typename Scalar>
Scalar norm(const FockVector<Scalar>& v) {
  return v.flat().norm();
}

template <typename Scalar>
FockVector<Scalar> apply(const TwoModeOperator<Scalar>& op,
                         const FockVector<Scalar>& v) {
  detail::require_same_dims(op.trunc, v.trunc, "apply");
  FockVector<Scalar> out(v.trunc);
  out.flat() = op.mat * v.flat();
  return out;
}

/// <psi|O|psi>, evaluated as <psi|(O psi)> (one matrix-vector product).
template <typename Scalar>
std::complex<Scalar> expect(const FockVector<Scalar>& state,
                            const TwoModeOperator<Scalar>& op) {
  detail::require_same_dims(state.trunc, op.trunc, "expect");
  return state.flat().dot(op.mat * state.flat());
}

/// Probability weight on the two outermost kept levels of either mode.
/// This is the quantity guarded by Truncation::leak_tol.
template <typename Scalar>
Scalar top_shell_weight(const FockVector<Scalar>& v) {
  Scalar w = 0;
  const Eigen::Index d1 = v.trunc.d1, d2 = v.trunc.d2;
  for (Eigen::Index n1 = 0; n1 < d1; ++n1)
    for (Eigen::Index n2 = 0; n2 < d2; ++n2)
      if (n1 >= d1 - 2 || n2 >= d2 - 2) w += std::norm(v.amps(n1, n2));
  return w;
}

}  // namespace mzqfi
