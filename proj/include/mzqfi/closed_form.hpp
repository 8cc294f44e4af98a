#pragma once

#include <cmath>
#include <complex>

#include "mzqfi/optics.hpp"
#include "mzqfi/qfi.hpp"

namespace mzqfi {

/// The five single-mode expectation values the interferometer QFI is built
/// from: <a>, <a†a>, <aa>, <a†²a> and <(a†a)²>.
template <typename Scalar = double>
struct MomentSet {
  using Complex = std::complex<Scalar>;

  Complex a_mean;
  Scalar n_mean;
  Complex aa;
  Complex adad_a;
  Scalar n2;
};

/// Quadrature weights of the displaced amplitudes under squeezing:
///   theta1 = (Re a1)² e^{-2r} + (Im a1)² e^{2r}
///   theta2 = (Im a2)² e^{-2r} + (Re a2)² e^{2r}
/// Both are nonnegative sums of squares.
template <typename Scalar = double>
struct ThetaPair {
  Scalar theta1;
  Scalar theta2;
};

template <typename Scalar>
ThetaPair<Scalar> theta_weights(std::complex<Scalar> alpha1, Scalar r,
                                std::complex<Scalar> alpha2) {
  const Scalar em = std::exp(Scalar(-2) * r), ep = std::exp(Scalar(2) * r);
  return {alpha1.real() * alpha1.real() * em + alpha1.imag() * alpha1.imag() * ep,
          alpha2.imag() * alpha2.imag() * em + alpha2.real() * alpha2.real() * ep};
}

/// Moments of the displaced squeezed vacuum D(alpha) S(r) |0>.
template <typename Scalar>
MomentSet<Scalar> moments_displaced_squeezed(std::complex<Scalar> alpha, Scalar r) {
  using Complex = std::complex<Scalar>;
  if (!(r >= Scalar(0)))
    throw std::invalid_argument("moments_displaced_squeezed: r must satisfy r >= 0");
  const Scalar sh = std::sinh(r), ch = std::cosh(r);
  const Scalar sh2 = std::sinh(Scalar(2) * r);
  const Scalar a2 = std::norm(alpha);
  MomentSet<Scalar> m;
  m.a_mean = alpha;
  m.n_mean = a2 + sh * sh;
  m.aa = alpha * alpha - Complex(sh2 / Scalar(2), 0);
  m.adad_a = Scalar(2) * std::conj(alpha) * sh * sh - alpha * (sh2 / Scalar(2)) +
             std::conj(alpha) * a2;
  m.n2 = m.n_mean * m.n_mean + sh2 * sh2 / Scalar(2) +
         std::norm(alpha * sh - std::conj(alpha) * ch);
  return m;
}

/// Moments of the coherent state |alpha>.
template <typename Scalar>
MomentSet<Scalar> moments_coherent(std::complex<Scalar> alpha) {
  const Scalar a2 = std::norm(alpha);
  MomentSet<Scalar> m;
  m.a_mean = alpha;
  m.n_mean = a2;
  m.aa = alpha * alpha;
  m.adad_a = std::conj(alpha) * a2;
  m.n2 = a2 * a2 + a2;
  return m;
}

/// QFI matrix assembled from per-mode moments of an arbitrary product input.
/// This is the product-state expansion of the generator covariances:
///   F11 = <n1²> + <n2²> - <n1>² - <n2>²
///   F22 = -<a1†²><a2²> - <a1²><a2†²> + <n1>(1+<n2>) + (1+<n1>)<n2>
///         - |<a1†><a2> - <a1><a2†>|²
///   F12 = -i<a1†n1... (normal-ordered three-operator terms) + c.c.
/// and is kept as a code path separate from qfi_closed_form on purpose:
/// the two routes agreeing is a strong check of the algebra.
template <typename Scalar>
QfiMatrix<Scalar> qfi_from_moments(const MomentSet<Scalar>& m1,
                                   const MomentSet<Scalar>& m2) {
  using Complex = std::complex<Scalar>;
  QfiMatrix<Scalar> f;
  f.f11 = m1.n2 + m2.n2 - m1.n_mean * m1.n_mean - m2.n_mean * m2.n_mean;

  const Complex cross = std::conj(m1.a_mean) * m2.a_mean -
                        m1.a_mean * std::conj(m2.a_mean);
  f.f22 = -Scalar(2) * std::real(std::conj(m1.aa) * m2.aa) +
          m1.n_mean * (Scalar(1) + m2.n_mean) +
          (Scalar(1) + m1.n_mean) * m2.n_mean - std::norm(cross);

  // <a† a a†> = <a†² a> + <a†> and <a† a a> = conj(<a†² a>).
  const Complex i(0, 1);
  const Complex x = -i * (m1.adad_a + std::conj(m1.a_mean)) * m2.a_mean -
                    i * std::conj(m1.a_mean) * std::conj(m2.adad_a) +
                    i * (m1.n_mean + m2.n_mean) * std::conj(m1.a_mean) * m2.a_mean;
  f.f12 = Scalar(2) * std::real(x);
  f.basis = Basis::plus_minus;
  return f;
}

/// Closed-form QFI matrix over (phi+, phi-) for the displaced-squeezed ⊗
/// coherent input:
///   F11 = |a2|² + sinh²(2r)/2 + theta1
///   F22 = |a1|² + sinh²(r) + theta2
///   F12 = -Im(a1 a2) sinh(2r) + 2 Im(a1* a2) cosh²(r)
/// Exact analytic evaluation; no truncation involved.
template <typename Scalar>
QfiMatrix<Scalar> qfi_closed_form(std::complex<Scalar> alpha1, Scalar r,
                                  std::complex<Scalar> alpha2) {
  if (!(r >= Scalar(0)))
    throw std::invalid_argument("qfi_closed_form: r must satisfy r >= 0");
  const Scalar sh = std::sinh(r), ch = std::cosh(r);
  const Scalar sh2 = std::sinh(Scalar(2) * r);
  const ThetaPair<Scalar> theta = theta_weights(alpha1, r, alpha2);
  QfiMatrix<Scalar> f;
  f.f11 = std::norm(alpha2) + sh2 * sh2 / Scalar(2) + theta.theta1;
  f.f22 = std::norm(alpha1) + sh * sh + theta.theta2;
  f.f12 = -(alpha1 * alpha2).imag() * sh2 +
          Scalar(2) * (std::conj(alpha1) * alpha2).imag() * ch * ch;
  f.basis = Basis::plus_minus;
  return f;
}

template <typename Scalar>
QfiMatrix<Scalar> qfi_closed_form(const InputSpec<Scalar>& spec) {
  return qfi_closed_form(spec.alpha1, spec.r, spec.alpha2);
}

/// Largest model-a QFI over the arguments of alpha1 and alpha2 at fixed
/// mean photon numbers n1, n2 and squeeze r; attained at real amplitudes:
///   F(a)_max = n1 + sinh²r + n2 e^{2r}.
template <typename Scalar>
Scalar f_a_max(Scalar n1, Scalar n2, Scalar r) {
  if (!(n1 >= Scalar(0)) || !(n2 >= Scalar(0)) || !(r >= Scalar(0)))
    throw std::invalid_argument("f_a_max: n1, n2, r must be nonnegative");
  const Scalar sh = std::sinh(r);
  return n1 + sh * sh + n2 * std::exp(Scalar(2) * r);
}

/// Model-c QFI under the argument locking Re a1 = -Im a2, Im a1 = Re a2
/// (and model d under the mirrored condition):
///   F(c) = (2 + cosh 2r) sinh²r = (3 + 2 n_s) n_s  with  n_s = sinh²r.
template <typename Scalar>
Scalar f_c_special(Scalar r) {
  if (!(r >= Scalar(0)))
    throw std::invalid_argument("f_c_special: r must satisfy r >= 0");
  const Scalar sh = std::sinh(r);
  return (Scalar(2) + std::cosh(Scalar(2) * r)) * sh * sh;
}

}  // namespace mzqfi
