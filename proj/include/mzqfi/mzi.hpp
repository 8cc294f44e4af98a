#pragma once

#include <utility>

#include "mzqfi/fock.hpp"
#include "mzqfi/optics.hpp"

namespace mzqfi {

/// Full interferometer map |psi0> -> U_BS† U_{phi1 phi2} U_BS |psi0> with
/// the beam-splitter shell blocks built once per truncation.  The state
/// right after the first beam splitter ("arm frame") is cached because both
/// the phase-covariance generators and every output state start from it.
template <typename Scalar = double>
class MziPipeline {
 public:
  explicit MziPipeline(FockVector<Scalar> input)
      : input_(std::move(input)),
        blocks_(input_.trunc),
        arm_(blocks_.apply(input_, Scalar(kBeamSplitterTheta))) {}

  const FockVector<Scalar>& input() const { return input_; }
  const BeamSplitterBlocks<Scalar>& blocks() const { return blocks_; }

  /// U_BS |psi0>: the frame in which the phase stage acts diagonally.
  const FockVector<Scalar>& arm_frame() const { return arm_; }

  FockVector<Scalar> output(const PhasePair<Scalar>& phases) const {
    return blocks_.apply(apply_phase_shift(arm_, phases),
                         Scalar(-kBeamSplitterTheta));
  }

  FockVector<Scalar> operator()(const PhasePair<Scalar>& phases) const {
    return output(phases);
  }

 private:
  FockVector<Scalar> input_;
  BeamSplitterBlocks<Scalar> blocks_;
  FockVector<Scalar> arm_;
};

}  // namespace mzqfi
