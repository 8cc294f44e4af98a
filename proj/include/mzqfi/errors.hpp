#pragma once

#include <stdexcept>
#include <string>

namespace mzqfi {

// Operands live on differently sized truncated spaces.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The kept Fock levels cannot hold the requested state within the
// configured leakage tolerance.
class TruncationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Fisher information of zero (or less) was asked to bound a variance.
class NoInformation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed matrix failed a positivity/consistency check beyond the
// tolerance attributable to roundoff.
class NumericalQuality : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nuisance reduction requested but the nuisance row of the information
// matrix vanishes inconsistently.
class DegenerateNuisance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument violated a stated contract (e.g. a non-Hermitian generator
// passed to a Hermitian matrix exponential).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mzqfi
