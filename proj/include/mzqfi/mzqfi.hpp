#pragma once

// Quantum Fisher information for two-mode Mach-Zehnder phase estimation:
// truncated Fock-space simulation, closed-form results for the
// displaced-squeezed ⊗ coherent input, model reductions and argument scans.

#include "mzqfi/closed_form.hpp"
#include "mzqfi/errors.hpp"
#include "mzqfi/fock.hpp"
#include "mzqfi/mzi.hpp"
#include "mzqfi/optics.hpp"
#include "mzqfi/qfi.hpp"
#include "mzqfi/scan.hpp"
