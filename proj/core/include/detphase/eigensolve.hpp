#pragma once

#include <Eigen/Dense>
#include <optional>

#include "detphase/spectrum.hpp"

namespace detphase {

/// Largest matrix dimension handed to the dense eigensolver.
inline constexpr Eigen::Index kMaxDenseDimension = 4096;

/// All eigenvalues of a dense general complex matrix (Schur/QR iteration).
/// Throws ErrorKind::convergence if the iteration fails and
/// ErrorKind::precondition for oversized or non-finite input.
Spectrum dense_spectrum(const Eigen::MatrixXcd& matrix, SpectrumSource source,
                        std::optional<int> truncation = std::nullopt);

}  // namespace detphase
