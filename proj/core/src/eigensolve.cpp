#include "detphase/eigensolve.hpp"

#include <vector>

#include "detphase/errors.hpp"

namespace detphase {

Spectrum dense_spectrum(const Eigen::MatrixXcd& matrix, SpectrumSource source,
                        std::optional<int> truncation) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::precondition, "matrix is not square");
  if (matrix.rows() > kMaxDenseDimension)
    throw Error(ErrorKind::precondition, "matrix exceeds the configured eigensolver size limit");
  if (!matrix.allFinite()) throw Error(ErrorKind::precondition, "matrix has non-finite entries");
  if (matrix.rows() == 0) return Spectrum::from_values({}, source, truncation);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::convergence, "complex Schur iteration did not converge");
  const Eigen::VectorXcd& ev = solver.eigenvalues();
  std::vector<cplx> values(ev.data(), ev.data() + ev.size());
  return Spectrum::from_values(values, source, truncation);
}

}  // namespace detphase
