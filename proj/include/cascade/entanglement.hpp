#pragma once

#include <Eigen/Dense>

#include "cascade/analytic.hpp"

namespace cascade {

/// Two-qubit density matrix in the product basis |00>, |01>, |10>, |11>
/// where the first slot is subsystem A and the second subsystem B.
using DensityMatrix = Eigen::Matrix4cd;

/// Reduced state of the two atoms: populations |alpha|^2 (A excited) and
/// |gamma|^2 (B excited), coherence alpha*conj(gamma), and the remaining
/// weight on |00>.
DensityMatrix rho_atoms(const AmplitudeState& s);

/// Reduced state of the two cavity modes, same structure with beta, delta.
DensityMatrix rho_cavities(const AmplitudeState& s);

/// Wootters concurrence of an arbitrary two-qubit density matrix: descending
/// eigenvalues lambda_i of rho (sy x sy) conj(rho) (sy x sy) give
/// max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)), clamped into [0, 1].
/// Eigenvalues with magnitude below 1e-10 are treated as exact zeros and
/// results within 1e-10 of the endpoints 0 and 1 are returned exactly;
/// residues beyond that, or a matrix that is not Hermitian / trace-one /
/// positive within tolerance, raise NotADensityMatrix.
double concurrence(const DensityMatrix& rho);

/// Closed forms for the single-excitation family: 2|alpha||gamma| and
/// 2|beta||delta|, clamped into [0, 1].
double concurrence_atoms(const AmplitudeState& s);
double concurrence_cavities(const AmplitudeState& s);

}  // namespace cascade
