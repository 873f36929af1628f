#include "cascade/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

using cd = std::complex<double>;

constexpr double residue_tol = 1e-10;   // eigenvalue noise treated as zero
constexpr double hermitian_tol = 1e-12;

DensityMatrix single_excitation_rho(const cd& excited_a, const cd& excited_b) {
    DensityMatrix rho = DensityMatrix::Zero();
    const double pa = std::norm(excited_a);
    const double pb = std::norm(excited_b);
    rho(2, 2) = pa;
    rho(1, 1) = pb;
    rho(2, 1) = excited_a * std::conj(excited_b);
    rho(1, 2) = std::conj(excited_a) * excited_b;
    rho(0, 0) = 1.0 - pa - pb;
    return rho;
}

}  // namespace

DensityMatrix rho_atoms(const AmplitudeState& s) {
    return single_excitation_rho(s.alpha, s.gamma);
}

DensityMatrix rho_cavities(const AmplitudeState& s) {
    return single_excitation_rho(s.beta, s.delta);
}

double concurrence(const DensityMatrix& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol)
        throw NotADensityMatrix("matrix is not Hermitian");
    if (std::abs(rho.trace() - cd{1.0, 0.0}) > hermitian_tol)
        throw NotADensityMatrix("trace is not 1");
    Eigen::SelfAdjointEigenSolver<DensityMatrix> herm(
        0.5 * (rho + rho.adjoint()));
    if (herm.eigenvalues().minCoeff() < -residue_tol)
        throw NotADensityMatrix("matrix has a negative eigenvalue");

    // spin flip sy x sy is the antidiagonal (-1, 1, 1, -1)
    DensityMatrix flip = DensityMatrix::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const DensityMatrix product = rho * flip * rho.conjugate() * flip;

    Eigen::ComplexEigenSolver<DensityMatrix> solver(product, false);
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) {
        const cd ev = solver.eigenvalues()(i);
        if (std::abs(ev) < residue_tol) {
            lambda[i] = 0.0;  // exact zero of the spin-flip spectrum
            continue;
        }
        if (std::abs(ev.imag()) > residue_tol)
            throw NotADensityMatrix("spin-flip spectrum is not real");
        if (ev.real() < -residue_tol)
            throw NotADensityMatrix("spin-flip spectrum is not positive");
        lambda[i] = std::max(0.0, ev.real());
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double c = std::sqrt(lambda[0]) - std::sqrt(lambda[1]) -
                     std::sqrt(lambda[2]) - std::sqrt(lambda[3]);
    // solver noise cannot move a true endpoint, so snap to it
    if (c <= residue_tol) return 0.0;
    if (c >= 1.0 - residue_tol) return 1.0;
    return std::clamp(c, 0.0, 1.0);
}

double concurrence_atoms(const AmplitudeState& s) {
    return std::clamp(2.0 * std::abs(s.alpha) * std::abs(s.gamma), 0.0, 1.0);
}

double concurrence_cavities(const AmplitudeState& s) {
    return std::clamp(2.0 * std::abs(s.beta) * std::abs(s.delta), 0.0, 1.0);
}

}  // namespace cascade
