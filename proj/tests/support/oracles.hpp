#pragma once

// Independent reference implementations used only by the tests. They share
// no numerical code with the library beyond Eigen's storage types.

#include <vector>

#include "cpwqed/qops.hpp"

namespace oracle {

/// exp(A) by Taylor series with scaling and squaring.
cpwqed::Matrix expm_taylor(const cpwqed::Matrix& a);

/// U rho U† with U = exp(-i H t).
cpwqed::Matrix unitary_propagate(const cpwqed::Matrix& h, const cpwqed::Matrix& rho0, double t);

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial
/// (Faddeev-LeVerrier coefficients, bisection on sign changes, Newton polish).
/// Ascending. Assumes simple eigenvalues.
std::vector<double> charpoly_eigenvalues(const cpwqed::Matrix& h);

/// Seeded random Hermitian matrix with entries of order one.
cpwqed::Matrix random_hermitian(int n, unsigned seed);

/// Seeded random density matrix (full rank).
cpwqed::Matrix random_density(int n, unsigned seed);

/// -i[H, rho] + sum L rho L† - 1/2 {L†L, rho}, literally.
cpwqed::Matrix naive_lindblad(const cpwqed::Matrix& h, const std::vector<cpwqed::Matrix>& ls,
                              const cpwqed::Matrix& rho);

}  // namespace oracle
