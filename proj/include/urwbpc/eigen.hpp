#pragma once

#include <stdexcept>
#include <vector>

#include "urwbpc/matrix.hpp"

namespace urwbpc {

class EigenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EigenMethod {
    Automatic,      // Jacobi up to kJacobiMaxSize, tridiagonal QL above
    Jacobi,         // cyclic Jacobi rotations
    TridiagonalQl,  // Householder tridiagonalisation + implicit QL
};

inline constexpr std::size_t kJacobiMaxSize = 256;

// All eigenvalues of a real symmetric matrix, in no particular order.
// Symmetry is assumed, not checked. Throws EigenError when the iteration
// cap is hit.
std::vector<double> symmetric_eigenvalues(const Matrix& a, EigenMethod method = EigenMethod::Automatic);

// Stops once the off-diagonal Frobenius norm drops below
// rel_tol * ||A||_F.
std::vector<double> jacobi_eigenvalues(const Matrix& a, double rel_tol = 1e-12, int max_sweeps = 100);

std::vector<double> tridiagonal_ql_eigenvalues(const Matrix& a);

}  // namespace urwbpc
