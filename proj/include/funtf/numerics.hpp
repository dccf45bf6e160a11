#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "funtf/errors.hpp"

namespace funtf {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class FieldTag { Real, Complex };

inline const char* field_name(FieldTag f) { return f == FieldTag::Real ? "real" : "complex"; }

// Shared tolerance set. Defaults per the library-wide convention; individual
// calls may pass an adjusted copy.
struct Tolerances {
  double sym = 1e-10;    // self-adjointness gate
  double unitary = 1e-9; // unitarity gate
  double recon = 1e-9;   // eigendecomposition reconstruction residual
};

struct SpectralDecomposition {
  RealVec eigenvalues;  // nonincreasing
  Mat eigenvectors;     // unitary, column i pairs with eigenvalues[i]
};

double max_abs(const Mat& a);
bool is_self_adjoint(const Mat& a, double tol);
bool is_unitary(const Mat& u, double tol);

// True when all imaginary parts are below tol.
bool entries_real(const Mat& a, double tol = 1e-12);

// Eigendecomposition of a self-adjoint matrix, eigenvalues sorted
// nonincreasing. REAL field keeps the eigenvector matrix real.
SpectralDecomposition hermitian_eig(const Mat& a, FieldTag field,
                                    const Tolerances& tol = Tolerances{});

// Point at parameter t on the geodesic from U0 to U1 in the unitary group
// (REAL: in SO-orbit; both factors must have the same determinant sign).
Mat unitary_geodesic(const Mat& u0, const Mat& u1, double t, FieldTag field,
                     const Tolerances& tol = Tolerances{});

// Extends a d x k matrix with orthonormal columns to a d x d unitary whose
// first k columns are the input. Deterministic: remaining columns come from
// Gram-Schmidt over the standard basis.
Mat orthonormal_completion(const Mat& v, const Tolerances& tol = Tolerances{});

// Haar-distributed unitary (REAL: orthogonal) via Ginibre QR.
Mat haar_unitary(int d, FieldTag field, Rng& rng);

double determinant_real(const Mat& u);

}  // namespace funtf
