#include "funtf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace funtf {

const char* err_name(Err code) {
  switch (code) {
    case Err::NotSelfAdjoint: return "NotSelfAdjoint";
    case Err::NotUnitary: return "NotUnitary";
    case Err::OrientationMismatch: return "OrientationMismatch";
    case Err::NotOrthonormal: return "NotOrthonormal";
    case Err::InvalidTable: return "InvalidTable";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::EmptyInterior: return "EmptyInterior";
    case Err::NotFUNTF: return "NotFUNTF";
    case Err::NoComplement: return "NoComplement";
    case Err::TooLarge: return "TooLarge";
    case Err::NotAPermutation: return "NotAPermutation";
    case Err::FrameIsOD: return "FrameIsOD";
    case Err::NotOD: return "NotOD";
    case Err::VanishingDenominator: return "VanishingDenominator";
    case Err::NegativeRadicand: return "NegativeRadicand";
    case Err::NoncancellingPowers: return "NoncancellingPowers";
    case Err::DegenerateSpectra: return "DegenerateSpectra";
    case Err::NotInterior: return "NotInterior";
    case Err::EigenstepsMismatch: return "EigenstepsMismatch";
    case Err::OrientationObstruction: return "OrientationObstruction";
    case Err::NotTightOnSpan: return "NotTightOnSpan";
    case Err::RotationLeaksSubspace: return "RotationLeaksSubspace";
    case Err::NotTwoONBs: return "NotTwoONBs";
    case Err::MissingChaperone: return "MissingChaperone";
    case Err::SameSubframe: return "SameSubframe";
    case Err::NotTight: return "NotTight";
    case Err::NotSimplex: return "NotSimplex";
    case Err::DegenerateAlignment: return "DegenerateAlignment";
    case Err::BadSubframe: return "BadSubframe";
    case Err::FieldUnsupported: return "FieldUnsupported";
    case Err::EndpointOD: return "EndpointOD";
    case Err::InteriorEmpty: return "InteriorEmpty";
    case Err::FileFormat: return "FileFormat";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_self_adjoint(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())) <= tol;
}

bool entries_real(const Mat& a, double tol) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (std::abs(a(i, j).imag()) > tol) return false;
  return true;
}

SpectralDecomposition hermitian_eig(const Mat& a, FieldTag field, const Tolerances& tol) {
  if (a.rows() != a.cols()) raise(Err::DimensionMismatch, "hermitian_eig: matrix not square");
  const double scale = std::max(1.0, max_abs(a));
  if (max_abs(a - a.adjoint()) > tol.sym * scale)
    raise(Err::NotSelfAdjoint, "hermitian_eig: asymmetry exceeds tolerance");

  const auto d = a.rows();
  SpectralDecomposition out;
  if (field == FieldTag::Real) {
    Eigen::SelfAdjointEigenSolver<RealMat> es(a.real());
    if (es.info() != Eigen::Success) raise(Err::Internal, "hermitian_eig: solver failed");
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success) raise(Err::Internal, "hermitian_eig: solver failed");
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
  }
  // Eigen sorts ascending; flip to nonincreasing.
  out.eigenvalues.reverseInPlace();
  out.eigenvectors = out.eigenvectors.rowwise().reverse().eval();

  const double resid = max_abs(a - out.eigenvectors *
                                       out.eigenvalues.cast<Complex>().asDiagonal() *
                                       out.eigenvectors.adjoint());
  if (resid > tol.recon * scale * (double)d * 10.0)
    raise(Err::Internal, "hermitian_eig: reconstruction residual too large");
  (void)d;
  return out;
}

double determinant_real(const Mat& u) {
  const Complex det = u.determinant();
  return det.real();
}

namespace {

// Geodesic in U(d): diagonalize U0*U1 by a (complex) Schur decomposition --
// diagonal for normal input -- and scale the eigenangles by t.
Mat geodesic_complex(const Mat& u0, const Mat& u1, double t) {
  const Mat a = u0.adjoint() * u1;
  Eigen::ComplexSchur<Mat> schur(a, true);
  if (schur.info() != Eigen::Success) raise(Err::Internal, "unitary_geodesic: Schur failed");
  const Mat& q = schur.matrixU();
  const auto n = a.rows();
  Vec phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double theta = std::arg(schur.matrixT()(k, k));
    phases(k) = std::exp(Complex(0.0, t * theta));
  }
  return u0 * (q * phases.asDiagonal() * q.adjoint());
}

// Geodesic in SO(d) via the real Schur form of U0^T U1: rotation blocks get
// their angle scaled, and -1 eigenvalues (even count) are paired into
// pi-rotation planes.
Mat geodesic_real(const Mat& u0c, const Mat& u1c, double t) {
  const RealMat u0 = u0c.real();
  const RealMat u1 = u1c.real();
  const RealMat a = u0.transpose() * u1;
  const auto n = a.rows();
  Eigen::RealSchur<RealMat> schur(a);
  if (schur.info() != Eigen::Success) raise(Err::Internal, "unitary_geodesic: Schur failed");
  const RealMat& q = schur.matrixU();
  const RealMat& tt = schur.matrixT();

  RealMat block = RealMat::Zero(n, n);
  std::vector<Eigen::Index> minus_ones;
  Eigen::Index k = 0;
  while (k < n) {
    const bool pair = (k + 1 < n) && std::abs(tt(k + 1, k)) > 1e-12;
    if (pair) {
      const double theta = std::atan2(tt(k + 1, k), tt(k, k));
      const double c = std::cos(t * theta), s = std::sin(t * theta);
      block(k, k) = c;
      block(k, k + 1) = -s;
      block(k + 1, k) = s;
      block(k + 1, k + 1) = c;
      k += 2;
    } else {
      if (tt(k, k) < 0.0) {
        minus_ones.push_back(k);
        block(k, k) = 1.0;  // placeholder, fixed below in pairs
      } else {
        block(k, k) = 1.0;
      }
      k += 1;
    }
  }
  if (minus_ones.size() % 2 != 0)
    raise(Err::OrientationMismatch, "unitary_geodesic: odd count of -1 eigenvalues (det < 0)");
  for (std::size_t m = 0; m + 1 < minus_ones.size(); m += 2) {
    const auto i = minus_ones[m], j = minus_ones[m + 1];
    const double c = std::cos(t * M_PI), s = std::sin(t * M_PI);
    block(i, i) = c;
    block(i, j) = -s;
    block(j, i) = s;
    block(j, j) = c;
  }
  RealMat out = u0 * (q * block * q.transpose());
  return out.cast<Complex>();
}

}  // namespace

Mat unitary_geodesic(const Mat& u0, const Mat& u1, double t, FieldTag field,
                     const Tolerances& tol) {
  if (u0.rows() != u1.rows() || u0.cols() != u1.cols() || u0.rows() != u0.cols())
    raise(Err::DimensionMismatch, "unitary_geodesic: size mismatch");
  if (!is_unitary(u0, tol.unitary) || !is_unitary(u1, tol.unitary))
    raise(Err::NotUnitary, "unitary_geodesic: endpoint not unitary");
  if (field == FieldTag::Real) {
    if (!entries_real(u0, 1e-9) || !entries_real(u1, 1e-9))
      raise(Err::NotUnitary, "unitary_geodesic: REAL field endpoint has imaginary parts");
    const double d0 = determinant_real(u0), d1 = determinant_real(u1);
    if (d0 * d1 <= 0.0)
      raise(Err::OrientationMismatch, "unitary_geodesic: opposite determinant signs");
    return geodesic_real(u0, u1, t);
  }
  return geodesic_complex(u0, u1, t);
}

Mat orthonormal_completion(const Mat& v, const Tolerances& tol) {
  const auto d = v.rows();
  const auto k = v.cols();
  if (k > d) raise(Err::DimensionMismatch, "orthonormal_completion: more columns than rows");
  if (k > 0 && max_abs(v.adjoint() * v - Mat::Identity(k, k)) > tol.unitary * 10.0)
    raise(Err::NotOrthonormal, "orthonormal_completion: columns not orthonormal");

  Mat u(d, d);
  u.leftCols(k) = v;
  Eigen::Index have = k;
  for (Eigen::Index cand = 0; cand < d && have < d; ++cand) {
    Vec x = Vec::Zero(d);
    x(cand) = 1.0;
    // two Gram-Schmidt passes for stability
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < have; ++j) x -= u.col(j) * (u.col(j).adjoint() * x)(0);
    const double nrm = x.norm();
    if (nrm > 0.5) {
      u.col(have++) = x / nrm;
    }
  }
  if (have != d) raise(Err::Internal, "orthonormal_completion: basis fill failed");
  return u;
}

Mat haar_unitary(int d, FieldTag field, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      z(i, j) = field == FieldTag::Real ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    Complex diag = r(j, j);
    const double a = std::abs(diag);
    q.col(j) *= (a > 0 ? diag / a : Complex(1.0, 0.0));
  }
  return q;
}

}  // namespace funtf
