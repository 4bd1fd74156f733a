#include "core/matrix_exp.hpp"

#include <cmath>

namespace netinfer {
namespace {

using Eigen::MatrixXd;

// theta_m values from Higham, "The scaling and squaring method for the
// matrix exponential revisited", SIAM J. Matrix Anal. Appl. 26(4), 2005.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

MatrixXd pade_solve(const MatrixXd& U, const MatrixXd& V) {
  // r = (V - U)^{-1} (V + U)
  return (V - U).partialPivLu().solve(V + U);
}

MatrixXd pade3(const MatrixXd& A, const MatrixXd& I) {
  static const double b[] = {120, 60, 12, 1};
  const MatrixXd A2 = A * A;
  const MatrixXd U = A * (b[3] * A2 + b[1] * I);
  const MatrixXd V = b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

MatrixXd pade5(const MatrixXd& A, const MatrixXd& I) {
  static const double b[] = {30240, 15120, 3360, 420, 30, 1};
  const MatrixXd A2 = A * A, A4 = A2 * A2;
  const MatrixXd U = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
  const MatrixXd V = b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

MatrixXd pade7(const MatrixXd& A, const MatrixXd& I) {
  static const double b[] = {17297280, 8648640, 1995840, 277200,
                             25200,    1512,    56,      1};
  const MatrixXd A2 = A * A, A4 = A2 * A2, A6 = A4 * A2;
  const MatrixXd U = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const MatrixXd V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

MatrixXd pade9(const MatrixXd& A, const MatrixXd& I) {
  static const double b[] = {17643225600., 8821612800., 2075673600.,
                             302702400.,   30270240.,   2162160.,
                             110880.,      3960.,       90.,
                             1.};
  const MatrixXd A2 = A * A, A4 = A2 * A2, A6 = A4 * A2, A8 = A6 * A2;
  const MatrixXd U =
      A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  const MatrixXd V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

MatrixXd pade13(const MatrixXd& A, const MatrixXd& I) {
  static const double b[] = {64764752532480000., 32382376266240000.,
                             7771770303897600., 1187353796428800.,
                             129060195264000.,  10559470521600.,
                             670442572800.,     33522128640.,
                             1323241920.,       40840800.,
                             960960.,           16380.,
                             182.,              1.};
  const MatrixXd A2 = A * A, A4 = A2 * A2, A6 = A4 * A2;
  const MatrixXd U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
           b[5] * A4 + b[3] * A2 + b[1] * I);
  const MatrixXd V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                     b[4] * A4 + b[2] * A2 + b[0] * I;
  return pade_solve(U, V);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) {
  const auto nn = A.rows();
  const MatrixXd I = MatrixXd::Identity(nn, nn);
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();

  if (norm1 <= kTheta3) return pade3(A, I);
  if (norm1 <= kTheta5) return pade5(A, I);
  if (norm1 <= kTheta7) return pade7(A, I);
  if (norm1 <= kTheta9) return pade9(A, I);

  int squarings = 0;
  MatrixXd As = A;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    As = A / std::ldexp(1.0, squarings);
  }
  MatrixXd E = pade13(As, I);
  for (int i = 0; i < squarings; ++i) E = E * E;
  return E;
}

}  // namespace netinfer
