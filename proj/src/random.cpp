#include "sqe/random.hpp"

#include <cmath>

namespace sqe {
namespace {

CMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

}  // namespace

PureState random_pure_state(const SubsystemDims& dims, Rng& rng) {
  CVector v = ginibre(dims.total(), 1, rng).col(0);
  v.normalize();
  return {std::move(v), dims};
}

DensityOperator random_density(const SubsystemDims& dims, Rng& rng, int rank) {
  const int d = dims.total();
  if (rank <= 0) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {std::move(rho), dims};
}

CMatrix random_unitary(int dim, Rng& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

CMatrix random_isometry(int rows, int cols, Rng& rng) {
  if (cols < 1 || cols > rows) throw ValidationError("random_isometry: need 1 <= cols <= rows");
  return random_unitary(rows, rng).leftCols(cols);
}

FiniteChannel random_channel(int in_dim, int out_dim, int kraus_count, Rng& rng) {
  const CMatrix v = random_isometry(out_dim * kraus_count, in_dim, rng);
  std::vector<CMatrix> kraus(static_cast<std::size_t>(kraus_count), CMatrix(out_dim, in_dim));
  for (int k = 0; k < kraus_count; ++k)
    for (int b = 0; b < out_dim; ++b) kraus[k].row(b) = v.row(b * kraus_count + k);
  return {std::move(kraus), in_dim, out_dim};
}

}  // namespace sqe
