#include "sqe/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sqe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSymplecticClamp = 1e-9;

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0,1]");
}

void require_photons(double n) {
  if (!(n >= 0.0) || !std::isfinite(n))
    throw ValidationError("mean photon number must be finite and >= 0");
}

double log2_ratio(double num, double den) {
  if (den <= 0.0) return kInf;
  return std::log2(num / den);
}

}  // namespace

// ---------------------------------------------------------------------------
// States and symplectic maps

GaussianState::GaussianState(RVector mean, RMatrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const auto dim = mean_.size();
  if (dim == 0 || dim % 2 != 0) throw ValidationError("GaussianState: mean must have even length 2n");
  if (covariance_.rows() != dim || covariance_.cols() != dim)
    throw ValidationError("GaussianState: covariance must be 2n x 2n");
  const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("GaussianState: covariance is not symmetric");
  const CMatrix uncertainty =
      covariance_.cast<cplx>() + cplx(0.0, 1.0) * symplectic_form(modes()).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(uncertainty, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kSymplecticClamp * scale) {
    std::ostringstream os;
    os << "GaussianState: covariance violates the uncertainty relation (min eigenvalue "
       << solver.eigenvalues().minCoeff() << ")";
    throw ValidationError(os.str());
  }
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) throw ValidationError("vacuum: need at least one mode");
  return {RVector::Zero(2 * modes), RMatrix::Identity(2 * modes, 2 * modes)};
}

GaussianState GaussianState::thermal(double mean_photons) {
  return {RVector::Zero(2), tmsv_reduced_covariance(mean_photons)};
}

GaussianState GaussianState::two_mode_squeezed_vacuum(double mean_photons) {
  require_photons(mean_photons);
  const double a = 1.0 + 2.0 * mean_photons;
  const double c = 2.0 * std::sqrt(mean_photons * (mean_photons + 1.0));
  RMatrix cov = RMatrix::Zero(4, 4);
  cov.diagonal().setConstant(a);
  // x-x correlated, p-p anticorrelated
  cov(0, 2) = cov(2, 0) = c;
  cov(1, 3) = cov(3, 1) = -c;
  return {RVector::Zero(4), std::move(cov)};
}

GaussianState GaussianState::marginal(const std::vector<int>& modes) const {
  const auto m = static_cast<Eigen::Index>(modes.size());
  RVector mean(2 * m);
  RMatrix cov(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const int i = modes[static_cast<std::size_t>(a)];
    if (i < 0 || i >= this->modes()) throw ValidationError("marginal: mode index out of range");
    mean.segment(2 * a, 2) = mean_.segment(2 * i, 2);
    for (Eigen::Index b = 0; b < m; ++b) {
      const int j = modes[static_cast<std::size_t>(b)];
      if (j < 0 || j >= this->modes()) throw ValidationError("marginal: mode index out of range");
      cov.block(2 * a, 2 * b, 2, 2) = covariance_.block(2 * i, 2 * j, 2, 2);
    }
  }
  return {std::move(mean), std::move(cov)};
}

GaussianState GaussianState::direct_sum(const GaussianState& other) const {
  const auto n1 = mean_.size();
  const auto n2 = other.mean_.size();
  RVector mean(n1 + n2);
  mean << mean_, other.mean_;
  RMatrix cov = RMatrix::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = covariance_;
  cov.bottomRightCorner(n2, n2) = other.covariance_;
  return {std::move(mean), std::move(cov)};
}

RMatrix symplectic_form(int modes) {
  RMatrix omega = RMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

bool is_symplectic(const RMatrix& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
  const RMatrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

RMatrix tmsv_reduced_covariance(double mean_photons) {
  require_photons(mean_photons);
  return RMatrix::Identity(2, 2) * (1.0 + 2.0 * mean_photons);
}

RMatrix beamsplitter_symplectic(double eta, int modes, std::pair<int, int> pair) {
  require_unit_interval(eta, "beamsplitter transmissivity");
  const auto [i, j] = pair;
  if (i < 0 || j < 0 || i >= modes || j >= modes || i == j)
    throw ValidationError("beamsplitter: invalid mode pair");
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  RMatrix s = RMatrix::Identity(2 * modes, 2 * modes);
  for (int q = 0; q < 2; ++q) {
    const int a = 2 * i + q;
    const int b = 2 * j + q;
    s(a, a) = t;
    s(a, b) = r;
    s(b, a) = -r;
    s(b, b) = t;
  }
  return s;
}

RMatrix from_quadrature_blocks(const RMatrix& xx, const RMatrix& pp) {
  if (xx.rows() != xx.cols() || pp.rows() != pp.cols() || xx.rows() != pp.rows())
    throw ValidationError("from_quadrature_blocks: blocks must be square and equal in size");
  const auto n = xx.rows();
  RMatrix out = RMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      out(2 * i, 2 * j) = xx(i, j);
      out(2 * i + 1, 2 * j + 1) = pp(i, j);
    }
  return out;
}

RMatrix quadrature_block(const RMatrix& covariance, bool x_quadrature) {
  const auto n = covariance.rows() / 2;
  const Eigen::Index offset = x_quadrature ? 0 : 1;
  RMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = covariance(2 * i + offset, 2 * j + offset);
  return out;
}

GaussianState apply_symplectic(const GaussianState& state, const RMatrix& s) {
  if (s.rows() != state.covariance().rows() || s.cols() != state.covariance().cols())
    throw ValidationError("apply_symplectic: dimension mismatch");
  if (!is_symplectic(s)) throw ValidationError("apply_symplectic: matrix is not symplectic");
  RMatrix cov = s * state.covariance() * s.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {s * state.mean(), std::move(cov)};
}

std::vector<double> symplectic_eigenvalues(const RMatrix& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() % 2 != 0 || covariance.rows() == 0)
    throw ValidationError("symplectic_eigenvalues: covariance must be 2n x 2n");
  const int n = static_cast<int>(covariance.rows() / 2);
  // i G^{1/2} Omega G^{1/2} is Hermitian with spectrum {+nu_k, -nu_k}.
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (covariance + covariance.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError("symplectic_eigenvalues: covariance is not positive definite");
  const RMatrix root = es.operatorSqrt();
  const CMatrix m = cplx(0.0, 1.0) * (root * symplectic_form(n) * root).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatrix> hs(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double v = hs.eigenvalues()(n + k);
    if (v < 1.0) {
      if (v < 1.0 - kSymplecticClamp) {
        std::ostringstream os;
        os << "symplectic eigenvalue " << v << " below 1: not a physical covariance";
        throw ValidationError(os.str());
      }
      v = 1.0;
    }
    nu.push_back(v);
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

double gaussian_entropy(const RMatrix& covariance) {
  double h = 0.0;
  for (double nu : symplectic_eigenvalues(covariance)) h += bosonic_g((nu - 1.0) / 2.0);
  return h;
}

GaussianState pure_loss_squashed_state(double eta, double eta1, double mean_photons) {
  require_unit_interval(eta, "eta");
  require_unit_interval(eta1, "eta1");
  const GaussianState input =
      GaussianState::thermal(mean_photons).direct_sum(GaussianState::vacuum(2));
  const RMatrix s = beamsplitter_symplectic(eta1, 3, {1, 2}) * beamsplitter_symplectic(eta, 3, {0, 1});
  return apply_symplectic(input, s);
}

GaussianState pure_loss_purified_state(double eta, double eta1, double mean_photons) {
  require_unit_interval(eta, "eta");
  require_unit_interval(eta1, "eta1");
  const GaussianState input =
      GaussianState::two_mode_squeezed_vacuum(mean_photons).direct_sum(GaussianState::vacuum(2));
  const RMatrix s = beamsplitter_symplectic(eta1, 4, {2, 3}) * beamsplitter_symplectic(eta, 4, {1, 2});
  return apply_symplectic(input, s);
}

// ---------------------------------------------------------------------------
// Closed-form bounds

double pure_loss_bound_finite(double eta, double eta1, double mean_photons) {
  require_unit_interval(eta, "eta");
  require_unit_interval(eta1, "eta1");
  require_photons(mean_photons);
  const double n = mean_photons;
  return 0.5 * (bosonic_g((1.0 - eta1 + eta * eta1) * n) + bosonic_g((eta1 + eta * (1.0 - eta1)) * n) -
                bosonic_g(eta1 * (1.0 - eta) * n) - bosonic_g((1.0 - eta1) * (1.0 - eta) * n));
}

double pure_loss_bound(double eta, double mean_photons) {
  require_unit_interval(eta, "eta");
  require_photons(mean_photons);
  return bosonic_g((1.0 + eta) * mean_photons / 2.0) - bosonic_g((1.0 - eta) * mean_photons / 2.0);
}

double pure_loss_bound_limit(double eta) {
  require_unit_interval(eta, "eta");
  return log2_ratio(1.0 + eta, 1.0 - eta);
}

double pure_loss_lower_bound(double eta) {
  require_unit_interval(eta, "eta");
  if (eta == 1.0) return kInf;
  return -std::log1p(-eta) / std::log(2.0);
}

void validate(const PhaseInsensitiveParams& params) {
  if (!(params.tau >= 0.0) || !std::isfinite(params.tau))
    throw ValidationError("phase-insensitive channel: tau must be finite and >= 0");
  if (!(params.nu >= 0.0) || !std::isfinite(params.nu))
    throw ValidationError("phase-insensitive channel: nu must be finite and >= 0");
  if (params.nu < std::abs(params.tau - 1.0) - 1e-12) {
    std::ostringstream os;
    os << "phase-insensitive channel: nu = " << params.nu << " < |tau - 1| = "
       << std::abs(params.tau - 1.0) << ", not completely positive";
    throw ValidationError(os.str());
  }
}

LossAmpDecomposition decompose_phase_insensitive(const PhaseInsensitiveParams& params) {
  validate(params);
  const double s = params.tau + params.nu + 1.0;
  return {std::min(1.0, 2.0 * params.tau / s), std::max(1.0, s / 2.0)};
}

double phase_insensitive_bound(const PhaseInsensitiveParams& params) {
  return pure_loss_bound_limit(decompose_phase_insensitive(params).transmissivity);
}

PhaseInsensitiveParams thermal_channel_params(double eta, double thermal_photons) {
  require_unit_interval(eta, "eta");
  require_photons(thermal_photons);
  return {eta, (1.0 - eta) * (2.0 * thermal_photons + 1.0)};
}

double thermal_bound(double eta, double thermal_photons) {
  require_unit_interval(eta, "eta");
  require_photons(thermal_photons);
  const double base = (1.0 - eta) * thermal_photons + 1.0;
  return log2_ratio(base + eta, base - eta);
}

double additive_noise_bound(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar))
    throw ValidationError("additive noise variance must be finite and >= 0");
  return log2_ratio(nbar + 2.0, nbar);
}

ConvexityReport convexity_report(double eta, double mean_photons, int grid_size) {
  if (grid_size < 3) throw ValidationError("convexity_report: grid_size must be >= 3");
  ConvexityReport r;
  r.grid_step = 1.0 / (grid_size + 1);
  for (int k = 1; k <= grid_size; ++k) {
    const double x = static_cast<double>(k) / (grid_size + 1);
    const double f = pure_loss_bound_finite(eta, x, mean_photons);
    r.eta1.push_back(x);
    r.values.push_back(f);
    r.max_symmetry_defect =
        std::max(r.max_symmetry_defect, std::abs(f - pure_loss_bound_finite(eta, 1.0 - x, mean_photons)));
  }
  r.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < r.values.size(); ++k)
    r.min_second_difference =
        std::min(r.min_second_difference, r.values[k - 1] - 2.0 * r.values[k] + r.values[k + 1]);
  const auto it = std::min_element(r.values.begin(), r.values.end());
  r.argmin_eta1 = r.eta1[static_cast<std::size_t>(it - r.values.begin())];
  return r;
}

}  // namespace sqe
