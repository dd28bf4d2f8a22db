#pragma once

// Covariance-matrix machinery for Gaussian bosonic states and the closed-form
// squashed-entanglement bounds for phase-insensitive single-mode channels.
//
// Conventions: quadratures are interleaved (x1, p1, x2, p2, ...), and the
// covariance matrix of the vacuum is the identity. The symplectic form is
// Omega = diag(J, ..., J) with J = [[0, 1], [-1, 0]].

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sqe/qcore.hpp"

namespace sqe {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

class GaussianState {
 public:
  /// Validates symmetry and the uncertainty relation covariance + i Omega >= 0.
  GaussianState(RVector mean, RMatrix covariance);

  static GaussianState vacuum(int modes);
  static GaussianState thermal(double mean_photons);
  /// Two-mode squeezed vacuum whose reduced modes have mean photon number n.
  static GaussianState two_mode_squeezed_vacuum(double mean_photons);

  [[nodiscard]] const RVector& mean() const { return mean_; }
  [[nodiscard]] const RMatrix& covariance() const { return covariance_; }
  [[nodiscard]] int modes() const { return static_cast<int>(mean_.size() / 2); }

  /// Marginal on the listed modes (0-based), in the given order.
  [[nodiscard]] GaussianState marginal(const std::vector<int>& modes) const;
  /// Direct sum with another state; its modes are appended.
  [[nodiscard]] GaussianState direct_sum(const GaussianState& other) const;

 private:
  RVector mean_;
  RMatrix covariance_;
};

struct PhaseInsensitiveParams {
  double tau = 1.0;  ///< gain (> 1) or attenuation (< 1)
  double nu = 0.0;   ///< additive noise variance, vacuum units
};

struct LossAmpDecomposition {
  double transmissivity = 1.0;  ///< T of the pure-loss stage
  double gain = 1.0;            ///< G of the amplifier stage
};

struct ConvexityReport {
  double max_symmetry_defect = 0.0;
  double min_second_difference = 0.0;
  double argmin_eta1 = 0.5;
  double grid_step = 0.0;
  std::vector<double> eta1;
  std::vector<double> values;
  [[nodiscard]] bool passed() const {
    return max_symmetry_defect < 1e-10 && min_second_difference >= -1e-8;
  }
};

RMatrix symplectic_form(int modes);
bool is_symplectic(const RMatrix& s, double tol = 1e-10);

/// diag(1 + 2 N_S, 1 + 2 N_S)
RMatrix tmsv_reduced_covariance(double mean_photons);

/// Beamsplitter of transmissivity eta on the 0-based mode pair (i, j):
/// x_i -> sqrt(eta) x_i + sqrt(1-eta) x_j, x_j -> -sqrt(1-eta) x_i + sqrt(eta) x_j,
/// identically on the p quadratures.
RMatrix beamsplitter_symplectic(double eta, int modes, std::pair<int, int> pair);

/// Interleaved covariance from per-quadrature blocks (no x-p correlations).
RMatrix from_quadrature_blocks(const RMatrix& xx, const RMatrix& pp);
/// The x-x (first = true) or p-p block of an interleaved matrix.
RMatrix quadrature_block(const RMatrix& covariance, bool x_quadrature);

GaussianState apply_symplectic(const GaussianState& state, const RMatrix& s);

/// Sorted (ascending) symplectic eigenvalues; values within 1e-9 below 1 are clamped to 1.
std::vector<double> symplectic_eigenvalues(const RMatrix& covariance);
/// Sum over symplectic eigenvalues of g((nu - 1) / 2), in bits.
double gaussian_entropy(const RMatrix& covariance);

/// Input thermal mode through the channel beamsplitter (eta) and the squashing
/// beamsplitter (eta1). Modes are (B, E', F).
GaussianState pure_loss_squashed_state(double eta, double eta1, double mean_photons);
/// Purified version with the reference mode first: modes (A, B, E', F).
GaussianState pure_loss_purified_state(double eta, double eta1, double mean_photons);

double pure_loss_bound_finite(double eta, double eta1, double mean_photons);
/// pure_loss_bound_finite at the optimal eta1 = 1/2.
double pure_loss_bound(double eta, double mean_photons);
/// log2((1+eta)/(1-eta)); +infinity at eta = 1.
double pure_loss_bound_limit(double eta);
/// log2(1/(1-eta)); +infinity at eta = 1.
double pure_loss_lower_bound(double eta);

void validate(const PhaseInsensitiveParams& params);
LossAmpDecomposition decompose_phase_insensitive(const PhaseInsensitiveParams& params);
/// The pure-loss limit bound of the loss stage of the decomposition.
double phase_insensitive_bound(const PhaseInsensitiveParams& params);
PhaseInsensitiveParams thermal_channel_params(double eta, double thermal_photons);
double thermal_bound(double eta, double thermal_photons);
/// log2((nbar + 2)/nbar); +infinity at nbar = 0.
double additive_noise_bound(double nbar);

/// Samples pure_loss_bound_finite over eta1 = k / (grid_size + 1), k = 1..grid_size.
ConvexityReport convexity_report(double eta, double mean_photons, int grid_size);

}  // namespace sqe
