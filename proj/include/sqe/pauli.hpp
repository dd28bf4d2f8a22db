#pragma once

// Squashed-entanglement upper bounds and coherent-information lower bounds
// for qubit Pauli channels  rho -> p0 rho + p1 X rho X + p2 Y rho Y + p3 Z rho Z.
//
// The environment of the channel is taken to hold a Bell pair EF; the Pauli
// applied to the input is recorded as which Bell state EF ends up in, with a
// free phase per branch. Tracing F is the squashing channel. The bound is
// then (H(lambda) + H(lambda')) / 2 - 1, where lambda is the spectrum of
// rho_BE and lambda' that of rho_BF.

#include <array>
#include <cstdint>

#include "sqe/bound_result.hpp"
#include "sqe/qcore.hpp"

namespace sqe {

class PauliProbabilities {
 public:
  /// Throws ValidationError unless every entry is >= 0 and they sum to 1 within 1e-12.
  PauliProbabilities(double p0, double p1, double p2, double p3);

  /// (p, 0, 0, 1-p)
  static PauliProbabilities dephasing(double p);
  /// (1 - 3p/4, p/4, p/4, p/4) for rho -> (1-p) rho + p I/2, p in [0, 4/3].
  static PauliProbabilities depolarizing(double p);

  [[nodiscard]] const std::array<double, 4>& values() const { return p_; }
  [[nodiscard]] double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::array<double, 4> p_;
};

/// Branch phases of the Bell-environment extension; the identity branch has phase 0.
class SquashingPhases {
 public:
  SquashingPhases() = default;
  /// Each angle is reduced to [0, 2pi).
  SquashingPhases(double phi1, double phi2, double phi3);

  [[nodiscard]] double phi1() const { return phi_[0]; }
  [[nodiscard]] double phi2() const { return phi_[1]; }
  [[nodiscard]] double phi3() const { return phi_[2]; }
  [[nodiscard]] const std::array<double, 3>& values() const { return phi_; }

 private:
  std::array<double, 3> phi_{0.0, 0.0, 0.0};
};

struct PhaseOptimizerConfig {
  int grid_points_per_axis = 25;
  int refine_iterations = 200;
  /// Minimum decrease (bits) for a refinement step or grid cell to replace the incumbent.
  double tolerance = 1e-12;
  /// Unused by the deterministic grid-plus-golden-section search; kept for reproducible reporting.
  std::uint64_t seed = 0;
};

std::array<double, 4> lambda_spectrum(const PauliProbabilities& p, const SquashingPhases& phi);
/// lambda_spectrum with phi2 -> phi2 + pi: the spectrum of rho_BF.
std::array<double, 4> lambda_prime_spectrum(const PauliProbabilities& p, const SquashingPhases& phi);

/// (H(lambda) + H(lambda')) / 2 - 1. Any phases give a valid upper bound on Q2 and P2.
double pauli_bound_at(const PauliProbabilities& p, const SquashingPhases& phi);

/// Grid search over [0, 2pi)^3 followed by coordinate-wise golden-section
/// refinement. Phases whose probability vanishes are pinned to 0.
BoundResult minimize_pauli_bound(const PauliProbabilities& p, const PhaseOptimizerConfig& config = {});

/// h2((1 + 2 sqrt(p(1-p))) / 2)
double dephasing_bound(double p);
BoundResult depolarizing_bound(double p, const PhaseOptimizerConfig& config = {});

/// max{0, 1 - H(p)}
double reverse_coherent_information(const PauliProbabilities& p);

/// Kraus form {sqrt(p_k) e^{i phi_k} sigma_k} with sigma = (I, X, XZ, Z).
FiniteChannel phased_pauli_channel(const PauliProbabilities& p, const SquashingPhases& phi = {});

/// Isometry E -> E'F sending |k> to the k-th Bell state in the order
/// (Phi+, Psi+, Psi-, Phi-), matching the Kraus order of phased_pauli_channel.
IsometryMatrix bell_environment_splitter();

/// The extension applied to a maximally entangled input: a pure state on
/// factors (A, B, E, F), each a qubit, built directly from the branch sum.
PureState pauli_extension_state(const PauliProbabilities& p, const SquashingPhases& phi);

}  // namespace sqe
