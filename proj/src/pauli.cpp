#include "sqe/pauli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sqe {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kProbabilityTolerance = 1e-12;

double reduce_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_section(F&& f, double lo, double hi, int steps, long& evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  evaluations += 2;
  for (int i = 0; i < steps; ++i) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evaluations;
  }
  return fc <= fd ? c : d;
}

const CMatrix& pauli_matrix(int k) {
  static const std::array<CMatrix, 4> sigma = [] {
    CMatrix i = CMatrix::Identity(2, 2);
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    CMatrix z(2, 2);
    z << 1, 0, 0, -1;
    CMatrix xz = x * z;
    return std::array<CMatrix, 4>{i, x, xz, z};
  }();
  return sigma[static_cast<std::size_t>(k)];
}

// Bell states in branch order: Phi+, Psi+, Psi-, Phi-, basis |00>,|01>,|10>,|11>.
CVector bell_state(int k) {
  const double s = 1.0 / std::sqrt(2.0);
  CVector v = CVector::Zero(4);
  switch (k) {
    case 0: v << s, 0, 0, s; break;
    case 1: v << 0, s, s, 0; break;
    case 2: v << 0, s, -s, 0; break;
    default: v << s, 0, 0, -s; break;
  }
  return v;
}

std::array<cplx, 4> branch_amplitudes(const PauliProbabilities& p, const SquashingPhases& phi) {
  return {cplx(std::sqrt(p[0]), 0.0), std::polar(std::sqrt(p[1]), phi.phi1()),
          std::polar(std::sqrt(p[2]), phi.phi2()), std::polar(std::sqrt(p[3]), phi.phi3())};
}

}  // namespace

PauliProbabilities::PauliProbabilities(double p0, double p1, double p2, double p3)
    : p_{p0, p1, p2, p3} {
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("Pauli probabilities must be finite and non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "Pauli probabilities sum to " << sum << ", not 1";
    throw ValidationError(os.str());
  }
}

PauliProbabilities PauliProbabilities::dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("dephasing parameter outside [0,1]");
  return {p, 0.0, 0.0, 1.0 - p};
}

PauliProbabilities PauliProbabilities::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 4.0 / 3.0))
    throw ValidationError("depolarizing parameter outside [0,4/3]");
  const double q = p / 4.0;
  return {1.0 - 3.0 * q, q, q, q};
}

SquashingPhases::SquashingPhases(double phi1, double phi2, double phi3)
    : phi_{reduce_angle(phi1), reduce_angle(phi2), reduce_angle(phi3)} {
  for (double v : {phi1, phi2, phi3})
    if (!std::isfinite(v)) throw ValidationError("squashing phases must be finite");
}

std::array<double, 4> lambda_spectrum(const PauliProbabilities& p, const SquashingPhases& phi) {
  const auto [c0, c1, c2, c3] = branch_amplitudes(p, phi);
  const std::array<cplx, 4> m = {c0 + c3 + c1 - c2, c0 + c3 - c1 + c2, c0 - c3 + c1 + c2,
                                 -c0 + c3 + c1 + c2};
  std::array<double, 4> lambda{};
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    lambda[i] = std::norm(m[i]) / 4.0;
    sum += lambda[i];
  }
  // sum is 1 up to rounding; dividing removes the drift from the entropies
  for (double& l : lambda) l /= sum;
  return lambda;
}

std::array<double, 4> lambda_prime_spectrum(const PauliProbabilities& p, const SquashingPhases& phi) {
  return lambda_spectrum(p, SquashingPhases(phi.phi1(), phi.phi2() + std::numbers::pi, phi.phi3()));
}

double pauli_bound_at(const PauliProbabilities& p, const SquashingPhases& phi) {
  const auto l = lambda_spectrum(p, phi);
  const auto lp = lambda_prime_spectrum(p, phi);
  return 0.5 * (shannon_entropy(l) + shannon_entropy(lp)) - 1.0;
}

BoundResult minimize_pauli_bound(const PauliProbabilities& p, const PhaseOptimizerConfig& config) {
  if (config.grid_points_per_axis < 2) throw ValidationError("grid_points_per_axis must be >= 2");
  if (config.refine_iterations < 0) throw ValidationError("refine_iterations must be >= 0");

  BoundResult result;
  result.name = "pauli_squashed_entanglement";
  result.params = {{"p0", p[0]}, {"p1", p[1]}, {"p2", p[2]}, {"p3", p[3]}};

  std::array<bool, 3> free{p[1] > 0.0, p[2] > 0.0, p[3] > 0.0};
  auto objective = [&](const std::array<double, 3>& phi) {
    ++result.evaluations;
    return pauli_bound_at(p, SquashingPhases(phi[0], phi[1], phi[2]));
  };

  // Lexicographic sweep; a later cell must beat the incumbent by `tolerance`.
  const int n = config.grid_points_per_axis;
  const double step = kTwoPi / n;
  auto axis_count = [&](int axis) { return free[axis] ? n : 1; };
  std::array<double, 3> best_phi{0.0, 0.0, 0.0};
  double best = objective(best_phi);
  for (int i = 0; i < axis_count(0); ++i)
    for (int j = 0; j < axis_count(1); ++j)
      for (int k = 0; k < axis_count(2); ++k) {
        const std::array<double, 3> phi{i * step, j * step, k * step};
        const double v = objective(phi);
        if (v < best - config.tolerance) {
          best = v;
          best_phi = phi;
        }
      }
  result.trace.push_back(best);

  double radius = step;
  for (int it = 0; it < config.refine_iterations && radius > 1e-10; ++it) {
    bool improved = false;
    for (int axis = 0; axis < 3; ++axis) {
      if (!free[axis]) continue;
      auto along = [&](double t) {
        auto phi = best_phi;
        phi[axis] = t;
        return pauli_bound_at(p, SquashingPhases(phi[0], phi[1], phi[2]));
      };
      const double t = golden_section(along, best_phi[axis] - radius, best_phi[axis] + radius, 60,
                                      result.evaluations);
      auto candidate = best_phi;
      candidate[axis] = t;
      const double v = objective(candidate);
      if (v < best - config.tolerance) {
        best = v;
        best_phi = candidate;
        improved = true;
      }
    }
    result.trace.push_back(best);
    if (!improved) radius *= 0.5;
  }

  const SquashingPhases reduced(best_phi[0], best_phi[1], best_phi[2]);
  result.argmin.assign(reduced.values().begin(), reduced.values().end());
  result.value = best;
  return result;
}

double dephasing_bound(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("dephasing_bound: p outside [0,1]");
  return binary_entropy(std::min(1.0, (1.0 + 2.0 * std::sqrt(p * (1.0 - p))) / 2.0));
}

BoundResult depolarizing_bound(double p, const PhaseOptimizerConfig& config) {
  BoundResult r = minimize_pauli_bound(PauliProbabilities::depolarizing(p), config);
  r.name = "depolarizing_squashed_entanglement";
  r.params["p"] = p;
  return r;
}

double reverse_coherent_information(const PauliProbabilities& p) {
  return std::max(0.0, 1.0 - shannon_entropy(p.values()));
}

FiniteChannel phased_pauli_channel(const PauliProbabilities& p, const SquashingPhases& phi) {
  const auto amp = branch_amplitudes(p, phi);
  std::vector<CMatrix> kraus;
  kraus.reserve(4);
  for (int k = 0; k < 4; ++k) kraus.push_back(amp[static_cast<std::size_t>(k)] * pauli_matrix(k));
  return {std::move(kraus), 2, 2};
}

IsometryMatrix bell_environment_splitter() {
  CMatrix v(4, 4);
  for (int k = 0; k < 4; ++k) v.col(k) = bell_state(k);
  return {std::move(v), SubsystemDims({4}, {"E"}), SubsystemDims({2, 2}, {"E'", "F"})};
}

PureState pauli_extension_state(const PauliProbabilities& p, const SquashingPhases& phi) {
  const auto amp = branch_amplitudes(p, phi);
  const CVector phi_plus = bell_state(0);
  CVector psi = CVector::Zero(16);
  for (int k = 0; k < 4; ++k) {
    // (I_A (x) sigma_k)|Phi+>_AB (x) |Bell_k>_EF, index ((a*2+b)*4 + ef)
    CVector ab = CVector::Zero(4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) ab(a * 2 + b) += pauli_matrix(k)(b, bp) * phi_plus(a * 2 + bp);
    const CVector ef = bell_state(k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) psi(i * 4 + j) += amp[static_cast<std::size_t>(k)] * ab(i) * ef(j);
  }
  return {std::move(psi), SubsystemDims({2, 2, 2, 2}, {"A", "B", "E", "F"})};
}

}  // namespace sqe
