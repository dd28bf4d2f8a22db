#pragma once

// Variational estimation of the squashed entanglement of a finite-dimensional
// channel. For an input |phi>_{AA'}, the channel's Stinespring isometry
// A' -> BE, and a squashing isometry E -> E'F, the objective is
//
//     f = (H(B|E') + H(B|F)) / 2  =  I(A;B|E') / 2,
//
// maximized over inputs and minimized over squashers. Every fixed squasher
// gives a valid upper bound max_phi f, so the estimator reports the smallest
// such value it has certified, subject to the quality of the inner input
// maximization.

#include <cstdint>
#include <optional>
#include <vector>

#include "sqe/bound_result.hpp"
#include "sqe/nelder_mead.hpp"
#include "sqe/qcore.hpp"
#include "sqe/random.hpp"

namespace sqe {

/// Largest dimension of the state on A B E' F the optimizers will build.
inline constexpr int kMaxAmbientDim = 64;

/// Raw chart for a squashing isometry: 2 * (eprime_dim * f_dim) * env_dim reals,
/// read as a complex matrix column by column as (re, im) pairs.
struct SquasherParams {
  int eprime_dim = 1;
  int f_dim = 1;
  std::vector<double> raw;
};

/// Raw chart for a pure input on A (x) A': 2 * in_dim^2 reals as (re, im) pairs.
struct InputParams {
  std::vector<double> raw;
};

struct EstimatorConfig {
  int restarts = 4;
  int max_alternations = 4;
  int inner_iterations = 3000;
  double tolerance = 1e-7;
  std::uint64_t seed = kDefaultSeed;
  /// 0 selects the channel's environment dimension.
  int eprime_dim = 0;
  int f_dim = 0;
};

/// Gram-Schmidt (column order, two passes) of the raw matrix. Returns
/// std::nullopt when a column collapses, signalling the caller to re-draw.
std::optional<IsometryMatrix> decode_squasher(const SquasherParams& params, int env_dim);
SquasherParams encode_squasher(const CMatrix& matrix, int eprime_dim, int f_dim);

/// V|k> = |k>_{E'} |0>_F  (the squasher discards nothing into F beyond a blank)
SquasherParams trace_out_f_squasher(int env_dim, int eprime_dim, int f_dim);
/// V|k> = |0>_{E'} |k>_F  (everything is handed to F)
SquasherParams trace_out_eprime_squasher(int env_dim, int eprime_dim, int f_dim);
/// V|k> = d^{-1/2} sum_j w^{jk} |j>_{E'} |j>_F with w = exp(2 pi i / d); needs eprime = f = env = d.
SquasherParams fourier_bell_squasher(int env_dim);
SquasherParams random_squasher(int env_dim, int eprime_dim, int f_dim, Rng& rng);

PureState decode_input(const InputParams& params, int in_dim);
InputParams encode_input(const PureState& state);
InputParams maximally_entangled_input(int in_dim);

/// Objective at decoded arguments. `input` lives on factors (A, A').
double squashed_objective(const FiniteChannel& channel, const PureState& input,
                          const IsometryMatrix& squasher);
double evaluate_objective(const FiniteChannel& channel, const InputParams& input,
                          const SquasherParams& squasher);

struct InputSearchResult {
  InputParams input;
  double value = 0.0;
  long evaluations = 0;
};

/// Ascent over inputs from the maximally entangled start plus `config.restarts`
/// random starts; the best value found is returned.
InputSearchResult maximize_over_input(const FiniteChannel& channel, const SquasherParams& squasher,
                                      const EstimatorConfig& config);

struct SquasherSearchResult {
  SquasherParams squasher;
  double value = 0.0;
  long evaluations = 0;
  /// Running minimum after each start.
  std::vector<double> trace;
};

/// Descent over squashers at a fixed input from the structured starts and
/// `config.restarts` random ones.
SquasherSearchResult minimize_over_squasher(const FiniteChannel& channel, const InputParams& input,
                                            const EstimatorConfig& config);

/// Alternating min-over-squasher / max-over-input estimate of E_sq(channel).
BoundResult estimate_channel_bound(const FiniteChannel& channel, const EstimatorConfig& config = {});

struct AdditivityReport {
  double joint = 0.0;
  double sum = 0.0;
  [[nodiscard]] double defect() const { return std::abs(joint - sum); }
  [[nodiscard]] bool passed() const { return defect() < 1e-9; }
};

/// Objective of N (x) M at the product input and product squasher, against the
/// sum of the individual objectives.
AdditivityReport product_additivity_check(const FiniteChannel& n, const FiniteChannel& m,
                                          const std::pair<InputParams, InputParams>& inputs,
                                          const std::pair<SquasherParams, SquasherParams>& squashers);

struct ConcavityReport {
  double mixture_value = 0.0;
  double average_value = 0.0;
  [[nodiscard]] bool passed() const { return mixture_value >= average_value - 1e-9; }
};

/// Objective as a function of the input density operator on A' (purified internally).
double objective_at_density(const FiniteChannel& channel, const DensityOperator& input,
                            const IsometryMatrix& squasher);

ConcavityReport concavity_check(const FiniteChannel& channel, const SquasherParams& squasher,
                                const std::vector<double>& weights,
                                const std::vector<DensityOperator>& states);

}  // namespace sqe
