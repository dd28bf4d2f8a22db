#include "sqe/squash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sqe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCollapseNorm = 1e-10;

struct SquasherShape {
  int env = 1;
  int eprime = 1;
  int f = 1;
};

SquasherShape resolve_shape(const FiniteChannel& channel, const EstimatorConfig& config) {
  SquasherShape s{channel.env_dim(), config.eprime_dim, config.f_dim};
  if (s.eprime <= 0) s.eprime = s.env;
  if (s.f <= 0) s.f = s.env;
  if (s.eprime * s.f < s.env)
    throw ValidationError("squasher output dimension eprime_dim * f_dim is below the environment dimension");
  return s;
}

void check_budget(int ref_dim, int out_dim, int eprime, int f) {
  const long ambient = static_cast<long>(ref_dim) * out_dim * eprime * f;
  if (ambient > kMaxAmbientDim) {
    std::ostringstream os;
    os << "state on A B E' F would have dimension " << ambient << ", above the cap of "
       << kMaxAmbientDim;
    throw ValidationError(os.str());
  }
}

void check_config(const EstimatorConfig& c) {
  if (c.restarts < 0 || c.max_alternations < 1 || c.inner_iterations < 1 || !(c.tolerance > 0.0))
    throw ValidationError("estimator config: counts must be positive and tolerance > 0");
}

// (H(B|E') + H(B|F)) / 2 on a pure state that carries B, E', F.
double conditional_entropy_pair(const PureState& psi) {
  const double h_be = von_neumann_entropy(psi.reduced({"B", "E'"}));
  const double h_e = von_neumann_entropy(psi.reduced({"E'"}));
  const double h_bf = von_neumann_entropy(psi.reduced({"B", "F"}));
  const double h_f = von_neumann_entropy(psi.reduced({"F"}));
  return 0.5 * ((h_be - h_e) + (h_bf - h_f));
}

// The input after the channel isometry: factors (A, B, E) in some order.
PureState through_channel(const FiniteChannel& channel, const PureState& input) {
  const auto& dims = input.dims();
  if (dims.size() != 2 || !dims.contains("A") || !dims.contains("A'"))
    throw ValidationError("objective input must be a pure state on factors A and A'");
  if (dims.dim_of("A'") != channel.in_dim())
    throw ValidationError("objective input: A' dimension does not match the channel input");
  return apply_isometry(input, kraus_to_isometry(channel), "A'");
}

double objective_after_channel(const PureState& abe, const IsometryMatrix& squasher) {
  return conditional_entropy_pair(apply_isometry(abe, squasher, "E"));
}

std::vector<double> to_raw(const CMatrix& m) {
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      raw.push_back(m(r, c).real());
      raw.push_back(m(r, c).imag());
    }
  return raw;
}

// Nelder-Mead restarted from its own result until a rerun stops improving.
SimplexResult polish(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> start, int iterations, double tolerance, double step) {
  SimplexOptions opts;
  opts.max_iterations = iterations;
  opts.value_tolerance = tolerance * 1e-2;
  opts.initial_step = step;
  SimplexResult best = nelder_mead(f, std::move(start), opts);
  long evaluations = best.evaluations;
  for (int round = 0; round < 3; ++round) {
    opts.initial_step *= 0.25;
    SimplexResult next = nelder_mead(f, best.x, opts);
    evaluations += next.evaluations;
    const bool improved = next.value < best.value - tolerance;
    if (next.value < best.value) best = std::move(next);
    if (!improved) break;
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Charts

std::optional<IsometryMatrix> decode_squasher(const SquasherParams& params, int env_dim) {
  const int rows = params.eprime_dim * params.f_dim;
  if (params.eprime_dim < 1 || params.f_dim < 1 || env_dim < 1)
    throw ValidationError("decode_squasher: dimensions must be positive");
  if (rows < env_dim)
    throw ValidationError("decode_squasher: eprime_dim * f_dim must be at least env_dim");
  if (params.raw.size() != static_cast<std::size_t>(2 * rows * env_dim))
    throw ValidationError("decode_squasher: raw vector has the wrong length");

  CMatrix v(rows, env_dim);
  for (int c = 0; c < env_dim; ++c)
    for (int r = 0; r < rows; ++r) {
      const std::size_t i = 2 * static_cast<std::size_t>(c * rows + r);
      v(r, c) = cplx(params.raw[i], params.raw[i + 1]);
    }
  // Modified Gram-Schmidt in column order, two passes for orthogonality.
  for (int c = 0; c < env_dim; ++c) {
    const double scale = v.col(c).norm();
    if (!(scale > kCollapseNorm)) return std::nullopt;
    for (int pass = 0; pass < 2; ++pass)
      for (int prev = 0; prev < c; ++prev) v.col(c) -= v.col(prev).dot(v.col(c)) * v.col(prev);
    const double norm = v.col(c).norm();
    if (!(norm > kCollapseNorm * scale)) return std::nullopt;
    v.col(c) /= norm;
  }
  return IsometryMatrix(std::move(v), SubsystemDims({env_dim}, {"E"}),
                        SubsystemDims({params.eprime_dim, params.f_dim}, {"E'", "F"}));
}

SquasherParams encode_squasher(const CMatrix& matrix, int eprime_dim, int f_dim) {
  if (matrix.rows() != static_cast<Eigen::Index>(eprime_dim) * f_dim)
    throw ValidationError("encode_squasher: row count must equal eprime_dim * f_dim");
  return {eprime_dim, f_dim, to_raw(matrix)};
}

SquasherParams trace_out_f_squasher(int env_dim, int eprime_dim, int f_dim) {
  if (eprime_dim < env_dim || f_dim < 1)
    throw ValidationError("trace_out_f_squasher: needs eprime_dim >= env_dim");
  CMatrix v = CMatrix::Zero(eprime_dim * f_dim, env_dim);
  for (int k = 0; k < env_dim; ++k) v(k * f_dim, k) = 1.0;
  return encode_squasher(v, eprime_dim, f_dim);
}

SquasherParams trace_out_eprime_squasher(int env_dim, int eprime_dim, int f_dim) {
  if (f_dim < env_dim || eprime_dim < 1)
    throw ValidationError("trace_out_eprime_squasher: needs f_dim >= env_dim");
  CMatrix v = CMatrix::Zero(eprime_dim * f_dim, env_dim);
  for (int k = 0; k < env_dim; ++k) v(k, k) = 1.0;
  return encode_squasher(v, eprime_dim, f_dim);
}

SquasherParams fourier_bell_squasher(int env_dim) {
  const int d = env_dim;
  CMatrix v = CMatrix::Zero(d * d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      v(j * d + j, k) = std::polar(norm, 2.0 * std::numbers::pi * j * k / d);
  return encode_squasher(v, d, d);
}

SquasherParams random_squasher(int env_dim, int eprime_dim, int f_dim, Rng& rng) {
  return encode_squasher(random_isometry(eprime_dim * f_dim, env_dim, rng), eprime_dim, f_dim);
}

PureState decode_input(const InputParams& params, int in_dim) {
  const int n = in_dim * in_dim;
  if (params.raw.size() != static_cast<std::size_t>(2 * n))
    throw ValidationError("decode_input: raw vector has the wrong length");
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(params.raw[2 * i], params.raw[2 * i + 1]);
  const double norm = v.norm();
  if (!(norm > kCollapseNorm)) throw ValidationError("decode_input: raw vector is zero");
  v /= norm;
  return {std::move(v), SubsystemDims({in_dim, in_dim}, {"A", "A'"})};
}

InputParams encode_input(const PureState& state) {
  const auto& dims = state.dims();
  if (dims.labels() != Labels{"A", "A'"} || dims.dims()[0] != dims.dims()[1])
    throw ValidationError("encode_input: state must live on (A, A') of equal dimension");
  return {to_raw(state.amplitudes())};
}

InputParams maximally_entangled_input(int in_dim) {
  return encode_input(PureState::maximally_entangled(in_dim, "A", "A'"));
}

// ---------------------------------------------------------------------------
// Objective

double squashed_objective(const FiniteChannel& channel, const PureState& input,
                          const IsometryMatrix& squasher) {
  if (squasher.input_dims().total() != channel.env_dim())
    throw ValidationError("squasher input dimension does not match the channel environment");
  const auto& out = squasher.output_dims();
  if (!out.contains("E'") || !out.contains("F") || out.size() != 2)
    throw ValidationError("squasher must output factors E' and F");
  return objective_after_channel(through_channel(channel, input), squasher);
}

double evaluate_objective(const FiniteChannel& channel, const InputParams& input,
                          const SquasherParams& squasher) {
  auto v = decode_squasher(squasher, channel.env_dim());
  if (!v) throw ValidationError("evaluate_objective: squasher parameters are rank deficient");
  return squashed_objective(channel, decode_input(input, channel.in_dim()), *v);
}

// ---------------------------------------------------------------------------
// Optimization

InputSearchResult maximize_over_input(const FiniteChannel& channel, const SquasherParams& squasher,
                                      const EstimatorConfig& config) {
  check_config(config);
  const auto v = decode_squasher(squasher, channel.env_dim());
  if (!v) throw ValidationError("maximize_over_input: squasher parameters are rank deficient");
  check_budget(channel.in_dim(), channel.out_dim(), squasher.eprime_dim, squasher.f_dim);

  const int d = channel.in_dim();
  auto negated = [&](const std::vector<double>& raw) {
    try {
      return -squashed_objective(channel, decode_input({raw}, d), *v);
    } catch (const ValidationError&) {
      return kInf;
    }
  };

  Rng rng(config.seed ^ 0x5bd1e995ULL);
  std::vector<InputParams> starts{maximally_entangled_input(d)};
  for (int r = 0; r < config.restarts; ++r)
    starts.push_back(encode_input(
        PureState(random_pure_state(SubsystemDims({d, d}, {"A", "A'"}), rng))));

  InputSearchResult best;
  best.value = -kInf;
  for (const auto& start : starts) {
    const double at_start = -negated(start.raw);
    ++best.evaluations;
    SimplexResult r = polish(negated, start.raw, config.inner_iterations, config.tolerance, 0.25);
    best.evaluations += r.evaluations;
    InputParams candidate{std::move(r.x)};
    double value = -r.value;
    if (at_start >= value) {
      candidate = start;
      value = at_start;
    }
    if (value > best.value) {
      best.value = value;
      best.input = std::move(candidate);
    }
  }
  return best;
}

SquasherSearchResult minimize_over_squasher(const FiniteChannel& channel, const InputParams& input,
                                            const EstimatorConfig& config) {
  check_config(config);
  const SquasherShape shape = resolve_shape(channel, config);
  check_budget(channel.in_dim(), channel.out_dim(), shape.eprime, shape.f);
  const PureState abe = through_channel(channel, decode_input(input, channel.in_dim()));

  auto objective = [&](const std::vector<double>& raw) {
    const auto v = decode_squasher({shape.eprime, shape.f, raw}, shape.env);
    if (!v) return kInf;
    return objective_after_channel(abe, *v);
  };

  std::vector<SquasherParams> starts;
  if (shape.eprime >= shape.env) starts.push_back(trace_out_f_squasher(shape.env, shape.eprime, shape.f));
  if (shape.f >= shape.env) starts.push_back(trace_out_eprime_squasher(shape.env, shape.eprime, shape.f));
  if (shape.eprime == shape.env && shape.f == shape.env && shape.env > 1)
    starts.push_back(fourier_bell_squasher(shape.env));
  Rng rng(config.seed);
  for (int r = 0; r < config.restarts; ++r)
    starts.push_back(random_squasher(shape.env, shape.eprime, shape.f, rng));

  SquasherSearchResult best;
  best.value = kInf;
  for (const auto& start : starts) {
    SimplexResult r = polish(objective, start.raw, config.inner_iterations, config.tolerance, 0.3);
    best.evaluations += r.evaluations;
    if (r.value < best.value) {
      best.value = r.value;
      best.squasher = {shape.eprime, shape.f, std::move(r.x)};
    }
    best.trace.push_back(best.value);
  }
  return best;
}

BoundResult estimate_channel_bound(const FiniteChannel& channel, const EstimatorConfig& config) {
  check_config(config);
  const SquasherShape shape = resolve_shape(channel, config);
  check_budget(channel.in_dim(), channel.out_dim(), shape.eprime, shape.f);

  BoundResult result;
  result.name = "generic_squashed_entanglement";
  result.params = {{"in_dim", channel.in_dim()},
                   {"out_dim", channel.out_dim()},
                   {"env_dim", shape.env},
                   {"eprime_dim", shape.eprime},
                   {"f_dim", shape.f},
                   {"restarts", config.restarts},
                   {"max_alternations", config.max_alternations},
                   {"seed", static_cast<double>(config.seed)}};
  result.caveat = "upper bound certified only up to input-maximization quality";

  InputParams input = maximally_entangled_input(channel.in_dim());
  double best = kInf;
  bool converged = false;
  for (int t = 0; t < config.max_alternations; ++t) {
    EstimatorConfig round = config;
    round.seed = config.seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL;
    const SquasherSearchResult squash = minimize_over_squasher(channel, input, round);
    const InputSearchResult lift = maximize_over_input(channel, squash.squasher, round);
    result.evaluations += squash.evaluations + lift.evaluations;

    const double previous = best;
    best = std::min(best, lift.value);
    result.trace.push_back(best);
    input = lift.input;
    if (t > 0 && previous - best < config.tolerance) {
      converged = true;
      break;
    }
  }
  result.value = best;
  result.budget_exhausted = !converged && config.max_alternations > 1;
  return result;
}

// ---------------------------------------------------------------------------
// Structural checks

AdditivityReport product_additivity_check(const FiniteChannel& n, const FiniteChannel& m,
                                          const std::pair<InputParams, InputParams>& inputs,
                                          const std::pair<SquasherParams, SquasherParams>& squashers) {
  const auto v1 = decode_squasher(squashers.first, n.env_dim());
  const auto v2 = decode_squasher(squashers.second, m.env_dim());
  if (!v1 || !v2) throw ValidationError("product_additivity_check: rank-deficient squasher");
  const PureState in1 = decode_input(inputs.first, n.in_dim());
  const PureState in2 = decode_input(inputs.second, m.in_dim());

  AdditivityReport report;
  report.sum = squashed_objective(n, in1, *v1) + squashed_objective(m, in2, *v2);

  const FiniteChannel joint = FiniteChannel::tensor(n, m);
  // Product input on A = A1 A2, A' = A1' A2'.
  const int a1 = n.in_dim();
  const int a2 = m.in_dim();
  CVector amp(static_cast<Eigen::Index>(a1 * a2) * a1 * a2);
  for (int x1 = 0; x1 < a1; ++x1)
    for (int x2 = 0; x2 < a2; ++x2)
      for (int y1 = 0; y1 < a1; ++y1)
        for (int y2 = 0; y2 < a2; ++y2)
          amp((x1 * a2 + x2) * (a1 * a2) + (y1 * a2 + y2)) =
              in1.amplitudes()(x1 * a1 + y1) * in2.amplitudes()(x2 * a2 + y2);
  const PureState joint_input(std::move(amp), SubsystemDims({a1 * a2, a1 * a2}, {"A", "A'"}));

  // Product squasher E1 E2 -> (E1' E2')(F1 F2).
  const int e1 = squashers.first.eprime_dim;
  const int f1 = squashers.first.f_dim;
  const int e2 = squashers.second.eprime_dim;
  const int f2 = squashers.second.f_dim;
  const int env2 = m.env_dim();
  CMatrix w = CMatrix::Zero(e1 * e2 * f1 * f2, n.env_dim() * env2);
  for (int i = 0; i < n.env_dim(); ++i)
    for (int j = 0; j < env2; ++j)
      for (int p1 = 0; p1 < e1; ++p1)
        for (int q1 = 0; q1 < f1; ++q1)
          for (int p2 = 0; p2 < e2; ++p2)
            for (int q2 = 0; q2 < f2; ++q2)
              w((p1 * e2 + p2) * (f1 * f2) + (q1 * f2 + q2), i * env2 + j) =
                  v1->matrix()(p1 * f1 + q1, i) * v2->matrix()(p2 * f2 + q2, j);
  const IsometryMatrix joint_squasher(std::move(w), SubsystemDims({n.env_dim() * env2}, {"E"}),
                                      SubsystemDims({e1 * e2, f1 * f2}, {"E'", "F"}));
  report.joint = squashed_objective(joint, joint_input, joint_squasher);
  return report;
}

double objective_at_density(const FiniteChannel& channel, const DensityOperator& input,
                            const IsometryMatrix& squasher) {
  if (input.dims().size() != 1 || input.dims().total() != channel.in_dim())
    throw ValidationError("objective_at_density: input must be a single factor of the channel input dimension");
  const PureState purified = purify(input);
  const int d = channel.in_dim();
  // purify appends the reference last: factors (A', A).
  const PureState relabeled(purified.amplitudes(), SubsystemDims({d, d}, {"A'", "A"}));
  return squashed_objective(channel, relabeled, squasher);
}

ConcavityReport concavity_check(const FiniteChannel& channel, const SquasherParams& squasher,
                                const std::vector<double>& weights,
                                const std::vector<DensityOperator>& states) {
  if (weights.size() != states.size() || states.empty())
    throw ValidationError("concavity_check: need one weight per state");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("concavity_check: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("concavity_check: weights must sum to 1");
  const auto v = decode_squasher(squasher, channel.env_dim());
  if (!v) throw ValidationError("concavity_check: rank-deficient squasher");

  ConcavityReport report;
  CMatrix mixture = CMatrix::Zero(channel.in_dim(), channel.in_dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    report.average_value += weights[i] * objective_at_density(channel, states[i], *v);
    mixture += weights[i] * states[i].matrix();
  }
  report.mixture_value =
      objective_at_density(channel, DensityOperator(std::move(mixture), states.front().dims()), *v);
  return report;
}

}  // namespace sqe
