#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sqe/cli.hpp"
#include "sqe/pauli.hpp"
#include "sqe/random.hpp"
#include "sqe/squash.hpp"

namespace sqe {
namespace {

std::string data_path(const std::string& name) { return std::string(SQE_DATA_DIR) + "/channels/" + name; }

FiniteChannel dephasing_channel(double p) {
  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return FiniteChannel({std::sqrt(p) * CMatrix::Identity(2, 2), std::sqrt(1 - p) * z}, 2, 2);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

InputParams random_input(int d, Rng& rng) {
  return encode_input(random_pure_state(SubsystemDims({d, d}, {"A", "A'"}), rng));
}

// Reference evaluation without the squash module: apply V to E and take the entropies directly.
double reference_objective(const FiniteChannel& ch, const PureState& input, const IsometryMatrix& v) {
  const auto abe = apply_isometry(input, kraus_to_isometry(ch), "A'");
  const auto full = apply_isometry(abe, v, "E");
  return 0.5 * (conditional_entropy(full, {"B"}, {"E'"}) + conditional_entropy(full, {"B"}, {"F"}));
}

TEST(DecodeSquasher, IdentityBlockKeepsEverythingInEPrime) {
  const auto v = decode_squasher(trace_out_f_squasher(3, 3, 1), 3);
  ASSERT_TRUE(v.has_value());
  EXPECT_LT(max_abs(v->matrix() - CMatrix::Identity(3, 3)), 1e-15);
  EXPECT_EQ(v->output_dims().labels(), (Labels{"E'", "F"}));
  EXPECT_EQ(v->output_dims().dim_of("F"), 1);
}

TEST(DecodeSquasher, TrivialEPrimeHandsEverythingToF) {
  const auto v = decode_squasher(trace_out_eprime_squasher(2, 1, 2), 2);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->output_dims().dim_of("E'"), 1);
  EXPECT_LT(max_abs(v->matrix() - CMatrix::Identity(2, 2)), 1e-15);
}

TEST(DecodeSquasher, RandomRawIsAnIsometry) {
  Rng rng(kDefaultSeed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    SquasherParams p{3, 2, std::vector<double>(2 * 6 * 4)};
    for (double& x : p.raw) x = n(rng);
    const auto v = decode_squasher(p, 4);
    ASSERT_TRUE(v.has_value());
    EXPECT_LT(max_abs(v->matrix().adjoint() * v->matrix() - CMatrix::Identity(4, 4)), 1e-10);
  }
}

TEST(DecodeSquasher, CollapseAndShapeErrors) {
  EXPECT_FALSE(decode_squasher({2, 2, std::vector<double>(16, 0.0)}, 2).has_value());
  std::vector<double> repeated(16, 0.0);
  repeated[0] = repeated[8] = 1.0;  // both columns equal |0>
  EXPECT_FALSE(decode_squasher({2, 2, repeated}, 2).has_value());
  EXPECT_THROW(decode_squasher({2, 2, std::vector<double>(15, 1.0)}, 2), ValidationError);
  EXPECT_THROW(decode_squasher({1, 1, std::vector<double>(4, 1.0)}, 2), ValidationError);
}

TEST(EncodeSquasher, RoundTrip) {
  Rng rng(5);
  const CMatrix m = random_isometry(6, 3, rng);
  const auto v = decode_squasher(encode_squasher(m, 2, 3), 3);
  ASSERT_TRUE(v.has_value());
  EXPECT_LT(max_abs(v->matrix() - m), 1e-12);
}

TEST(FourierBellSquasher, IsUnitary) {
  const auto v = decode_squasher(fourier_bell_squasher(3), 3);
  ASSERT_TRUE(v.has_value());
  EXPECT_LT(max_abs(v->matrix().adjoint() * v->matrix() - CMatrix::Identity(3, 3)), 1e-14);
}

TEST(DecodeInput, NormalizesAndRoundTrips) {
  const auto psi = decode_input({{3.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0}}, 2);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(psi.amplitudes()(1).imag(), 0.8, 1e-15);
  EXPECT_THROW(decode_input({{0.0, 0.0}}, 1), ValidationError);
  EXPECT_THROW(decode_input({{1.0, 0.0, 0.0}}, 1), ValidationError);
  Rng rng(9);
  const auto state = random_pure_state(SubsystemDims({3, 3}, {"A", "A'"}), rng);
  const auto back = decode_input(encode_input(state), 3);
  EXPECT_LT((back.amplitudes() - state.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EvaluateObjective, IdentityChannelIsOneForAnySquasher) {
  const auto id = FiniteChannel::identity(2);
  Rng rng(1);
  EXPECT_NEAR(evaluate_objective(id, maximally_entangled_input(2), trace_out_f_squasher(1, 1, 1)), 1.0, 1e-12);
  for (int t = 0; t < 5; ++t)
    EXPECT_NEAR(evaluate_objective(id, maximally_entangled_input(2), random_squasher(1, 2, 3, rng)), 1.0, 1e-12);
}

TEST(EvaluateObjective, ProductInputGivesZero) {
  CVector amp = CVector::Zero(4);
  amp(0) = 1.0;
  const auto product = encode_input(PureState(amp, SubsystemDims({2, 2}, {"A", "A'"})));
  Rng rng(2);
  const auto ch = random_channel(2, 2, 3, rng);
  EXPECT_NEAR(evaluate_objective(ch, product, random_squasher(3, 3, 3, rng)), 0.0, 1e-9);
}

TEST(EvaluateObjective, MatchesReferenceConstruction) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto ch = random_channel(2, 3, 2, rng);
    const auto in = random_input(2, rng);
    const auto sq = random_squasher(2, 2, 3, rng);
    EXPECT_NEAR(evaluate_objective(ch, in, sq),
                reference_objective(ch, decode_input(in, 2), *decode_squasher(sq, 2)), 1e-12);
  }
}

TEST(EvaluateObjective, PauliCrossModule) {
  const PauliProbabilities p(0.55, 0.2, 0.15, 0.1);
  const SquashingPhases phi(0.5, 2.1, 4.0);
  const auto bell = encode_squasher(bell_environment_splitter().matrix(), 2, 2);
  EXPECT_NEAR(evaluate_objective(phased_pauli_channel(p, phi), maximally_entangled_input(2), bell),
              pauli_bound_at(p, phi), 1e-9);
}

TEST(EvaluateObjective, RejectsMismatchedDimensions) {
  const auto ch = dephasing_channel(0.9);
  EXPECT_THROW(evaluate_objective(ch, maximally_entangled_input(3), trace_out_f_squasher(2, 2, 2)),
               ValidationError);
  EXPECT_THROW(evaluate_objective(ch, maximally_entangled_input(2), trace_out_f_squasher(3, 3, 1)),
               ValidationError);
}

TEST(EvaluateObjective, TraceOutFReproducesUnsquashedExtension) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto ch = random_channel(2, 2, 3, rng);
    const auto in = random_input(2, rng);
    const auto abe = apply_isometry(decode_input(in, 2), kraus_to_isometry(ch), "A'");
    const double half_cmi = 0.5 * conditional_mutual_information(abe.density(), {"A"}, {"B"}, {"E"});
    EXPECT_NEAR(evaluate_objective(ch, in, trace_out_f_squasher(3, 3, 1)), half_cmi, 1e-12);
  }
}

TEST(MaximizeOverInput, PauliChannelPrefersMaximallyEntangledInput) {
  const auto ch = phased_pauli_channel({0.6, 0.2, 0.1, 0.1}, {0.3, 0.0, 1.0});
  EstimatorConfig cfg;
  const auto sq = encode_squasher(bell_environment_splitter().matrix(), 2, 2);
  const double at_me = evaluate_objective(ch, maximally_entangled_input(2), sq);
  const auto r = maximize_over_input(ch, sq, cfg);
  EXPECT_NEAR(r.value, at_me, 1e-6);
}

TEST(MaximizeOverInput, IdentityAndDominance) {
  EstimatorConfig cfg;
  EXPECT_NEAR(maximize_over_input(FiniteChannel::identity(2), trace_out_f_squasher(1, 1, 1), cfg).value, 1.0, 1e-9);
  Rng rng(8);
  const auto ch = random_channel(3, 2, 3, rng);
  const auto sq = random_squasher(3, 3, 2, rng);
  const auto r = maximize_over_input(ch, sq, cfg);
  EXPECT_GE(r.value, evaluate_objective(ch, maximally_entangled_input(3), sq) - 1e-12);
  EXPECT_NEAR(evaluate_objective(ch, r.input, sq), r.value, 1e-12);
}

TEST(MinimizeOverSquasher, TraceIsNonIncreasing) {
  Rng rng(10);
  const auto ch = random_channel(2, 2, 3, rng);
  const auto r = minimize_over_squasher(ch, maximally_entangled_input(2), EstimatorConfig{});
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
  EXPECT_DOUBLE_EQ(r.trace.back(), r.value);
  EXPECT_NEAR(evaluate_objective(ch, maximally_entangled_input(2), r.squasher), r.value, 1e-12);
}

TEST(MinimizeOverSquasher, NeverWorseThanStructuredStarts) {
  const auto ch = dephasing_channel(0.9);
  const auto me = maximally_entangled_input(2);
  const auto r = minimize_over_squasher(ch, me, EstimatorConfig{});
  EXPECT_LE(r.value, evaluate_objective(ch, me, trace_out_f_squasher(2, 2, 2)) + 1e-12);
  EXPECT_LE(r.value, evaluate_objective(ch, me, fourier_bell_squasher(2)) + 1e-12);
  EXPECT_NEAR(evaluate_objective(ch, me, fourier_bell_squasher(2)), binary_entropy(0.8), 1e-12);
}

TEST(EstimateChannelBound, IdentityChannel) {
  const auto r = estimate_channel_bound(cli::load_channel_file(data_path("identity.json")));
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_EQ(r.name, "generic_squashed_entanglement");
  EXPECT_EQ(r.caveat, "upper bound certified only up to input-maximization quality");
}

TEST(EstimateChannelBound, DephasingBetweenClosedForms) {
  const auto r = estimate_channel_bound(cli::load_channel_file(data_path("dephasing_0.9.json")));
  EXPECT_LE(r.value, binary_entropy(0.8) + 1e-4);
  EXPECT_GE(r.value, 1.0 - binary_entropy(0.9) - 1e-6);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(EstimateChannelBound, CompletelyDepolarizingMatchesPauli) {
  const auto ch = phased_pauli_channel(PauliProbabilities::depolarizing(1.0));
  EstimatorConfig cfg;
  cfg.restarts = 2;
  cfg.max_alternations = 2;
  const auto r = estimate_channel_bound(ch, cfg);
  EXPECT_NEAR(r.value, depolarizing_bound(1.0).value, 1e-6);
}

TEST(EstimateChannelBound, DeterministicForFixedSeed) {
  const auto ch = cli::load_channel_file(data_path("amplitude_damping_0.3.json"));
  EXPECT_EQ(estimate_channel_bound(ch), estimate_channel_bound(ch));
}

TEST(EstimateChannelBound, AmplitudeDampingSnapshot) {
  const auto r = estimate_channel_bound(cli::load_channel_file(data_path("amplitude_damping_0.3.json")));
  EXPECT_NEAR(r.value, 0.603311370296844, 1e-6);
  EXPECT_GE(r.value, 0.0);
}

TEST(EstimateChannelBound, RejectsOversizedProblems) {
  Rng rng(12);
  EXPECT_THROW(estimate_channel_bound(random_channel(3, 3, 3, rng)), ValidationError);
  EstimatorConfig bad;
  bad.max_alternations = 0;
  EXPECT_THROW(estimate_channel_bound(FiniteChannel::identity(2), bad), ValidationError);
  EstimatorConfig narrow;
  narrow.eprime_dim = 1;
  narrow.f_dim = 1;
  EXPECT_THROW(estimate_channel_bound(dephasing_channel(0.9), narrow), ValidationError);
}

TEST(ProductAdditivity, Examples) {
  const auto id = FiniteChannel::identity(2);
  const auto me = maximally_entangled_input(2);
  const auto trivial = trace_out_f_squasher(1, 1, 1);
  const auto ii = product_additivity_check(id, id, {me, me}, {trivial, trivial});
  EXPECT_NEAR(ii.joint, 2.0, 1e-12);
  EXPECT_TRUE(ii.passed());
  const auto di = product_additivity_check(dephasing_channel(0.9), id, {me, me},
                                           {fourier_bell_squasher(2), trivial});
  EXPECT_NEAR(di.sum, binary_entropy(0.8) + 1.0, 1e-12);
  EXPECT_TRUE(di.passed());
}

TEST(Concavity, Examples) {
  const auto ch = dephasing_channel(0.9);
  const auto sq = fourier_bell_squasher(2);
  CMatrix zero = CMatrix::Zero(2, 2), one = CMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const SubsystemDims a({2}, {"A'"});
  const auto r = concavity_check(ch, sq, {0.5, 0.5}, {DensityOperator(zero, a), DensityOperator(one, a)});
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.mixture_value, r.average_value);
  const auto trivial = concavity_check(ch, sq, {1.0, 0.0}, {DensityOperator(zero, a), DensityOperator(one, a)});
  EXPECT_NEAR(trivial.mixture_value, trivial.average_value, 1e-12);
  EXPECT_THROW(concavity_check(ch, sq, {0.7, 0.7}, {DensityOperator(zero, a), DensityOperator(one, a)}),
               ValidationError);
}

TEST(ObjectiveAtDensity, MaximallyMixedMatchesMaximallyEntangled) {
  Rng rng(14);
  const auto ch = random_channel(2, 2, 2, rng);
  const auto sq = random_squasher(2, 2, 2, rng);
  const auto mixed = DensityOperator::maximally_mixed(SubsystemDims({2}, {"A'"}));
  EXPECT_NEAR(objective_at_density(ch, mixed, *decode_squasher(sq, 2)),
              evaluate_objective(ch, maximally_entangled_input(2), sq), 1e-12);
}

// Property suites

TEST(Properties, ObjectiveIsNonNegative) {
  Rng rng(kDefaultSeed);
  for (int t = 0; t < 100; ++t) {
    const int in = 2, out = 2 + t % 2, k = 1 + t % 3;
    const auto ch = random_channel(in, out, k, rng);
    const auto sq = random_squasher(k, 1 + t % 3, 1 + (t / 3) % 3 + (k > 1 ? 1 : 0), rng);
    if (sq.eprime_dim * sq.f_dim < k) continue;
    ASSERT_GE(evaluate_objective(ch, random_input(in, rng), sq), -1e-9);
  }
}

TEST(Properties, LocalUnitaryInvariance) {
  Rng rng(kDefaultSeed + 1);
  for (int t = 0; t < 20; ++t) {
    const auto ch = random_channel(2, 2, 2, rng);
    const auto in = decode_input(random_input(2, rng), 2);
    const auto v = *decode_squasher(random_squasher(2, 2, 2, rng), 2);
    const double base = squashed_objective(ch, in, v);

    // U on A
    const CMatrix u = random_unitary(2, rng);
    CMatrix ua = CMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ua.block(2 * i, 2 * j, 2, 2) = u(i, j) * CMatrix::Identity(2, 2);
    const PureState rotated(ua * in.amplitudes(), in.dims());
    EXPECT_NEAR(squashed_objective(ch, rotated, v), base, 1e-10);

    // U on E' and W on F after the squasher
    const CMatrix ue = random_unitary(2, rng), wf = random_unitary(2, rng);
    CMatrix kron = CMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) kron.block(2 * i, 2 * j, 2, 2) = ue(i, j) * wf;
    const IsometryMatrix v2(kron * v.matrix(), v.input_dims(), v.output_dims());
    EXPECT_NEAR(squashed_objective(ch, in, v2), base, 1e-10);
  }
}

TEST(Properties, ProductAdditivityOnRandomPairs) {
  Rng rng(kDefaultSeed + 2);
  for (int t = 0; t < 20; ++t) {
    const auto n = random_channel(2, 2, 2, rng);
    const auto m = random_channel(2, 2, 1 + t % 2, rng);
    const auto r = product_additivity_check(n, m, {random_input(2, rng), random_input(2, rng)},
                                            {random_squasher(2, 2, 2, rng), random_squasher(m.env_dim(), 2, 2, rng)});
    EXPECT_TRUE(r.passed()) << "defect " << r.defect();
  }
}

TEST(Properties, ConcavityOnRandomMixtures) {
  Rng rng(kDefaultSeed + 3);
  std::exponential_distribution<double> e(1.0);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 2;
    const auto ch = random_channel(d, 2, 2, rng);
    const auto sq = random_squasher(2, 2, 2, rng);
    std::vector<double> w(3);
    double s = 0.0;
    for (double& x : w) s += (x = e(rng));
    for (double& x : w) x /= s;
    std::vector<DensityOperator> states;
    for (int i = 0; i < 3; ++i) states.push_back(random_density(SubsystemDims({d}, {"A'"}), rng, 1 + i % d));
    EXPECT_TRUE(concavity_check(ch, sq, w, states).passed());
  }
}

TEST(Properties, EstimateDominatesReverseCoherentInformation) {
  Rng rng(kDefaultSeed + 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EstimatorConfig cfg;
  cfg.restarts = 2;
  cfg.max_alternations = 2;
  for (int t = 0; t < 3; ++t) {
    const double q = 0.5 + 0.5 * u(rng);
    const auto p = PauliProbabilities::dephasing(q);
    const auto r = estimate_channel_bound(phased_pauli_channel(p), cfg);
    EXPECT_GE(r.value, reverse_coherent_information(p) - 1e-6) << "q=" << q;
  }
}

}  // namespace
}  // namespace sqe
