#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sqe/pauli.hpp"
#include "sqe/qcore.hpp"
#include "sqe/random.hpp"

namespace sqe {
namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

PureState bell_phi_plus() { return PureState::maximally_entangled(2, "A", "B"); }

PureState ghz() {
  CVector v = CVector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return {v, SubsystemDims({2, 2, 2}, {"A", "B", "C"})};
}

TEST(ShannonEntropy, UniformAndDeterministic) {
  const double uniform[] = {0.25, 0.25, 0.25, 0.25};
  const double point[] = {1.0, 0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(shannon_entropy(uniform), 2.0);
  EXPECT_DOUBLE_EQ(shannon_entropy(point), 0.0);
}

TEST(ShannonEntropy, DepolarizingWeights) {
  // 1/2 + (1/2) log2 6, evaluated independently to 30 digits
  const double p[] = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  EXPECT_NEAR(shannon_entropy(p), 1.79248125036057809072686947197, 1e-14);
}

TEST(ShannonEntropy, RejectsInvalidDistributions) {
  const double negative[] = {1.1, -0.1};
  const double short_sum[] = {0.5, 0.4};
  EXPECT_THROW(shannon_entropy(negative), ValidationError);
  EXPECT_THROW(shannon_entropy(short_sum), ValidationError);
}

TEST(BinaryEntropy, Values) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.8), 0.721928094887362347870319429489, 1e-15);
  EXPECT_THROW(binary_entropy(1.5), ValidationError);
  EXPECT_THROW(binary_entropy(-0.1), ValidationError);
}

TEST(BosonicG, Values) {
  EXPECT_EQ(bosonic_g(0.0), 0.0);
  EXPECT_DOUBLE_EQ(bosonic_g(1.0), 2.0);
  EXPECT_NEAR(bosonic_g(1e6), 21.3742643315604174900102865438, 1e-11);
  // large-x asymptote log2(x) + log2(e)
  EXPECT_NEAR(bosonic_g(1e6), std::log2(1e6) + std::numbers::log2e, 1e-5);
  EXPECT_THROW(bosonic_g(-1e-3), ValidationError);
}

TEST(VonNeumannEntropy, MixedAndPure) {
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(SubsystemDims({2}, {"A"}))), 1.0,
              1e-14);
  Rng rng(kDefaultSeed);
  const auto psi = random_pure_state(SubsystemDims({3}, {"A"}), rng);
  EXPECT_NEAR(von_neumann_entropy(psi.density()), 0.0, 1e-12);
}

TEST(VonNeumannEntropy, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 0.5, 0.3, 0.0, 0.5;
  EXPECT_THROW(DensityOperator(m, SubsystemDims({2}, {"A"})), ValidationError);
}

TEST(DensityOperator, RejectsNegativeSpectrumAndBadTrace) {
  CMatrix neg(2, 2);
  neg << 1.1, 0.0, 0.0, -0.1;
  EXPECT_THROW(DensityOperator(neg, SubsystemDims({2}, {"A"})), ValidationError);
  EXPECT_THROW(DensityOperator(CMatrix::Identity(2, 2), SubsystemDims({2}, {"A"})), ValidationError);
}

TEST(SubsystemDims, RejectsDuplicateLabels) {
  EXPECT_THROW(SubsystemDims({2, 2}, {"A", "A"}), ValidationError);
  EXPECT_THROW(SubsystemDims({2, 0}, {"A", "B"}), ValidationError);
}

TEST(PartialTrace, BellStateReducesToMaximallyMixed) {
  const auto rho = partial_trace(bell_phi_plus().density(), {"A"});
  EXPECT_LT(max_abs(rho.matrix() - CMatrix::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_EQ(rho.dims().labels(), Labels{"A"});
}

TEST(PartialTrace, KeepingEverythingIsIdentity) {
  Rng rng(3);
  const auto rho = random_density(SubsystemDims({2, 3}, {"A", "B"}), rng);
  const auto same = partial_trace(rho, {"A", "B"});
  EXPECT_LT(max_abs(same.matrix() - rho.matrix()), 1e-15);
}

TEST(PartialTrace, UnknownLabelThrows) {
  EXPECT_THROW(partial_trace(bell_phi_plus().density(), {"Z"}), ValidationError);
}

TEST(PartialTrace, MatchesPureStateReduction) {
  Rng rng(11);
  const auto psi = random_pure_state(SubsystemDims({2, 3, 2}, {"K", "L", "M"}), rng);
  for (const Labels& keep : {Labels{"K"}, Labels{"L"}, Labels{"K", "M"}, Labels{"L", "M"}}) {
    const auto a = partial_trace(psi.density(), keep);
    const auto b = psi.reduced(keep);
    EXPECT_LT(max_abs(a.matrix() - b.matrix()), 1e-14);
  }
}

TEST(PartialTrace, IdentityPauliChannelStateHasFlatBESpectrum) {
  const auto psi = pauli_extension_state({1, 0, 0, 0}, {});
  const auto rho_be = partial_trace(psi.density(), {"B", "E"});
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_be.matrix());
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), 0.25, 1e-14);
}

TEST(Purify, MaximallyMixedQubitGivesMaximallyEntangledPair) {
  const auto psi = purify(DensityOperator::maximally_mixed(SubsystemDims({2}, {"A"})));
  EXPECT_EQ(psi.dims().labels(), (Labels{"A", "R"}));
  EXPECT_NEAR(von_neumann_entropy(psi.reduced({"A"})), 1.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy(psi.reduced({"R"})), 1.0, 1e-14);
}

TEST(Purify, PureInputLeavesReferenceUnentangled) {
  Rng rng(5);
  const auto phi = random_pure_state(SubsystemDims({3}, {"A"}), rng);
  const auto psi = purify(phi.density());
  EXPECT_NEAR(von_neumann_entropy(psi.reduced({"R"})), 0.0, 1e-12);
}

TEST(Purify, RoundTripOnRandomStates) {
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(SubsystemDims({3}, {"A"}), rng);
    const auto back = partial_trace(purify(rho).density(), {"A"});
    EXPECT_LT(max_abs(back.matrix() - rho.matrix()), 1e-10);
  }
  const auto bipartite = random_density(SubsystemDims({2, 2}, {"A", "B"}), rng, 2);
  const auto back = purify(bipartite).reduced({"A", "B"});
  EXPECT_LT(max_abs(back.matrix() - bipartite.matrix()), 1e-10);
}

TEST(KrausToIsometry, IdentityChannelHasTrivialEnvironment) {
  const auto v = kraus_to_isometry(FiniteChannel::identity(2));
  EXPECT_EQ(v.output_dims().dims(), (std::vector<int>{2, 1}));
  EXPECT_LT(max_abs(v.matrix() - CMatrix::Identity(2, 2)), 1e-15);
}

// Push every matrix unit |i><j| through V, trace E, and compare with the Kraus sum.
void expect_reduced_channel_matches(const FiniteChannel& ch) {
  const auto v = kraus_to_isometry(ch);
  EXPECT_LT(max_abs(v.matrix().adjoint() * v.matrix() - CMatrix::Identity(ch.in_dim(), ch.in_dim())), 1e-12);
  const int env = ch.env_dim();
  for (int i = 0; i < ch.in_dim(); ++i)
    for (int j = 0; j < ch.in_dim(); ++j) {
      CMatrix unit = CMatrix::Zero(ch.in_dim(), ch.in_dim());
      unit(i, j) = 1.0;
      const CMatrix full = v.matrix() * unit * v.matrix().adjoint();
      CMatrix reduced = CMatrix::Zero(ch.out_dim(), ch.out_dim());
      for (int a = 0; a < ch.out_dim(); ++a)
        for (int b = 0; b < ch.out_dim(); ++b)
          for (int k = 0; k < env; ++k) reduced(a, b) += full(a * env + k, b * env + k);
      EXPECT_LT(max_abs(reduced - ch.apply(unit)), 1e-10);
    }
}

TEST(KrausToIsometry, DephasingReducedChannel) {
  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const FiniteChannel deph({std::sqrt(0.9) * CMatrix::Identity(2, 2), std::sqrt(0.1) * z}, 2, 2);
  EXPECT_EQ(kraus_to_isometry(deph).output_dims().dim_of("E"), 2);
  expect_reduced_channel_matches(deph);
}

TEST(KrausToIsometry, PauliAndRandomChannels) {
  expect_reduced_channel_matches(phased_pauli_channel({0.4, 0.3, 0.2, 0.1}, {0.3, 1.1, 2.0}));
  Rng rng(17);
  for (int t = 0; t < 5; ++t) expect_reduced_channel_matches(random_channel(3, 2, 3, rng));
}

TEST(FiniteChannel, ClosureViolationReportsDeviation) {
  try {
    FiniteChannel({0.5 * CMatrix::Identity(2, 2)}, 2, 2);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("closure"), std::string::npos);
  }
}

TEST(ConditionalEntropy, Examples) {
  EXPECT_NEAR(conditional_entropy(bell_phi_plus().density(), {"A"}, {"B"}), -1.0, 1e-14);
  const auto mixed = tensor(DensityOperator::maximally_mixed(SubsystemDims({2}, {"A"})),
                            DensityOperator::maximally_mixed(SubsystemDims({2}, {"B"})));
  EXPECT_NEAR(conditional_entropy(mixed, {"A"}, {"B"}), 1.0, 1e-14);
  EXPECT_THROW(conditional_entropy(mixed, {"A"}, {"A"}), ValidationError);
}

TEST(ConditionalMutualInformation, Examples) {
  Rng rng(2);
  const auto a = random_density(SubsystemDims({2}, {"A"}), rng);
  const auto bc = random_density(SubsystemDims({2, 2}, {"B", "C"}), rng);
  EXPECT_NEAR(conditional_mutual_information(tensor(a, bc), {"A"}, {"B"}, {"C"}), 0.0, 1e-12);
  EXPECT_NEAR(conditional_mutual_information(ghz().density(), {"A"}, {"B"}, {"C"}), 1.0, 1e-12);
  EXPECT_THROW(conditional_mutual_information(ghz().density(), {"A"}, {"A", "B"}, {"C"}), ValidationError);
}

// Property suites over seeded random draws.

TEST(Properties, ConditionalEntropyDuality) {
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 200; ++trial) {
    const auto psi = random_pure_state(SubsystemDims({2, 2, 3}, {"K", "L", "M"}), rng);
    const double sum = conditional_entropy(psi, {"K"}, {"L"}) + conditional_entropy(psi, {"K"}, {"M"});
    ASSERT_LT(std::abs(sum), 1e-9) << "trial " << trial;
  }
}

TEST(Properties, StrongSubadditivity) {
  Rng rng(kDefaultSeed + 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int rank = 1 + trial % 8;
    const auto rho = random_density(SubsystemDims({2, 2, 2}, {"K", "L", "M"}), rng, rank);
    ASSERT_GE(conditional_mutual_information(rho, {"K"}, {"L"}, {"M"}), -1e-9) << "trial " << trial;
  }
}

TEST(Properties, ProductStatesCarryNoMutualInformation) {
  Rng rng(kDefaultSeed + 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ac = random_density(SubsystemDims({2, 2}, {"a", "c"}), rng);
    const auto bd = random_density(SubsystemDims({2, 2}, {"b", "d"}), rng);
    const auto joint = tensor(ac, bd);
    EXPECT_NEAR(conditional_mutual_information(joint, {"a"}, {"b"}, {}), 0.0, 1e-12);
    EXPECT_NEAR(conditional_mutual_information(joint, {"a", "c"}, {"b", "d"}, {}), 0.0, 1e-12);
    // I(ab;cd) = I(a;c) + I(b;d)
    const double whole = conditional_mutual_information(joint, {"a", "b"}, {"c", "d"}, {});
    const double parts = conditional_mutual_information(ac, {"a"}, {"c"}, {}) +
                         conditional_mutual_information(bd, {"b"}, {"d"}, {});
    EXPECT_NEAR(whole, parts, 1e-12);
  }
}

TEST(Properties, UnitaryInvariance) {
  Rng rng(kDefaultSeed + 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density(SubsystemDims({4}, {"A"}), rng, 1 + trial % 4);
    const CMatrix u = random_unitary(4, rng);
    CMatrix rotated = u * rho.matrix() * u.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    EXPECT_NEAR(von_neumann_entropy(DensityOperator(rotated, rho.dims())), von_neumann_entropy(rho), 1e-10);
  }
}

TEST(ApplyIsometry, MatchesKroneckerConstruction) {
  Rng rng(23);
  const auto psi = random_pure_state(SubsystemDims({2, 3, 2}, {"X", "Y", "Z"}), rng);
  const CMatrix v = random_isometry(6, 3, rng);
  const IsometryMatrix iso(v, SubsystemDims({3}, {"Y"}), SubsystemDims({3, 2}, {"P", "Q"}));
  const auto out = apply_isometry(psi, iso, "Y");
  EXPECT_EQ(out.dims().labels(), (Labels{"X", "P", "Q", "Z"}));
  // (I_2 (x) V (x) I_2) psi
  CMatrix big = CMatrix::Zero(24, 12);
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z)
      for (int o = 0; o < 6; ++o)
        for (int y = 0; y < 3; ++y) big((x * 6 + o) * 2 + z, (x * 3 + y) * 2 + z) = v(o, y);
  EXPECT_LT((big * psi.amplitudes() - out.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);
}

}  // namespace
}  // namespace sqe
