#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcor/errors.hpp"
#include "qcor/infomeasures.hpp"
#include "qcor/localec.hpp"

using namespace qcor;
using namespace qcor::localec;

namespace {

const Complex kAlpha(std::sqrt(0.7)), kBeta(std::sqrt(0.3));

// digits in layout order: cavA, atomA1, atomA2, cavB, atomB1, atomB2, env0
Eigen::Index at(const CompositeSpace& s, std::vector<std::size_t> d) {
  return static_cast<Eigen::Index>(s.index(d));
}

StateVector encoded_pair(GateOrder order = GateOrder::Atom1First) {
  return encode(prepare_register(cavity_pair(kAlpha, kBeta), 1), order);
}

}  // namespace

TEST(Gates, Unitary) {
  EXPECT_TRUE(is_unitary(cnot_matrix(), 1e-12));
  EXPECT_TRUE(is_unitary(not_matrix(), 1e-12));
  Rng rng(2);
  std::uniform_real_distribution<double> w(0.0, 1.0), ph(0.0, 6.283);
  for (int k = 0; k < 50; ++k) {
    const double p = w(rng);
    const Complex c0 = std::polar(std::sqrt(1 - p), ph(rng)), c1 = std::polar(std::sqrt(p), ph(rng));
    EXPECT_TRUE(is_unitary(amplitude_error_unitary(c0, c1), 1e-12));
  }
  EXPECT_THROW(amplitude_error_unitary(Complex(1.0), Complex(1.0)), ValidationError);
}

TEST(Encode, ProducesRepetitionEncodedPair) {
  const auto s = encoded_pair();
  const auto& sp = s.space();
  Vector ref = Vector::Zero(128);
  ref[at(sp, {0, 0, 0, 1, 1, 1, 0})] = kAlpha;
  ref[at(sp, {1, 1, 1, 0, 0, 0, 0})] = kBeta;
  EXPECT_LT((s.amplitudes() - ref).norm(), 1e-15);
}

TEST(Encode, ProductInputStaysProduct) {
  const auto s = encode(prepare_register(cavity_pair(1.0, 0.0), 1));
  EXPECT_NEAR(std::abs(s[s.space().index(std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 0})]), 1.0, 1e-15);
  EXPECT_NEAR(side_mutual_information(s), 0.0, 1e-12);
}

TEST(Encode, GateOrdersAgree) {
  EXPECT_LT((encoded_pair(GateOrder::Atom1First).amplitudes() - encoded_pair(GateOrder::Atom2First).amplitudes())
                .norm(),
            1e-15);
}

TEST(Encode, RejectsExcitedAtoms) {
  auto s = prepare_register(cavity_pair(kAlpha, kBeta), 1);
  s = apply_unitary(s, not_matrix(), Labels{"atomB2"});
  EXPECT_THROW(encode(s), PreconditionError);
}

TEST(Encode, PreservesCorrelations) {
  const auto before = prepare_register(cavity_pair(kAlpha, kBeta), 1);
  const double i0 = vn_mutual_information(partial_trace(before, kCavities), Bipartition{{"cavA"}, {"cavB"}});
  EXPECT_NEAR(side_mutual_information(before), i0, 1e-10);
  EXPECT_NEAR(side_mutual_information(encoded_pair()), i0, 1e-10);
  EXPECT_NEAR(i0, 2.0 * oracle::binary_entropy(0.7), 1e-12);
}

TEST(Decode, InvertsEncodeOnRandomStates) {
  Rng rng(77);
  const auto layout = register_layout(1);
  for (int k = 0; k < 20; ++k) {
    const auto psi = random_pure(layout, rng);
    for (auto order : {GateOrder::Atom1First, GateOrder::Atom2First}) {
      // decode is the network itself, so decode∘decode is the identity on any input
      EXPECT_LT((decode(decode(psi, order), order).amplitudes() - psi.amplitudes()).norm(), 1e-12);
    }
  }
  const auto start = prepare_register(cavity_pair(kAlpha, kBeta), 1);
  EXPECT_LT((decode(encoded_pair()).amplitudes() - start.amplitudes()).norm(), 1e-12);
}

TEST(Inject, NoErrorLeavesStateUntouched) {
  const auto s = encoded_pair();
  const auto hit = inject_amplitude_error(s, "cavA", env_label(0), 1.0, 0.0);
  EXPECT_LT((hit.amplitudes() - s.amplitudes()).norm(), 1e-15);
}

TEST(Inject, FullFlipThenDecodeMatchesExpectedBranch) {
  const auto hit = inject_amplitude_error(encoded_pair(), "cavA", env_label(0), 0.0, 1.0);
  const auto& sp = hit.space();
  Vector flipped = Vector::Zero(128);
  flipped[at(sp, {1, 0, 0, 1, 1, 1, 1})] = kAlpha;
  flipped[at(sp, {0, 1, 1, 0, 0, 0, 1})] = kBeta;
  EXPECT_LT((hit.amplitudes() - flipped).norm(), 1e-15);

  const auto dec = decode(hit);
  Vector ref = Vector::Zero(128);
  ref[at(sp, {1, 1, 1, 1, 0, 0, 1})] = kAlpha;
  ref[at(sp, {0, 1, 1, 0, 0, 0, 1})] = kBeta;
  EXPECT_LT((dec.amplitudes() - ref).norm(), 1e-15);
}

TEST(Inject, NormPreservedAndEnvGuarded) {
  Rng rng(4);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (const auto& site : kErrorSites) {
    const double p = w(rng);
    const auto hit = inject_amplitude_error(encoded_pair(), site, env_label(0), std::sqrt(1 - p),
                                            Complex(0, std::sqrt(p)));
    EXPECT_NEAR(hit.amplitudes().norm(), 1.0, 1e-12);
    if (p > 1e-6) EXPECT_THROW(inject_amplitude_error(hit, "cavB", env_label(0), 0.0, 1.0), ProtocolError);
  }
}

TEST(Syndrome, NoErrorMeansAllGround) {
  const auto pair = cavity_pair(kAlpha, kBeta);
  const auto branches = correction_branches(decode(encoded_pair()), pair);
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_EQ(branches[0].first.syndrome_a.pattern(), "gg");
  EXPECT_EQ(branches[0].first.syndrome_b.pattern(), "gg");
  EXPECT_NEAR(branches[0].first.fidelity, 1.0, 1e-12);
}

TEST(Syndrome, FullCavityFlipIsUndone) {
  PipelineCase c;
  const auto out = run_pipeline(c);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].syndrome_a.pattern(), "ee");
  EXPECT_TRUE(out[0].flip_a);
  EXPECT_FALSE(out[0].flip_b);
  EXPECT_NEAR(out[0].fidelity, 1.0, 1e-9);
  EXPECT_NEAR(out[0].mi_after, out[0].mi_before, 1e-8);
}

TEST(Syndrome, ExhaustiveSingleSiteSweep) {
  for (const auto& site : kErrorSites)
    for (double w : {0.1, 0.3, 0.5, 1.0})
      for (auto order : {GateOrder::Atom1First, GateOrder::Atom2First}) {
        PipelineCase c;
        c.site = site;
        c.error_weight = w;
        c.order = order;
        const auto out = run_pipeline(c);
        double total = 0.0;
        for (const auto& o : out) {
          total += o.probability;
          EXPECT_GE(o.fidelity, 1.0 - 1e-9) << site << " " << w;
          EXPECT_LE(o.fidelity, 1.0 + 1e-9);
          EXPECT_NEAR(o.mi_after, o.mi_before, 1e-8);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_EQ(out.size(), w == 1.0 ? 1u : 2u);
      }
}

TEST(Syndrome, StrictPolicyRejectsMixedPattern) {
  PipelineCase c;
  c.site = "atomA2";
  EXPECT_THROW(run_pipeline(c, SyndromePolicy::Strict), ProtocolError);
  c.site = "cavB";
  EXPECT_NO_THROW(run_pipeline(c, SyndromePolicy::Strict));
}

TEST(Syndrome, SampledCorrectionIsOneOfTheBranches) {
  const auto pair = cavity_pair(kAlpha, kBeta);
  const auto hit = decode(inject_amplitude_error(encoded_pair(), "cavB", env_label(0), std::sqrt(0.5), std::sqrt(0.5)));
  Rng rng(12);
  int flips = 0;
  for (int k = 0; k < 200; ++k) {
    const auto [o, s] = syndrome_correct(hit, pair, rng);
    EXPECT_NEAR(o.fidelity, 1.0, 1e-9);
    flips += o.flip_b;
  }
  EXPECT_GT(flips, 60);
  EXPECT_LT(flips, 140);
}

TEST(Syndrome, SideCorrelationsRestored) {
  const auto pair = cavity_pair(kAlpha, kBeta);
  const double i0 = side_mutual_information(prepare_register(pair, 1));
  const auto hit = decode(inject_amplitude_error(encoded_pair(), "cavA", env_label(0), 0.0, 1.0));
  for (auto& [o, s] : correction_branches(hit, pair)) {
    EXPECT_EQ(o.syndrome_a.pattern(), "ee");
    // atoms of A read |ee>; once reset the register matches the pristine one
    auto reset = apply_unitary(s, not_matrix(), Labels{"atomA1"});
    reset = apply_unitary(reset, not_matrix(), Labels{"atomA2"});
    EXPECT_NEAR(side_mutual_information(reset), i0, 1e-8);
  }
}

// --- code-level check

TEST(Verify, IdentityPairTrivial) {
  const auto r = verify_entanglement_preserved(qecc::repetition_code(), {}, {}, kAlpha, kBeta);
  EXPECT_LT(r.difference(), 1e-12);
}

TEST(Verify, RepetitionCodeSingleAmplitudeErrors) {
  const auto code = qecc::repetition_code();
  const double expect = oracle::binary_entropy(0.7);
  for (const auto& ea : qecc::enumerate_error_indices(3, 1, qecc::ErrorModel::AmplitudeOnly))
    for (const auto& eb : qecc::enumerate_error_indices(3, 1, qecc::ErrorModel::AmplitudeOnly)) {
      const auto r = verify_entanglement_preserved(code, ea, eb, kAlpha, kBeta);
      EXPECT_NEAR(r.s_before, expect, 1e-12);
      EXPECT_NEAR(r.s_after, expect, 1e-9);
      EXPECT_LT(r.max_cross_term, 1e-12);
      EXPECT_TRUE(r.dense);
    }
}

TEST(Verify, FailingConditionNamesTuple) {
  const auto z = qecc::PauliErrorIndex::from_strings("000", "100");
  try {
    verify_entanglement_preserved(qecc::repetition_code(), z, {}, kAlpha, kBeta);
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("phase=100"), std::string::npos) << e.what();
  }
}

TEST(Verify, DenseAndFactoredAgree) {
  const auto shor = qecc::shor_code();
  const auto rep = qecc::repetition_code();
  const auto e1 = qecc::PauliErrorIndex::from_strings("100000000", "000000000");
  const auto e2 = qecc::PauliErrorIndex::from_strings("000000000", "010000000");
  const auto f = verify_entanglement_preserved(shor, e1, e2, kAlpha, kBeta, Reduction::Factored);
  EXPECT_FALSE(f.dense);
  EXPECT_LT(f.difference(), 1e-9);
  const auto a = qecc::PauliErrorIndex::from_strings("010", "000");
  const auto d = verify_entanglement_preserved(rep, a, a, kAlpha, kBeta, Reduction::Dense);
  const auto g = verify_entanglement_preserved(rep, a, a, kAlpha, kBeta, Reduction::Factored);
  EXPECT_TRUE(d.dense);
  EXPECT_NEAR(d.s_after, g.s_after, 1e-12);
}
