#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcor/infomeasures.hpp"

using namespace qcor;

namespace {

const double kLn2 = std::log(2.0);

StateVector epr(double alpha2) {
  Vector v = Vector::Zero(4);
  v[1] = std::sqrt(alpha2);
  v[2] = std::sqrt(1.0 - alpha2);
  return StateVector(CompositeSpace::qubits({"A", "B"}), v);
}

const Bipartition kCut{{"A"}, {"B"}};

}  // namespace

// --- Shannon

TEST(Shannon, EntropyExamples) {
  EXPECT_EQ(shannon_entropy(ProbabilityDistribution({1.0, 0.0})), 0.0);
  EXPECT_NEAR(shannon_entropy(ProbabilityDistribution({0.5, 0.5})), kLn2, 1e-15);
  EXPECT_NEAR(shannon_entropy(ProbabilityDistribution({0.25, 0.25, 0.25, 0.25})), std::log(4.0), 1e-15);
}

TEST(Shannon, DistributionValidation) {
  EXPECT_THROW(ProbabilityDistribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(ProbabilityDistribution({1.5, -0.5}), ValidationError);
  EXPECT_THROW(ProbabilityDistribution(std::vector<double>{}), ValidationError);
}

TEST(Shannon, RelativeEntropyExamples) {
  const ProbabilityDistribution p({0.3, 0.7});
  EXPECT_EQ(shannon_relative_entropy(p, p), 0.0);
  EXPECT_NEAR(shannon_relative_entropy(ProbabilityDistribution({1.0, 0.0}), ProbabilityDistribution({0.5, 0.5})), kLn2,
              1e-15);
  EXPECT_EQ(shannon_relative_entropy(ProbabilityDistribution({0.5, 0.5}), ProbabilityDistribution({1.0, 0.0})),
            kInfinity);
  EXPECT_THROW(shannon_relative_entropy(p, ProbabilityDistribution({1.0})), ValidationError);
}

TEST(Shannon, MutualInformationExamples) {
  Eigen::MatrixXd product(2, 3);
  const double pi[2] = {0.3, 0.7}, qa[3] = {0.2, 0.5, 0.3};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) product(i, j) = pi[i] * qa[j];
  EXPECT_NEAR(shannon_mutual_information(product), 0.0, 1e-15);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = diag(1, 1) = 0.5;
  EXPECT_NEAR(shannon_mutual_information(diag), kLn2, 1e-15);

  Eigen::MatrixXd j(2, 2);
  j << 0.4, 0.1, 0.1, 0.4;
  const auto f = shannon_mutual_information_forms(j);
  EXPECT_LT(f.discrepancy(), 1e-12);
  // closed form: 2 ln 2 − H(0.4, 0.1, 0.1, 0.4) contributions
  const double ref = 0.8 * std::log(0.4 / 0.25) + 0.2 * std::log(0.1 / 0.25);
  EXPECT_NEAR(f.entropy_sum, ref, 1e-15);
}

TEST(ShannonProperty, RelativeEntropyNonnegativeAndZeroOnlyAtEquality) {
  Rng rng(31);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> a(4), b(4);
    double sa = 0, sb = 0;
    for (int i = 0; i < 4; ++i) {
      sa += a[i] = u(rng);
      sb += b[i] = u(rng);
    }
    for (int i = 0; i < 4; ++i) {
      a[i] /= sa;
      b[i] /= sb;
    }
    const ProbabilityDistribution p(a), q(b);
    EXPECT_GE(shannon_relative_entropy(p, q), 0.0);
    EXPECT_NEAR(shannon_relative_entropy(p, p), 0.0, 1e-15);
    EXPECT_GE(shannon_entropy(p), 0.0);
    EXPECT_LE(shannon_entropy(p), std::log(4.0) + 1e-12);
  }
}

TEST(ShannonProperty, MutualInformationFormsAgree) {
  Rng rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    Eigen::MatrixXd j(3, 4);
    for (Eigen::Index i = 0; i < j.size(); ++i) j.data()[i] = u(rng);
    j /= j.sum();
    const auto f = shannon_mutual_information_forms(j);
    EXPECT_LT(f.discrepancy(), 1e-8);
    EXPECT_GE(f.entropy_sum, -1e-12);
  }
}

// --- von Neumann

TEST(VonNeumann, EntropyExamples) {
  const CompositeSpace q = CompositeSpace::qubits({"q"});
  EXPECT_EQ(von_neumann_entropy(density_from_pure(StateVector::basis(q, 0))), 0.0);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(q, Matrix::Identity(2, 2) / 2.0)), kLn2, 1e-15);
  const Labels a{"A"};
  const double s = von_neumann_entropy(partial_trace(epr(0.7), a));
  EXPECT_NEAR(s, oracle::binary_entropy(0.7), 1e-12);
  EXPECT_NEAR(s, 0.610864, 1e-6);
}

TEST(VonNeumann, AgreesWithGeneralEigenSolver) {
  CompositeSpace s({{"A", 3}, {"B", 2}});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(33, seed));
    const auto rho = random_density(s, rng);
    EXPECT_NEAR(von_neumann_entropy(rho), oracle::entropy(rho.matrix()), 1e-10);
  }
}

TEST(VonNeumann, RelativeEntropyExamples) {
  const CompositeSpace q = CompositeSpace::qubits({"q"});
  Rng rng(34);
  const auto r = random_density(q, rng);
  EXPECT_NEAR(vn_relative_entropy(r, r), 0.0, 1e-12);
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  EXPECT_NEAR(vn_relative_entropy(DensityMatrix(q, pure), DensityMatrix(q, Matrix::Identity(2, 2) / 2.0)), kLn2,
              1e-14);
  EXPECT_EQ(vn_relative_entropy(DensityMatrix(q, Matrix::Identity(2, 2) / 2.0), DensityMatrix(q, pure)), kInfinity);
  EXPECT_THROW(vn_relative_entropy(r, random_density(CompositeSpace::qubits({"a", "b"}), rng)), ValidationError);
}

TEST(VonNeumann, CommutingRelativeEntropyEqualsClassical) {
  const CompositeSpace s({{"A", 3}});
  Matrix p = Matrix::Zero(3, 3), q = Matrix::Zero(3, 3);
  p.diagonal() << 0.2, 0.5, 0.3;
  q.diagonal() << 0.4, 0.4, 0.2;
  EXPECT_NEAR(vn_relative_entropy(DensityMatrix(s, p), DensityMatrix(s, q)),
              shannon_relative_entropy(ProbabilityDistribution({0.2, 0.5, 0.3}), ProbabilityDistribution({0.4, 0.4, 0.2})),
              1e-14);
}

TEST(VonNeumannProperty, KleinInequality) {
  CompositeSpace s({{"A", 4}});
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(derive_seed(35, seed));
    const auto r = random_density(s, rng), t = random_density(s, rng);
    EXPECT_GE(vn_relative_entropy(r, t), 0.0);
    const double sr = von_neumann_entropy(r);
    EXPECT_GE(sr, 0.0);
    EXPECT_LE(sr, std::log(4.0) + 1e-12);
  }
}

TEST(MutualInformation, EprExamples) {
  EXPECT_NEAR(vn_mutual_information(epr(0.5), kCut), 2 * kLn2, 1e-12);
  EXPECT_NEAR(vn_mutual_information(density_from_pure(epr(0.5)), kCut), 2 * kLn2, 1e-12);
  EXPECT_NEAR(vn_mutual_information(epr(1.0), kCut), 0.0, 1e-15);
}

TEST(MutualInformation, ProductStateIsZero) {
  const CompositeSpace sa({{"A", 2}}), sb({{"B", 3}});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(derive_seed(36, seed));
    EXPECT_NEAR(vn_mutual_information(tensor(random_density(sa, rng), random_density(sb, rng)), kCut), 0.0, 1e-9);
  }
}

TEST(MutualInformation, CutValidation) {
  const auto rho = density_from_pure(epr(0.5));
  EXPECT_THROW(vn_mutual_information(rho, Bipartition{{"A"}, {"A"}}), ValidationError);
  EXPECT_THROW(vn_mutual_information(rho, Bipartition{{"A", "B"}, {}}), ValidationError);
  EXPECT_THROW(vn_mutual_information(rho, Bipartition{{"Z"}, {"B"}}), LabelError);
  // empty second side means "the rest"
  EXPECT_NEAR(vn_mutual_information(rho, Bipartition{{"B"}, {}}), 2 * kLn2, 1e-12);
}

TEST(MutualInformationProperty, DualFormsAgreeAndNonnegative) {
  CompositeSpace s({{"A", 2}, {"B", 2}, {"C", 2}});
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(derive_seed(37, seed));
    const auto rho = random_density(s, rng);
    const auto f = vn_mutual_information_forms(rho, Bipartition{{"C", "A"}, {"B"}});
    EXPECT_LT(f.discrepancy(), 1e-8);
    EXPECT_GE(f.entropy_sum, -1e-12);
  }
}

TEST(MutualInformationProperty, PureStateIsTwiceReducedEntropy) {
  CompositeSpace s({{"A", 2}, {"B", 3}});
  const Labels a{"A"};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(derive_seed(38, seed));
    const auto psi = random_pure(s, rng);
    const double sa = von_neumann_entropy(partial_trace(psi, a));
    EXPECT_NEAR(vn_mutual_information(psi, kCut), 2 * sa, 1e-9);
    EXPECT_NEAR(vn_mutual_information(density_from_pure(psi), kCut), 2 * sa, 1e-9);
  }
}

// --- property suite

TEST(EntropySuite, ThousandTrialsNoViolations) {
  const auto rep = entropy_property_suite(2024, 1000);
  EXPECT_EQ(rep.violation_count(), 0u);
  for (const auto& t : rep.tallies) EXPECT_EQ(t.checked, 1000u) << t.property;
  EXPECT_LT(rep.tally("additivity").worst_slack, 1e-10);
}

TEST(EntropySuite, DeterministicForFixedSeed) {
  const auto a = entropy_property_suite(5, 20), b = entropy_property_suite(5, 20);
  for (std::size_t k = 0; k < a.tallies.size(); ++k) EXPECT_EQ(a.tallies[k].worst_slack, b.tallies[k].worst_slack);
}

TEST(EntropySuite, RejectsZeroTrials) { EXPECT_THROW(entropy_property_suite(1, 0), ValidationError); }

TEST(EntropyInequalities, PureProductSaturates) {
  const CompositeSpace s = CompositeSpace::qubits({"A", "B", "C"});
  const auto rho = density_from_pure(StateVector::basis(s, 5));
  for (const Labels& keep : {Labels{"A"}, Labels{"B"}, Labels{"A", "B"}, Labels{"B", "C"}})
    EXPECT_NEAR(von_neumann_entropy(partial_trace(rho, keep)), 0.0, 1e-15);
}

TEST(EntropyInequalities, ConcavityWithDegenerateWeightsIsEquality) {
  const CompositeSpace s({{"A", 3}});
  Rng rng(39);
  std::vector<DensityMatrix> st{random_density(s, rng), random_density(s, rng)};
  std::vector<double> w{1.0, 0.0};
  EXPECT_NEAR(concavity_gap(st, w), 0.0, 1e-12);
}
