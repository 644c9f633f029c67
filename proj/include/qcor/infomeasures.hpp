#pragma once

// Classical and quantum entropy functionals, in nats.
//
// Relative entropies use the nonnegative convention D(p||q) = Σ p ln(p/q)
// and return +infinity when the support of the first argument is not
// contained in the support of the second.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qcor/qstate.hpp"

namespace qcor {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Support threshold for eigenvalues and probabilities in relative entropies.
inline constexpr double kSupportThreshold = 1e-12;

class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<double> weights_;
};

double shannon_entropy(const ProbabilityDistribution& p);
double shannon_relative_entropy(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Both closed forms of the mutual information, computed independently.
struct MutualInformationForms {
  double entropy_sum = 0.0;  ///< H(X) + H(Y) - H(X,Y), or S_A + S_B - S_AB
  double relative = 0.0;     ///< D(joint || product of marginals)

  double discrepancy() const { return entropy_sum - relative; }
};

/// Rows index X, columns index Y. Entries must be nonnegative and sum to one.
MutualInformationForms shannon_mutual_information_forms(const Eigen::MatrixXd& joint);
double shannon_mutual_information(const Eigen::MatrixXd& joint);

/// -Σ λ ln λ over a spectrum; zeros (and clamped drift) are skipped.
double spectrum_entropy(const RealVector& eigenvalues);
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr ρ(ln ρ − ln σ); +infinity when supp ρ ⊄ supp σ.
double vn_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Two groups of labels that together partition a space.
struct Bipartition {
  Labels a;
  Labels b;
};

/// Validates the cut against `space` and returns it; `b` empty means "complement of a".
Bipartition resolve_cut(const CompositeSpace& space, const Bipartition& cut);

double vn_mutual_information(const DensityMatrix& rho, const Bipartition& cut);
MutualInformationForms vn_mutual_information_forms(const DensityMatrix& rho, const Bipartition& cut);
/// Mutual information of a pure state without forming the full density matrix.
double vn_mutual_information(const StateVector& psi, const Bipartition& cut);

// ---------------------------------------------------------------------------
// Randomised checks of the entropy inequalities.

struct PropertyViolation {
  std::string property;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double slack = 0.0;  ///< amount by which the inequality failed
};

struct PropertyTally {
  std::string property;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = -kInfinity;  ///< max over trials of (lhs − rhs) for "lhs ≤ rhs"
};

struct EntropySuiteReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tolerance = 1e-8;
  std::vector<PropertyTally> tallies;
  std::vector<PropertyViolation> violations;

  std::size_t violation_count() const { return violations.size(); }
  const PropertyTally& tally(const std::string& property) const;
};

struct EntropySuiteOptions {
  std::size_t dim_a = 2;
  std::size_t dim_b = 2;
  std::size_t dim_c = 2;
  std::size_t mixture_size = 3;  ///< components in the concavity check
  double tolerance = 1e-8;
};

/// Per trial (seed derived from `seed` and the trial index) checks additivity,
/// concavity, strong subadditivity, subadditivity and the Araki–Lieb bound.
EntropySuiteReport entropy_property_suite(std::uint64_t seed, std::size_t trials,
                                          const EntropySuiteOptions& options = {});

/// Concavity gap S(Σ λ_i ρ_i) − Σ λ_i S(ρ_i); nonnegative up to rounding.
double concavity_gap(std::span<const DensityMatrix> states, std::span<const double> weights);

}  // namespace qcor
