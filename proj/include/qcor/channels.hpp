#pragma once

// Complete measurements (Kraus channels) acting on designated subsystems,
// their derivation from a system–environment unitary, and randomised trials
// checking that local channels cannot increase correlations.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcor/infomeasures.hpp"
#include "qcor/qstate.hpp"

namespace qcor {

/// Operator set {A_i} with Σ A_i† A_i = I acting on the factors of `target`.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> operators, CompositeSpace target);

  const std::vector<Matrix>& operators() const noexcept { return operators_; }
  const CompositeSpace& target() const noexcept { return target_; }
  Labels target_labels() const { return target_.labels(); }
  std::size_t source_dim() const noexcept { return target_.dimension(); }

  /// max |Σ A†A − I|.
  double completeness_error() const;

  /// Same operators acting on differently named factors of equal shape.
  KrausChannel retargeted(CompositeSpace target) const;

 private:
  std::vector<Matrix> operators_;
  CompositeSpace target_;
};

KrausChannel identity_channel(const CompositeSpace& target);
/// Complete dephasing in the computational basis: {|k><k|}.
KrausChannel dephasing_channel(const CompositeSpace& target);
KrausChannel unitary_channel(const Matrix& u, const CompositeSpace& target);

/// A_i = <φ_i| U_SE |ψ_E>. `u_se` acts on system ⊗ environment (system first).
KrausChannel kraus_from_unitary(const Matrix& u_se, const CompositeSpace& system, const StateVector& env_init,
                                std::span<const Vector> env_basis);

/// Computational basis of dimension `dim`.
std::vector<Vector> standard_basis(std::size_t dim);

/// Random channel from a Haar unitary on system ⊗ environment, env starting in |0>.
KrausChannel random_channel(const CompositeSpace& target, std::size_t env_dim, Rng& rng);

/// Random channel whose Kraus operators each have one nonzero entry,
/// A_(i,l) = sqrt(T_il) e^{iφ} |i><l| for a random column-stochastic T.
KrausChannel random_incoherent_channel(const CompositeSpace& target, Rng& rng);

/// True when the output diagonal depends only on the input diagonal:
/// Σ_n A^n_il conj(A^n_im) = 0 for every i and l ≠ m.
bool is_incoherent(const KrausChannel& channel, double tolerance = tol::kIdentity);

/// ρ' = Σ (A_i ⊗ I) ρ (A_i ⊗ I)†.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

/// Tr_E[(U ⊗ I)(ρ ⊗ |ψ_E><ψ_E|)(U ⊗ I)†], where U acts on (targets..., env).
/// The environment factors of `env_init` are appended and then traced out.
DensityMatrix apply_dilation(const DensityMatrix& rho, const Matrix& u, std::span<const std::string> targets,
                             const StateVector& env_init);

// ---------------------------------------------------------------------------
// Trials

/// ‖Tr_A(ρ') − Tr_A(ρ)‖_max for a channel acting only on side A of `cut`.
double reduced_invariance_trial(const DensityMatrix& rho_ab, const KrausChannel& channel_on_a,
                                const Bipartition& cut);

struct MonotonicityResult {
  double before = 0.0;
  double after = 0.0;
};

/// Mutual information across `cut` before and after a channel local to one side.
MonotonicityResult monotonicity_trial(const DensityMatrix& rho_ab, const KrausChannel& channel,
                                      const Bipartition& cut);

enum class Side { A, B };

/// Three-party route: one side X interacts unitarily with a fresh ancilla C in |0>
/// while the other side Y is a spectator; C is then traced out.
struct DilationTrialResult {
  double before = 0.0;
  double after = 0.0;
  /// S_YXC + S_X − S_YX − S_XC at the final time (≤ 0 by strong subadditivity).
  double ssa_slack = 0.0;
  DensityMatrix final_state;
};

/// `u` acts on (labels of the local side..., ancilla).
DilationTrialResult dilation_monotonicity_trial(const DensityMatrix& rho_ab, const Matrix& u,
                                                const Bipartition& cut, Side local, std::size_t ancilla_dim);

struct ContractionResult {
  double before = 0.0;  ///< Σ ρ_ii ln(ρ_ii / a_ii)
  double after = 0.0;   ///< same on the channel outputs
  /// Whether the diagonal map is a classical stochastic map (see is_incoherent);
  /// the contraction is only guaranteed in that case.
  bool incoherent = false;
};

/// Diagonal relative entropy between ρ and a reference, before and after the channel.
ContractionResult classical_contraction_trial(const DensityMatrix& rho, const DensityMatrix& reference,
                                              const KrausChannel& channel);

/// Product of the marginals of ρ across `cut`, in ρ's factor order.
DensityMatrix product_of_marginals(const DensityMatrix& rho, const Bipartition& cut);

// ---------------------------------------------------------------------------
// Randomised suites

struct ChannelViolation {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string kind;
  double before = 0.0;
  double after = 0.0;
  Matrix state;
  std::vector<Matrix> kraus;
};

struct MonotonicityTrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double before = 0.0;
  double after = 0.0;
  double dilation_after = 0.0;
  double reduced_deviation = 0.0;
  double route_discrepancy = 0.0;  ///< |channel route − dilation route| (max element)
};

struct MonotonicitySuiteReport {
  std::uint64_t seed = 0;
  std::size_t dim_a = 2;
  std::size_t dim_b = 2;
  double tolerance = 1e-8;
  double invariance_tolerance = 1e-10;
  std::vector<MonotonicityTrialRecord> records;
  std::vector<ChannelViolation> violations;

  double max_increase() const;
  double max_reduced_deviation() const;
  double max_route_discrepancy() const;
};

/// Random ρ_AB and random local channel; the channel acts on A for even trials
/// and on B for odd trials. Each trial also runs the dilation route.
MonotonicitySuiteReport monotonicity_suite(std::uint64_t seed, std::size_t trials, std::size_t dim_a,
                                           std::size_t dim_b, std::size_t env_dim = 2);

enum class ChannelFamily { Incoherent, General };

struct ContractionSuiteReport {
  std::uint64_t seed = 0;
  ChannelFamily family = ChannelFamily::Incoherent;
  double tolerance = 1e-8;
  std::vector<ContractionResult> results;
  std::vector<ChannelViolation> violations;
};

/// Random ρ on dim_a × dim_b, reference = product of marginals, random channel on AB.
ContractionSuiteReport contraction_suite(std::uint64_t seed, std::size_t trials, std::size_t dim_a,
                                         std::size_t dim_b, ChannelFamily family);

}  // namespace qcor
