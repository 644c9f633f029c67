#pragma once

// Truncated-Fock Jaynes–Cummings simulation of two entangled cavities probed
// by atoms sent through cavity A only, with interaction times chosen by
// feedback on the previous measurement, plus two non-local preparation
// schemes for contrast.
//
// Atom basis: |g> = 0, |e> = 1. The JC block for Fock level n couples
// |e,n> and |g,n+1> with a_n(t) = cos(R_n t/2), b_n(t) = -i sin(R_n t/2),
// R_n = R0 sqrt(n+1).

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcor/channels.hpp"
#include "qcor/qstate.hpp"

namespace qcor::cavity {

enum class AtomState { Ground = 0, Excited = 1 };

std::string to_string(AtomState s);

/// Parameters of the one-sided feedback protocol on α|n,m> + β|n',m'>.
struct FeedbackConfig {
  int n = 0;
  int n_prime = 1;
  int m = 1;
  int m_prime = 0;
  Complex alpha{std::sqrt(0.8), 0.0};
  Complex beta{std::sqrt(0.2), 0.0};
  double r0 = 1.0;             ///< vacuum Rabi frequency, R0 = 2g
  std::size_t fock_cutoff = 0; ///< 0 selects minimum_cutoff()
  std::size_t max_atoms = 60;
  std::uint64_t seed = 0;

  /// Real nonnegative amplitudes with |α|² = alpha2.
  static FeedbackConfig from_alpha2(double alpha2, int n = 0, int n_prime = 1);

  std::size_t minimum_cutoff() const;
  std::size_t cavity_a_dim() const;
  std::size_t cavity_b_dim() const;

  /// Throws ValidationError when an invariant fails.
  void validate() const;
};

struct JcCoefficients {
  Complex a;
  Complex b;
};

/// Rabi frequency of the |e,n> <-> |g,n+1> transition.
double rabi_frequency(int n, double r0);
JcCoefficients jc_coefficients(int n, double t, double r0);

/// Unitary on (cavity, atom) in that order. |g,0> is stationary and the top
/// level |e,cutoff-1> is frozen.
Matrix jc_unitary(const CompositeSpace& space, const std::string& cavity, const std::string& atom, double t,
                  double r0);

/// Applies jc_unitary; throws TruncationError when |e,cutoff-1> carries
/// population above 1e-12 (its evolution would leave the truncated space).
StateVector apply_jc(const StateVector& state, const std::string& cavity, const std::string& atom, double t,
                     double r0);

/// Scan step and window used by the interaction-time solvers.
double solver_grid_step(int n, int n_prime, double r0);
double solver_window(int n, int n_prime, double r0);

/// Smallest t > 0 with |α| a_n(t) = |β| a_n'(t) (excited atom on levels n, n').
double solve_time_excited(Complex alpha, Complex beta, int n, int n_prime, double r0);
/// Smallest t > 0 with |α| sin(R_n t/2) = |β| sin(R_n' t/2) (ground atom on levels n+1, n'+1).
double solve_time_ground(Complex alpha, Complex beta, int n, int n_prime, double r0);

/// Amplitudes of the branch left behind when the atom is measured in |g>:
/// (α b_n, β b_n') for an incoming excited atom, (α a_n, β a_n') for an
/// incoming ground atom, renormalised.
std::pair<Complex, Complex> update_amplitudes_ground_branch(Complex alpha, Complex beta, const JcCoefficients& cn,
                                                            const JcCoefficients& cn_prime,
                                                            AtomState incoming = AtomState::Excited);

enum class TerminalStatus { MaximallyEntangled, Disentangled, MaxAtomsReached };

std::string to_string(TerminalStatus s);

struct AtomRecord {
  std::size_t atom = 0;
  AtomState prepared = AtomState::Excited;
  double interaction_time = 0.0;
  AtomState outcome = AtomState::Ground;
  double branch_probability = 0.0;  ///< probability of the observed outcome
  double p_excited = 0.0;
  double p_ground = 0.0;
  Complex alpha;  ///< post-measurement amplitude on the |n>-type level
  Complex beta;
  double mutual_information = 0.0;  ///< cavity–cavity, after the measurement
  double pre_measurement_mi = 0.0;  ///< cavities after interaction, atom traced out
  double ensemble_mi = 0.0;         ///< Σ_outcomes p · I(branch)
  double reduced_b_deviation = 0.0; ///< max |ρ_B' − ρ_B| before selection
};

struct ProtocolTrace {
  FeedbackConfig config;
  double initial_mi = 0.0;
  std::vector<AtomRecord> records;
  TerminalStatus status = TerminalStatus::MaxAtomsReached;
};

ProtocolTrace run_feedback_protocol(const FeedbackConfig& config, Rng& rng);
/// Uses an Rng seeded from config.seed.
ProtocolTrace run_feedback_protocol(const FeedbackConfig& config);

struct CumulativeCurve {
  std::vector<double> probabilities;  ///< entry k: success within the first k+1 atoms
  std::vector<double> step_success;   ///< success probability of atom k given failures before it
  double target = 0.0;                ///< 2|β|²
  double residual = 0.0;              ///< last entry − target
};

/// Deterministic evaluation of 1 − Π_i P_i(g) along the all-ground branch for N atoms.
CumulativeCurve cumulative_success_probability(const FeedbackConfig& config, std::size_t atoms);

struct ConcavityReport {
  double s_initial = 0.0;           ///< S(ρ_A) of the initial field
  double s_after = 0.0;             ///< entropy of the untouched cavity after interaction
  double s_excited_branch = 0.0;    ///< S(ρ'_A1)
  double s_ground_branch = 0.0;     ///< S(ρ'_A2)
  double delta = 0.0;               ///< S(ρ'_A1) − S(ρ_A)
  double p = 0.0;                   ///< probability of the excited outcome
  double s_probed_cavity_after = 0.0;  ///< entropy of the probed cavity after interaction (diagnostic)

  double equality_error() const { return std::abs(s_initial - s_after); }
  /// S(ρ_A) − S(ρ'_A2) − pΔ/(1−p); nonnegative when the decrement bound holds.
  double decrement_margin() const { return s_initial - s_ground_branch - p * delta / (1.0 - p); }
  /// S(ρ_A) − S(ρ'_A2).
  double strict_margin() const { return s_initial - s_ground_branch; }
};

/// Mixture decomposition of the untouched cavity's state after one tuned excited atom.
ConcavityReport concavity_decrement_check(const FeedbackConfig& config);

struct DecisiveStep {
  KrausChannel filter;
  double p_success = 0.0;
  double success_mi = 0.0;
  double failure_mi = 0.0;
};

/// Ideal two-outcome local measurement on cavity A that settles the outcome at
/// the first step: success leaves |n,m> + |n',m'> (normalised), failure leaves a product state.
DecisiveStep decisive_first_step(const FeedbackConfig& config);

// ---------------------------------------------------------------------------
// Non-local schemes

struct NonlocalResult {
  StateVector final_state;
  double cavity_mi = 0.0;   ///< I(cavA : cavB) of the reduced cavity state
  double atom_mi = 0.0;     ///< I(atoms) for two atoms; 0 for one atom
};

/// Space (cavA, cavB, atomA, atomB); cavities in |0,0>, atoms in (|e,g> + |g,e>)/√2,
/// each atom interacts with its own cavity for time t.
NonlocalResult nonlocal_method1(double t, double r0);

struct Method2Result {
  StateVector intermediate;  ///< after cavity A
  NonlocalResult result;
};

/// Space (atom, cavA, cavB); one excited atom meets cavity A for t1, then cavity B for t2.
Method2Result nonlocal_method2(double t1, double t2, double r0);

}  // namespace qcor::cavity
