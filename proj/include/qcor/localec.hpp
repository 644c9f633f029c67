#pragma once

// Local error correction of an entangled cavity pair. Each cavity (Fock
// levels {0,1}) is encoded with two atoms into a three-qubit repetition code
// by two Control-Nots, amplitude errors are injected through environment
// qubits, and the atoms are measured after decoding to pick the correction.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qcor/qecc.hpp"
#include "qcor/qstate.hpp"

namespace qcor::localec {

/// Register labels, in layout order.
inline const Labels kSideA{"cavA", "atomA1", "atomA2"};
inline const Labels kSideB{"cavB", "atomB1", "atomB2"};
inline const Labels kCavities{"cavA", "cavB"};
inline const Labels kAtoms{"atomA1", "atomA2", "atomB1", "atomB2"};
/// The six sites an amplitude error may hit.
inline const Labels kErrorSites{"cavA", "atomA1", "atomA2", "cavB", "atomB1", "atomB2"};

/// cavA, atomA1, atomA2, cavB, atomB1, atomB2, env0 .. env{env_count-1}; all qubits.
CompositeSpace register_layout(std::size_t env_count = 1);
std::string env_label(std::size_t k);

/// α|0>_A|1>_B + β|1>_A|0>_B over (cavA, cavB).
StateVector cavity_pair(Complex alpha, Complex beta);

/// Cavity pair with all atoms in |g> and every environment qubit in |0>.
StateVector prepare_register(const StateVector& pair, std::size_t env_count = 1);

enum class GateOrder { Atom1First, Atom2First };

/// Two Control-Nots per side, cavity controlling each atom.
/// Throws PreconditionError unless every atom is in |g>.
StateVector encode(const StateVector& state, GateOrder order = GateOrder::Atom1First);
/// The same network; it is its own inverse.
StateVector decode(const StateVector& state, GateOrder order = GateOrder::Atom1First);

/// Control-Not and NOT as 4×4 / 2×2 matrices (control first).
Matrix cnot_matrix();
Matrix not_matrix();

/// Unitary on (site, env): |s,0> -> c0|s,0> + c1|s̄,1>, |s,1> -> -conj(c1)|s̄,0> + conj(c0)|s,1>.
Matrix amplitude_error_unitary(Complex c0, Complex c1);

/// |ψ>|0>_env -> c0|ψ>|0> + c1 X_site|ψ>|1>. Throws ProtocolError if `env`
/// already carries population in |1>.
StateVector inject_amplitude_error(const StateVector& state, const std::string& site, const std::string& env,
                                   Complex c0, Complex c1);

/// How a mixed atom pattern (one |g>, one |e>) on a side is handled. After
/// decoding it marks an error on one of that side's atoms, so the cavity is
/// already correct; Strict refuses it instead.
enum class SyndromePolicy { Majority, Strict };

struct SideSyndrome {
  bool atom1_excited = false;
  bool atom2_excited = false;
  std::string pattern() const;  ///< "gg", "ge", "eg" or "ee"
};

struct CorrectionOutcome {
  SideSyndrome syndrome_a;
  SideSyndrome syndrome_b;
  bool flip_a = false;  ///< NOT applied to cavity A
  bool flip_b = false;
  double probability = 0.0;  ///< probability of this syndrome
  double fidelity = 0.0;     ///< <ψ_target|ρ_cavities|ψ_target>
  double mi_before = 0.0;    ///< I(cavA : cavB) of the target pair
  double mi_after = 0.0;     ///< I(cavA : cavB) after correction, everything else traced out
};

/// Samples the four-atom measurement and applies the correction.
/// `target` is the cavity pair that should be recovered.
std::pair<CorrectionOutcome, StateVector> syndrome_correct(const StateVector& state, const StateVector& target,
                                                           Rng& rng,
                                                           SyndromePolicy policy = SyndromePolicy::Majority);

/// Every syndrome with probability above 1e-12, each corrected.
std::vector<std::pair<CorrectionOutcome, StateVector>> correction_branches(
    const StateVector& state, const StateVector& target, SyndromePolicy policy = SyndromePolicy::Majority);

struct PipelineCase {
  Complex alpha{std::sqrt(0.7), 0.0};
  Complex beta{std::sqrt(0.3), 0.0};
  std::string site = "cavA";
  double error_weight = 1.0;  ///< |c1|²
  GateOrder order = GateOrder::Atom1First;
};

/// encode -> error -> decode -> every syndrome branch corrected.
std::vector<CorrectionOutcome> run_pipeline(const PipelineCase& c,
                                            SyndromePolicy policy = SyndromePolicy::Majority);

/// I(side A : side B) with A = cavity and atoms of A, environment excluded.
double side_mutual_information(const StateVector& state);

// ---------------------------------------------------------------------------
// Code-level entanglement check

struct EntanglementCheck {
  double s_before = 0.0;  ///< S(ρ_A) without errors
  double s_after = 0.0;   ///< S(ρ_A) after E_i on A and E_j on B
  double max_cross_term = 0.0;  ///< max |<C^k|E† E'|C^l>|, k != l, over the error pair
  bool dense = false;           ///< reduced state formed by explicit partial trace
  double difference() const { return std::abs(s_after - s_before); }
};

enum class Reduction { Auto, Dense, Factored };

/// α|C^0>_A|C^1>_B + β|C^1>_A|C^0>_B, E_i on A, E_j on B, compare S(ρ_A).
/// Factored computes ρ_A on span{E_i|C^k>} exactly; Auto uses Dense for n ≤ 6.
/// Throws PreconditionError when the general conditions fail on {E_i, E_j}.
EntanglementCheck verify_entanglement_preserved(const qecc::CodeSpec& code, const qecc::PauliErrorIndex& e_a,
                                                const qecc::PauliErrorIndex& e_b, Complex alpha, Complex beta,
                                                Reduction reduction = Reduction::Auto);

}  // namespace qcor::localec
