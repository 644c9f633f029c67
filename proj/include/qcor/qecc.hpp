#pragma once

// Error-correcting-code condition checker over the Pauli error basis.
//
// Qubit 1 is the leftmost bit of a basis string and the most significant
// index digit. An error index (amp, phase) acts on qubit i as X^amp_i Z^phase_i.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcor/qstate.hpp"

namespace qcor::qecc {

/// Bit masks over n qubits; qubit 1 is bit n-1.
struct PauliErrorIndex {
  std::uint64_t amp = 0;
  std::uint64_t phase = 0;

  std::uint64_t support() const noexcept { return amp | phase; }
  int weight() const noexcept;
  bool operator==(const PauliErrorIndex&) const = default;

  /// From bit strings such as "100"; throws ValidationError on bad input.
  static PauliErrorIndex from_strings(const std::string& amp, const std::string& phase);
};

/// "amp=100 phase=000"-style rendering of the two bit strings.
std::string bits(std::uint64_t mask, std::size_t n);
std::string to_string(const PauliErrorIndex& e, std::size_t n);

enum class ErrorModel { Full, AmplitudeOnly, PhaseOnly };

std::string to_string(ErrorModel m);
/// Accepts "full", "amplitude", "phase".
ErrorModel parse_error_model(const std::string& name);

constexpr std::size_t kMaxQubits = 20;

/// Dense 2^n × 2^n matrix of the error.
Matrix pauli_error_operator(const PauliErrorIndex& e, std::size_t n);
/// E|v> in O(2^n).
Vector apply_pauli(const PauliErrorIndex& e, std::size_t n, const Vector& v);

/// All indices with union-support weight ≤ d, sorted by (weight, support, amp, phase).
std::vector<PauliErrorIndex> enumerate_error_indices(std::size_t n, std::size_t d,
                                                     ErrorModel model = ErrorModel::Full);
/// Σ_{w≤d} C(n,w) k^w with k = 3 (full) or 1 (amplitude/phase only).
std::uint64_t error_index_count(std::size_t n, std::size_t d, ErrorModel model = ErrorModel::Full);

class CodeSpec {
 public:
  CodeSpec(std::size_t n, std::size_t q, std::size_t d, std::vector<Vector> codewords);

  std::size_t n() const noexcept { return n_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t d() const noexcept { return d_; }
  const std::vector<Vector>& codewords() const noexcept { return codewords_; }
  CodeSpec with_distance(std::size_t d) const { return CodeSpec(n_, q_, d, codewords_); }
  /// Codeword k as a state over qubits q1..qn.
  StateVector codeword_state(std::size_t k, const std::string& prefix = "q") const;

 private:
  std::size_t n_, q_, d_;
  std::vector<Vector> codewords_;
};

/// {|000>, |111>} with d = 1.
CodeSpec repetition_code();
/// Nine-qubit Shor code, d = 1.
CodeSpec shor_code();

struct ConditionViolation {
  PauliErrorIndex first;   ///< (α, β)
  PauliErrorIndex second;  ///< (γ, δ)
  Matrix m;                ///< <C^k| E_first† E_second |C^l>
  std::string classification;
};

struct TupleValue {
  PauliErrorIndex first;
  PauliErrorIndex second;
  Complex y;
};

struct ConditionReport {
  std::string condition;  ///< "general" or "strict"
  std::size_t n = 0;
  std::size_t d = 0;
  ErrorModel model = ErrorModel::Full;
  bool passed = true;
  std::size_t checked_tuples = 0;
  std::vector<ConditionViolation> violations;
  std::vector<TupleValue> y_values;  ///< diagonal mean of M per tuple, in enumeration order
  /// max |y(γδ,αβ) − conj(y(αβ,γδ))|; diagnostic only.
  double max_conjugate_asymmetry = 0.0;
  std::size_t conjugate_asymmetric_tuples = 0;
  /// Tuples whose y differs from the δ pattern (nonzero when the code is degenerate).
  std::size_t degenerate_tuples = 0;
};

/// M_kl = y δ_kl for every pair of enumerated errors, within 1e-9.
ConditionReport check_general_conditions(const CodeSpec& code, ErrorModel model = ErrorModel::Full);
/// M_kl = δ_βδ δ_αγ δ_kl for every pair of enumerated errors, within 1e-9.
ConditionReport check_strict_conditions(const CodeSpec& code, ErrorModel model = ErrorModel::Full);

/// General-condition check restricted to the tuples formed from `errors`.
ConditionReport check_general_conditions(const CodeSpec& code, const std::vector<PauliErrorIndex>& errors);

/// Fixed-precision text rendering; identical reports render identically.
std::string describe(const ConditionReport& report);

// ---------------------------------------------------------------------------
// Codeword files
//
//   n=3 q=1 d=1
//   000 1 0
//
//   111 1 0
//
// One block per codeword, blank-line separated; '#' starts a comment.

CodeSpec parse_code(std::istream& in);
CodeSpec parse_code_string(const std::string& text);
CodeSpec read_code_file(const std::filesystem::path& path);
void write_code(std::ostream& out, const CodeSpec& code);

}  // namespace qcor::qecc
