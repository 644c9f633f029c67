#pragma once

// Dense linear algebra for multi-subsystem quantum states.
//
// Basis ordering is row-major Kronecker: the leftmost factor of a
// CompositeSpace is the most significant digit of a basis index.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qcor/errors.hpp"

namespace qcor {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;
using Labels = std::vector<std::string>;

namespace tol {
/// Validation of states, unitaries and channels.
inline constexpr double kValidation = 1e-9;
/// Algebraic identities that should hold to rounding error.
inline constexpr double kIdentity = 1e-12;
}  // namespace tol

/// Deterministic per-trial seed derived from a base seed (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct Factor {
  std::string label;
  std::size_t dim = 2;

  bool operator==(const Factor&) const = default;
};

/// Ordered factorisation of a Hilbert space into labelled subsystems.
class CompositeSpace {
 public:
  CompositeSpace() = default;
  explicit CompositeSpace(std::vector<Factor> factors);
  CompositeSpace(std::initializer_list<Factor> factors)
      : CompositeSpace(std::vector<Factor>(factors)) {}

  /// Space of qubits with the given labels.
  static CompositeSpace qubits(const Labels& labels);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }

  bool contains(std::string_view label) const noexcept;
  std::size_t position(std::string_view label) const;
  std::size_t dim_of(std::string_view label) const;
  Labels labels() const;

  /// Product dimension of the named factors.
  std::size_t dimension_of(std::span<const std::string> labels) const;

  /// Factors of `other` appended after ours; labels must stay unique.
  CompositeSpace concat(const CompositeSpace& other) const;

  /// The named factors, kept in this space's order.
  CompositeSpace subspace(std::span<const std::string> keep) const;

  /// The labels not named in `labels`, in this space's order.
  Labels complement(std::span<const std::string> labels) const;

  /// Digits (one per factor) of a flat basis index.
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(std::span<const std::size_t> digits) const;

  bool operator==(const CompositeSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  std::size_t dimension_ = 0;
};

/// Normalised pure state over a CompositeSpace.
class StateVector {
 public:
  StateVector(CompositeSpace space, Vector amplitudes);

  /// Computational basis state |index>.
  static StateVector basis(const CompositeSpace& space, std::size_t index);
  /// Computational basis state given one digit per factor.
  static StateVector basis(const CompositeSpace& space, std::span<const std::size_t> digits);
  /// Normalises `amplitudes` before validation; throws on a zero vector.
  static StateVector normalized(CompositeSpace space, Vector amplitudes);

  const CompositeSpace& space() const noexcept { return space_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }
  std::size_t dimension() const noexcept { return space_.dimension(); }

  /// Same amplitudes relabelled onto an equally shaped space.
  StateVector relabeled(CompositeSpace space) const;

 private:
  struct Trusted {};
  StateVector(CompositeSpace space, Vector amplitudes, Trusted);
  friend class detail_access;

  CompositeSpace space_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite operator over a CompositeSpace.
class DensityMatrix {
 public:
  DensityMatrix(CompositeSpace space, Matrix matrix);

  const CompositeSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return space_.dimension(); }

  /// Eigenvalues in ascending order, with drift above -1e-9 clamped to zero.
  RealVector eigenvalues() const;
  double purity() const;

  DensityMatrix relabeled(CompositeSpace space) const;

 private:
  struct Trusted {};
  DensityMatrix(CompositeSpace space, Matrix matrix, Trusted);
  friend class detail_access;

  CompositeSpace space_;
  Matrix matrix_;
};

/// Construction paths for results whose invariants hold by construction.
/// Library internal; skips the eigenvalue check done by the public constructors.
class detail_access {
 public:
  static StateVector state(CompositeSpace space, Vector amplitudes) {
    return StateVector(std::move(space), std::move(amplitudes), StateVector::Trusted{});
  }
  static DensityMatrix density(CompositeSpace space, Matrix matrix) {
    return DensityMatrix(std::move(space), std::move(matrix), DensityMatrix::Trusted{});
  }
};

// ---------------------------------------------------------------------------
// Index helpers for operators acting on a subset of factors.

/// Maps each flat index to (target index, rest index) for an ordered target list.
class SubsystemIndexer {
 public:
  SubsystemIndexer(const CompositeSpace& space, std::span<const std::string> targets);

  std::size_t target_dim() const noexcept { return target_dim_; }
  std::size_t rest_dim() const noexcept { return rest_dim_; }
  std::size_t target_of(std::size_t full) const { return target_[full]; }
  std::size_t rest_of(std::size_t full) const { return rest_[full]; }
  std::size_t full_of(std::size_t target, std::size_t rest) const {
    return full_[target * rest_dim_ + rest];
  }

 private:
  std::size_t target_dim_ = 1;
  std::size_t rest_dim_ = 1;
  std::vector<std::size_t> target_, rest_, full_;
};

/// Full-space matrix of `op` acting on `targets` (in the given order), identity elsewhere.
Matrix embed_operator(const CompositeSpace& space, const Matrix& op,
                      std::span<const std::string> targets);

/// (op ⊗ I) v without forming the full operator. `op` need not be unitary.
Vector apply_local(const CompositeSpace& space, const Matrix& op,
                   std::span<const std::string> targets, const Vector& v);

/// (op ⊗ I) ρ (op ⊗ I)†.
Matrix conjugate_local(const CompositeSpace& space, const Matrix& op,
                       std::span<const std::string> targets, const Matrix& rho);

bool is_unitary(const Matrix& u, double tolerance = tol::kValidation);

// ---------------------------------------------------------------------------
// Operations

StateVector tensor(std::span<const StateVector> parts);
StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`; the result's factors follow the input's order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
/// Same as partial_trace(density_from_pure(psi), keep) without forming |ψ><ψ|.
DensityMatrix partial_trace(const StateVector& psi, std::span<const std::string> keep);

StateVector apply_unitary(const StateVector& state, const Matrix& u,
                          std::span<const std::string> targets);
DensityMatrix apply_unitary(const DensityMatrix& state, const Matrix& u,
                            std::span<const std::string> targets);

struct MeasurementResult {
  std::size_t outcome = 0;
  StateVector state;
  double probability = 0.0;
};

/// Branch probabilities <ψ|P_j|ψ> for projectors on `targets`.
std::vector<double> outcome_probabilities(const StateVector& state,
                                          std::span<const Matrix> projectors,
                                          std::span<const std::string> targets);

/// Samples an outcome of a projective measurement on `targets` and collapses.
/// Outcomes with probability below 1e-12 are never selected.
MeasurementResult projective_measure(const StateVector& state, std::span<const Matrix> projectors,
                                     std::span<const std::string> targets, Rng& rng);
/// Projectors given over the whole space.
MeasurementResult projective_measure(const StateVector& state, std::span<const Matrix> projectors,
                                     Rng& rng);

/// P|ψ> renormalised; throws DegenerateBranchError when the branch weight is below 1e-12.
StateVector collapse(const StateVector& state, const Matrix& projector,
                     std::span<const std::string> targets);

/// Computational-basis projectors |k><k| for a factor of dimension `dim`.
std::vector<Matrix> basis_projectors(std::size_t dim);

DensityMatrix density_from_pure(const StateVector& psi);

/// Haar-random pure state (normalised complex Gaussian vector).
StateVector random_pure(const CompositeSpace& space, Rng& rng);
/// G G† / Tr(G G†) for a complex Gaussian square G.
DensityMatrix random_density(const CompositeSpace& space, Rng& rng);
/// Haar-random unitary via QR of a complex Gaussian matrix with phase fix.
Matrix random_unitary(std::size_t dim, Rng& rng);

/// Overlap <a|b>; spaces must match.
Complex inner(const StateVector& a, const StateVector& b);
/// Largest |a_ij - b_ij|.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace qcor
