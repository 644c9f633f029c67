#include "qcor/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qcor {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// CompositeSpace

CompositeSpace::CompositeSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("composite space needs at least one factor");
  std::set<std::string> seen;
  dimension_ = 1;
  for (const auto& f : factors_) {
    if (f.label.empty()) throw LabelError("empty subsystem label");
    if (!seen.insert(f.label).second) throw LabelError("duplicate subsystem label '" + f.label + "'");
    if (f.dim < 2) {
      throw ValidationError("factor '" + f.label + "' has dimension " + std::to_string(f.dim) +
                            " (must be >= 2)");
    }
    dimension_ *= f.dim;
  }
}

CompositeSpace CompositeSpace::qubits(const Labels& labels) {
  std::vector<Factor> fs;
  fs.reserve(labels.size());
  for (const auto& l : labels) fs.push_back({l, 2});
  return CompositeSpace(std::move(fs));
}

bool CompositeSpace::contains(std::string_view label) const noexcept {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t CompositeSpace::position(std::string_view label) const {
  for (std::size_t k = 0; k < factors_.size(); ++k)
    if (factors_[k].label == label) return k;
  throw LabelError("unknown subsystem label '" + std::string(label) + "'");
}

std::size_t CompositeSpace::dim_of(std::string_view label) const {
  return factors_[position(label)].dim;
}

Labels CompositeSpace::labels() const {
  Labels out;
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

std::size_t CompositeSpace::dimension_of(std::span<const std::string> labels) const {
  std::size_t d = 1;
  for (const auto& l : labels) d *= dim_of(l);
  return d;
}

CompositeSpace CompositeSpace::concat(const CompositeSpace& other) const {
  auto fs = factors_;
  fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
  return CompositeSpace(std::move(fs));
}

CompositeSpace CompositeSpace::subspace(std::span<const std::string> keep) const {
  std::set<std::string> wanted;
  for (const auto& l : keep) {
    position(l);
    if (!wanted.insert(l).second) throw LabelError("label '" + l + "' listed twice");
  }
  std::vector<Factor> fs;
  for (const auto& f : factors_)
    if (wanted.count(f.label)) fs.push_back(f);
  return CompositeSpace(std::move(fs));
}

Labels CompositeSpace::complement(std::span<const std::string> labels) const {
  std::set<std::string> drop;
  for (const auto& l : labels) {
    position(l);
    drop.insert(l);
  }
  Labels out;
  for (const auto& f : factors_)
    if (!drop.count(f.label)) out.push_back(f.label);
  return out;
}

std::vector<std::size_t> CompositeSpace::digits(std::size_t index) const {
  std::vector<std::size_t> d(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    d[k] = index % factors_[k].dim;
    index /= factors_[k].dim;
  }
  return d;
}

std::size_t CompositeSpace::index(std::span<const std::size_t> digits) const {
  if (digits.size() != factors_.size()) throw ValidationError("digit count does not match factor count");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (digits[k] >= factors_[k].dim) throw ValidationError("digit out of range for '" + factors_[k].label + "'");
    idx = idx * factors_[k].dim + digits[k];
  }
  return idx;
}

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(CompositeSpace space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
    throw ValidationError("state has " + std::to_string(amplitudes_.size()) +
                          " amplitudes but the space has dimension " +
                          std::to_string(space_.dimension()));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol::kValidation) {
    std::ostringstream os;
    os << "state vector is not normalised (norm " << norm << ")";
    throw ValidationError(os.str());
  }
}

StateVector::StateVector(CompositeSpace space, Vector amplitudes, Trusted)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(const CompositeSpace& space, std::size_t index) {
  if (index >= space.dimension()) throw ValidationError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(space, std::move(v), Trusted{});
}

StateVector StateVector::basis(const CompositeSpace& space, std::span<const std::size_t> digits) {
  return basis(space, space.index(digits));
}

StateVector StateVector::normalized(CompositeSpace space, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < tol::kIdentity) throw ValidationError("cannot normalise a zero vector");
  return StateVector(std::move(space), amplitudes / norm);
}

StateVector StateVector::relabeled(CompositeSpace space) const {
  if (space.dimension() != space_.dimension() || space.size() != space_.size())
    throw LabelError("relabelled space has a different shape");
  for (std::size_t k = 0; k < space.size(); ++k)
    if (space.factors()[k].dim != space_.factors()[k].dim)
      throw LabelError("relabelled space has a different shape");
  return StateVector(std::move(space), amplitudes_, Trusted{});
}

DensityMatrix::DensityMatrix(CompositeSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(space_.dimension());
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw ValidationError("density matrix shape does not match its space");
  if (max_abs_diff(matrix_, matrix_.adjoint()) > tol::kValidation)
    throw ValidationError("density matrix is not Hermitian");
  const Complex tr = matrix_.trace();
  if (std::abs(tr.real() - 1.0) > tol::kValidation || std::abs(tr.imag()) > tol::kValidation)
    throw ValidationError("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::kValidation)
    throw ValidationError("density matrix has a negative eigenvalue");
}

DensityMatrix::DensityMatrix(CompositeSpace space, Matrix matrix, Trusted)
    : space_(std::move(space)), matrix_(std::move(matrix)) {}

RealVector DensityMatrix::eigenvalues() const {
  // Hermitise first: the solver reads only the lower triangle.
  const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  for (auto& x : ev)
    if (x < 0.0 && x > -tol::kValidation) x = 0.0;
  return ev;
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

DensityMatrix DensityMatrix::relabeled(CompositeSpace space) const {
  if (space.dimension() != space_.dimension()) throw LabelError("relabelled space has a different shape");
  return DensityMatrix(std::move(space), matrix_, Trusted{});
}

// ---------------------------------------------------------------------------
// Index helpers

SubsystemIndexer::SubsystemIndexer(const CompositeSpace& space, std::span<const std::string> targets) {
  std::vector<std::size_t> tpos;
  std::set<std::size_t> used;
  for (const auto& l : targets) {
    const auto p = space.position(l);
    if (!used.insert(p).second) throw LabelError("target label '" + l + "' listed twice");
    tpos.push_back(p);
  }
  std::vector<std::size_t> rpos;
  for (std::size_t k = 0; k < space.size(); ++k)
    if (!used.count(k)) rpos.push_back(k);

  for (auto p : tpos) target_dim_ *= space.factors()[p].dim;
  for (auto p : rpos) rest_dim_ *= space.factors()[p].dim;

  const std::size_t n = space.dimension();
  target_.resize(n);
  rest_.resize(n);
  full_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = space.digits(i);
    std::size_t t = 0, r = 0;
    for (auto p : tpos) t = t * space.factors()[p].dim + d[p];
    for (auto p : rpos) r = r * space.factors()[p].dim + d[p];
    target_[i] = t;
    rest_[i] = r;
    full_[t * rest_dim_ + r] = i;
  }
}

namespace {

void check_op_shape(const Matrix& op, const SubsystemIndexer& ix) {
  const auto d = static_cast<Eigen::Index>(ix.target_dim());
  if (op.rows() != d || op.cols() != d) {
    throw ValidationError("operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                          " but the targets have dimension " + std::to_string(d));
  }
}

}  // namespace

Matrix embed_operator(const CompositeSpace& space, const Matrix& op, std::span<const std::string> targets) {
  SubsystemIndexer ix(space, targets);
  check_op_shape(op, ix);
  const auto n = static_cast<Eigen::Index>(space.dimension());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto t = ix.target_of(i), r = ix.rest_of(i);
    for (std::size_t tp = 0; tp < ix.target_dim(); ++tp) {
      const Complex c = op(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(tp));
      if (c != Complex(0.0)) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ix.full_of(tp, r))) = c;
    }
  }
  return out;
}

Vector apply_local(const CompositeSpace& space, const Matrix& op, std::span<const std::string> targets,
                   const Vector& v) {
  SubsystemIndexer ix(space, targets);
  check_op_shape(op, ix);
  const auto td = static_cast<Eigen::Index>(ix.target_dim());
  const auto rd = static_cast<Eigen::Index>(ix.rest_dim());
  Matrix x(td, rd);
  for (std::size_t i = 0; i < space.dimension(); ++i)
    x(static_cast<Eigen::Index>(ix.target_of(i)), static_cast<Eigen::Index>(ix.rest_of(i))) =
        v[static_cast<Eigen::Index>(i)];
  const Matrix y = op * x;
  Vector out(v.size());
  for (std::size_t i = 0; i < space.dimension(); ++i)
    out[static_cast<Eigen::Index>(i)] =
        y(static_cast<Eigen::Index>(ix.target_of(i)), static_cast<Eigen::Index>(ix.rest_of(i)));
  return out;
}

Matrix conjugate_local(const CompositeSpace& space, const Matrix& op, std::span<const std::string> targets,
                       const Matrix& rho) {
  const Matrix full = embed_operator(space, op, targets);
  return full * rho * full.adjoint();
}

bool is_unitary(const Matrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  return max_abs_diff(u.adjoint() * u, Matrix::Identity(u.rows(), u.cols())) <= tolerance;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

StateVector tensor(std::span<const StateVector> parts) {
  if (parts.empty()) throw ValidationError("tensor needs at least one part");
  CompositeSpace space = parts[0].space();
  Vector amp = parts[0].amplitudes();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    space = space.concat(parts[k].space());
    amp = kron(amp, parts[k].amplitudes());
  }
  return StateVector(std::move(space), std::move(amp));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const StateVector parts[] = {a, b};
  return tensor(std::span<const StateVector>(parts));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return detail_access::density(a.space().concat(b.space()), kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  if (keep.empty()) throw LabelError("partial_trace needs at least one label to keep");
  CompositeSpace kept = rho.space().subspace(keep);
  const Labels ordered = kept.labels();
  SubsystemIndexer ix(rho.space(), ordered);
  const auto kd = static_cast<Eigen::Index>(ix.target_dim());
  Matrix out = Matrix::Zero(kd, kd);
  for (std::size_t a = 0; a < ix.target_dim(); ++a)
    for (std::size_t b = 0; b < ix.target_dim(); ++b) {
      Complex s = 0.0;
      for (std::size_t r = 0; r < ix.rest_dim(); ++r)
        s += rho.matrix()(static_cast<Eigen::Index>(ix.full_of(a, r)),
                          static_cast<Eigen::Index>(ix.full_of(b, r)));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  return detail_access::density(std::move(kept), std::move(out));
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const std::string> keep) {
  if (keep.empty()) throw LabelError("partial_trace needs at least one label to keep");
  CompositeSpace kept = psi.space().subspace(keep);
  const Labels ordered = kept.labels();
  SubsystemIndexer ix(psi.space(), ordered);
  Matrix x(static_cast<Eigen::Index>(ix.target_dim()), static_cast<Eigen::Index>(ix.rest_dim()));
  for (std::size_t i = 0; i < psi.dimension(); ++i)
    x(static_cast<Eigen::Index>(ix.target_of(i)), static_cast<Eigen::Index>(ix.rest_of(i))) = psi[i];
  return detail_access::density(std::move(kept), x * x.adjoint());
}

StateVector apply_unitary(const StateVector& state, const Matrix& u, std::span<const std::string> targets) {
  if (!is_unitary(u)) throw ValidationError("operator is not unitary within 1e-9");
  return detail_access::state(state.space(), apply_local(state.space(), u, targets, state.amplitudes()));
}

DensityMatrix apply_unitary(const DensityMatrix& state, const Matrix& u, std::span<const std::string> targets) {
  if (!is_unitary(u)) throw ValidationError("operator is not unitary within 1e-9");
  return detail_access::density(state.space(), conjugate_local(state.space(), u, targets, state.matrix()));
}

namespace {

void validate_projectors(std::span<const Matrix> projectors, std::size_t dim) {
  if (projectors.empty()) throw ValidationError("empty projector set");
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix sum = Matrix::Zero(d, d);
  bool any_nonzero = false;
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    const auto& p = projectors[j];
    if (p.rows() != d || p.cols() != d) throw ValidationError("projector has the wrong dimension");
    if (max_abs_diff(p, p.adjoint()) > tol::kValidation || max_abs_diff(p * p, p) > tol::kValidation)
      throw ValidationError("operator " + std::to_string(j) + " is not an orthogonal projector");
    if (p.norm() > tol::kValidation) any_nonzero = true;
    for (std::size_t k = 0; k < j; ++k)
      if ((p * projectors[k]).cwiseAbs().maxCoeff() > tol::kValidation)
        throw ValidationError("projectors are not mutually orthogonal");
    sum += p;
  }
  if (!any_nonzero) throw ValidationError("all projectors are zero");
  if (max_abs_diff(sum, Matrix::Identity(d, d)) > tol::kValidation)
    throw ValidationError("projectors do not sum to the identity");
}

}  // namespace

std::vector<double> outcome_probabilities(const StateVector& state, std::span<const Matrix> projectors,
                                          std::span<const std::string> targets) {
  validate_projectors(projectors, state.space().dimension_of(targets));
  std::vector<double> probs;
  probs.reserve(projectors.size());
  for (const auto& p : projectors) {
    const Vector v = apply_local(state.space(), p, targets, state.amplitudes());
    probs.push_back(v.squaredNorm());
  }
  return probs;
}

StateVector collapse(const StateVector& state, const Matrix& projector, std::span<const std::string> targets) {
  const Vector v = apply_local(state.space(), projector, targets, state.amplitudes());
  const double w = v.squaredNorm();
  if (w < tol::kIdentity) throw DegenerateBranchError("measurement branch has probability below 1e-12");
  return detail_access::state(state.space(), v / std::sqrt(w));
}

MeasurementResult projective_measure(const StateVector& state, std::span<const Matrix> projectors,
                                     std::span<const std::string> targets, Rng& rng) {
  const auto probs = outcome_probabilities(state, projectors, targets);
  std::vector<double> weights(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) weights[j] = probs[j] < tol::kIdentity ? 0.0 : probs[j];
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const std::size_t j = pick(rng);
  return MeasurementResult{j, collapse(state, projectors[j], targets), probs[j]};
}

MeasurementResult projective_measure(const StateVector& state, std::span<const Matrix> projectors, Rng& rng) {
  const Labels all = state.space().labels();
  return projective_measure(state, projectors, all, rng);
}

std::vector<Matrix> basis_projectors(std::size_t dim) {
  std::vector<Matrix> out;
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index k = 0; k < d; ++k) {
    Matrix p = Matrix::Zero(d, d);
    p(k, k) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

DensityMatrix density_from_pure(const StateVector& psi) {
  return detail_access::density(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
}

namespace {

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

}  // namespace

StateVector random_pure(const CompositeSpace& space, Rng& rng) {
  Vector v = gaussian_matrix(static_cast<Eigen::Index>(space.dimension()), 1, rng).col(0);
  return detail_access::state(space, v / v.norm());
}

DensityMatrix random_density(const CompositeSpace& space, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  const Matrix g = gaussian_matrix(n, n, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return detail_access::density(space, std::move(rho));
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  const Matrix z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= (a > 0.0 ? d / a : Complex(1.0));
  }
  return q;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (!(a.space() == b.space())) throw LabelError("inner product across different spaces");
  return a.amplitudes().dot(b.amplitudes());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qcor
