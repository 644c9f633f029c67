#include "qcor/localec.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qcor/infomeasures.hpp"

namespace qcor::localec {

namespace {

constexpr double kBranchFloor = tol::kIdentity;

void check_amplitudes(Complex a, Complex b, const char* what) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > tol::kValidation)
    throw ValidationError(std::string(what) + ": squared magnitudes must sum to 1");
}

/// Total weight on basis states where factor `label` is in |1>.
double excited_weight(const StateVector& s, const std::string& label) {
  const std::size_t pos = s.space().position(label);
  double w = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i)
    if (s.space().digits(i)[pos] == 1) w += std::norm(s[i]);
  return w;
}

StateVector apply_network(const StateVector& state, GateOrder order) {
  const Matrix cx = cnot_matrix();
  StateVector out = state;
  for (const Labels* side : {&kSideA, &kSideB}) {
    const auto& cav = (*side)[0];
    const auto& first = order == GateOrder::Atom1First ? (*side)[1] : (*side)[2];
    const auto& second = order == GateOrder::Atom1First ? (*side)[2] : (*side)[1];
    out = apply_unitary(out, cx, Labels{cav, first});
    out = apply_unitary(out, cx, Labels{cav, second});
  }
  return out;
}

}  // namespace

std::string env_label(std::size_t k) { return "env" + std::to_string(k); }

CompositeSpace register_layout(std::size_t env_count) {
  if (env_count < 1) throw ValidationError("at least one environment qubit is required");
  Labels labels = kSideA;
  labels.insert(labels.end(), kSideB.begin(), kSideB.end());
  for (std::size_t k = 0; k < env_count; ++k) labels.push_back(env_label(k));
  return CompositeSpace::qubits(labels);
}

StateVector cavity_pair(Complex alpha, Complex beta) {
  check_amplitudes(alpha, beta, "cavity pair");
  Vector v = Vector::Zero(4);
  v[1] = alpha;  // |0>_A|1>_B
  v[2] = beta;   // |1>_A|0>_B
  return StateVector(CompositeSpace::qubits(kCavities), v);
}

StateVector prepare_register(const StateVector& pair, std::size_t env_count) {
  const CompositeSpace space = register_layout(env_count);
  if (!(pair.space() == CompositeSpace::qubits(kCavities)))
    throw ValidationError("expected a state over (cavA, cavB)");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  const std::size_t pa = space.position("cavA"), pb = space.position("cavB");
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      std::vector<std::size_t> digits(space.size(), 0);
      digits[pa] = a;
      digits[pb] = b;
      v[static_cast<Eigen::Index>(space.index(digits))] = pair[2 * a + b];
    }
  return StateVector(space, v);
}

Matrix cnot_matrix() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Matrix not_matrix() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

StateVector encode(const StateVector& state, GateOrder order) {
  for (const auto& atom : kAtoms)
    if (excited_weight(state, atom) > kBranchFloor)
      throw PreconditionError("encode requires every atom in |g>; '" + atom + "' is excited");
  return apply_network(state, order);
}

StateVector decode(const StateVector& state, GateOrder order) { return apply_network(state, order); }

Matrix amplitude_error_unitary(Complex c0, Complex c1) {
  check_amplitudes(c0, c1, "error amplitudes");
  // basis (site, env): 00, 01, 10, 11
  Matrix u = Matrix::Zero(4, 4);
  for (int s = 0; s < 2; ++s) {
    const int flipped = 1 - s;
    u(2 * s + 0, 2 * s + 0) = c0;
    u(2 * flipped + 1, 2 * s + 0) = c1;
    u(2 * flipped + 0, 2 * s + 1) = -std::conj(c1);
    u(2 * s + 1, 2 * s + 1) = std::conj(c0);
  }
  return u;
}

StateVector inject_amplitude_error(const StateVector& state, const std::string& site, const std::string& env,
                                   Complex c0, Complex c1) {
  if (state.space().dim_of(site) != 2 || state.space().dim_of(env) != 2)
    throw ValidationError("error site and environment must be qubits");
  if (excited_weight(state, env) > kBranchFloor)
    throw ProtocolError("environment qubit '" + env + "' has already recorded an error");
  return apply_unitary(state, amplitude_error_unitary(c0, c1), Labels{site, env});
}

std::string SideSyndrome::pattern() const {
  return std::string(atom1_excited ? "e" : "g") + (atom2_excited ? "e" : "g");
}

namespace {

StateVector correct_branch(const StateVector& branch, CorrectionOutcome& out, SyndromePolicy policy) {
  StateVector fixed = branch;
  for (auto [syn, flip, cav] : {std::tuple{&out.syndrome_a, &out.flip_a, "cavA"},
                                std::tuple{&out.syndrome_b, &out.flip_b, "cavB"}}) {
    const bool mixed = syn->atom1_excited != syn->atom2_excited;
    if (mixed && policy == SyndromePolicy::Strict)
      throw ProtocolError(std::string("mixed syndrome ") + syn->pattern() + " next to " + cav +
                          " lies outside the one-error-per-cavity model");
    *flip = syn->atom1_excited && syn->atom2_excited;
    if (*flip) fixed = apply_unitary(fixed, not_matrix(), Labels{cav});
  }
  return fixed;
}

void score(CorrectionOutcome& out, const StateVector& fixed, const StateVector& target) {
  const DensityMatrix rho = partial_trace(fixed, kCavities);
  out.fidelity = (target.amplitudes().adjoint() * rho.matrix() * target.amplitudes())(0, 0).real();
  const Bipartition cut{{"cavA"}, {"cavB"}};
  out.mi_before = vn_mutual_information(target, cut);
  out.mi_after = vn_mutual_information(rho, cut);
}

struct Branch {
  unsigned pattern;  // bits: A1, A2, B1, B2 (A1 most significant)
  double weight;
  Vector projected;
};

std::vector<Branch> syndrome_branches(const StateVector& state) {
  const auto& space = state.space();
  std::array<std::size_t, 4> pos{};
  for (std::size_t k = 0; k < 4; ++k) pos[k] = space.position(kAtoms[k]);
  std::vector<Branch> out;
  for (unsigned p = 0; p < 16; ++p) out.push_back({p, 0.0, Vector::Zero(state.amplitudes().size())});
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const auto d = space.digits(i);
    unsigned p = 0;
    for (std::size_t k = 0; k < 4; ++k) p = (p << 1) | static_cast<unsigned>(d[pos[k]]);
    out[p].projected[static_cast<Eigen::Index>(i)] = state[i];
    out[p].weight += std::norm(state[i]);
  }
  return out;
}

std::pair<CorrectionOutcome, StateVector> finish(const Branch& b, const StateVector& state, const StateVector& target,
                                                 SyndromePolicy policy) {
  CorrectionOutcome out;
  out.syndrome_a = {bool(b.pattern & 8u), bool(b.pattern & 4u)};
  out.syndrome_b = {bool(b.pattern & 2u), bool(b.pattern & 1u)};
  out.probability = b.weight;
  const StateVector collapsed = detail_access::state(state.space(), b.projected / std::sqrt(b.weight));
  StateVector fixed = correct_branch(collapsed, out, policy);
  score(out, fixed, target);
  return {out, std::move(fixed)};
}

}  // namespace

std::vector<std::pair<CorrectionOutcome, StateVector>> correction_branches(const StateVector& state,
                                                                            const StateVector& target,
                                                                            SyndromePolicy policy) {
  std::vector<std::pair<CorrectionOutcome, StateVector>> out;
  for (const auto& b : syndrome_branches(state))
    if (b.weight > kBranchFloor) out.push_back(finish(b, state, target, policy));
  return out;
}

std::pair<CorrectionOutcome, StateVector> syndrome_correct(const StateVector& state, const StateVector& target,
                                                           Rng& rng, SyndromePolicy policy) {
  auto branches = syndrome_branches(state);
  std::vector<double> weights;
  for (const auto& b : branches) weights.push_back(b.weight > kBranchFloor ? b.weight : 0.0);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return finish(branches[pick(rng)], state, target, policy);
}

std::vector<CorrectionOutcome> run_pipeline(const PipelineCase& c, SyndromePolicy policy) {
  if (!(c.error_weight >= 0.0 && c.error_weight <= 1.0)) throw ValidationError("error weight must lie in [0, 1]");
  const StateVector pair = cavity_pair(c.alpha, c.beta);
  const StateVector encoded = encode(prepare_register(pair, 1), c.order);
  const StateVector hit = inject_amplitude_error(encoded, c.site, env_label(0), std::sqrt(1.0 - c.error_weight),
                                                 std::sqrt(c.error_weight));
  std::vector<CorrectionOutcome> out;
  for (auto& [outcome, state] : correction_branches(decode(hit, c.order), pair, policy)) out.push_back(outcome);
  return out;
}

double side_mutual_information(const StateVector& state) {
  Labels system = kSideA;
  system.insert(system.end(), kSideB.begin(), kSideB.end());
  return vn_mutual_information(partial_trace(state, system), Bipartition{kSideA, kSideB});
}

// ---------------------------------------------------------------------------

EntanglementCheck verify_entanglement_preserved(const qecc::CodeSpec& code, const qecc::PauliErrorIndex& e_a,
                                                const qecc::PauliErrorIndex& e_b, Complex alpha, Complex beta,
                                                Reduction reduction) {
  if (code.q() != 1) throw ValidationError("entanglement check needs a code with two codewords");
  check_amplitudes(alpha, beta, "pair amplitudes");
  std::vector<qecc::PauliErrorIndex> errors{e_a};
  if (!(e_b == e_a)) errors.push_back(e_b);
  const auto report = qecc::check_general_conditions(code, errors);
  if (!report.passed) {
    const auto& v = report.violations.front();
    throw PreconditionError("code conditions fail for (" + qecc::to_string(v.first, code.n()) + ") (" +
                            qecc::to_string(v.second, code.n()) + "): " + v.classification);
  }

  const std::size_t n = code.n();
  const auto& cw = code.codewords();
  EntanglementCheck out;
  for (const auto& x : errors)
    for (const auto& y : errors) {
      const Vector xc0 = qecc::apply_pauli(x, n, cw[0]), xc1 = qecc::apply_pauli(x, n, cw[1]);
      const Vector yc0 = qecc::apply_pauli(y, n, cw[0]), yc1 = qecc::apply_pauli(y, n, cw[1]);
      out.max_cross_term = std::max({out.max_cross_term, std::abs(xc0.dot(yc1)), std::abs(xc1.dot(yc0))});
    }

  out.dense = reduction == Reduction::Dense || (reduction == Reduction::Auto && n <= 6);
  const std::array<Complex, 2> c{alpha, beta};

  auto entropy = [&](const qecc::PauliErrorIndex& ea, const qecc::PauliErrorIndex& eb) {
    // Σ_k c_k |a_k>|b_k> with a = (C0, C1), b = (C1, C0)
    const std::array<Vector, 2> a{qecc::apply_pauli(ea, n, cw[0]), qecc::apply_pauli(ea, n, cw[1])};
    const std::array<Vector, 2> b{qecc::apply_pauli(eb, n, cw[1]), qecc::apply_pauli(eb, n, cw[0])};
    if (out.dense) {
      Labels la, lb;
      for (std::size_t i = 1; i <= n; ++i) {
        la.push_back("a" + std::to_string(i));
        lb.push_back("b" + std::to_string(i));
      }
      Labels all = la;
      all.insert(all.end(), lb.begin(), lb.end());
      Vector psi = c[0] * Vector(kroneckerProduct(a[0], b[0])) + c[1] * Vector(kroneckerProduct(a[1], b[1]));
      return von_neumann_entropy(partial_trace(StateVector(CompositeSpace::qubits(all), psi), la));
    }
    // ρ_A = U W U† with U = [a_0 a_1], W_kl = c_k conj(c_l) <b_l|b_k>; U = QR gives spectrum of R W R†.
    Matrix u(a[0].size(), 2);
    u.col(0) = a[0];
    u.col(1) = a[1];
    Matrix w(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) w(k, l) = c[k] * std::conj(c[l]) * b[l].dot(b[k]);
    Eigen::HouseholderQR<Matrix> qr(u);
    const Matrix r = qr.matrixQR().topRows(2).triangularView<Eigen::Upper>();
    Matrix small = r * w * r.adjoint();
    small = 0.5 * (small + small.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(small);
    return spectrum_entropy(es.eigenvalues());
  };

  const qecc::PauliErrorIndex identity{};
  out.s_before = entropy(identity, identity);
  out.s_after = entropy(e_a, e_b);
  return out;
}

}  // namespace qcor::localec
