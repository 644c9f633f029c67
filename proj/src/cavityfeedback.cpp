#include "qcor/cavityfeedback.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "qcor/infomeasures.hpp"

namespace qcor::cavity {

namespace {

const std::string kCavA = "cavA";
const std::string kCavB = "cavB";
const std::string kAtom = "atom";

/// Below this amplitude the smaller Schmidt coefficient is treated as zero.
constexpr double kVanishingAmplitude = 1e-12;
/// Field mutual information under which a trajectory counts as disentangled.
constexpr double kDisentangledMi = 1e-9;

const Bipartition kCavityCut{{kCavA}, {kCavB}};

}  // namespace

std::string to_string(AtomState s) { return s == AtomState::Excited ? "e" : "g"; }

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::MaximallyEntangled: return "maximally-entangled";
    case TerminalStatus::Disentangled: return "disentangled";
    case TerminalStatus::MaxAtomsReached: return "max-atoms-reached";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// FeedbackConfig

FeedbackConfig FeedbackConfig::from_alpha2(double alpha2, int n, int n_prime) {
  FeedbackConfig c;
  c.n = n;
  c.n_prime = n_prime;
  c.alpha = std::sqrt(std::clamp(alpha2, 0.0, 1.0));
  c.beta = std::sqrt(std::clamp(1.0 - alpha2, 0.0, 1.0));
  return c;
}

std::size_t FeedbackConfig::minimum_cutoff() const {
  return static_cast<std::size_t>(std::max(n, n_prime)) + max_atoms + 1;
}

std::size_t FeedbackConfig::cavity_a_dim() const { return fock_cutoff == 0 ? minimum_cutoff() : fock_cutoff; }

std::size_t FeedbackConfig::cavity_b_dim() const {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::max(m, m_prime)) + 1);
}

void FeedbackConfig::validate() const {
  if (n < 0 || n_prime < 0 || m < 0 || m_prime < 0) throw ValidationError("Fock occupations must be >= 0");
  if (n == n_prime) throw ValidationError("n == n': the cavities are not entangled");
  if (m == m_prime) throw ValidationError("m == m': the cavities are not entangled");
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > tol::kValidation) throw ValidationError("|alpha|^2 + |beta|^2 must equal 1");
  if (!(std::abs(alpha) > std::abs(beta))) throw ValidationError("feedback protocol requires |alpha| > |beta|");
  if (!(std::abs(beta) > 0.0)) throw ValidationError("beta = 0: the cavities are not entangled");
  if (!(r0 > 0.0)) throw ValidationError("R0 must be positive");
  if (max_atoms < 1) throw ValidationError("max_atoms must be >= 1");
  if (fock_cutoff != 0 && fock_cutoff < minimum_cutoff()) {
    throw ValidationError("fock_cutoff " + std::to_string(fock_cutoff) + " is below max(n, n') + max_atoms + 1 = " +
                          std::to_string(minimum_cutoff()));
  }
}

// ---------------------------------------------------------------------------
// Jaynes–Cummings evolution

double rabi_frequency(int n, double r0) { return r0 * std::sqrt(static_cast<double>(n) + 1.0); }

JcCoefficients jc_coefficients(int n, double t, double r0) {
  if (n < 0) throw ValidationError("Fock level must be >= 0");
  if (t < 0.0) throw ValidationError("interaction time must be >= 0");
  const double phase = rabi_frequency(n, r0) * t / 2.0;
  return {Complex(std::cos(phase), 0.0), Complex(0.0, -std::sin(phase))};
}

Matrix jc_unitary(const CompositeSpace& space, const std::string& cavity, const std::string& atom, double t,
                  double r0) {
  if (space.dim_of(atom) != 2) throw ValidationError("atom factor must be two-dimensional");
  const auto cutoff = static_cast<Eigen::Index>(space.dim_of(cavity));
  const Eigen::Index dim = 2 * cutoff;
  auto idx = [](Eigen::Index level, AtomState a) { return 2 * level + static_cast<Eigen::Index>(a); };

  Matrix u = Matrix::Identity(dim, dim);
  for (Eigen::Index level = 0; level + 1 < cutoff; ++level) {
    const JcCoefficients c = jc_coefficients(static_cast<int>(level), t, r0);
    const Eigen::Index e_n = idx(level, AtomState::Excited);
    const Eigen::Index g_n1 = idx(level + 1, AtomState::Ground);
    u(e_n, e_n) = c.a;
    u(g_n1, e_n) = c.b;
    u(e_n, g_n1) = c.b;
    u(g_n1, g_n1) = c.a;
  }
  return u;
}

StateVector apply_jc(const StateVector& state, const std::string& cavity, const std::string& atom, double t,
                     double r0) {
  const auto& space = state.space();
  const std::size_t top = space.dim_of(cavity) - 1;
  const Labels targets{cavity, atom};
  SubsystemIndexer ix(space, targets);
  const std::size_t guarded = 2 * top + 1;
  double population = 0.0;
  for (std::size_t r = 0; r < ix.rest_dim(); ++r) population += std::norm(state[ix.full_of(guarded, r)]);
  if (population > tol::kIdentity) {
    std::ostringstream os;
    os << "population " << population << " in |e," << top << "> of '" << cavity
       << "' would leave the truncated Fock space; raise the cutoff";
    throw TruncationError(os.str());
  }
  return apply_unitary(state, jc_unitary(space, cavity, atom, t, r0), targets);
}

// ---------------------------------------------------------------------------
// Interaction-time solvers

double solver_grid_step(int n, int n_prime, double r0) {
  return std::numbers::pi / (50.0 * r0 * std::sqrt(static_cast<double>(std::max(n, n_prime)) + 1.0));
}

double solver_window(int n, int n_prime, double r0) {
  const double beat = 4.0 * std::numbers::pi / std::abs(rabi_frequency(n, r0) - rabi_frequency(n_prime, r0));
  return 4.0 * beat;
}

namespace {

/// First sign change of f on the grid (step, 2 step, ...) refined by bisection.
double first_positive_root(const std::function<double(double)>& f, double step, double window, const char* what) {
  double t0 = step;
  double f0 = f(t0);
  if (f0 == 0.0) return t0;
  for (double t1 = t0 + step; t1 <= window + step; t1 += step) {
    const double f1 = f(t1);
    if (f1 == 0.0) return t1;
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double lo = t0, hi = t1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double t = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
      if (std::abs(f(t)) >= tol::kIdentity) {
        std::ostringstream os;
        os << what << ": bisection residual " << std::abs(f(t)) << " exceeds 1e-12";
        throw SolverError(os.str());
      }
      return t;
    }
    t0 = t1;
    f0 = f1;
  }
  throw SolverError(std::string(what) + ": no root inside the scan window of four beat periods");
}

void check_solver_preconditions(Complex alpha, Complex beta, int n, int n_prime, double r0) {
  if (n == n_prime) throw PreconditionError("interaction-time solver requires n != n'");
  if (n < 0 || n_prime < 0) throw PreconditionError("Fock levels must be >= 0");
  if (!(r0 > 0.0)) throw PreconditionError("R0 must be positive");
  if (!(std::abs(alpha) > std::abs(beta)) || !(std::abs(beta) > 0.0))
    throw PreconditionError("interaction-time solver requires |alpha| > |beta| > 0");
}

}  // namespace

double solve_time_excited(Complex alpha, Complex beta, int n, int n_prime, double r0) {
  check_solver_preconditions(alpha, beta, n, n_prime, r0);
  const double a = std::abs(alpha), b = std::abs(beta);
  const double rn = rabi_frequency(n, r0), rp = rabi_frequency(n_prime, r0);
  auto f = [=](double t) { return a * std::cos(rn * t / 2.0) - b * std::cos(rp * t / 2.0); };
  return first_positive_root(f, solver_grid_step(n, n_prime, r0), solver_window(n, n_prime, r0), "excited-atom time");
}

double solve_time_ground(Complex alpha, Complex beta, int n, int n_prime, double r0) {
  check_solver_preconditions(alpha, beta, n, n_prime, r0);
  const double a = std::abs(alpha), b = std::abs(beta);
  const double rn = rabi_frequency(n, r0), rp = rabi_frequency(n_prime, r0);
  auto f = [=](double t) { return a * std::sin(rn * t / 2.0) - b * std::sin(rp * t / 2.0); };
  return first_positive_root(f, solver_grid_step(n, n_prime, r0), solver_window(n, n_prime, r0), "ground-atom time");
}

std::pair<Complex, Complex> update_amplitudes_ground_branch(Complex alpha, Complex beta, const JcCoefficients& cn,
                                                            const JcCoefficients& cn_prime, AtomState incoming) {
  const Complex x = alpha * (incoming == AtomState::Excited ? cn.b : cn.a);
  const Complex y = beta * (incoming == AtomState::Excited ? cn_prime.b : cn_prime.a);
  const double norm = std::sqrt(std::norm(x) + std::norm(y));
  if (norm < tol::kIdentity) throw DegenerateBranchError("ground branch has vanishing norm");
  return {x / norm, y / norm};
}

// ---------------------------------------------------------------------------
// Protocol

namespace {

struct Levels {
  int alpha_level;  // level paired with |m> in cavity B
  int beta_level;   // level paired with |m'>
  bool raised;
};

CompositeSpace field_space(const FeedbackConfig& c) {
  return CompositeSpace({{kCavA, c.cavity_a_dim()}, {kCavB, c.cavity_b_dim()}});
}

std::size_t field_index(const FeedbackConfig& c, int a_level, int b_level) {
  return static_cast<std::size_t>(a_level) * c.cavity_b_dim() + static_cast<std::size_t>(b_level);
}

StateVector initial_field(const FeedbackConfig& c) {
  const CompositeSpace space = field_space(c);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  v[static_cast<Eigen::Index>(field_index(c, c.n, c.m))] += c.alpha;
  v[static_cast<Eigen::Index>(field_index(c, c.n_prime, c.m_prime))] += c.beta;
  return StateVector(space, v);
}

std::pair<Complex, Complex> read_amplitudes(const FeedbackConfig& c, const StateVector& field, const Levels& lv) {
  return {field[field_index(c, lv.alpha_level, c.m)], field[field_index(c, lv.beta_level, c.m_prime)]};
}

/// Field state conditioned on the atom outcome (atom is the last factor); nullopt if the branch is empty.
std::optional<StateVector> branch_field(const StateVector& joint, const CompositeSpace& fspace, AtomState outcome) {
  const auto n = static_cast<Eigen::Index>(fspace.dimension());
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = joint.amplitudes()[2 * i + static_cast<Eigen::Index>(outcome)];
  const double w = v.norm();
  if (w * w < tol::kIdentity) return std::nullopt;
  return detail_access::state(fspace, v / w);
}

struct Probe {
  AtomState prepared;
  double time = 0.0;
  double p_excited = 0.0;
  double p_ground = 0.0;
  std::optional<StateVector> excited_field;
  std::optional<StateVector> ground_field;
  double pre_measurement_mi = 0.0;
  double ensemble_mi = 0.0;
  double reduced_b_deviation = 0.0;
};

Probe probe(const FeedbackConfig& c, const StateVector& field, const Levels& lv, double r0) {
  Probe p;
  p.prepared = lv.raised ? AtomState::Ground : AtomState::Excited;
  const auto [alpha, beta] = read_amplitudes(c, field, lv);
  p.time = lv.raised ? solve_time_ground(alpha, beta, c.n, c.n_prime, r0)
                     : solve_time_excited(alpha, beta, c.n, c.n_prime, r0);

  const CompositeSpace atom_space({{kAtom, 2}});
  const StateVector atom0 = StateVector::basis(atom_space, static_cast<std::size_t>(p.prepared));
  const StateVector joint = apply_jc(tensor(field, atom0), kCavA, kAtom, p.time, r0);

  const Labels cavb{kCavB}, cavs{kCavA, kCavB};
  p.reduced_b_deviation =
      max_abs_diff(partial_trace(joint, cavb).matrix(), partial_trace(field, cavb).matrix());
  p.pre_measurement_mi = vn_mutual_information(partial_trace(joint, cavs), kCavityCut);

  const CompositeSpace fspace = field.space();
  p.excited_field = branch_field(joint, fspace, AtomState::Excited);
  p.ground_field = branch_field(joint, fspace, AtomState::Ground);
  const Labels atom{kAtom};
  const auto probs = outcome_probabilities(joint, basis_projectors(2), atom);
  p.p_ground = probs[0];
  p.p_excited = probs[1];
  if (p.excited_field) p.ensemble_mi += p.p_excited * vn_mutual_information(*p.excited_field, kCavityCut);
  if (p.ground_field) p.ensemble_mi += p.p_ground * vn_mutual_information(*p.ground_field, kCavityCut);
  return p;
}

FeedbackConfig normalised(const FeedbackConfig& config) {
  FeedbackConfig c = config;
  c.validate();
  if (c.fock_cutoff == 0) c.fock_cutoff = c.minimum_cutoff();
  return c;
}

}  // namespace

ProtocolTrace run_feedback_protocol(const FeedbackConfig& config, Rng& rng) {
  const FeedbackConfig c = normalised(config);
  ProtocolTrace trace;
  trace.config = c;
  StateVector field = initial_field(c);
  trace.initial_mi = vn_mutual_information(field, kCavityCut);
  Levels lv{c.n, c.n_prime, false};

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t k = 0; k < c.max_atoms; ++k) {
    const Probe p = probe(c, field, lv, c.r0);
    AtomRecord rec;
    rec.atom = k;
    rec.prepared = p.prepared;
    rec.interaction_time = p.time;
    rec.p_excited = p.p_excited;
    rec.p_ground = p.p_ground;
    rec.pre_measurement_mi = p.pre_measurement_mi;
    rec.ensemble_mi = p.ensemble_mi;
    rec.reduced_b_deviation = p.reduced_b_deviation;

    const bool excited = p.excited_field && (!p.ground_field || uniform(rng) < p.p_excited);
    rec.outcome = excited ? AtomState::Excited : AtomState::Ground;
    rec.branch_probability = excited ? p.p_excited : p.p_ground;
    if (excited) {
      field = *p.excited_field;
      lv = Levels{c.n, c.n_prime, false};
    } else {
      field = *p.ground_field;
      lv = Levels{c.n + 1, c.n_prime + 1, true};
    }
    std::tie(rec.alpha, rec.beta) = read_amplitudes(c, field, lv);
    rec.mutual_information = vn_mutual_information(field, kCavityCut);
    trace.records.push_back(rec);

    if (excited) {
      trace.status = TerminalStatus::MaximallyEntangled;
      return trace;
    }
    if (rec.mutual_information < kDisentangledMi || std::abs(rec.beta) < kVanishingAmplitude) {
      trace.status = TerminalStatus::Disentangled;
      return trace;
    }
  }
  trace.status = TerminalStatus::MaxAtomsReached;
  return trace;
}

ProtocolTrace run_feedback_protocol(const FeedbackConfig& config) {
  Rng rng(config.seed);
  return run_feedback_protocol(config, rng);
}

CumulativeCurve cumulative_success_probability(const FeedbackConfig& config, std::size_t atoms) {
  if (atoms < 1) throw ValidationError("cumulative probability needs N >= 1");
  FeedbackConfig c = config;
  c.max_atoms = std::max(c.max_atoms, atoms);
  c.fock_cutoff = std::max(c.fock_cutoff, c.minimum_cutoff());
  c = normalised(c);

  CumulativeCurve curve;
  curve.target = 2.0 * std::norm(c.beta);
  StateVector field = initial_field(c);
  Levels lv{c.n, c.n_prime, false};
  double fail = 1.0;
  bool exhausted = false;
  for (std::size_t k = 0; k < atoms; ++k) {
    double success = 0.0;
    if (!exhausted) {
      const auto [alpha, beta] = read_amplitudes(c, field, lv);
      if (std::abs(beta) < kVanishingAmplitude) {
        exhausted = true;
      } else {
        const Probe p = probe(c, field, lv, c.r0);
        success = p.p_excited;
        if (!p.ground_field) {
          exhausted = true;
          fail = 0.0;
        } else {
          field = *p.ground_field;
          lv = Levels{c.n + 1, c.n_prime + 1, true};
        }
        fail *= std::clamp(p.p_ground, 0.0, 1.0);
      }
    }
    curve.step_success.push_back(success);
    curve.probabilities.push_back(1.0 - fail);
  }
  curve.residual = curve.probabilities.back() - curve.target;
  return curve;
}

ConcavityReport concavity_decrement_check(const FeedbackConfig& config) {
  const FeedbackConfig c = normalised(config);
  const StateVector field = initial_field(c);
  const Levels lv{c.n, c.n_prime, false};
  const auto [alpha, beta] = read_amplitudes(c, field, lv);
  const double t = solve_time_excited(alpha, beta, c.n, c.n_prime, c.r0);

  const CompositeSpace atom_space({{kAtom, 2}});
  const StateVector joint =
      apply_jc(tensor(field, StateVector::basis(atom_space, 1)), kCavA, kAtom, t, c.r0);
  const auto excited = branch_field(joint, field.space(), AtomState::Excited);
  const auto ground = branch_field(joint, field.space(), AtomState::Ground);
  if (!excited || !ground) throw DegenerateBranchError("tuned step has a zero-probability outcome");

  const Labels cavb{kCavB}, cava{kCavA};
  ConcavityReport r;
  r.p = partial_trace(joint, Labels{kAtom}).matrix()(1, 1).real();
  if (r.p < tol::kIdentity || r.p > 1.0 - tol::kIdentity)
    throw DegenerateBranchError("mixture weight p is 0 or 1");
  r.s_initial = von_neumann_entropy(partial_trace(field, cava));
  r.s_after = von_neumann_entropy(partial_trace(joint, cavb));
  r.s_excited_branch = von_neumann_entropy(partial_trace(*excited, cavb));
  r.s_ground_branch = von_neumann_entropy(partial_trace(*ground, cavb));
  r.delta = r.s_excited_branch - r.s_initial;
  r.s_probed_cavity_after = von_neumann_entropy(partial_trace(joint, cava));
  return r;
}

DecisiveStep decisive_first_step(const FeedbackConfig& config) {
  const FeedbackConfig c = normalised(config);
  const StateVector field = initial_field(c);
  const auto d = static_cast<Eigen::Index>(c.cavity_a_dim());
  const double ratio = std::abs(c.beta) / std::abs(c.alpha);

  Matrix success = Matrix::Identity(d, d);
  success(c.n, c.n) = ratio;
  Matrix failure = Matrix::Zero(d, d);
  failure(c.n, c.n) = std::sqrt(1.0 - ratio * ratio);
  const CompositeSpace target({{kCavA, c.cavity_a_dim()}});
  KrausChannel filter({success, failure}, target);

  const Labels cava{kCavA};
  const Vector vs = apply_local(field.space(), success, cava, field.amplitudes());
  const Vector vf = apply_local(field.space(), failure, cava, field.amplitudes());
  DecisiveStep out{std::move(filter), vs.squaredNorm(), 0.0, 0.0};
  out.success_mi = vn_mutual_information(StateVector::normalized(field.space(), vs), kCavityCut);
  if (vf.squaredNorm() > tol::kIdentity)
    out.failure_mi = vn_mutual_information(StateVector::normalized(field.space(), vf), kCavityCut);
  return out;
}

// ---------------------------------------------------------------------------
// Non-local schemes

NonlocalResult nonlocal_method1(double t, double r0) {
  const CompositeSpace space({{kCavA, 2}, {kCavB, 2}, {"atomA", 2}, {"atomB", 2}});
  Vector v = Vector::Zero(16);
  // |0,0>_cav (|e,g> + |g,e>)/√2 with |e> = 1
  v[space.index(std::vector<std::size_t>{0, 0, 1, 0})] = 1.0 / std::numbers::sqrt2;
  v[space.index(std::vector<std::size_t>{0, 0, 0, 1})] = 1.0 / std::numbers::sqrt2;
  StateVector psi(space, v);
  psi = apply_jc(psi, kCavA, "atomA", t, r0);
  psi = apply_jc(psi, kCavB, "atomB", t, r0);

  const Labels cavs{kCavA, kCavB}, atoms{"atomA", "atomB"};
  NonlocalResult out{psi, 0.0, 0.0};
  out.cavity_mi = vn_mutual_information(partial_trace(psi, cavs), kCavityCut);
  out.atom_mi = vn_mutual_information(partial_trace(psi, atoms), Bipartition{{"atomA"}, {"atomB"}});
  return out;
}

Method2Result nonlocal_method2(double t1, double t2, double r0) {
  const CompositeSpace space({{kAtom, 2}, {kCavA, 2}, {kCavB, 2}});
  const std::vector<std::size_t> start{1, 0, 0};
  const StateVector psi0 = StateVector::basis(space, start);
  const StateVector mid = apply_jc(psi0, kCavA, kAtom, t1, r0);
  const StateVector fin = apply_jc(mid, kCavB, kAtom, t2, r0);
  const Labels cavs{kCavA, kCavB};
  NonlocalResult res{fin, vn_mutual_information(partial_trace(fin, cavs), kCavityCut), 0.0};
  return Method2Result{mid, std::move(res)};
}

}  // namespace qcor::cavity
