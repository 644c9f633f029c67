#include "qcor/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcor {

KrausChannel::KrausChannel(std::vector<Matrix> operators, CompositeSpace target)
    : operators_(std::move(operators)), target_(std::move(target)) {
  if (operators_.empty()) throw ValidationError("a channel needs at least one Kraus operator");
  const auto d = static_cast<Eigen::Index>(target_.dimension());
  for (const auto& a : operators_)
    if (a.rows() != d || a.cols() != d)
      throw ValidationError("Kraus operator dimension does not match the target factors");
  if (completeness_error() > tol::kValidation)
    throw ValidationError("Kraus operators violate completeness (sum A^dag A != I)");
}

double KrausChannel::completeness_error() const {
  const auto d = static_cast<Eigen::Index>(target_.dimension());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& a : operators_) sum += a.adjoint() * a;
  return max_abs_diff(sum, Matrix::Identity(d, d));
}

KrausChannel KrausChannel::retargeted(CompositeSpace target) const {
  if (target.dimension() != target_.dimension()) throw LabelError("retargeted channel has a different dimension");
  return KrausChannel(operators_, std::move(target));
}

KrausChannel identity_channel(const CompositeSpace& target) {
  const auto d = static_cast<Eigen::Index>(target.dimension());
  return KrausChannel({Matrix::Identity(d, d)}, target);
}

KrausChannel dephasing_channel(const CompositeSpace& target) {
  return KrausChannel(basis_projectors(target.dimension()), target);
}

KrausChannel unitary_channel(const Matrix& u, const CompositeSpace& target) {
  if (!is_unitary(u)) throw ValidationError("operator is not unitary within 1e-9");
  return KrausChannel({u}, target);
}

std::vector<Vector> standard_basis(std::size_t dim) {
  std::vector<Vector> out;
  for (std::size_t k = 0; k < dim; ++k) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(k)] = 1.0;
    out.push_back(std::move(v));
  }
  return out;
}

KrausChannel kraus_from_unitary(const Matrix& u_se, const CompositeSpace& system, const StateVector& env_init,
                                std::span<const Vector> env_basis) {
  const auto ds = static_cast<Eigen::Index>(system.dimension());
  const auto de = static_cast<Eigen::Index>(env_init.dimension());
  if (u_se.rows() != ds * de || u_se.cols() != ds * de)
    throw ValidationError("system-environment unitary has the wrong dimension");
  if (!is_unitary(u_se)) throw ValidationError("system-environment operator is not unitary within 1e-9");
  if (static_cast<Eigen::Index>(env_basis.size()) != de)
    throw ValidationError("environment basis must have one vector per environment dimension");
  for (std::size_t i = 0; i < env_basis.size(); ++i) {
    if (env_basis[i].size() != de) throw ValidationError("environment basis vector has the wrong dimension");
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = env_basis[i].dot(env_basis[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > tol::kValidation)
        throw ValidationError("environment basis is not orthonormal");
    }
  }

  // Index of |s, e> is s * de + e.
  std::vector<Matrix> ops;
  ops.reserve(env_basis.size());
  const Vector& psi_e = env_init.amplitudes();
  for (const auto& phi : env_basis) {
    Matrix a = Matrix::Zero(ds, ds);
    for (Eigen::Index s = 0; s < ds; ++s)
      for (Eigen::Index sp = 0; sp < ds; ++sp) {
        Complex acc = 0.0;
        for (Eigen::Index e = 0; e < de; ++e)
          for (Eigen::Index ep = 0; ep < de; ++ep)
            acc += std::conj(phi[e]) * u_se(s * de + e, sp * de + ep) * psi_e[ep];
        a(s, sp) = acc;
      }
    ops.push_back(std::move(a));
  }
  return KrausChannel(std::move(ops), system);
}

KrausChannel random_channel(const CompositeSpace& target, std::size_t env_dim, Rng& rng) {
  const Matrix u = random_unitary(target.dimension() * env_dim, rng);
  const CompositeSpace env({{"__env", env_dim}});
  const auto basis = standard_basis(env_dim);
  return kraus_from_unitary(u, target, StateVector::basis(env, 0), basis);
}

KrausChannel random_incoherent_channel(const CompositeSpace& target, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(target.dimension());
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Eigen::MatrixXd t(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index i = 0; i < d; ++i) t(i, l) = expo(rng);
    t.col(l) /= t.col(l).sum();
  }
  std::vector<Matrix> ops;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index l = 0; l < d; ++l) {
      Matrix a = Matrix::Zero(d, d);
      a(i, l) = std::sqrt(t(i, l)) * std::polar(1.0, phase(rng));
      ops.push_back(std::move(a));
    }
  return KrausChannel(std::move(ops), target);
}

bool is_incoherent(const KrausChannel& channel, double tolerance) {
  const auto d = static_cast<Eigen::Index>(channel.source_dim());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index l = 0; l < d; ++l)
      for (Eigen::Index m = l + 1; m < d; ++m) {
        Complex s = 0.0;
        for (const auto& a : channel.operators()) s += a(i, l) * std::conj(a(i, m));
        if (std::abs(s) > tolerance) return false;
      }
  return true;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  const Labels targets = channel.target_labels();
  for (const auto& f : channel.target().factors()) {
    if (rho.space().dim_of(f.label) != f.dim)
      throw ValidationError("channel factor '" + f.label + "' has a different dimension in the state");
  }
  const auto n = static_cast<Eigen::Index>(rho.dimension());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& a : channel.operators()) out += conjugate_local(rho.space(), a, targets, rho.matrix());
  return detail_access::density(rho.space(), std::move(out));
}

DensityMatrix apply_dilation(const DensityMatrix& rho, const Matrix& u, std::span<const std::string> targets,
                             const StateVector& env_init) {
  const DensityMatrix joint = tensor(rho, density_from_pure(env_init));
  Labels all_targets(targets.begin(), targets.end());
  for (const auto& l : env_init.space().labels()) all_targets.push_back(l);
  const DensityMatrix evolved = apply_unitary(joint, u, all_targets);
  const Labels keep = rho.space().labels();
  return partial_trace(evolved, keep);
}

// ---------------------------------------------------------------------------

double reduced_invariance_trial(const DensityMatrix& rho_ab, const KrausChannel& channel_on_a,
                                const Bipartition& cut) {
  const Bipartition c = resolve_cut(rho_ab.space(), cut);
  for (const auto& l : channel_on_a.target_labels())
    if (std::find(c.a.begin(), c.a.end(), l) == c.a.end())
      throw PreconditionError("channel acts on '" + l + "', which is not on side A of the cut");
  const DensityMatrix after = apply_channel(rho_ab, channel_on_a);
  return max_abs_diff(partial_trace(after, c.b).matrix(), partial_trace(rho_ab, c.b).matrix());
}

namespace {

bool within(const Labels& group, const Labels& labels) {
  return std::all_of(labels.begin(), labels.end(),
                     [&](const std::string& l) { return std::find(group.begin(), group.end(), l) != group.end(); });
}

}  // namespace

MonotonicityResult monotonicity_trial(const DensityMatrix& rho_ab, const KrausChannel& channel,
                                      const Bipartition& cut) {
  const Bipartition c = resolve_cut(rho_ab.space(), cut);
  const Labels t = channel.target_labels();
  if (!within(c.a, t) && !within(c.b, t))
    throw PreconditionError("channel is not local to one side of the cut");
  return {vn_mutual_information(rho_ab, c), vn_mutual_information(apply_channel(rho_ab, channel), c)};
}

DilationTrialResult dilation_monotonicity_trial(const DensityMatrix& rho_ab, const Matrix& u, const Bipartition& cut,
                                                Side local, std::size_t ancilla_dim) {
  const Bipartition c = resolve_cut(rho_ab.space(), cut);
  const Labels& x = local == Side::A ? c.a : c.b;
  const Labels& y = local == Side::A ? c.b : c.a;
  const std::string anc = "__ancilla";
  const CompositeSpace anc_space({{anc, ancilla_dim}});

  const DensityMatrix joint0 = tensor(rho_ab, density_from_pure(StateVector::basis(anc_space, 0)));
  Labels targets = x;
  targets.push_back(anc);
  const DensityMatrix joint = apply_unitary(joint0, u, targets);

  Labels yx = y, xc = x;
  yx.insert(yx.end(), x.begin(), x.end());
  xc.push_back(anc);
  const double s_all = von_neumann_entropy(joint);
  const double s_x = von_neumann_entropy(partial_trace(joint, x));
  const double s_yx = von_neumann_entropy(partial_trace(joint, yx));
  const double s_xc = von_neumann_entropy(partial_trace(joint, xc));

  DensityMatrix final_state = partial_trace(joint, rho_ab.space().labels());
  const double after = vn_mutual_information(final_state, c);
  return {vn_mutual_information(rho_ab, c), after, s_all + s_x - s_yx - s_xc, std::move(final_state)};
}

namespace {

double diagonal_relative_entropy(const Matrix& p, const Matrix& q) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double pi = p(i, i).real();
    const double qi = q(i, i).real();
    if (pi <= 0.0) continue;
    if (qi <= 0.0) return kInfinity;
    d += pi * std::log(pi / qi);
  }
  return d;
}

}  // namespace

ContractionResult classical_contraction_trial(const DensityMatrix& rho, const DensityMatrix& reference,
                                              const KrausChannel& channel) {
  if (rho.dimension() != reference.dimension())
    throw ValidationError("state and reference have different dimensions");
  const DensityMatrix ref = reference.relabeled(rho.space());
  ContractionResult out;
  out.before = diagonal_relative_entropy(rho.matrix(), ref.matrix());
  out.after = diagonal_relative_entropy(apply_channel(rho, channel).matrix(), apply_channel(ref, channel).matrix());
  out.incoherent = is_incoherent(channel);
  return out;
}

DensityMatrix product_of_marginals(const DensityMatrix& rho, const Bipartition& cut) {
  const Bipartition c = resolve_cut(rho.space(), cut);
  const DensityMatrix ra = partial_trace(rho, c.a);
  const DensityMatrix rb = partial_trace(rho, c.b);
  const DensityMatrix prod = tensor(ra, rb);
  // Permute back into ρ's factor order.
  const Labels prod_order = prod.space().labels();
  SubsystemIndexer ix(rho.space(), prod_order);
  const auto n = static_cast<Eigen::Index>(rho.dimension());
  Matrix m(n, n);
  for (std::size_t i = 0; i < rho.dimension(); ++i)
    for (std::size_t j = 0; j < rho.dimension(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          prod.matrix()(static_cast<Eigen::Index>(ix.target_of(i)), static_cast<Eigen::Index>(ix.target_of(j)));
  return detail_access::density(rho.space(), std::move(m));
}

// ---------------------------------------------------------------------------

double MonotonicitySuiteReport::max_increase() const {
  double m = -kInfinity;
  for (const auto& r : records) m = std::max(m, r.after - r.before);
  return m;
}

double MonotonicitySuiteReport::max_reduced_deviation() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.reduced_deviation);
  return m;
}

double MonotonicitySuiteReport::max_route_discrepancy() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.route_discrepancy);
  return m;
}

MonotonicitySuiteReport monotonicity_suite(std::uint64_t seed, std::size_t trials, std::size_t dim_a,
                                           std::size_t dim_b, std::size_t env_dim) {
  MonotonicitySuiteReport report;
  report.seed = seed;
  report.dim_a = dim_a;
  report.dim_b = dim_b;
  const CompositeSpace space({{"A", dim_a}, {"B", dim_b}});
  const Bipartition cut{{"A"}, {"B"}};
  const CompositeSpace env({{"__env", env_dim}});
  const StateVector env0 = StateVector::basis(env, 0);
  const auto env_basis = standard_basis(env_dim);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    Rng rng(s);
    const DensityMatrix rho = random_density(space, rng);
    const bool on_a = trial % 2 == 0;
    const Labels side{on_a ? "A" : "B"};
    const Labels other{on_a ? "B" : "A"};
    const CompositeSpace side_space = space.subspace(side);
    const Matrix u = random_unitary(side_space.dimension() * env_dim, rng);
    const KrausChannel ch = kraus_from_unitary(u, side_space, env0, env_basis);

    const DensityMatrix after = apply_channel(rho, ch);
    const DilationTrialResult dil =
        dilation_monotonicity_trial(rho, u, cut, on_a ? Side::A : Side::B, env_dim);

    MonotonicityTrialRecord rec;
    rec.trial = trial;
    rec.seed = s;
    rec.before = vn_mutual_information(rho, cut);
    rec.after = vn_mutual_information(after, cut);
    rec.dilation_after = dil.after;
    rec.reduced_deviation =
        max_abs_diff(partial_trace(after, other).matrix(), partial_trace(rho, other).matrix());
    rec.route_discrepancy = max_abs_diff(after.matrix(), dil.final_state.matrix());
    report.records.push_back(rec);

    auto flag = [&](std::string kind, double before, double value) {
      report.violations.push_back({trial, s, std::move(kind), before, value, rho.matrix(), ch.operators()});
    };
    if (rec.after > rec.before + report.tolerance) flag("mutual_information_increase", rec.before, rec.after);
    if (rec.dilation_after > rec.before + report.tolerance)
      flag("dilation_mutual_information_increase", rec.before, rec.dilation_after);
    if (rec.reduced_deviation > report.invariance_tolerance)
      flag("untouched_reduced_state_changed", 0.0, rec.reduced_deviation);
    if (rec.route_discrepancy > 1e-10) flag("channel_dilation_mismatch", 0.0, rec.route_discrepancy);
    if (dil.ssa_slack > report.tolerance) flag("strong_subadditivity", 0.0, dil.ssa_slack);
  }
  return report;
}

ContractionSuiteReport contraction_suite(std::uint64_t seed, std::size_t trials, std::size_t dim_a,
                                         std::size_t dim_b, ChannelFamily family) {
  ContractionSuiteReport report;
  report.seed = seed;
  report.family = family;
  const CompositeSpace space({{"A", dim_a}, {"B", dim_b}});
  const Bipartition cut{{"A"}, {"B"}};
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    Rng rng(s);
    const DensityMatrix rho = random_density(space, rng);
    const DensityMatrix ref = product_of_marginals(rho, cut);
    const KrausChannel ch =
        family == ChannelFamily::Incoherent ? random_incoherent_channel(space, rng) : random_channel(space, 2, rng);
    const ContractionResult r = classical_contraction_trial(rho, ref, ch);
    report.results.push_back(r);
    if (r.after > r.before + report.tolerance)
      report.violations.push_back({trial, s, "diagonal_divergence_increase", r.before, r.after, rho.matrix(),
                                   ch.operators()});
  }
  return report;
}

}  // namespace qcor
