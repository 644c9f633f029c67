#include "qcor/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qcor {

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("empty probability distribution");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ValidationError("probability weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::kValidation) throw ValidationError("probability weights do not sum to 1");
}

namespace {

double xlogx_sum(const auto& values) {
  double h = 0.0;
  for (double p : values)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace

double shannon_entropy(const ProbabilityDistribution& p) { return std::max(0.0, xlogx_sum(p.weights())); }

double shannon_relative_entropy(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  if (p.size() != q.size()) throw ValidationError("relative entropy of distributions with different lengths");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInfinity;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

MutualInformationForms shannon_mutual_information_forms(const Eigen::MatrixXd& joint) {
  if (joint.size() == 0) throw ValidationError("empty joint distribution");
  if (joint.minCoeff() < 0.0) throw ValidationError("joint distribution has a negative entry");
  if (std::abs(joint.sum() - 1.0) > tol::kValidation) throw ValidationError("joint distribution does not sum to 1");

  const Eigen::VectorXd rows = joint.rowwise().sum();
  const Eigen::VectorXd cols = joint.colwise().sum().transpose();
  MutualInformationForms out;
  out.entropy_sum = xlogx_sum(rows) + xlogx_sum(cols) - xlogx_sum(joint.reshaped());
  for (Eigen::Index i = 0; i < joint.rows(); ++i)
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) out.relative += p * std::log(p / (rows[i] * cols[j]));
    }
  return out;
}

double shannon_mutual_information(const Eigen::MatrixXd& joint) {
  return shannon_mutual_information_forms(joint).entropy_sum;
}

double spectrum_entropy(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l > 0.0) s -= l * std::log(l);
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) { return spectrum_entropy(rho.eigenvalues()); }

double vn_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dimension() != sigma.dimension())
    throw ValidationError("relative entropy of density matrices with different dimensions");
  Eigen::SelfAdjointEigenSolver<Matrix> er(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sigma.matrix() + sigma.matrix().adjoint()));
  const RealVector& lr = er.eigenvalues();
  const RealVector& ls = es.eigenvalues();

  // Support check: ρ must have no weight on the kernel of σ.
  const Matrix overlap = er.eigenvectors().adjoint() * es.eigenvectors();
  for (Eigen::Index j = 0; j < ls.size(); ++j) {
    if (ls[j] > kSupportThreshold) continue;
    double w = 0.0;
    for (Eigen::Index i = 0; i < lr.size(); ++i)
      if (lr[i] > 0.0) w += lr[i] * std::norm(overlap(i, j));
    if (w > kSupportThreshold) return kInfinity;
  }

  // Tr ρ ln ρ − Σ_ij λ_i |<r_i|s_j>|² ln μ_j
  double d = -spectrum_entropy(lr);
  for (Eigen::Index i = 0; i < lr.size(); ++i) {
    if (lr[i] <= 0.0) continue;
    for (Eigen::Index j = 0; j < ls.size(); ++j) {
      if (ls[j] <= kSupportThreshold) continue;
      d -= lr[i] * std::norm(overlap(i, j)) * std::log(ls[j]);
    }
  }
  return std::max(0.0, d);
}

Bipartition resolve_cut(const CompositeSpace& space, const Bipartition& cut) {
  Bipartition out = cut;
  if (out.b.empty()) out.b = space.complement(out.a);
  if (out.a.empty() || out.b.empty()) throw ValidationError("both sides of a cut must be nonempty");
  std::set<std::string> seen;
  for (const auto* group : {&out.a, &out.b})
    for (const auto& l : *group) {
      space.position(l);
      if (!seen.insert(l).second) throw ValidationError("label '" + l + "' appears on both sides of the cut");
    }
  if (seen.size() != space.size()) throw ValidationError("cut does not cover every subsystem");
  return out;
}

MutualInformationForms vn_mutual_information_forms(const DensityMatrix& rho, const Bipartition& cut) {
  const Bipartition c = resolve_cut(rho.space(), cut);
  const DensityMatrix ra = partial_trace(rho, c.a);
  const DensityMatrix rb = partial_trace(rho, c.b);
  MutualInformationForms out;
  out.entropy_sum = von_neumann_entropy(ra) + von_neumann_entropy(rb) - von_neumann_entropy(rho);

  // ρ_A ⊗ ρ_B lives on (A-labels, B-labels); bring ρ into that order first.
  Labels order = ra.space().labels();
  const Labels bl = rb.space().labels();
  order.insert(order.end(), bl.begin(), bl.end());
  const CompositeSpace reordered = ra.space().concat(rb.space());
  SubsystemIndexer ix(rho.space(), order);
  const auto n = static_cast<Eigen::Index>(rho.dimension());
  Matrix permuted(n, n);
  for (std::size_t i = 0; i < rho.dimension(); ++i)
    for (std::size_t j = 0; j < rho.dimension(); ++j)
      permuted(static_cast<Eigen::Index>(ix.target_of(i)), static_cast<Eigen::Index>(ix.target_of(j))) =
          rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  const DensityMatrix ordered = detail_access::density(reordered, std::move(permuted));
  out.relative = vn_relative_entropy(ordered, tensor(ra, rb));
  return out;
}

double vn_mutual_information(const DensityMatrix& rho, const Bipartition& cut) {
  const Bipartition c = resolve_cut(rho.space(), cut);
  const double i = von_neumann_entropy(partial_trace(rho, c.a)) + von_neumann_entropy(partial_trace(rho, c.b)) -
                   von_neumann_entropy(rho);
  return std::max(0.0, i);
}

double vn_mutual_information(const StateVector& psi, const Bipartition& cut) {
  const Bipartition c = resolve_cut(psi.space(), cut);
  // S_AB = 0 for a pure state; compute both marginals for symmetry of rounding.
  const double sa = von_neumann_entropy(partial_trace(psi, c.a));
  const double sb = von_neumann_entropy(partial_trace(psi, c.b));
  return sa + sb;
}

double concavity_gap(std::span<const DensityMatrix> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size())
    throw ValidationError("concavity check needs one weight per state");
  const auto n = static_cast<Eigen::Index>(states[0].dimension());
  Matrix mix = Matrix::Zero(n, n);
  double avg = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    mix += weights[k] * states[k].matrix();
    avg += weights[k] * von_neumann_entropy(states[k]);
  }
  return von_neumann_entropy(DensityMatrix(states[0].space(), mix)) - avg;
}

// ---------------------------------------------------------------------------

const PropertyTally& EntropySuiteReport::tally(const std::string& property) const {
  for (const auto& t : tallies)
    if (t.property == property) return t;
  throw ValidationError("no tally for property '" + property + "'");
}

EntropySuiteReport entropy_property_suite(std::uint64_t seed, std::size_t trials,
                                          const EntropySuiteOptions& options) {
  if (trials < 1) throw ValidationError("entropy suite needs at least one trial");
  EntropySuiteReport report;
  report.seed = seed;
  report.trials = trials;
  report.tolerance = options.tolerance;
  report.tallies = {{"additivity"}, {"concavity"}, {"strong_subadditivity"}, {"subadditivity"}, {"araki_lieb"}};

  const CompositeSpace space_a({{"A", options.dim_a}});
  const CompositeSpace space_b({{"B", options.dim_b}});
  const CompositeSpace space_abc({{"A", options.dim_a}, {"B", options.dim_b}, {"C", options.dim_c}});
  const Labels a{"A"}, b{"B"}, ab{"A", "B"}, bc{"B", "C"};

  // Each check is phrased as lhs ≤ rhs; slack = lhs − rhs.
  auto record = [&](std::size_t k, std::size_t trial, std::uint64_t s, double slack) {
    auto& t = report.tallies[k];
    ++t.checked;
    t.worst_slack = std::max(t.worst_slack, slack);
    if (slack > options.tolerance) {
      ++t.violations;
      report.violations.push_back({t.property, trial, s, slack});
    }
  };

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = derive_seed(seed, trial);
    Rng rng(s);

    // Additivity: |S(ρ_A ⊗ ρ_B) − S(ρ_A) − S(ρ_B)| ≤ tol
    const DensityMatrix ra = random_density(space_a, rng);
    const DensityMatrix rb = random_density(space_b, rng);
    const double sab = von_neumann_entropy(tensor(ra, rb));
    record(0, trial, s, std::abs(sab - von_neumann_entropy(ra) - von_neumann_entropy(rb)));

    // Concavity: Σ λ_i S(ρ_i) ≤ S(Σ λ_i ρ_i)
    std::vector<DensityMatrix> comps;
    std::vector<double> lambdas;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double total = 0.0;
    for (std::size_t k = 0; k < options.mixture_size; ++k) {
      comps.push_back(random_density(space_a, rng));
      lambdas.push_back(u(rng));
      total += lambdas.back();
    }
    for (auto& l : lambdas) l /= total;
    record(1, trial, s, -concavity_gap(comps, lambdas));

    // Tripartite inequalities on a random ρ_ABC.
    const DensityMatrix rabc = random_density(space_abc, rng);
    const double s_abc = von_neumann_entropy(rabc);
    const DensityMatrix r_ab = partial_trace(rabc, ab);
    const double s_ab = von_neumann_entropy(r_ab);
    const double s_bc = von_neumann_entropy(partial_trace(rabc, bc));
    const double s_a = von_neumann_entropy(partial_trace(rabc, a));
    const double s_b = von_neumann_entropy(partial_trace(rabc, b));
    record(2, trial, s, (s_abc + s_b) - (s_ab + s_bc));
    record(3, trial, s, s_ab - (s_a + s_b));
    record(4, trial, s, std::abs(s_a - s_b) - s_ab);
  }
  return report;
}

}  // namespace qcor
