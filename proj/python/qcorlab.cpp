#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcor/cavityfeedback.hpp"
#include "qcor/channels.hpp"
#include "qcor/cli.hpp"
#include "qcor/errors.hpp"
#include "qcor/infomeasures.hpp"
#include "qcor/localec.hpp"
#include "qcor/qecc.hpp"

namespace py = pybind11;
using namespace qcor;

namespace {

// Factors "A0", "A1", ... for the first group and "B0", ... for the second.
CompositeSpace split_space(const std::vector<std::size_t>& dims_a, const std::vector<std::size_t>& dims_b,
                           Bipartition& cut) {
  std::vector<Factor> f;
  for (std::size_t k = 0; k < dims_a.size(); ++k) {
    f.push_back({"A" + std::to_string(k), dims_a[k]});
    cut.a.push_back(f.back().label);
  }
  for (std::size_t k = 0; k < dims_b.size(); ++k) {
    f.push_back({"B" + std::to_string(k), dims_b[k]});
    cut.b.push_back(f.back().label);
  }
  return CompositeSpace(f);
}

CompositeSpace flat_space(std::size_t dim) { return CompositeSpace({{"S", dim}}); }

py::dict record_dict(const cavity::AtomRecord& r) {
  py::dict d;
  d["atom"] = r.atom;
  d["prepared"] = cavity::to_string(r.prepared);
  d["interaction_time"] = r.interaction_time;
  d["outcome"] = cavity::to_string(r.outcome);
  d["branch_probability"] = r.branch_probability;
  d["alpha"] = r.alpha;
  d["beta"] = r.beta;
  d["mutual_information"] = r.mutual_information;
  d["ensemble_mi"] = r.ensemble_mi;
  d["reduced_b_deviation"] = r.reduced_b_deviation;
  return d;
}

py::dict report_dict(const qecc::ConditionReport& r) {
  py::dict d;
  d["condition"] = r.condition;
  d["passed"] = r.passed;
  d["checked_tuples"] = r.checked_tuples;
  d["violations"] = r.violations.size();
  d["degenerate_tuples"] = r.degenerate_tuples;
  d["text"] = qecc::describe(r);
  return d;
}

qecc::CodeSpec load_code(const std::string& builtin, const std::string& file) {
  if (!file.empty()) return qecc::read_code_file(file);
  if (builtin == "repetition") return qecc::repetition_code();
  if (builtin == "shor") return qecc::shor_code();
  throw ValidationError("unknown built-in code '" + builtin + "'");
}

cavity::FeedbackConfig feedback_config(double alpha2, int n, int nprime, std::size_t atoms, std::uint64_t seed) {
  auto cfg = cavity::FeedbackConfig::from_alpha2(alpha2, n, nprime);
  cfg.max_atoms = atoms;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(qcorlab, m) {
  m.doc() = "Entanglement measures, cavity feedback, code conditions and local error correction";
  m.attr("__version__") = cli::version();

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // --- entropies
  m.def("shannon_entropy", [](std::vector<double> p) { return shannon_entropy(ProbabilityDistribution(p)); },
        py::arg("p"));
  m.def(
      "von_neumann_entropy",
      [](const Matrix& rho) { return von_neumann_entropy(DensityMatrix(flat_space(rho.rows()), rho)); },
      py::arg("rho"));
  m.def(
      "relative_entropy",
      [](const Matrix& rho, const Matrix& sigma) {
        return vn_relative_entropy(DensityMatrix(flat_space(rho.rows()), rho),
                                   DensityMatrix(flat_space(sigma.rows()), sigma));
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "mutual_information",
      [](const Matrix& rho, std::vector<std::size_t> dims_a, std::vector<std::size_t> dims_b) {
        Bipartition cut;
        const auto s = split_space(dims_a, dims_b, cut);
        return vn_mutual_information(DensityMatrix(s, rho), cut);
      },
      py::arg("rho"), py::arg("dims_a"), py::arg("dims_b"),
      "I(A:B) in nats of a density matrix whose factors are dims_a followed by dims_b.");
  m.def(
      "pair_mutual_information",
      [](double alpha2) {
        const CompositeSpace s({{"A", 2}, {"B", 2}});
        Vector v = Vector::Zero(4);
        v[1] = std::sqrt(alpha2);
        v[2] = std::sqrt(1.0 - alpha2);
        return vn_mutual_information(StateVector(s, v), Bipartition{{"A"}, {"B"}});
      },
      py::arg("alpha2"), "I(A:B) of sqrt(alpha2)|01> + sqrt(1-alpha2)|10>.");

  // --- randomised suites
  m.def(
      "entropy_property_suite",
      [](std::uint64_t seed, std::size_t trials) {
        const auto r = entropy_property_suite(seed, trials);
        py::dict d;
        for (const auto& t : r.tallies) d[py::str(t.property)] = t.violations;
        return d;
      },
      py::arg("seed") = 1, py::arg("trials") = 1000, "Violation count per entropy inequality.");
  m.def(
      "monotonicity_suite",
      [](std::uint64_t seed, std::size_t trials, std::size_t dim_a, std::size_t dim_b) {
        const auto r = monotonicity_suite(seed, trials, dim_a, dim_b);
        py::dict d;
        d["violations"] = r.violations.size();
        d["max_increase"] = r.max_increase();
        d["max_reduced_deviation"] = r.max_reduced_deviation();
        return d;
      },
      py::arg("seed") = 1, py::arg("trials") = 1000, py::arg("dim_a") = 2, py::arg("dim_b") = 2);
  m.def(
      "contraction_suite",
      [](std::uint64_t seed, std::size_t trials, std::size_t dim_a, std::size_t dim_b, const std::string& family) {
        const auto fam = family == "general" ? ChannelFamily::General : ChannelFamily::Incoherent;
        const auto r = contraction_suite(seed, trials, dim_a, dim_b, fam);
        py::dict d;
        d["violations"] = r.violations.size();
        d["trials"] = r.results.size();
        return d;
      },
      py::arg("seed") = 1, py::arg("trials") = 1000, py::arg("dim_a") = 2, py::arg("dim_b") = 2,
      py::arg("family") = "incoherent");

  // --- cavity feedback
  m.def(
      "cumulative_success",
      [](double alpha2, int n, int nprime, std::size_t atoms) {
        const auto c = cavity::cumulative_success_probability(feedback_config(alpha2, n, nprime, atoms, 0), atoms);
        py::dict d;
        d["probabilities"] = c.probabilities;
        d["step_success"] = c.step_success;
        d["target"] = c.target;
        return d;
      },
      py::arg("alpha2"), py::arg("n") = 0, py::arg("nprime") = 1, py::arg("atoms") = 60);
  m.def(
      "run_feedback",
      [](double alpha2, int n, int nprime, std::size_t atoms, std::uint64_t seed) {
        const auto t = cavity::run_feedback_protocol(feedback_config(alpha2, n, nprime, atoms, seed));
        py::dict d;
        d["status"] = cavity::to_string(t.status);
        d["initial_mi"] = t.initial_mi;
        py::list recs;
        for (const auto& r : t.records) recs.append(record_dict(r));
        d["records"] = recs;
        return d;
      },
      py::arg("alpha2"), py::arg("n") = 0, py::arg("nprime") = 1, py::arg("atoms") = 60, py::arg("seed") = 0);
  m.def(
      "concavity_check",
      [](double alpha2) {
        const auto r = cavity::concavity_decrement_check(cavity::FeedbackConfig::from_alpha2(alpha2));
        py::dict d;
        d["s_initial"] = r.s_initial;
        d["s_after"] = r.s_after;
        d["s_excited_branch"] = r.s_excited_branch;
        d["s_ground_branch"] = r.s_ground_branch;
        d["p"] = r.p;
        d["strict_margin"] = r.strict_margin();
        return d;
      },
      py::arg("alpha2"));
  m.def(
      "nonlocal_method1", [](double t, double r0) { return cavity::nonlocal_method1(t, r0).cavity_mi; },
      py::arg("t"), py::arg("r0") = 1.0, "Cavity I(A:B) after two entangled atoms each cross their cavity.");
  m.def(
      "nonlocal_method2",
      [](double t1, double t2, double r0) { return cavity::nonlocal_method2(t1, t2, r0).result.cavity_mi; },
      py::arg("t1"), py::arg("t2"), py::arg("r0") = 1.0, "Cavity I(A:B) after one atom crosses both cavities.");

  // --- codes
  m.def(
      "check_code",
      [](const std::string& builtin, const std::string& file, const std::string& errors) {
        const auto code = load_code(builtin, file);
        const auto model = qecc::parse_error_model(errors);
        py::dict d;
        d["n"] = code.n();
        d["general"] = report_dict(qecc::check_general_conditions(code, model));
        d["strict"] = report_dict(qecc::check_strict_conditions(code, model));
        return d;
      },
      py::arg("builtin") = "repetition", py::arg("file") = "", py::arg("errors") = "full");
  m.def(
      "error_index_count",
      [](std::size_t n, std::size_t d, const std::string& errors) {
        return qecc::error_index_count(n, d, qecc::parse_error_model(errors));
      },
      py::arg("n"), py::arg("d"), py::arg("errors") = "full");

  // --- local error correction
  m.def(
      "ec_pipeline",
      [](double alpha2, const std::string& site, double weight, bool strict) {
        localec::PipelineCase c;
        c.alpha = std::sqrt(alpha2);
        c.beta = std::sqrt(1.0 - alpha2);
        c.site = site;
        c.error_weight = weight;
        py::list out;
        for (const auto& o : localec::run_pipeline(c, strict ? localec::SyndromePolicy::Strict
                                                             : localec::SyndromePolicy::Majority)) {
          py::dict d;
          d["syndrome_a"] = o.syndrome_a.pattern();
          d["syndrome_b"] = o.syndrome_b.pattern();
          d["flip_a"] = o.flip_a;
          d["flip_b"] = o.flip_b;
          d["probability"] = o.probability;
          d["fidelity"] = o.fidelity;
          d["mi_before"] = o.mi_before;
          d["mi_after"] = o.mi_after;
          out.append(d);
        }
        return out;
      },
      py::arg("alpha2") = 0.7, py::arg("site") = "cavA", py::arg("weight") = 1.0, py::arg("strict") = false);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
