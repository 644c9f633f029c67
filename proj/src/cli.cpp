#include "qcor/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qcor/cavityfeedback.hpp"
#include "qcor/channels.hpp"
#include "qcor/infomeasures.hpp"
#include "qcor/localec.hpp"
#include "qcor/qecc.hpp"

#ifndef QCOR_VERSION
#define QCOR_VERSION "0.0.0"
#endif

namespace qcor::cli {

using Json = nlohmann::ordered_json;

const char* version() { return QCOR_VERSION; }

namespace {

/// One run's output: parameter echo, fixed-schema records, summary and certificates.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  Json params = Json::object();
  std::vector<std::string> columns;
  std::vector<Json> records;
  Json summary = Json::object();
  std::vector<std::string> violations;
};

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }
  if (v.is_number()) return v.dump();
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void write_csv(std::ostream& os, const Report& r) {
  os << "# qcor " << version() << " command=" << r.command << " seed=" << r.seed << '\n';
  for (const auto& [k, v] : r.params.items()) os << "# param " << k << '=' << csv_cell(v) << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& rec : r.records) {
    for (std::size_t i = 0; i < r.columns.size(); ++i)
      os << (i ? "," : "") << (rec.contains(r.columns[i]) ? csv_cell(rec[r.columns[i]]) : "");
    os << '\n';
  }
  for (const auto& [k, v] : r.summary.items()) os << "# summary " << k << '=' << csv_cell(v) << '\n';
  for (const auto& v : r.violations) os << "# violation " << v << '\n';
}

void write_json(std::ostream& os, const Report& r) {
  Json j;
  j["tool"] = "qcor";
  j["version"] = version();
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["params"] = r.params;
  j["columns"] = r.columns;
  Json recs = Json::array();
  for (const auto& rec : r.records) {
    Json row = Json::object();
    for (const auto& c : r.columns) row[c] = rec.contains(c) ? rec[c] : Json();
    recs.push_back(std::move(row));
  }
  j["records"] = std::move(recs);
  j["summary"] = r.summary;
  j["violations"] = r.violations;
  os << j.dump(2) << '\n';
}

std::vector<std::size_t> parse_dims(const std::string& text, std::size_t count) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v < 2 || v > 16)
      throw ValidationError("--dims expects factors in [2, 16] such as 2x3, got '" + text + "'");
    dims.push_back(v);
  }
  if (dims.size() != count)
    throw ValidationError("--dims expects " + std::to_string(count) + " factors, got '" + text + "'");
  return dims;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string output = "json";
  std::string out_path;
};

struct FeedbackArgs {
  double alpha2 = 0.8;
  int n = 0, nprime = 1, m = 1, mprime = 0;
  double r0 = 1.0;
  std::size_t atoms = 60;
  std::size_t fock_cutoff = 0;
};

Report run_feedback(const Common& c, const FeedbackArgs& a) {
  cavity::FeedbackConfig cfg = cavity::FeedbackConfig::from_alpha2(a.alpha2, a.n, a.nprime);
  cfg.m = a.m;
  cfg.m_prime = a.mprime;
  cfg.r0 = a.r0;
  cfg.max_atoms = a.atoms;
  cfg.fock_cutoff = a.fock_cutoff;
  cfg.seed = c.seed;
  cfg.validate();

  Report r;
  r.command = "feedback";
  r.seed = c.seed;
  r.params = {{"alpha2", a.alpha2}, {"n", a.n},         {"nprime", a.nprime},
              {"m", a.m},           {"mprime", a.mprime}, {"r0", a.r0},
              {"atoms", a.atoms},   {"fock_cutoff", cfg.cavity_a_dim()}, {"trials", c.trials}};
  r.columns = {"kind", "index", "N", "cumulative", "step_success", "target", "status", "atoms_used", "final_mi",
               "max_reduced_b_deviation"};

  const auto curve = cavity::cumulative_success_probability(cfg, a.atoms);
  bool monotone = true, below_one = true;
  for (std::size_t k = 0; k < curve.probabilities.size(); ++k) {
    const double p = curve.probabilities[k];
    if (k > 0 && p < curve.probabilities[k - 1]) monotone = false;
    if (!(p < 1.0)) below_one = false;
    r.records.push_back({{"kind", "curve"},
                         {"index", k},
                         {"N", k + 1},
                         {"cumulative", p},
                         {"step_success", curve.step_success[k]},
                         {"target", curve.target}});
  }
  if (!monotone) r.violations.push_back("cumulative success probability decreased");
  if (!below_one) r.violations.push_back("cumulative success probability reached 1");

  std::size_t successes = 0;
  double worst_dev = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(derive_seed(c.seed, t));
    const auto trace = cavity::run_feedback_protocol(cfg, rng);
    double dev = 0.0;
    for (const auto& rec : trace.records) dev = std::max(dev, rec.reduced_b_deviation);
    worst_dev = std::max(worst_dev, dev);
    if (trace.status == cavity::TerminalStatus::MaximallyEntangled) ++successes;
    if (dev > 1e-10) r.violations.push_back("trial " + std::to_string(t) + ": cavity B state changed by " + fmt(dev));
    r.records.push_back({{"kind", "trajectory"},
                         {"index", t},
                         {"status", cavity::to_string(trace.status)},
                         {"atoms_used", trace.records.size()},
                         {"final_mi", trace.records.empty() ? trace.initial_mi : trace.records.back().mutual_information},
                         {"max_reduced_b_deviation", dev}});
  }
  r.summary = {{"final_cumulative", curve.probabilities.back()},
               {"target", curve.target},
               {"residual", curve.residual},
               {"monotone", monotone},
               {"trajectories", c.trials},
               {"successes", successes},
               {"max_reduced_b_deviation", worst_dev}};
  return r;
}

struct NonlocalArgs {
  double r0 = 1.0;
  double t = -1.0, t1 = -1.0, t2 = -1.0;
};

Report run_nonlocal(const Common& c, const NonlocalArgs& a) {
  if (!(a.r0 > 0.0)) throw ValidationError("--r0 must be positive");
  const double pi = std::numbers::pi;
  const double t = a.t >= 0.0 ? a.t : pi / a.r0;
  const double t1 = a.t1 >= 0.0 ? a.t1 : pi / (2.0 * a.r0);
  const double t2 = a.t2 >= 0.0 ? a.t2 : pi / a.r0;
  Report r;
  r.command = "nonlocal";
  r.seed = c.seed;
  r.params = {{"r0", a.r0}, {"t", t}, {"t1", t1}, {"t2", t2}};
  r.columns = {"index", "method", "t1", "t2", "a0", "b0", "cavity_mi", "atom_mi", "max_mi"};
  const double max_mi = 2.0 * std::log(2.0);
  const auto m1 = cavity::nonlocal_method1(t, a.r0);
  const auto c0 = cavity::jc_coefficients(0, t, a.r0);
  r.records.push_back({{"index", 0},
                       {"method", "method1"},
                       {"t1", t},
                       {"t2", t},
                       {"a0", std::abs(c0.a)},
                       {"b0", std::abs(c0.b)},
                       {"cavity_mi", m1.cavity_mi},
                       {"atom_mi", m1.atom_mi},
                       {"max_mi", max_mi}});
  const auto m2 = cavity::nonlocal_method2(t1, t2, a.r0);
  r.records.push_back({{"index", 1},
                       {"method", "method2"},
                       {"t1", t1},
                       {"t2", t2},
                       {"cavity_mi", m2.result.cavity_mi},
                       {"atom_mi", 0.0},
                       {"max_mi", max_mi}});
  for (const auto& rec : r.records)
    if (rec["cavity_mi"].get<double>() > max_mi + 1e-9)
      r.violations.push_back(rec["method"].get<std::string>() + ": cavity mutual information exceeds 2 ln 2");
  r.summary = {{"method1_cavity_mi", m1.cavity_mi}, {"method2_cavity_mi", m2.result.cavity_mi}};
  return r;
}

struct MonotonicityArgs {
  std::string dims = "2x2";
  std::size_t env_dim = 2;
  std::string contraction = "incoherent";
};

Report run_monotonicity(const Common& c, const MonotonicityArgs& a) {
  const auto d = parse_dims(a.dims, 2);
  if (a.env_dim < 2 || a.env_dim > 8) throw ValidationError("--env-dim must lie in [2, 8]");
  if (a.contraction != "incoherent" && a.contraction != "general" && a.contraction != "none")
    throw ValidationError("--contraction expects incoherent, general or none");
  const std::size_t trials = c.trials == 0 ? 1000 : c.trials;
  Report r;
  r.command = "monotonicity";
  r.seed = c.seed;
  r.params = {{"trials", trials}, {"dims", a.dims}, {"env_dim", a.env_dim}, {"contraction", a.contraction}};
  r.columns = {"suite", "index", "trial_seed", "before", "after", "increase", "dilation_after", "reduced_deviation",
               "route_discrepancy"};

  const auto mono = monotonicity_suite(c.seed, trials, d[0], d[1], a.env_dim);
  for (const auto& rec : mono.records)
    r.records.push_back({{"suite", "mutual_information"},
                         {"index", rec.trial},
                         {"trial_seed", rec.seed},
                         {"before", rec.before},
                         {"after", rec.after},
                         {"increase", rec.after - rec.before},
                         {"dilation_after", rec.dilation_after},
                         {"reduced_deviation", rec.reduced_deviation},
                         {"route_discrepancy", rec.route_discrepancy}});
  auto certify = [&](const ChannelViolation& v) {
    std::ostringstream os;
    os << v.kind << " trial=" << v.trial << " seed=" << v.seed << " before=" << fmt(v.before)
       << " after=" << fmt(v.after) << " kraus_ops=" << v.kraus.size();
    r.violations.push_back(os.str());
  };
  for (const auto& v : mono.violations) certify(v);
  r.summary = {{"mi_violations", mono.violations.size()},
               {"max_increase", mono.max_increase()},
               {"max_reduced_deviation", mono.max_reduced_deviation()},
               {"max_route_discrepancy", mono.max_route_discrepancy()}};

  if (a.contraction != "none") {
    const auto family = a.contraction == "general" ? ChannelFamily::General : ChannelFamily::Incoherent;
    const auto con = contraction_suite(c.seed, trials, d[0], d[1], family);
    for (std::size_t t = 0; t < con.results.size(); ++t)
      r.records.push_back({{"suite", "diagonal_relative_entropy"},
                           {"index", t},
                           {"trial_seed", derive_seed(c.seed, t)},
                           {"before", con.results[t].before},
                           {"after", con.results[t].after},
                           {"increase", con.results[t].after - con.results[t].before}});
    for (const auto& v : con.violations) certify(v);
    r.summary["contraction_violations"] = con.violations.size();
  }
  return r;
}

Report run_entropy(const Common& c, const std::string& dims) {
  const auto d = parse_dims(dims, 3);
  const std::size_t trials = c.trials == 0 ? 1000 : c.trials;
  EntropySuiteOptions opt;
  opt.dim_a = d[0];
  opt.dim_b = d[1];
  opt.dim_c = d[2];
  const auto rep = entropy_property_suite(c.seed, trials, opt);
  Report r;
  r.command = "entropy-props";
  r.seed = c.seed;
  r.params = {{"trials", trials}, {"dims", dims}, {"tolerance", opt.tolerance}};
  r.columns = {"index", "property", "checked", "violations", "worst_slack"};
  for (std::size_t k = 0; k < rep.tallies.size(); ++k) {
    const auto& t = rep.tallies[k];
    r.records.push_back({{"index", k},
                         {"property", t.property},
                         {"checked", t.checked},
                         {"violations", t.violations},
                         {"worst_slack", t.worst_slack}});
  }
  for (const auto& v : rep.violations)
    r.violations.push_back(v.property + " trial=" + std::to_string(v.trial) + " seed=" + std::to_string(v.seed) +
                           " slack=" + fmt(v.slack));
  r.summary = {{"violations", rep.violation_count()}};
  return r;
}

struct CodecheckArgs {
  std::string file;
  std::string builtin;
  int d = -1;
  std::string errors = "full";
};

Report run_codecheck(const Common& c, const CodecheckArgs& a) {
  if (a.file.empty() == a.builtin.empty()) throw ValidationError("codecheck needs exactly one of --file or --builtin");
  qecc::CodeSpec code = a.file.empty() ? (a.builtin == "repetition" ? qecc::repetition_code()
                                          : a.builtin == "shor"     ? qecc::shor_code()
                                                                    : throw ValidationError("--builtin expects repetition or shor"))
                                       : qecc::read_code_file(a.file);
  if (a.d >= 0) code = code.with_distance(static_cast<std::size_t>(a.d));
  const auto model = qecc::parse_error_model(a.errors);
  const auto general = qecc::check_general_conditions(code, model);
  const auto strict = qecc::check_strict_conditions(code, model);

  Report r;
  r.command = "codecheck";
  r.seed = c.seed;
  r.params = {{"file", a.file}, {"builtin", a.builtin}, {"n", code.n()}, {"q", code.q()}, {"d", code.d()},
              {"errors", a.errors}};
  r.columns = {"index", "first_amp", "first_phase", "second_amp", "second_phase", "y_re", "y_im", "general_ok",
               "strict_ok"};
  // Both reports enumerate the same tuples in the same order.
  auto failed = [](const qecc::ConditionReport& rep, const qecc::TupleValue& t) {
    for (const auto& v : rep.violations)
      if (v.first == t.first && v.second == t.second) return true;
    return false;
  };
  for (std::size_t k = 0; k < general.y_values.size(); ++k) {
    const auto& t = general.y_values[k];
    r.records.push_back({{"index", k},
                         {"first_amp", qecc::bits(t.first.amp, code.n())},
                         {"first_phase", qecc::bits(t.first.phase, code.n())},
                         {"second_amp", qecc::bits(t.second.amp, code.n())},
                         {"second_phase", qecc::bits(t.second.phase, code.n())},
                         {"y_re", t.y.real()},
                         {"y_im", t.y.imag()},
                         {"general_ok", !failed(general, t)},
                         {"strict_ok", !failed(strict, t)}});
  }
  std::istringstream lines(qecc::describe(general));
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) r.violations.push_back("general conditions: " + line.substr(line.find(' ') + 1));
  r.summary = {{"general_passed", general.passed},
               {"strict_passed", strict.passed},
               {"checked_tuples", general.checked_tuples},
               {"general_violations", general.violations.size()},
               {"strict_violations", strict.violations.size()},
               {"degenerate_tuples", general.degenerate_tuples},
               {"max_conjugate_asymmetry", general.max_conjugate_asymmetry}};
  return r;
}

struct EcdemoArgs {
  double alpha2 = 0.7;
  std::vector<double> weights{0.1, 0.5, 1.0};
  std::string policy = "majority";
};

Report run_ecdemo(const Common& c, const EcdemoArgs& a) {
  if (!(a.alpha2 >= 0.0 && a.alpha2 <= 1.0)) throw ValidationError("--alpha2 must lie in [0, 1]");
  if (a.policy != "majority" && a.policy != "strict") throw ValidationError("--policy expects majority or strict");
  for (double w : a.weights)
    if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("--weights entries must lie in [0, 1]");
  const auto policy = a.policy == "strict" ? localec::SyndromePolicy::Strict : localec::SyndromePolicy::Majority;

  Report r;
  r.command = "ecdemo";
  r.seed = c.seed;
  r.params = {{"alpha2", a.alpha2}, {"weights", a.weights}, {"policy", a.policy}, {"trials", c.trials}};
  r.columns = {"index", "kind", "site", "weight", "order", "syndrome_a", "syndrome_b", "flip_a", "flip_b",
               "probability", "fidelity", "mi_before", "mi_after"};

  auto add = [&](const char* kind, const localec::PipelineCase& pc, const localec::CorrectionOutcome& o) {
    const std::size_t idx = r.records.size();
    r.records.push_back({{"index", idx},
                         {"kind", kind},
                         {"site", pc.site},
                         {"weight", pc.error_weight},
                         {"order", pc.order == localec::GateOrder::Atom1First ? "atom1-first" : "atom2-first"},
                         {"syndrome_a", o.syndrome_a.pattern()},
                         {"syndrome_b", o.syndrome_b.pattern()},
                         {"flip_a", o.flip_a},
                         {"flip_b", o.flip_b},
                         {"probability", o.probability},
                         {"fidelity", o.fidelity},
                         {"mi_before", o.mi_before},
                         {"mi_after", o.mi_after}});
    if (o.fidelity < 1.0 - 1e-9 || std::abs(o.mi_after - o.mi_before) > 1e-8)
      r.violations.push_back("record " + std::to_string(idx) + ": site " + pc.site + " syndrome " +
                             o.syndrome_a.pattern() + "/" + o.syndrome_b.pattern() + " fidelity " +
                             fmt(o.fidelity));
  };

  double worst = 1.0;
  std::size_t sample = 0;
  for (const auto order : {localec::GateOrder::Atom1First, localec::GateOrder::Atom2First})
    for (const auto& site : localec::kErrorSites)
      for (double w : a.weights) {
        localec::PipelineCase pc;
        pc.alpha = std::sqrt(a.alpha2);
        pc.beta = std::sqrt(1.0 - a.alpha2);
        pc.site = site;
        pc.error_weight = w;
        pc.order = order;
        for (const auto& o : localec::run_pipeline(pc, policy)) {
          add("branch", pc, o);
          worst = std::min(worst, o.fidelity);
        }
      }
  // Sampled runs: site and weight cycle with the trial index.
  for (std::size_t t = 0; t < c.trials; ++t, ++sample) {
    localec::PipelineCase pc;
    pc.alpha = std::sqrt(a.alpha2);
    pc.beta = std::sqrt(1.0 - a.alpha2);
    pc.site = localec::kErrorSites[t % localec::kErrorSites.size()];
    pc.error_weight = a.weights.empty() ? 1.0 : a.weights[(t / localec::kErrorSites.size()) % a.weights.size()];
    const StateVector pair = localec::cavity_pair(pc.alpha, pc.beta);
    const StateVector hit = localec::inject_amplitude_error(localec::encode(localec::prepare_register(pair)),
                                                            pc.site, localec::env_label(0),
                                                            std::sqrt(1.0 - pc.error_weight),
                                                            std::sqrt(pc.error_weight));
    Rng rng(derive_seed(c.seed, t));
    const auto [o, state] = localec::syndrome_correct(localec::decode(hit), pair, rng, policy);
    add("sample", pc, o);
    worst = std::min(worst, o.fidelity);
  }
  r.summary = {{"records", r.records.size()}, {"sampled", sample}, {"min_fidelity", worst}};
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcor: correlation and error-correction experiments for entangled cavities", "qcor"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, std::size_t default_trials) {
    common.trials = default_trials;
    sub->add_option("--seed", common.seed, "base seed (u64)")->capture_default_str();
    sub->add_option("--trials", common.trials, "number of trials")->capture_default_str();
    sub->add_option("--output", common.output, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", common.out_path, "write output to this file instead of stdout");
  };

  FeedbackArgs fb;
  auto* feedback = app.add_subcommand(
      "feedback",
      "Feedback-tuned atoms through cavity A; cumulative success curve and sampled trajectories.\n"
      "CSV columns: kind,index,N,cumulative,step_success,target,status,atoms_used,final_mi,"
      "max_reduced_b_deviation");
  feedback->add_option("--alpha2", fb.alpha2, "|alpha|^2, in (0.5, 1)")->capture_default_str();
  feedback->add_option("--n", fb.n, "Fock level paired with alpha in cavity A")->capture_default_str();
  feedback->add_option("--nprime", fb.nprime, "Fock level paired with beta in cavity A")->capture_default_str();
  feedback->add_option("--m", fb.m, "Fock level paired with alpha in cavity B")->capture_default_str();
  feedback->add_option("--mprime", fb.mprime, "Fock level paired with beta in cavity B")->capture_default_str();
  feedback->add_option("--r0", fb.r0, "vacuum Rabi frequency")->capture_default_str();
  feedback->add_option("--atoms", fb.atoms, "maximum number of atoms")->capture_default_str();
  feedback->add_option("--fock-cutoff", fb.fock_cutoff, "cavity A Fock dimension (0 = automatic)")
      ->capture_default_str();

  NonlocalArgs nl;
  auto* nonlocal = app.add_subcommand(
      "nonlocal",
      "Cavity entanglement from atoms that meet both cavities.\n"
      "CSV columns: index,method,t1,t2,a0,b0,cavity_mi,atom_mi,max_mi");
  nonlocal->add_option("--r0", nl.r0, "vacuum Rabi frequency")->capture_default_str();
  nonlocal->add_option("--t", nl.t, "method 1 interaction time (default pi/R0)");
  nonlocal->add_option("--t1", nl.t1, "method 2 time in cavity A (default pi/(2 R0))");
  nonlocal->add_option("--t2", nl.t2, "method 2 time in cavity B (default pi/R0)");

  MonotonicityArgs mo;
  auto* mono = app.add_subcommand(
      "monotonicity",
      "Random local channels never raise mutual information; diagonal relative entropy contraction.\n"
      "CSV columns: suite,index,trial_seed,before,after,increase,dilation_after,reduced_deviation,"
      "route_discrepancy");
  mono->add_option("--dims", mo.dims, "subsystem dimensions AxB")->capture_default_str();
  mono->add_option("--env-dim", mo.env_dim, "environment dimension of the random channels")->capture_default_str();
  mono->add_option("--contraction", mo.contraction, "channel family for the contraction suite: incoherent, general, none")
      ->capture_default_str();

  std::string entropy_dims = "2x2x2";
  auto* entropy = app.add_subcommand("entropy-props",
                                     "Randomised entropy inequalities.\n"
                                     "CSV columns: index,property,checked,violations,worst_slack");
  entropy->add_option("--dims", entropy_dims, "dimensions AxBxC")->capture_default_str();

  CodecheckArgs cc;
  auto* codecheck = app.add_subcommand(
      "codecheck",
      "Check the error-correction conditions of a code.\n"
      "CSV columns: index,first_amp,first_phase,second_amp,second_phase,y_re,y_im,general_ok,strict_ok");
  codecheck->add_option("--file", cc.file, "codeword file");
  codecheck->add_option("--builtin", cc.builtin, "built-in code: repetition or shor");
  codecheck->add_option("--d", cc.d, "override the correctable weight d");
  codecheck->add_option("--errors", cc.errors, "error basis: full, amplitude or phase")->capture_default_str();

  EcdemoArgs ec;
  auto* ecdemo = app.add_subcommand(
      "ecdemo",
      "Encode, corrupt, decode and correct an entangled cavity pair for every single-site error.\n"
      "CSV columns: index,kind,site,weight,order,syndrome_a,syndrome_b,flip_a,flip_b,probability,fidelity,"
      "mi_before,mi_after");
  ecdemo->add_option("--alpha2", ec.alpha2, "|alpha|^2 of the cavity pair")->capture_default_str();
  ecdemo->add_option("--weights", ec.weights, "error weights |c1|^2")->delimiter(',')->capture_default_str();
  ecdemo->add_option("--policy", ec.policy, "mixed-syndrome handling: majority or strict")->capture_default_str();

  for (auto* sub : {feedback, nonlocal, mono, entropy, codecheck, ecdemo}) add_common(sub, 0);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Report report;
  try {
    if (feedback->parsed())
      report = run_feedback(common, fb);
    else if (nonlocal->parsed())
      report = run_nonlocal(common, nl);
    else if (mono->parsed())
      report = run_monotonicity(common, mo);
    else if (entropy->parsed())
      report = run_entropy(common, entropy_dims);
    else if (codecheck->parsed())
      report = run_codecheck(common, cc);
    else
      report = run_ecdemo(common, ec);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::ofstream file;
  if (!common.out_path.empty()) {
    file.open(common.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << common.out_path << "'\n";
      return 2;
    }
  }
  std::ostream& sink = common.out_path.empty() ? out : file;
  if (common.output == "csv")
    write_csv(sink, report);
  else
    write_json(sink, report);

  for (const auto& v : report.violations) err << "violation: " << v << '\n';
  return report.violations.empty() ? 0 : 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace qcor::cli
