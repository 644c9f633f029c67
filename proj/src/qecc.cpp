#include "qcor/qecc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qcor::qecc {

namespace {

constexpr double kTol = tol::kValidation;

std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1ULL); }

void check_qubits(std::size_t n) {
  if (n < 1 || n > kMaxQubits)
    throw ValidationError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
}

void check_fits(const PauliErrorIndex& e, std::size_t n) {
  check_qubits(n);
  if ((e.support() & ~full_mask(n)) != 0)
    throw ValidationError("error index addresses qubits beyond n = " + std::to_string(n));
}

}  // namespace

int PauliErrorIndex::weight() const noexcept { return std::popcount(support()); }

PauliErrorIndex PauliErrorIndex::from_strings(const std::string& amp, const std::string& phase) {
  if (amp.size() != phase.size()) throw ValidationError("amplitude and phase strings differ in length");
  if (amp.empty() || amp.size() > kMaxQubits) throw ValidationError("error strings must have 1..20 characters");
  PauliErrorIndex e;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    for (char c : {amp[i], phase[i]})
      if (c != '0' && c != '1') throw ValidationError("error strings may only contain 0 and 1");
    const std::uint64_t bit = 1ULL << (amp.size() - 1 - i);
    if (amp[i] == '1') e.amp |= bit;
    if (phase[i] == '1') e.phase |= bit;
  }
  return e;
}

std::string bits(std::uint64_t mask, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1ULL << (n - 1 - i))) s[i] = '1';
  return s;
}

std::string to_string(const PauliErrorIndex& e, std::size_t n) {
  return "amp=" + bits(e.amp, n) + " phase=" + bits(e.phase, n);
}

std::string to_string(ErrorModel m) {
  switch (m) {
    case ErrorModel::Full: return "full";
    case ErrorModel::AmplitudeOnly: return "amplitude";
    case ErrorModel::PhaseOnly: return "phase";
  }
  return "unknown";
}

ErrorModel parse_error_model(const std::string& name) {
  if (name == "full") return ErrorModel::Full;
  if (name == "amplitude") return ErrorModel::AmplitudeOnly;
  if (name == "phase") return ErrorModel::PhaseOnly;
  throw ValidationError("unknown error model '" + name + "' (expected full, amplitude or phase)");
}

Vector apply_pauli(const PauliErrorIndex& e, std::size_t n, const Vector& v) {
  check_fits(e, n);
  const auto dim = static_cast<Eigen::Index>(1ULL << n);
  if (v.size() != dim) throw ValidationError("vector length does not match 2^n");
  // X^a Z^p |x> = (-1)^{popcount(p & x)} |x ^ a>
  Vector out(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    const double sign = (std::popcount(e.phase & ux) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(ux ^ e.amp)] = sign * v[x];
  }
  return out;
}

Matrix pauli_error_operator(const PauliErrorIndex& e, std::size_t n) {
  check_fits(e, n);
  const auto dim = static_cast<Eigen::Index>(1ULL << n);
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    const double sign = (std::popcount(e.phase & ux) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(ux ^ e.amp), x) = sign;
  }
  return m;
}

std::vector<PauliErrorIndex> enumerate_error_indices(std::size_t n, std::size_t d, ErrorModel model) {
  check_qubits(n);
  if (d > n) throw ValidationError("error weight d must satisfy 0 <= d <= n");
  std::vector<PauliErrorIndex> out;
  const std::uint64_t top = full_mask(n);
  for (std::uint64_t s = 0; s <= top; ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) > d) continue;
    switch (model) {
      case ErrorModel::AmplitudeOnly: out.push_back({s, 0}); break;
      case ErrorModel::PhaseOnly: out.push_back({0, s}); break;
      case ErrorModel::Full:
        // each supported qubit gets X, Z or XZ: amp and phase subsets of s covering s
        for (std::uint64_t a = s;; a = (a - 1) & s) {
          const std::uint64_t rest = s & ~a;
          for (std::uint64_t extra = a;; extra = (extra - 1) & a) {
            out.push_back({a, rest | extra});
            if (extra == 0) break;
          }
          if (a == 0) break;
        }
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const PauliErrorIndex& x, const PauliErrorIndex& y) {
    const int wx = x.weight(), wy = y.weight();
    if (wx != wy) return wx < wy;
    if (x.support() != y.support()) return x.support() > y.support();  // qubit 1 first
    if (x.amp != y.amp) return x.amp > y.amp;
    return x.phase > y.phase;
  });
  return out;
}

std::uint64_t error_index_count(std::size_t n, std::size_t d, ErrorModel model) {
  const std::uint64_t k = model == ErrorModel::Full ? 3 : 1;
  std::uint64_t total = 0, binom = 1, power = 1;
  for (std::size_t w = 0; w <= std::min(d, n); ++w) {
    total += binom * power;
    binom = binom * (n - w) / (w + 1);
    power *= k;
  }
  return total;
}

// ---------------------------------------------------------------------------
// CodeSpec

CodeSpec::CodeSpec(std::size_t n, std::size_t q, std::size_t d, std::vector<Vector> codewords)
    : n_(n), q_(q), d_(d), codewords_(std::move(codewords)) {
  check_qubits(n_);
  if (q_ > n_) throw ValidationError("logical qubits q must not exceed physical qubits n");
  if (d_ > n_) throw ValidationError("correctable weight d must not exceed n");
  if (codewords_.size() != (1ULL << q_))
    throw ValidationError("expected 2^q = " + std::to_string(1ULL << q_) + " codewords, got " +
                          std::to_string(codewords_.size()));
  const auto dim = static_cast<Eigen::Index>(1ULL << n_);
  for (const auto& c : codewords_)
    if (c.size() != dim) throw ValidationError("codeword length does not match 2^n");
  for (std::size_t k = 0; k < codewords_.size(); ++k)
    for (std::size_t l = k; l < codewords_.size(); ++l) {
      const Complex g = codewords_[k].dot(codewords_[l]);
      const double expect = k == l ? 1.0 : 0.0;
      if (std::abs(g - expect) > kTol) {
        std::ostringstream os;
        os << "codewords are not orthonormal: <C^" << k << "|C^" << l << "> = " << g;
        throw ValidationError(os.str());
      }
    }
}

StateVector CodeSpec::codeword_state(std::size_t k, const std::string& prefix) const {
  Labels labels;
  for (std::size_t i = 1; i <= n_; ++i) labels.push_back(prefix + std::to_string(i));
  return StateVector(CompositeSpace::qubits(labels), codewords_.at(k));
}

CodeSpec repetition_code() {
  Vector c0 = Vector::Zero(8), c1 = Vector::Zero(8);
  c0[0] = 1.0;
  c1[7] = 1.0;
  return CodeSpec(3, 1, 1, {c0, c1});
}

CodeSpec shor_code() {
  // (|000> ± |111>)^{⊗3} / 2√2
  Vector block_plus = Vector::Zero(8), block_minus = Vector::Zero(8);
  block_plus[0] = block_minus[0] = 1.0;
  block_plus[7] = 1.0;
  block_minus[7] = -1.0;
  auto cube = [](const Vector& b) {
    const Vector bb = kroneckerProduct(b, b);
    return Vector(kroneckerProduct(bb, b));
  };
  const double norm = 2.0 * std::numbers::sqrt2;
  return CodeSpec(9, 1, 1, {cube(block_plus) / norm, cube(block_minus) / norm});
}

// ---------------------------------------------------------------------------
// Condition checks

namespace {

enum class Condition { General, Strict };

ConditionReport check(const CodeSpec& code, const std::vector<PauliErrorIndex>& errors, Condition which) {
  ConditionReport r;
  r.condition = which == Condition::General ? "general" : "strict";
  r.n = code.n();
  r.d = code.d();

  const std::size_t kdim = code.codewords().size();
  const auto kd = static_cast<Eigen::Index>(kdim);
  // Columns E|C^l>.
  std::vector<Matrix> images;
  images.reserve(errors.size());
  for (const auto& e : errors) {
    Matrix cols(static_cast<Eigen::Index>(1ULL << code.n()), kd);
    for (std::size_t l = 0; l < kdim; ++l) cols.col(static_cast<Eigen::Index>(l)) = apply_pauli(e, code.n(), code.codewords()[l]);
    images.push_back(std::move(cols));
  }

  const std::size_t ne = errors.size();
  std::vector<Complex> ys(ne * ne);
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      const Matrix m = images[i].adjoint() * images[j];
      ++r.checked_tuples;
      const Complex y = m.diagonal().mean();
      ys[i * ne + j] = y;
      r.y_values.push_back({errors[i], errors[j], y});

      double off = 0.0, spread = 0.0;
      for (Eigen::Index k = 0; k < kd; ++k)
        for (Eigen::Index l = 0; l < kd; ++l) {
          if (k == l)
            spread = std::max(spread, std::abs(m(k, l) - m(0, 0)));
          else
            off = std::max(off, std::abs(m(k, l)));
        }
      const double expect = i == j ? 1.0 : 0.0;
      const bool delta_pattern = std::abs(y - expect) <= kTol;

      std::string why;
      if (off >= kTol)
        why = "off-diagonal";
      else if (spread >= kTol)
        why = "non-scalar diagonal";
      else if (which == Condition::Strict && !delta_pattern)
        why = "diagonal differs from delta pattern";
      if (why.empty() && !delta_pattern) ++r.degenerate_tuples;
      if (!why.empty()) r.violations.push_back({errors[i], errors[j], m, why});
    }
  }
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < ne; ++j) {
      const double asym = std::abs(ys[j * ne + i] - std::conj(ys[i * ne + j]));
      r.max_conjugate_asymmetry = std::max(r.max_conjugate_asymmetry, asym);
      if (asym >= kTol) ++r.conjugate_asymmetric_tuples;
    }
  r.passed = r.violations.empty();
  return r;
}

}  // namespace

ConditionReport check_general_conditions(const CodeSpec& code, ErrorModel model) {
  auto r = check(code, enumerate_error_indices(code.n(), code.d(), model), Condition::General);
  r.model = model;
  return r;
}

ConditionReport check_strict_conditions(const CodeSpec& code, ErrorModel model) {
  auto r = check(code, enumerate_error_indices(code.n(), code.d(), model), Condition::Strict);
  r.model = model;
  return r;
}

ConditionReport check_general_conditions(const CodeSpec& code, const std::vector<PauliErrorIndex>& errors) {
  for (const auto& e : errors) check_fits(e, code.n());
  return check(code, errors, Condition::General);
}

std::string describe(const ConditionReport& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "condition=" << r.condition << " n=" << r.n << " d=" << r.d << " errors=" << to_string(r.model)
     << " passed=" << (r.passed ? "true" : "false") << " checked=" << r.checked_tuples
     << " violations=" << r.violations.size() << " degenerate=" << r.degenerate_tuples
     << " conjugate_asymmetric=" << r.conjugate_asymmetric_tuples << '\n';
  for (const auto& v : r.violations) {
    os << "violation " << v.classification << " (" << to_string(v.first, r.n) << ") (" << to_string(v.second, r.n)
       << ") M=[";
    for (Eigen::Index k = 0; k < v.m.rows(); ++k)
      for (Eigen::Index l = 0; l < v.m.cols(); ++l)
        os << (k || l ? " " : "") << v.m(k, l).real() << (v.m(k, l).imag() < 0 ? "" : "+") << v.m(k, l).imag() << "i";
    os << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Codeword files

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CodeSpec parse_code(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::map<std::string, long long> header;
  std::size_t header_line = 0;
  std::vector<Vector> blocks;
  std::vector<std::map<std::string, std::size_t>> seen;
  bool in_block = false;
  std::size_t n = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      // Comment-only lines do not separate blocks.
      if (trim(raw).empty()) in_block = false;
      continue;
    }
    if (header_line == 0) {
      std::istringstream hs(line);
      std::string tok;
      while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected header 'n=<int> q=<int> d=<int>'");
        const std::string key = tok.substr(0, eq);
        if (key != "n" && key != "q" && key != "d") throw ParseError(line_no, "unknown header key '" + key + "'");
        try {
          std::size_t used = 0;
          const long long v = std::stoll(tok.substr(eq + 1), &used);
          if (used != tok.size() - eq - 1 || v < 0) throw std::invalid_argument("bad");
          if (!header.emplace(key, v).second) throw ParseError(line_no, "duplicate header key '" + key + "'");
        } catch (const std::logic_error&) {
          throw ParseError(line_no, "header value for '" + key + "' is not a nonnegative integer");
        }
      }
      for (const char* k : {"n", "q", "d"})
        if (!header.count(k)) throw ParseError(line_no, std::string("header is missing '") + k + "='");
      n = static_cast<std::size_t>(header["n"]);
      if (n < 1 || n > kMaxQubits)
        throw ParseError(line_no, "n must be in [1, " + std::to_string(kMaxQubits) + "]");
      header_line = line_no;
      continue;
    }

    std::istringstream ls(line);
    std::string bitstring, re_s, im_s, extra;
    if (!(ls >> bitstring >> re_s >> im_s) || (ls >> extra))
      throw ParseError(line_no, "expected '<bitstring> <real> <imag>'");
    if (bitstring.size() != n) throw ParseError(line_no, "bitstring length " + std::to_string(bitstring.size()) +
                                                             " does not match n = " + std::to_string(n));
    std::size_t index = 0;
    for (char c : bitstring) {
      if (c != '0' && c != '1') throw ParseError(line_no, "bitstring may only contain 0 and 1");
      index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    double re = 0.0, im = 0.0;
    try {
      std::size_t u1 = 0, u2 = 0;
      re = std::stod(re_s, &u1);
      im = std::stod(im_s, &u2);
      if (u1 != re_s.size() || u2 != im_s.size()) throw std::invalid_argument("bad");
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "amplitude is not a number");
    }
    if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(line_no, "amplitude is not finite");
    if (!in_block) {
      blocks.push_back(Vector::Zero(static_cast<Eigen::Index>(1ULL << n)));
      seen.emplace_back();
      in_block = true;
    }
    if (!seen.back().emplace(bitstring, line_no).second)
      throw ParseError(line_no, "basis state " + bitstring + " repeated within a codeword");
    blocks.back()[static_cast<Eigen::Index>(index)] = Complex(re, im);
  }
  if (header_line == 0) throw ParseError(line_no == 0 ? 1 : line_no, "missing header line");
  const auto q = static_cast<std::size_t>(header["q"]);
  if (q > n) throw ParseError(header_line, "q must not exceed n");
  if (blocks.size() != (1ULL << q))
    throw ParseError(line_no, "found " + std::to_string(blocks.size()) + " codeword blocks, expected 2^q = " +
                                  std::to_string(1ULL << q));
  return CodeSpec(n, q, static_cast<std::size_t>(header["d"]), std::move(blocks));
}

CodeSpec parse_code_string(const std::string& text) {
  std::istringstream in(text);
  return parse_code(in);
}

CodeSpec read_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open code file '" + path.string() + "'");
  return parse_code(in);
}

void write_code(std::ostream& out, const CodeSpec& code) {
  out << "n=" << code.n() << " q=" << code.q() << " d=" << code.d() << '\n';
  const auto old = out.precision(17);
  for (std::size_t k = 0; k < code.codewords().size(); ++k) {
    out << '\n';
    const Vector& c = code.codewords()[k];
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (c[i] != Complex(0.0, 0.0))
        out << bits(static_cast<std::uint64_t>(i), code.n()) << ' ' << c[i].real() << ' ' << c[i].imag() << '\n';
  }
  out.precision(old);
}

}  // namespace qcor::qecc
