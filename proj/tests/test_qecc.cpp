#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "qcor/errors.hpp"
#include "qcor/localec.hpp"
#include "qcor/qecc.hpp"

using namespace qcor;
using namespace qcor::qecc;

namespace {

std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(QCOR_DATA_DIR) / name; }

bool names_phase_tuple(const ConditionViolation& v) { return v.first.phase != 0 || v.second.phase != 0; }

CodeSpec random_code(std::size_t n, Rng& rng) {
  const Matrix u = random_unitary(std::size_t{1} << n, rng);
  return CodeSpec(n, 1, 1, {u.col(0), u.col(1)});
}

}  // namespace

// --- error operators

TEST(PauliOperator, IdentityAndSingleFlip) {
  EXPECT_LT(max_abs_diff(pauli_error_operator({}, 3), Matrix::Identity(8, 8)), 1e-15);
  const auto x = pauli_error_operator(PauliErrorIndex::from_strings("10", "00"), 2);
  EXPECT_LT(max_abs_diff(x, oracle::pauli_string(0b10, 0b00, 2)), 1e-15);
  Vector v = Vector::Zero(4);
  v[0] = 1.0;
  EXPECT_NEAR(std::abs((x * v)[2] - Complex(1.0)), 0.0, 1e-15);  // |00> -> |10>
}

TEST(PauliOperator, PhaseOnFirstAndFourthQubit) {
  const auto e = PauliErrorIndex::from_strings("0000", "1001");
  const auto z = pauli_error_operator(e, 4);
  for (std::size_t x = 0; x < 16; ++x) {
    const bool q1 = (x >> 3) & 1, q4 = x & 1;
    const double sign = (q1 ^ q4) ? -1.0 : 1.0;
    EXPECT_EQ(z(x, x), Complex(sign, 0.0)) << x;
  }
  EXPECT_LT((z - Matrix(z.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(PauliOperator, SquaresToPlusMinusIdentityAndMatchesFastPath) {
  Rng rng(5);
  const std::size_t n = 4;
  for (const auto& e : enumerate_error_indices(n, n)) {
    const Matrix m = pauli_error_operator(e, n);
    const Matrix sq = m * m;
    const double s = sq(0, 0).real();
    EXPECT_EQ(std::abs(s), 1.0);
    EXPECT_LT(max_abs_diff(sq, s * Matrix::Identity(16, 16)), 1e-15);
    EXPECT_TRUE(is_unitary(m, 1e-12));
    EXPECT_LT(max_abs_diff(m, oracle::pauli_string(e.amp, e.phase, n)), 1e-15);
    const Vector v = random_pure(CompositeSpace::qubits({"a", "b", "c", "d"}), rng).amplitudes();
    EXPECT_LT((apply_pauli(e, n, v) - m * v).norm(), 1e-13);
  }
}

TEST(PauliOperator, LengthMismatchRejected) {
  EXPECT_THROW(PauliErrorIndex::from_strings("10", "000"), ValidationError);
  EXPECT_THROW(PauliErrorIndex::from_strings("1x", "00"), ValidationError);
  EXPECT_THROW(pauli_error_operator(PauliErrorIndex::from_strings("1000", "0000"), 3), ValidationError);
}

TEST(PauliOperator, Rendering) {
  EXPECT_EQ(to_string(PauliErrorIndex::from_strings("100", "001"), 3), "amp=100 phase=001");
  EXPECT_EQ(PauliErrorIndex::from_strings("101", "011").weight(), 3);
  EXPECT_EQ(PauliErrorIndex::from_strings("100", "100").weight(), 1);
}

// --- enumeration

TEST(Enumeration, SmallCases) {
  const auto zero = enumerate_error_indices(3, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], PauliErrorIndex{});
  EXPECT_EQ(enumerate_error_indices(3, 1).size(), 10u);
  const auto one = enumerate_error_indices(1, 1);
  ASSERT_EQ(one.size(), 4u);
  std::set<std::pair<std::uint64_t, std::uint64_t>> got;
  for (const auto& e : one) got.insert({e.amp, e.phase});
  EXPECT_EQ(got, (std::set<std::pair<std::uint64_t, std::uint64_t>>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
}

TEST(Enumeration, MatchesBruteForceAndFormula) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t d = 0; d <= n; ++d)
      for (auto model : {ErrorModel::Full, ErrorModel::AmplitudeOnly, ErrorModel::PhaseOnly}) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> brute;
        const std::uint64_t lim = std::uint64_t{1} << n;
        for (std::uint64_t a = 0; a < lim; ++a)
          for (std::uint64_t p = 0; p < lim; ++p) {
            if (model == ErrorModel::AmplitudeOnly && p) continue;
            if (model == ErrorModel::PhaseOnly && a) continue;
            if (static_cast<std::size_t>(std::popcount(a | p)) <= d) brute.insert({a, p});
          }
        const auto list = enumerate_error_indices(n, d, model);
        std::set<std::pair<std::uint64_t, std::uint64_t>> got;
        for (const auto& e : list) got.insert({e.amp, e.phase});
        EXPECT_EQ(got.size(), list.size()) << "duplicates at n=" << n;
        EXPECT_EQ(got, brute);
        EXPECT_EQ(error_index_count(n, d, model), list.size());
        EXPECT_TRUE(std::is_sorted(list.begin(), list.end(), [](const auto& x, const auto& y) {
          return x.weight() < y.weight();
        }));
      }
}

TEST(Enumeration, ModelNames) {
  EXPECT_EQ(parse_error_model("amplitude"), ErrorModel::AmplitudeOnly);
  EXPECT_EQ(parse_error_model(to_string(ErrorModel::PhaseOnly)), ErrorModel::PhaseOnly);
  EXPECT_THROW(parse_error_model("bogus"), ValidationError);
}

// --- CodeSpec

TEST(CodeSpecTest, Validation) {
  Vector a = Vector::Zero(8), b = Vector::Zero(8);
  a[0] = 1.0;
  b[0] = 1.0;
  EXPECT_THROW(CodeSpec(3, 1, 1, {a, b}), ValidationError);
  b[0] = 0.0;
  b[7] = 1.0;
  EXPECT_NO_THROW(CodeSpec(3, 1, 1, {a, b}));
  EXPECT_THROW(CodeSpec(3, 1, 1, {a}), ValidationError);
  EXPECT_THROW(CodeSpec(3, 1, 4, {a, b}), ValidationError);
  EXPECT_THROW(CodeSpec(3, 1, 1, {Vector::Zero(4), b}), ValidationError);
}

// --- conditions

TEST(Conditions, RepetitionCodeAmplitudeOnly) {
  const auto code = repetition_code();
  const auto general = check_general_conditions(code, ErrorModel::AmplitudeOnly);
  const auto strict = check_strict_conditions(code, ErrorModel::AmplitudeOnly);
  EXPECT_TRUE(general.passed);
  EXPECT_TRUE(strict.passed);
  EXPECT_EQ(general.checked_tuples, 16u);
  ASSERT_EQ(general.y_values.size(), 16u);
  for (const auto& tv : general.y_values) {
    const double expect = tv.first == tv.second ? 1.0 : 0.0;
    EXPECT_NEAR(std::abs(tv.y - Complex(expect)), 0.0, 1e-12);
  }
  EXPECT_EQ(general.degenerate_tuples, 0u);
}

TEST(Conditions, RepetitionCodeFailsWithPhaseErrors) {
  const auto r = check_general_conditions(repetition_code(), ErrorModel::Full);
  EXPECT_FALSE(r.passed);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_TRUE(std::all_of(r.violations.begin(), r.violations.end(), names_phase_tuple));
  // identity against a single phase error on qubit 1 gives diag(+1, -1)
  const auto z1 = PauliErrorIndex::from_strings("000", "100");
  const auto it = std::find_if(r.violations.begin(), r.violations.end(), [&](const auto& v) {
    return v.first == PauliErrorIndex{} && v.second == z1;
  });
  ASSERT_NE(it, r.violations.end());
  EXPECT_EQ(it->classification, "non-scalar diagonal");
  EXPECT_NEAR(it->m(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(it->m(1, 1).real(), -1.0, 1e-12);
  EXPECT_NE(describe(r).find("phase=100"), std::string::npos);
}

TEST(Conditions, ShorCodeIsDegenerate) {
  const auto code = shor_code();
  const auto general = check_general_conditions(code);
  const auto strict = check_strict_conditions(code);
  EXPECT_TRUE(general.passed);
  EXPECT_FALSE(strict.passed);
  EXPECT_GT(general.degenerate_tuples, 0u);
  EXPECT_EQ(general.checked_tuples, 28u * 28u);
  for (const auto& v : strict.violations) EXPECT_EQ(v.classification, "diagonal differs from delta pattern");
}

TEST(Conditions, StrictImpliesGeneral) {
  std::vector<CodeSpec> fixtures{repetition_code(), shor_code()};
  Rng rng(314);
  for (int k = 0; k < 100; ++k) fixtures.push_back(random_code(3, rng));
  // a code that passes strict by construction: one qubit, no errors
  Vector c0 = Vector::Zero(2), c1 = Vector::Zero(2);
  c0[0] = c1[1] = 1.0;
  fixtures.emplace_back(1, 1, 0, std::vector<Vector>{c0, c1});
  int strict_passes = 0;
  for (const auto& code : fixtures)
    for (auto model : {ErrorModel::Full, ErrorModel::AmplitudeOnly, ErrorModel::PhaseOnly}) {
      const bool s = check_strict_conditions(code, model).passed;
      const bool g = check_general_conditions(code, model).passed;
      if (s) {
        ++strict_passes;
        EXPECT_TRUE(g);
      }
    }
  EXPECT_GT(strict_passes, 0);
}

TEST(Conditions, ReportsAreDeterministic) {
  const auto code = repetition_code();
  EXPECT_EQ(describe(check_general_conditions(code)), describe(check_general_conditions(code)));
  EXPECT_EQ(describe(check_strict_conditions(shor_code())), describe(check_strict_conditions(shor_code())));
  EXPECT_EQ(check_general_conditions(code).passed, check_general_conditions(code).violations.empty());
}

TEST(Conditions, ConjugateSymmetryDiagnostic) {
  const auto r = check_general_conditions(shor_code());
  EXPECT_LT(r.max_conjugate_asymmetry, 1e-12);
  EXPECT_EQ(r.conjugate_asymmetric_tuples, 0u);
}

TEST(Conditions, GeneralPassImpliesPipelineRecovery) {
  const auto code = repetition_code();
  ASSERT_TRUE(check_general_conditions(code, ErrorModel::AmplitudeOnly).passed);
  for (const auto& site : localec::kErrorSites) {
    localec::PipelineCase c;
    c.site = site;
    for (const auto& o : localec::run_pipeline(c)) EXPECT_GE(o.fidelity, 1.0 - 1e-9) << site;
  }
}

// --- codeword files

TEST(CodeFile, ParsesRepetitionText) {
  const auto code = parse_code_string(
      "# three qubits\n"
      "n=3 q=1 d=1\n"
      "000 1 0\n"
      "\n"
      "# second word\n"
      "111 1 0\n");
  EXPECT_EQ(code.n(), 3u);
  EXPECT_TRUE(check_general_conditions(code, ErrorModel::AmplitudeOnly).passed);
}

TEST(CodeFile, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_code_string(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("n=3 q=1 d=1\n000 1 0\n\n11 1 0\n"), 4u);
  EXPECT_EQ(line_of("n=3 q=1\n"), 1u);
  EXPECT_EQ(line_of("n=3 q=1 d=1\n000 1 zero\n"), 2u);
  EXPECT_EQ(line_of("n=3 q=1 d=1\n000 1 0\n"), 2u);
  EXPECT_THROW(read_code_file(data_file("does-not-exist.code")), ValidationError);
}

TEST(CodeFile, RoundTrip) {
  Rng rng(8);
  for (const auto& code : {repetition_code(), shor_code(), random_code(3, rng)}) {
    std::ostringstream out;
    write_code(out, code);
    const auto back = parse_code_string(out.str());
    ASSERT_EQ(back.codewords().size(), code.codewords().size());
    for (std::size_t k = 0; k < code.codewords().size(); ++k)
      EXPECT_LT((back.codewords()[k] - code.codewords()[k]).norm(), 1e-15);
  }
}

TEST(CodeFile, ShippedFixtures) {
  const auto rep = read_code_file(data_file("repetition3.code"));
  EXPECT_TRUE(check_general_conditions(rep, ErrorModel::AmplitudeOnly).passed);
  const auto shor = read_code_file(data_file("shor9.code"));
  EXPECT_TRUE(check_general_conditions(shor).passed);
  EXPECT_FALSE(check_strict_conditions(shor).passed);
}
