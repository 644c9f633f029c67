#pragma once

// Reference computations written independently of the library: explicit
// index loops, closed forms, and a general (non-Hermitian) eigen solver.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline V kron(const V& a, const V& b) {
  V out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Tr_B or Tr_A of a (dA·dB)-dimensional matrix.
inline M trace_out_b(const M& rho, Eigen::Index da, Eigen::Index db) {
  M out = M::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

inline M trace_out_a(const M& rho, Eigen::Index da, Eigen::Index db) {
  M out = M::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += rho(k * db + i, k * db + j);
  return out;
}

/// Entropy from the general complex eigen solver (real parts, clipped).
inline double entropy(const M& rho) {
  Eigen::ComplexEigenSolver<M> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i].real();
    if (l > 1e-300) s -= l * std::log(l);
  }
  return s;
}

inline double binary_entropy(double p) {
  double s = 0.0;
  for (double x : {p, 1.0 - p})
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

inline M pauli_x() {
  M m = M::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline M pauli_z() {
  M m = M::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// ⊗_i X^{amp_i} Z^{phase_i} from per-qubit flags (qubit 1 first).
inline M pauli_string(const std::vector<int>& amp, const std::vector<int>& phase) {
  M out = M::Identity(1, 1);
  for (std::size_t i = 0; i < amp.size(); ++i) {
    M q = M::Identity(2, 2);
    if (amp[i]) q = q * pauli_x();
    if (phase[i]) q = q * pauli_z();
    out = kron(out, q);
  }
  return out;
}

/// Same from bit masks; qubit 1 is bit n-1.
inline M pauli_string(std::uint64_t amp, std::uint64_t phase, std::size_t n) {
  std::vector<int> a(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<int>((amp >> (n - 1 - i)) & 1u);
    p[i] = static_cast<int>((phase >> (n - 1 - i)) & 1u);
  }
  return pauli_string(a, p);
}

/// Smallest t on a fine grid where f changes sign, refined by many bisections (reference root).
template <class F>
double scan_root(F f, double step, double limit) {
  double t0 = step, f0 = f(t0);
  for (double t1 = t0 + step; t1 <= limit; t1 += step) {
    const double f1 = f(t1);
    if ((f0 < 0) != (f1 < 0)) {
      double lo = t0, hi = t1;
      for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0) == (f0 < 0))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    t0 = t1;
    f0 = f1;
  }
  return -1.0;
}

}  // namespace oracle
