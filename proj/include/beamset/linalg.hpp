#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "beamset/common.hpp"

namespace beamset {

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n)
      : n_(n), data_(n * n, std::complex<double>(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t n() const { return n_; }
  std::complex<double>& operator()(std::size_t i, std::size_t j) {
    return data_[i * n_ + j];
  }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  const std::vector<std::complex<double>>& data() const { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> data_;
};

using HermitianMatrix = ComplexMatrix;

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.n() != b.n()) throw numeric_error("matrix product: size mismatch");
  const std::size_t n = a.n();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const std::complex<double> aik = a(i, k);
      if (aik == std::complex<double>(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.n() != b.n()) throw numeric_error("matrix difference: size mismatch");
  ComplexMatrix c(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) c(i, j) = std::conj(a(j, i));
  return c;
}

// Operator infinity norm: maximum absolute row sum.
inline double matrix_inf_norm(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.n(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double max_abs_entry(const ComplexMatrix& a) {
  double best = 0.0;
  for (const auto& v : a.data()) best = std::max(best, std::abs(v));
  return best;
}

inline double hermitian_deviation(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      best = std::max(best, std::abs(a(i, j) - std::conj(a(j, i))));
  return best;
}

struct EighResult {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

// Cyclic complex Jacobi eigendecomposition for Hermitian matrices.  Each
// (p, q) entry is phased real with diag(1, e^{-i phi}) and annihilated with
// the classical symmetric rotation; sweeps run in a fixed order, so the
// result is deterministic.
inline EighResult eigh(const HermitianMatrix& input) {
  const std::size_t n = input.n();
  if (n == 0) throw numeric_error("eigh: empty matrix");
  const double scale = std::max(1.0, max_abs_entry(input));
  if (hermitian_deviation(input) > 1e-12 * scale)
    throw numeric_error("eigh: matrix is not Hermitian");

  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  const double stop = 1e-15 * scale * static_cast<double>(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= stop) break;
    if (sweep == 99) throw numeric_error("eigh: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double beta = std::abs(apq);
        if (beta <= 1e-300) continue;
        const std::complex<double> phase = apq / beta;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * beta);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns of the unitary: G(:,p) = (c, -s*conj(phase)),
        // G(:,q) = (s*phase, c) in the (p, q) plane.
        const std::complex<double> sp = s * phase;
        for (std::size_t r = 0; r < n; ++r) {  // A <- A G
          const std::complex<double> arp = a(r, p);
          const std::complex<double> arq = a(r, q);
          a(r, p) = c * arp - std::conj(sp) * arq;
          a(r, q) = sp * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {  // A <- G* A
          const std::complex<double> apr = a(p, r);
          const std::complex<double> aqr = a(q, r);
          a(p, r) = c * apr - sp * aqr;
          a(q, r) = std::conj(sp) * apr + c * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {  // V <- V G
          const std::complex<double> vrp = v(r, p);
          const std::complex<double> vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(sp) * vrq;
          v(r, q) = sp * vrp + c * vrq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = std::complex<double>(a(p, p).real(), 0.0);
        a(q, q) = std::complex<double>(a(q, q).real(), 0.0);
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

  EighResult res;
  res.values.resize(n);
  res.vectors = ComplexMatrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    res.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

class not_positive_definite : public numeric_error {
 public:
  explicit not_positive_definite(double eigenvalue)
      : numeric_error("matrix is not positive definite; smallest eigenvalue " +
                      detail::g17(eigenvalue)),
        eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_ = 0.0;
};

// E^{-1/2} through the eigendecomposition.  Rejects matrices whose smallest
// eigenvalue is at or below pd_tol.  The result is exactly Hermitian.
inline HermitianMatrix inv_sqrt_eigen(const HermitianMatrix& e,
                                      double pd_tol = 1e-12,
                                      double* min_eigenvalue = nullptr) {
  const EighResult eg = eigh(e);
  const double lam_min = eg.values.front();
  if (min_eigenvalue) *min_eigenvalue = lam_min;
  if (!(lam_min > pd_tol)) throw not_positive_definite(lam_min);
  const std::size_t n = e.n();
  HermitianMatrix f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::complex<double> s = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        s += eg.vectors(i, l) * std::conj(eg.vectors(j, l)) /
             std::sqrt(eg.values[l]);
      f(i, j) = s;
      f(j, i) = std::conj(s);
    }
  for (std::size_t i = 0; i < n; ++i)
    f(i, i) = std::complex<double>(f(i, i).real(), 0.0);
  return f;
}

struct SeriesResult {
  HermitianMatrix f;
  int terms = 0;          // highest power of B = E - I used
  double tail_bound = 0.0;
};

// E^{-1/2} as the binomial series I + sum_i binom(-1/2, i) B^i with
// B = E - I, valid for |||B||| < 1.  Coefficients follow the recurrence
// c_{i+1} = c_i (-1/2 - i) / (i + 1); the tail is bounded by the geometric
// envelope |c_i| b^i / (1 - b).
inline SeriesResult inv_sqrt_series(const HermitianMatrix& e,
                                    double tol = 1e-12, int max_terms = 1000) {
  const std::size_t n = e.n();
  if (n == 0) throw numeric_error("inv_sqrt_series: empty matrix");
  HermitianMatrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = e(i, j) - (i == j ? 1.0 : 0.0);
  const double bn = matrix_inf_norm(b);
  if (!(bn < 1.0))
    throw numeric_error("inv_sqrt_series: |||E - I||| = " + detail::g17(bn) +
                        " is not below 1");

  SeriesResult res;
  res.f = ComplexMatrix::identity(n);
  ComplexMatrix b_pow = b;
  double coef = -0.5;
  for (int i = 1; i <= max_terms; ++i) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) res.f(r, c) += coef * b_pow(r, c);
    res.terms = i;
    const double next_coef = coef * (-0.5 - i) / (i + 1.0);
    const double tail =
        std::abs(next_coef) * std::pow(bn, i + 1) / (1.0 - bn);
    res.tail_bound = tail;
    if (tail <= tol) break;
    if (i == max_terms)
      throw numeric_error("inv_sqrt_series: did not reach tolerance");
    b_pow = b_pow * b;
    coef = next_coef;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const std::complex<double> s =
          0.5 * (res.f(i, j) + std::conj(res.f(j, i)));
      res.f(i, j) = s;
      res.f(j, i) = std::conj(s);
    }
  return res;
}

// Text form: `# n=<n>` then one row per line of comma-joined re,im pairs
// separated by spaces.
inline void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << "# n=" << m.n() << "\n";
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j) os << " ";
      os << detail::g17(m(i, j).real()) << "," << detail::g17(m(i, j).imag());
    }
    os << "\n";
  }
}

inline ComplexMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# n=", 0) != 0)
    throw numeric_error("read_matrix: missing header line");
  const std::size_t n = std::stoul(line.substr(4));
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line))
      throw numeric_error("read_matrix: unexpected end of input");
    std::istringstream ls(line);
    std::string tok;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(ls >> tok)) throw numeric_error("read_matrix: short row");
      const auto comma = tok.find(',');
      if (comma == std::string::npos)
        throw numeric_error("read_matrix: entry is not a re,im pair");
      m(i, j) = {std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
    }
  }
  return m;
}

}  // namespace beamset
