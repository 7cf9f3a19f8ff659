#pragma once

// Dense complex linear algebra for small Hermitian problems (dim <= 1024,
// in practice <= 32): Kronecker products, partial traces, a cyclic Jacobi
// eigensolver, von Neumann entropy and purity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhorizon {

using complexd = std::complex<double>;

// Error raised when a value violates an operation's stated preconditions
// (non-Hermitian input, negative eigenvalue beyond tolerance, ...).
class contract_error : public std::runtime_error {
 public:
  explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or dimension mismatch.
class dimension_error : public std::invalid_argument {
 public:
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// Optimizer / ensemble configuration problems.
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

struct Tolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double norm = 1e-10;
  double psd = 1e-10;
  double eig = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};
inline constexpr std::size_t kMaxTensorDim = 1024;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, complexd{}) {
    if (rows == 0 || cols == 0) throw dimension_error("matrix dimensions must be >= 1");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  complexd& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const complexd& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<complexd>& entries() const { return entries_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  complexd trace() const {
    if (rows_ != cols_) throw dimension_error("trace requires a square matrix");
    complexd t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
  }

  // max_ij |a_ij - conj(a_ji)|
  double hermiticity_defect() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  bool is_hermitian(double tol = kDefaultTolerances.hermiticity) const {
    return rows_ == cols_ && hermiticity_defect() <= tol;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix sum shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += b.entries_[k];
    return out;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix difference shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] -= b.entries_[k];
    return out;
  }

  friend ComplexMatrix operator*(const complexd& s, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& e : out.entries_) e *= s;
    return out;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw dimension_error("matrix product shape mismatch");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const complexd aik = a(i, k);
        if (aik == complexd{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complexd> entries_;
};

inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw dimension_error("comparison shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

// Normalized state vector. Construction rescales to unit norm, so the norm
// invariant holds for every live instance.
class Ket {
 public:
  explicit Ket(std::vector<complexd> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw dimension_error("ket must have dimension >= 1");
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (n2 < 1e-28) throw contract_error("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) a *= inv;
  }

  static Ket basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw dimension_error("basis index out of range");
    std::vector<complexd> v(dim, complexd{});
    v[index] = 1.0;
    return Ket(std::move(v));
  }

  std::size_t dim() const { return amps_.size(); }
  const complexd& operator[](std::size_t i) const { return amps_[i]; }
  const std::vector<complexd>& amplitudes() const { return amps_; }

  double norm() const {
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
  }

 private:
  std::vector<complexd> amps_;
};

// |psi><psi|
inline ComplexMatrix outer(const Ket& psi) {
  ComplexMatrix rho(psi.dim(), psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i)
    for (std::size_t j = 0; j < psi.dim(); ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return rho;
}

// Kronecker product; the row index of `a` is the slow (most significant) index.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                            std::size_t max_dim = kMaxTensorDim) {
  if (a.rows() > max_dim / b.rows() || a.cols() > max_dim / b.cols())
    throw dimension_error("tensor product exceeds maximum dimension " + std::to_string(max_dim));
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complexd aij = a(i, j);
      if (aij == complexd{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

// Partial trace of rho over the sites NOT listed in `keep`. Site 0 is the most
// significant tensor factor; the result carries the kept sites in the order
// given by `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
  if (rho.rows() != rho.cols()) throw dimension_error("partial_trace requires a square matrix");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw dimension_error("site dimension must be >= 1");
    total *= d;
  }
  if (total != rho.rows()) throw dimension_error("product of site dimensions does not match matrix size");
  if (keep.empty()) throw std::invalid_argument("keep list must not be empty");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t s : keep) {
    if (s >= dims.size()) throw std::invalid_argument("keep index out of range");
    if (kept[s]) throw std::invalid_argument("keep indices must be distinct");
    kept[s] = true;
  }

  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!kept[s]) traced.push_back(s);

  std::size_t kept_dim = 1;
  for (std::size_t s : keep) kept_dim *= dims[s];
  std::size_t env_dim = 1;
  for (std::size_t s : traced) env_dim *= dims[s];

  // Offset of a composite index into the full matrix, decomposed over `sites`.
  auto offset = [&](std::size_t composite, const std::vector<std::size_t>& sites) {
    std::size_t off = 0;
    for (std::size_t k = sites.size(); k-- > 0;) {
      const std::size_t s = sites[k];
      off += (composite % dims[s]) * stride[s];
      composite /= dims[s];
    }
    return off;
  };

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) {
    const std::size_t oi = offset(i, keep);
    for (std::size_t j = 0; j < kept_dim; ++j) {
      const std::size_t oj = offset(j, keep);
      complexd sum{};
      for (std::size_t e = 0; e < env_dim; ++e) {
        const std::size_t oe = offset(e, traced);
        sum += rho(oi + oe, oj + oe);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // orthonormal columns, column k <-> eigenvalues[k]
};

// Full spectral decomposition of a Hermitian matrix by cyclic Jacobi rotations.
// Deterministic: fixed sweep order, eigenvalues sorted descending (stable), and
// each eigenvector phased so its first component above 1e-12 is real positive.
inline Spectrum eigh(const ComplexMatrix& h, const Tolerances& tol = kDefaultTolerances) {
  if (h.rows() != h.cols()) throw dimension_error("eigh requires a square matrix");
  if (h.hermiticity_defect() > tol.hermiticity)
    throw contract_error("eigh requires a Hermitian matrix (defect " +
                         std::to_string(h.hermiticity_defect()) + ")");

  const std::size_t n = h.rows();
  ComplexMatrix a = h;
  // Symmetrize so roundoff in the input cannot bias the sweeps.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = complexd(a(i, i).real(), 0.0);
    for (std::size_t j = 0; j < i; ++j) {
      const complexd m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  const double stop = 1e-14 * scale;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off2 = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off2 += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off2) < stop) break;
    if (sweep == kMaxSweeps - 1) throw std::runtime_error("eigh: Jacobi sweep limit reached");

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complexd apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-300) continue;
        const complexd u = std::conj(apq) / g;  // phase that makes a(p,q)*u real

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const complexd arp = a(r, p);
          const complexd arq = a(r, q);
          a(r, p) = c * arp - (s * u) * arq;
          a(r, q) = (s * std::conj(u)) * arp + c * arq;
          a(p, r) = std::conj(a(r, p));
          a(q, r) = std::conj(a(r, q));
        }
        for (std::size_t r = 0; r < n; ++r) {
          const complexd vrp = v(r, p);
          const complexd vrq = v(r, q);
          v(r, p) = c * vrp - (s * u) * vrq;
          v(r, q) = (s * std::conj(u)) * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    spec.eigenvalues[k] = a(src, src).real();
    complexd phase = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) > 1e-12) {
        phase = std::conj(v(r, src)) / std::abs(v(r, src));
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) spec.eigenvectors(r, k) = v(r, src) * phase;
  }
  return spec;
}

// Throws contract_error unless rho is Hermitian, unit trace and PSD within tol.
inline void validate_density_operator(const ComplexMatrix& rho,
                                      const Tolerances& tol = kDefaultTolerances) {
  if (rho.rows() != rho.cols()) throw contract_error("density operator must be square");
  const double hd = rho.hermiticity_defect();
  if (hd > tol.hermiticity)
    throw contract_error("density operator not Hermitian (defect " + std::to_string(hd) + ")");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw contract_error("density operator trace " + std::to_string(tr) + " != 1");
  const Spectrum spec = eigh(rho, tol);
  if (spec.eigenvalues.back() < -tol.psd)
    throw contract_error("density operator has eigenvalue " +
                         std::to_string(spec.eigenvalues.back()) + " below -psd tolerance");
}

inline bool is_density_operator(const ComplexMatrix& rho,
                                const Tolerances& tol = kDefaultTolerances) {
  try {
    validate_density_operator(rho, tol);
    return true;
  } catch (const contract_error&) {
    return false;
  }
}

// tr(rho^2); for Hermitian rho this is the squared Frobenius norm.
inline double purity(const ComplexMatrix& rho, const Tolerances& tol = kDefaultTolerances) {
  validate_density_operator(rho, tol);
  double s = 0.0;
  for (const auto& e : rho.entries()) s += std::norm(e);
  return s;
}

// S(rho) = -sum lambda log2 lambda in bits, eigenvalues clamped to [0,1];
// negatives below -psd tolerance are contract errors, never silently clamped.
inline double von_neumann_entropy(const ComplexMatrix& rho,
                                  const Tolerances& tol = kDefaultTolerances) {
  validate_density_operator(rho, tol);
  const Spectrum spec = eigh(rho, tol);
  double s = 0.0;
  for (double lam : spec.eigenvalues) {
    const double x = std::clamp(lam, 0.0, 1.0);
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stable combination of two seeds into one stream id.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
}

}  // namespace detail

}  // namespace qhorizon
