#pragma once

// Quantifiers over three-qubit states: l1-norm coherence, first-order
// coherence, one-vs-rest concurrences, concurrence fill and global
// concurrence (pure formula plus a convex-roof optimizer for mixed states),
// and bipartite mutual information.

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qhorizon/horizon.hpp"
#include "qhorizon/linalg.hpp"

namespace qhorizon {

// Sum of absolute off-diagonal entries in the computational basis.
inline double qc_l1(const ComplexMatrix& rho, const Tolerances& tol = kDefaultTolerances) {
  validate_density_operator(rho, tol);
  double s = 0.0;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j)
      if (i != j) s += std::abs(rho(i, j));
  return s;
}

// D(rho) = sqrt(2 tr(rho^2) - 1), the Bloch-vector length of a single qubit.
inline double foc_single(const ComplexMatrix& rho_qubit, const Tolerances& tol = kDefaultTolerances) {
  if (rho_qubit.rows() != 2 || rho_qubit.cols() != 2)
    throw std::invalid_argument("foc_single expects a 2x2 density operator");
  validate_density_operator(rho_qubit, tol);
  double p = 0.0;
  for (const auto& e : rho_qubit.entries()) p += std::norm(e);
  double radicand = 2.0 * p - 1.0;
  if (radicand < -1e-9) throw contract_error("qubit purity below 1/2 beyond tolerance");
  radicand = std::max(radicand, 0.0);
  double d = std::sqrt(radicand);
  if (d > 1.0 + 1e-9) throw contract_error("qubit Bloch length above 1 beyond tolerance");
  return std::min(d, 1.0);
}

// Root-mean-square of the three single-site Bloch lengths.
inline double foc_tripartite(const ComplexMatrix& rho3, const Tolerances& tol = kDefaultTolerances) {
  if (rho3.rows() != 8 || rho3.cols() != 8)
    throw std::invalid_argument("foc_tripartite expects an 8x8 density operator");
  validate_density_operator(rho3, tol);
  double sum = 0.0;
  for (std::size_t site = 0; site < 3; ++site) {
    const double d = foc_single(partial_trace(rho3, {2, 2, 2}, {site}), tol);
    sum += d * d;
  }
  return std::min(std::sqrt(sum / 3.0), 1.0);
}

namespace detail {

// Window for Heron factors driven negative by floating-point noise at
// triangle-degenerate points; larger violations are contract errors.
inline constexpr double kHeronClamp = 1e-12;

// Squared one-vs-rest concurrences C^2 = 4 det(rho_site) of a possibly
// unnormalized three-qubit amplitude vector with weight p = |psi|^2.
// Site 0 is the most significant bit.
inline std::array<double, 3> concurrence_squares_unnormalized(const std::array<complexd, 8>& a,
                                                              double p) {
  std::array<double, 3> c2{};
  static constexpr std::array<std::array<std::size_t, 4>, 3> zeros = {{
      {0, 1, 2, 3},  // site 0: bit value 4
      {0, 1, 4, 5},  // site 1: bit value 2
      {0, 2, 4, 6},  // site 2: bit value 1
  }};
  static constexpr std::array<std::size_t, 3> steps = {4, 2, 1};
  for (std::size_t s = 0; s < 3; ++s) {
    double d00 = 0.0;
    complexd d01{};
    for (std::size_t k : zeros[s]) {
      d00 += std::norm(a[k]);
      d01 += a[k] * std::conj(a[k + steps[s]]);
    }
    const double det = std::max(0.0, d00 * (p - d00) - std::norm(d01));
    c2[s] = 4.0 * det / (p * p);
  }
  return c2;
}

// Heron-style fill from squared concurrences; clamps tiny negative factors
// and rejects genuine triangle-inequality violations.
inline double fill_from_squares(const std::array<double, 3>& c2) {
  const double q = 0.5 * (c2[0] + c2[1] + c2[2]);
  double product = q;
  for (double c : c2) {
    double factor = q - c;
    if (factor < -kHeronClamp)
      throw contract_error("concurrence triangle inequality violated by " + std::to_string(-factor));
    product *= std::max(factor, 0.0);
  }
  return std::pow(std::max(product, 0.0) * 16.0 / 3.0, 0.25);
}

inline std::array<complexd, 8> ket_amplitudes3(const Ket& psi, const Tolerances& tol) {
  if (psi.dim() != 8) throw std::invalid_argument("expected a three-qubit pure state");
  if (std::abs(psi.norm() - 1.0) > tol.norm) throw contract_error("state vector is not normalized");
  std::array<complexd, 8> a{};
  for (std::size_t i = 0; i < 8; ++i) a[i] = psi[i];
  return a;
}

}  // namespace detail

// C^2 values (C_{x(yz)}, C_{y(zx)}, C_{z(xy)}) of a pure tripartite state.
inline std::array<double, 3> concurrence_squares(const Ket& psi,
                                                 const Tolerances& tol = kDefaultTolerances) {
  return detail::concurrence_squares_unnormalized(detail::ket_amplitudes3(psi, tol), 1.0);
}

// C_{i(jk)} = 2 sqrt(det rho_i) for a pure tripartite state.
inline double concurrence_one_vs_rest(const Ket& psi, std::size_t site,
                                      const Tolerances& tol = kDefaultTolerances) {
  if (site >= 3) throw std::invalid_argument("site index must be 0, 1 or 2");
  return std::sqrt(concurrence_squares(psi, tol)[site]);
}

// Half-perimeter of the concurrence triangle (global concurrence).
inline double gc_pure(const Ket& psi, const Tolerances& tol = kDefaultTolerances) {
  const auto c2 = concurrence_squares(psi, tol);
  return 0.5 * (c2[0] + c2[1] + c2[2]);
}

// Concurrence fill: normalized square root of the triangle area.
inline double cf_pure(const Ket& psi, const Tolerances& tol = kDefaultTolerances) {
  return detail::fill_from_squares(concurrence_squares(psi, tol));
}

enum class RoofObjective { ConcurrenceFill, GlobalConcurrence };

struct RoofConfig {
  std::size_t ensemble_size = 0;      // decomposition cardinality m; 0 = rank+2 capped at 8
  int restarts = 32;
  int max_iters = 2000;               // objective evaluations per restart
  double step_tolerance = 1e-9;
  double objective_tolerance = 1e-12; // early-exit floor
  std::uint64_t rng_seed = 12345;
};

struct RoofDiagnostics {
  int restarts_used = 0;
  double best = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

struct RoofOutcome {
  double value = std::numeric_limits<double>::quiet_NaN();
  RoofDiagnostics diag;
};

namespace detail {

// Ensemble-average objective over the Schroedinger-HJW family: decompositions
// |psi_i~> = sum_j U_ij sqrt(lambda_j) |e_j> with U an m x r isometry obtained
// by orthonormalizing an unconstrained complex matrix.
class RoofProblem {
 public:
  RoofProblem(std::vector<std::array<complexd, 8>> scaled_eigvecs, std::size_t ensemble,
              RoofObjective objective)
      : w_(std::move(scaled_eigvecs)), m_(ensemble), obj_(objective) {}

  std::size_t rank() const { return w_.size(); }
  std::size_t ensemble() const { return m_; }
  std::size_t parameter_count() const { return 2 * m_ * w_.size(); }

  double operator()(const std::vector<double>& x) const {
    const std::size_t r = w_.size();
    std::vector<complexd> u(m_ * r);
    for (std::size_t t = 0; t < u.size(); ++t) u[t] = complexd(x[2 * t], x[2 * t + 1]);
    orthonormalize_columns(u);

    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      std::array<complexd, 8> psi{};
      for (std::size_t j = 0; j < r; ++j) {
        const complexd cij = u[i * r + j];
        if (cij == complexd{}) continue;
        for (std::size_t d = 0; d < 8; ++d) psi[d] += cij * w_[j][d];
      }
      double p = 0.0;
      for (const auto& amp : psi) p += std::norm(amp);
      if (p < 1e-12) continue;
      const auto c2 = concurrence_squares_unnormalized(psi, p);
      if (obj_ == RoofObjective::GlobalConcurrence)
        total += p * 0.5 * (c2[0] + c2[1] + c2[2]);
      else
        total += p * fill_from_squares(c2);
    }
    return total;
  }

  // Start at the eigen-ensemble itself: U = [I_r; 0].
  std::vector<double> identity_start() const {
    std::vector<double> x(parameter_count(), 0.0);
    for (std::size_t j = 0; j < w_.size(); ++j) x[2 * (j * w_.size() + j)] = 1.0;
    return x;
  }

  std::vector<double> random_start(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(parameter_count());
    for (auto& v : x) v = gauss(rng);
    return x;
  }

 private:
  // Modified Gram-Schmidt with re-orthogonalization; rank-deficient columns
  // fall back deterministically to canonical basis vectors.
  void orthonormalize_columns(std::vector<complexd>& u) const {
    const std::size_t r = w_.size();
    auto project_out_previous = [&](std::size_t j) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          complexd dot{};
          for (std::size_t i = 0; i < m_; ++i) dot += std::conj(u[i * r + k]) * u[i * r + j];
          for (std::size_t i = 0; i < m_; ++i) u[i * r + j] -= dot * u[i * r + k];
        }
      }
      double n2 = 0.0;
      for (std::size_t i = 0; i < m_; ++i) n2 += std::norm(u[i * r + j]);
      return std::sqrt(n2);
    };
    for (std::size_t j = 0; j < r; ++j) {
      double n = project_out_previous(j);
      for (std::size_t fallback = 0; n < 1e-10 && fallback < m_; ++fallback) {
        for (std::size_t i = 0; i < m_; ++i) u[i * r + j] = (i == (j + fallback) % m_) ? 1.0 : 0.0;
        n = project_out_previous(j);
      }
      if (n < 1e-10) throw std::runtime_error("isometry orthonormalization failed");
      const double inv = 1.0 / n;
      for (std::size_t i = 0; i < m_; ++i) u[i * r + j] *= inv;
    }
  }

  std::vector<std::array<complexd, 8>> w_;
  std::size_t m_;
  RoofObjective obj_;
};

struct CompassResult {
  double value = 0.0;
  bool converged = false;
  int evals = 0;
};

// Coordinate-wise compass search with a globally shrinking step. Opportunistic
// moves keep the sweep order fixed, so the trajectory is deterministic.
inline CompassResult compass_minimize(const RoofProblem& problem, std::vector<double> x,
                                      int max_evals, double step_tol, double obj_tol) {
  CompassResult res;
  double f = problem(x);
  res.evals = 1;
  double step = 0.5;
  while (res.evals < max_evals && step > step_tol && f > obj_tol) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size() && res.evals < max_evals; ++k) {
      const double orig = x[k];
      x[k] = orig + step;
      double trial = problem(x);
      ++res.evals;
      if (trial < f) {
        f = trial;
        improved = true;
        continue;
      }
      if (res.evals >= max_evals) {
        x[k] = orig;
        break;
      }
      x[k] = orig - step;
      trial = problem(x);
      ++res.evals;
      if (trial < f) {
        f = trial;
        improved = true;
        continue;
      }
      x[k] = orig;
    }
    if (!improved) step *= 0.5;
  }
  res.value = f;
  res.converged = (step <= step_tol) || (f <= obj_tol);
  return res;
}

}  // namespace detail

// Best found ensemble-average of the pure-state objective over decompositions
// rho = sum_i p_i |psi_i><psi_i| of cardinality m. The result is an UPPER
// BOUND on the true convex roof, deterministic for a fixed rng_seed; restart i
// draws its stream from (rng_seed, i), with restart 0 starting at the
// eigen-decomposition itself.
inline RoofOutcome convex_roof(const ComplexMatrix& rho3, RoofObjective objective,
                               const RoofConfig& cfg, const Tolerances& tol = kDefaultTolerances) {
  if (rho3.rows() != 8 || rho3.cols() != 8)
    throw std::invalid_argument("convex_roof expects an 8x8 density operator");
  validate_density_operator(rho3, tol);
  if (cfg.restarts < 1) throw config_error("roof restarts must be >= 1");
  if (cfg.max_iters < 1) throw config_error("roof max_iters must be >= 1");

  const Spectrum spec = eigh(rho3, tol);
  std::vector<std::array<complexd, 8>> scaled;
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const double lam = spec.eigenvalues[k];
    if (lam < 1e-12) continue;  // drop numerically-zero weight
    std::array<complexd, 8> w{};
    const double root = std::sqrt(lam);
    for (std::size_t d = 0; d < 8; ++d) w[d] = root * spec.eigenvectors(d, k);
    scaled.push_back(w);
  }
  const std::size_t rank = scaled.size();
  const std::size_t m = cfg.ensemble_size == 0 ? std::min<std::size_t>(rank + 2, 8) : cfg.ensemble_size;
  if (m < rank) throw config_error("ensemble size " + std::to_string(m) +
                                   " is below the state rank " + std::to_string(rank));

  RoofOutcome out;
  if (rank == 1) {
    // The only decomposition is the eigenstate itself.
    double p = 0.0;
    for (const auto& amp : scaled[0]) p += std::norm(amp);
    const auto c2 = detail::concurrence_squares_unnormalized(scaled[0], p);
    out.value = objective == RoofObjective::GlobalConcurrence
                    ? 0.5 * (c2[0] + c2[1] + c2[2])
                    : detail::fill_from_squares(c2);
    out.diag = {0, out.value, out.value, true};
    return out;
  }

  const detail::RoofProblem problem(std::move(scaled), m, objective);
  double best = std::numeric_limits<double>::infinity();
  bool converged_any = false;
  std::vector<double> restart_values;
  for (int i = 0; i < cfg.restarts; ++i) {
    if (best <= cfg.objective_tolerance) break;
    const auto start = (i == 0) ? problem.identity_start()
                                : problem.random_start(detail::mix64(cfg.rng_seed, static_cast<std::uint64_t>(i)));
    const auto res = detail::compass_minimize(problem, start, cfg.max_iters, cfg.step_tolerance,
                                              cfg.objective_tolerance);
    restart_values.push_back(res.value);
    converged_any = converged_any || res.converged;
    best = std::min(best, res.value);
  }

  std::vector<double> sorted = restart_values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  out.value = best;
  out.diag.restarts_used = static_cast<int>(n);
  out.diag.best = best;
  out.diag.median = median;
  out.diag.converged = converged_any || best <= cfg.objective_tolerance;
  return out;
}

// I(X:Y) = S(rho_X) + S(rho_Y) - S(rho_XY) in bits, clamped at zero.
inline double mutual_information(const ComplexMatrix& rho_pair,
                                 const Tolerances& tol = kDefaultTolerances) {
  if (rho_pair.rows() != 4 || rho_pair.cols() != 4)
    throw std::invalid_argument("mutual_information expects a 4x4 density operator");
  validate_density_operator(rho_pair, tol);
  const double s_xy = von_neumann_entropy(rho_pair, tol);
  const double s_x = von_neumann_entropy(partial_trace(rho_pair, {2, 2}, {0}), tol);
  const double s_y = von_neumann_entropy(partial_trace(rho_pair, {2, 2}, {1}), tol);
  const double info = s_x + s_y - s_xy;
  if (info < -1e-9) throw contract_error("mutual information negative beyond tolerance");
  return std::max(info, 0.0);
}

struct MeasureSelection {
  bool qc = false;
  bool foc = false;
  bool gc = false;
  bool cf = false;
  bool tradeoff = false;
  bool mi = false;

  static MeasureSelection all() { return {true, true, true, true, true, true}; }
};

// All measure values for one (scenario, parameter point). CF and GC for mixed
// states are convex-roof upper bounds; see the attached diagnostics.
struct MeasureReport {
  double qc = std::numeric_limits<double>::quiet_NaN();
  double foc = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 3> concurrences{std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN()};
  double gc = std::numeric_limits<double>::quiet_NaN();
  double cf = std::numeric_limits<double>::quiet_NaN();
  double tradeoff = std::numeric_limits<double>::quiet_NaN();  // foc^2 + cf
  std::vector<std::pair<std::string, double>> mutual_info;     // ("I_AB", bits)
  RoofDiagnostics cf_diag;
  RoofDiagnostics gc_diag;
};

// Evaluates the selected measures on the scenario reduction of the five-qubit
// state at parameter point p. CF and GC roofs draw distinct streams derived
// from cfg.rng_seed.
inline MeasureReport evaluate_point(const HorizonParams& p, const Scenario& scenario,
                                    const RoofConfig& cfg,
                                    const MeasureSelection& sel = MeasureSelection::all(),
                                    const Tolerances& tol = kDefaultTolerances) {
  if (scenario.sites.size() != 3)
    throw std::invalid_argument("measure evaluation requires a three-site scenario");

  const Ket psi = build_pentapartite_state(p);
  MeasureReport rep;

  const bool need_cf = sel.cf || sel.tradeoff;
  const bool need_foc = sel.foc || sel.tradeoff;
  if (sel.qc || need_foc || need_cf || sel.gc) {
    const ComplexMatrix rho = reduce_to_scenario(psi, scenario);
    for (std::size_t site = 0; site < 3; ++site) {
      const ComplexMatrix marg = partial_trace(rho, {2, 2, 2}, {site});
      const double det = std::max(0.0, (marg(0, 0) * marg(1, 1) - marg(0, 1) * marg(1, 0)).real());
      rep.concurrences[site] = 2.0 * std::sqrt(det);
    }
    if (sel.qc) rep.qc = qc_l1(rho, tol);
    if (need_foc) rep.foc = foc_tripartite(rho, tol);
    if (need_cf) {
      RoofConfig cf_cfg = cfg;
      cf_cfg.rng_seed = detail::mix64(cfg.rng_seed, 0xCFull);
      const RoofOutcome r = convex_roof(rho, RoofObjective::ConcurrenceFill, cf_cfg, tol);
      rep.cf = r.value;
      rep.cf_diag = r.diag;
    }
    if (sel.gc) {
      RoofConfig gc_cfg = cfg;
      gc_cfg.rng_seed = detail::mix64(cfg.rng_seed, 0x9Cull);
      const RoofOutcome r = convex_roof(rho, RoofObjective::GlobalConcurrence, gc_cfg, tol);
      rep.gc = r.value;
      rep.gc_diag = r.diag;
    }
    if (sel.tradeoff) rep.tradeoff = rep.foc * rep.foc + rep.cf;
  }

  if (sel.mi) {
    for (const SubsetSelector& pair : mutual_information_pairs(scenario)) {
      const ComplexMatrix rho_pair = reduce_to_subset(psi, pair);
      rep.mutual_info.emplace_back("I_" + subset_label(pair), mutual_information(rho_pair, tol));
    }
  }
  return rep;
}

}  // namespace qhorizon
