#pragma once

// Shared generators for the test suites. Everything here is seeded and
// deterministic; nothing depends on the code paths under test beyond the
// basic matrix container.

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qhorizon/linalg.hpp"

namespace testsupport {

using qhorizon::ComplexMatrix;
using qhorizon::complexd;
using qhorizon::Ket;

inline qhorizon::Ket random_ket(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<complexd> amps(dim);
  for (auto& a : amps) a = complexd(gauss(rng), gauss(rng));
  return Ket(std::move(amps));
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = gauss(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const complexd v(gauss(rng), gauss(rng));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

// Ginibre construction: rho = G G^dagger / tr(G G^dagger), PSD and unit trace
// by construction, rank = min(dim, rank).
inline ComplexMatrix random_density(std::size_t dim, std::size_t rank, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<complexd>> g(dim, std::vector<complexd>(rank));
  for (auto& row : g)
    for (auto& v : row) v = complexd(gauss(rng), gauss(rng));
  ComplexMatrix rho(dim, dim);
  double trace = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      complexd s{};
      for (std::size_t k = 0; k < rank; ++k) s += g[i][k] * std::conj(g[j][k]);
      rho(i, j) = s;
    }
    trace += rho(i, i).real();
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) rho(i, j) /= trace;
  return rho;
}

struct ParamSample {
  double alpha;
  double omega;
  double th;
};

// alpha uniform in [0,1]; omega and T_H log-uniform over the figure ranges.
inline ParamSample random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double alpha = uni(rng);
  const double omega = std::exp(std::log(0.1) + uni(rng) * (std::log(10.0) - std::log(0.1)));
  const double th = std::exp(std::log(0.01) + uni(rng) * (std::log(100.0) - std::log(0.01)));
  return {alpha, omega, th};
}

}  // namespace testsupport
