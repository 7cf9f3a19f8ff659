#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qhorizon/horizon.hpp"
#include "qhorizon/linalg.hpp"
#include "test_support.hpp"

using namespace qhorizon;
using testsupport::random_density;
using testsupport::random_hermitian;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix basis_projector(std::size_t dim, std::size_t k) {
  ComplexMatrix m(dim, dim);
  m(k, k) = 1.0;
  return m;
}

Ket bell_phi_plus() {
  return Ket({1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)});
}

}  // namespace

TEST_CASE("tensor: identities, basis bookkeeping, bit flips", "[linalg]") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const ComplexMatrix i4 = tensor(i2, i2);
  CHECK(max_abs_difference(i4, ComplexMatrix::identity(4)) == 0.0);

  // |0><0| (x) |1><1| = diag(0,1,0,0) in the {00,01,10,11} basis.
  const ComplexMatrix p = tensor(basis_projector(2, 0), basis_projector(2, 1));
  CHECK(max_abs_difference(p, ComplexMatrix::diagonal({0.0, 1.0, 0.0, 0.0})) == 0.0);

  // (sigma_x (x) sigma_x) |00> = |11>
  const ComplexMatrix xx = tensor(pauli_x(), pauli_x());
  const ComplexMatrix ket00 = outer(Ket::basis_state(4, 0));
  const ComplexMatrix flipped = xx * ket00 * xx.adjoint();
  CHECK(max_abs_difference(flipped, basis_projector(4, 3)) < 1e-15);
}

TEST_CASE("tensor: associativity up to reindexing", "[linalg]") {
  // Exactly representable entries make the scalar products exact, so the
  // regrouped Kronecker products agree bitwise.
  std::mt19937_64 rng(7001);
  auto small_int_matrix = [&](std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        m(i, j) = complexd(static_cast<double>(static_cast<int>(rng() % 7)) - 3.0,
                           static_cast<double>(static_cast<int>(rng() % 7)) - 3.0);
    return m;
  };
  const ComplexMatrix a = small_int_matrix(2);
  const ComplexMatrix b = small_int_matrix(3);
  const ComplexMatrix c = small_int_matrix(2);
  CHECK(max_abs_difference(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) == 0.0);

  // General entries agree to roundoff.
  const ComplexMatrix x = random_hermitian(2, rng);
  const ComplexMatrix y = random_hermitian(3, rng);
  const ComplexMatrix z = random_hermitian(2, rng);
  CHECK(max_abs_difference(tensor(tensor(x, y), z), tensor(x, tensor(y, z))) < 1e-14);
}

TEST_CASE("tensor: dimension cap", "[linalg]") {
  const ComplexMatrix big = ComplexMatrix::identity(64);
  CHECK_THROWS_AS(tensor(big, ComplexMatrix::identity(32)), dimension_error);
  CHECK_NOTHROW(tensor(big, ComplexMatrix::identity(16)));
}

TEST_CASE("partial_trace: Bell marginals and product states", "[linalg]") {
  const ComplexMatrix bell = outer(bell_phi_plus());
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  CHECK(max_abs_difference(partial_trace(bell, {2, 2}, {0}), half) < 1e-15);
  CHECK(max_abs_difference(partial_trace(bell, {2, 2}, {1}), half) < 1e-15);

  std::mt19937_64 rng(7002);
  const ComplexMatrix rho_a = random_density(2, 2, rng);
  const ComplexMatrix rho_b = random_density(3, 3, rng);
  CHECK(max_abs_difference(partial_trace(tensor(rho_a, rho_b), {2, 3}, {0}), rho_a) < 1e-14);
  CHECK(max_abs_difference(partial_trace(tensor(rho_a, rho_b), {2, 3}, {1}), rho_b) < 1e-14);
}

TEST_CASE("partial_trace: keep ordering follows the keep list", "[linalg]") {
  std::mt19937_64 rng(7003);
  const ComplexMatrix rho_a = random_density(2, 2, rng);
  const ComplexMatrix rho_b = random_density(2, 2, rng);
  const ComplexMatrix joint = tensor(rho_a, rho_b);
  // keep {1,0} swaps the factors.
  const ComplexMatrix swapped = partial_trace(tensor(joint, random_density(2, 2, rng)), {2, 2, 2}, {1, 0});
  CHECK(max_abs_difference(swapped, tensor(rho_b, rho_a)) < 1e-14);
}

TEST_CASE("partial_trace: two-step reduction equals one-step", "[linalg]") {
  std::mt19937_64 rng(7004);
  const ComplexMatrix rho = random_density(16, 16, rng);
  const ComplexMatrix direct = partial_trace(rho, {2, 2, 2, 2}, {1, 3});
  const ComplexMatrix first = partial_trace(rho, {2, 2, 2, 2}, {1, 2, 3});
  const ComplexMatrix second = partial_trace(first, {2, 2, 2}, {0, 2});
  CHECK(max_abs_difference(direct, second) < 1e-13);
  // Tracing everything out returns the scalar trace.
  const ComplexMatrix full = partial_trace(rho, {16}, {0});
  CHECK(std::abs(full.trace().real() - 1.0) < 1e-13);
  CHECK(std::abs(direct.trace().real() - rho.trace().real()) < 1e-13);
}

TEST_CASE("partial_trace: shape and argument errors", "[linalg]") {
  const ComplexMatrix rho = ComplexMatrix::identity(4);
  CHECK_THROWS_AS(partial_trace(rho, {2, 3}, {0}), dimension_error);
  CHECK_THROWS_AS(partial_trace(rho, {2, 2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {2, 2}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {2, 2}, {2}), std::invalid_argument);
}

TEST_CASE("eigh: fixed two-by-two cases", "[linalg]") {
  const Spectrum half = eigh(0.5 * ComplexMatrix::identity(2));
  CHECK(half.eigenvalues[0] == Catch::Approx(0.5).margin(1e-15));
  CHECK(half.eigenvalues[1] == Catch::Approx(0.5).margin(1e-15));

  const Spectrum sx = eigh(pauli_x());
  CHECK(sx.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(sx.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-14));
  // Eigenvectors are |+>, |-> up to phase; phase fixing makes row 0 real positive.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sx.eigenvectors(0, 0) - inv_sqrt2) < 1e-14);
  CHECK(std::abs(std::abs(sx.eigenvectors(1, 0)) - inv_sqrt2) < 1e-14);
}

TEST_CASE("eigh: horizon-state spectrum matches the closed-form oracle", "[linalg]") {
  // rho_ABC at alpha=0.6, omega=1, T_H=1 is diagonal except for one coherent
  // 2x2 block on {|000>,|111>}; its characteristic polynomial is solvable by
  // hand and the remaining eigenvalues are read off the diagonal.
  const HorizonParams p = derive_coefficients(0.6, 1.0, 1.0);
  const double tm2 = p.theta_minus * p.theta_minus;
  const double tp2 = p.theta_plus * p.theta_plus;
  const double g2 = p.gamma * p.gamma;
  const double u2 = p.upsilon * p.upsilon;

  ComplexMatrix rho = ComplexMatrix::diagonal({tm2, g2, g2, tp2, 0.0, 0.0, 0.0, u2});
  rho(0, 7) = p.upsilon * p.theta_minus;
  rho(7, 0) = p.upsilon * p.theta_minus;

  // Oracle: quadratic formula on the block [[tm2, ut],[ut, u2]].
  const double mean = 0.5 * (tm2 + u2);
  const double disc = std::sqrt(0.25 * (tm2 - u2) * (tm2 - u2) +
                                (p.upsilon * p.theta_minus) * (p.upsilon * p.theta_minus));
  std::vector<double> expected = {mean + disc, tp2, g2, g2, mean - disc, 0.0, 0.0, 0.0};
  std::sort(expected.begin(), expected.end(), std::greater<>());
  // Frozen from the oracle: the coherent block is rank one.
  CHECK(expected[0] == Catch::Approx(0.83240079233986829).margin(1e-14));

  const Spectrum spec = eigh(rho);
  REQUIRE(spec.eigenvalues.size() == 8);
  for (std::size_t k = 0; k < 8; ++k)
    CHECK(spec.eigenvalues[k] == Catch::Approx(expected[k]).margin(1e-10));
}

TEST_CASE("eigh: reconstruction and orthonormality on random Hermitian inputs", "[linalg]") {
  std::mt19937_64 rng(7005);
  for (std::size_t dim : {2, 3, 5, 8, 17, 32}) {
    const ComplexMatrix h = random_hermitian(dim, rng);
    const Spectrum spec = eigh(h);

    ComplexMatrix scaled = spec.eigenvectors;  // V diag(lambda)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t i = 0; i < dim; ++i) scaled(i, j) *= spec.eigenvalues[j];
    const ComplexMatrix rebuilt = scaled * spec.eigenvectors.adjoint();
    CHECK(max_abs_difference(rebuilt, h) < 1e-10);

    const ComplexMatrix gram = spec.eigenvectors.adjoint() * spec.eigenvectors;
    CHECK(max_abs_difference(gram, ComplexMatrix::identity(dim)) < 1e-10);

    for (std::size_t k = 1; k < dim; ++k) CHECK(spec.eigenvalues[k - 1] >= spec.eigenvalues[k]);
  }
}

TEST_CASE("eigh: deterministic output and Hermiticity contract", "[linalg]") {
  std::mt19937_64 rng(7006);
  const ComplexMatrix h = random_hermitian(12, rng);
  const Spectrum a = eigh(h);
  const Spectrum b = eigh(h);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(max_abs_difference(a.eigenvectors, b.eigenvectors) == 0.0);

  ComplexMatrix bad = h;
  bad(0, 1) += complexd(0.0, 1e-3);
  CHECK_THROWS_AS(eigh(bad), contract_error);
}

TEST_CASE("von Neumann entropy: pure, maximally mixed, binary", "[linalg]") {
  CHECK(von_neumann_entropy(basis_projector(2, 0)) == Catch::Approx(0.0).margin(1e-12));
  CHECK(von_neumann_entropy(0.5 * ComplexMatrix::identity(2)) == Catch::Approx(1.0).margin(1e-12));
  // Oracle: h(0.36) = -0.36 log2 0.36 - 0.64 log2 0.64.
  const double expected = -(0.36 * std::log2(0.36) + 0.64 * std::log2(0.64));
  CHECK(expected == Catch::Approx(0.9426831892554922).margin(1e-15));
  CHECK(von_neumann_entropy(ComplexMatrix::diagonal({0.36, 0.64})) ==
        Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("entropy bounds and density-operator contracts on random states", "[linalg]") {
  std::mt19937_64 rng(7007);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng() % 7);
    const std::size_t rank = 1 + static_cast<std::size_t>(rng() % dim);
    const ComplexMatrix rho = random_density(dim, rank, rng);

    CHECK(rho.hermiticity_defect() < 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    const Spectrum spec = eigh(rho);
    CHECK(spec.eigenvalues.back() > -1e-10);

    const double s = von_neumann_entropy(rho);
    CHECK(s >= 0.0);
    CHECK(s <= std::log2(static_cast<double>(dim)) + 1e-12);
  }
}

TEST_CASE("entropy rejects invalid density operators", "[linalg]") {
  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::diagonal({0.7, 0.7})), contract_error);
  CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix::diagonal({1.5, -0.5})), contract_error);
  CHECK_THROWS_AS(von_neumann_entropy(pauli_x()), contract_error);
}

TEST_CASE("purity: pure, mixed, frozen example", "[linalg]") {
  CHECK(purity(basis_projector(2, 0)) == Catch::Approx(1.0).margin(1e-12));
  CHECK(purity(0.5 * ComplexMatrix::identity(2)) == Catch::Approx(0.5).margin(1e-12));
  // 0.36^2 + 0.64^2
  CHECK(purity(ComplexMatrix::diagonal({0.36, 0.64})) == Catch::Approx(0.5392).margin(1e-14));
}

TEST_CASE("ket normalization", "[linalg]") {
  const Ket k({complexd(3.0, 0.0), complexd(0.0, 4.0)});
  CHECK(std::abs(k.norm() - 1.0) < 1e-12);
  CHECK(std::abs(k[0] - complexd(0.6, 0.0)) < 1e-12);
  CHECK_THROWS_AS(Ket({complexd{}, complexd{}}), contract_error);
}
