#pragma once

// Physical state construction: Kruskal-basis coefficients from
// (alpha, omega, T_H), the five-qubit pure state shared across the horizon,
// reductions to observer subsets, and the closed-form one/two-qubit states
// used as an independent oracle.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qhorizon/linalg.hpp"

namespace qhorizon {

// Global ordering (A, b, B, c, C): Alice, anti-Bob, Bob, anti-Charlie,
// Charlie. Site 0 (A) is the most significant tensor factor, so
// |0_A 1_b 1_B 1_c 1_C> has index 0b01111.
enum class Subsystem : std::uint8_t { A = 0, b = 1, B = 2, c = 3, C = 4 };

using SubsetSelector = std::vector<Subsystem>;

inline char subsystem_label(Subsystem s) {
  constexpr std::array<char, 5> labels{'A', 'b', 'B', 'c', 'C'};
  return labels[static_cast<std::size_t>(s)];
}

inline std::optional<Subsystem> subsystem_from_label(char c) {
  switch (c) {
    case 'A': return Subsystem::A;
    case 'b': return Subsystem::b;
    case 'B': return Subsystem::B;
    case 'c': return Subsystem::c;
    case 'C': return Subsystem::C;
    default: return std::nullopt;
  }
}

inline std::string subset_label(const SubsetSelector& subset) {
  std::string s;
  for (Subsystem sub : subset) s += subsystem_label(sub);
  return s;
}

// Returns the subset sorted into the global (A, b, B, c, C) order; throws on
// duplicates or an empty/oversized selection.
inline SubsetSelector normalize_subset(SubsetSelector subset) {
  if (subset.empty() || subset.size() > 5)
    throw std::invalid_argument("subset must select between 1 and 5 subsystems");
  std::sort(subset.begin(), subset.end());
  for (std::size_t i = 1; i < subset.size(); ++i)
    if (subset[i] == subset[i - 1]) throw std::invalid_argument("subset selectors must be duplicate-free");
  return subset;
}

struct HorizonParams {
  double alpha = 0.0;      // state parameter, 0 <= alpha <= 1
  double omega = 1.0;      // mode frequency (natural units)
  double t_hawking = 1.0;  // Hawking temperature (natural units)

  // Derived, all real and non-negative.
  double s_plus = 0.0;       // (e^{+omega/T_H} + 1)^{-1/2}
  double s_minus = 0.0;      // (e^{-omega/T_H} + 1)^{-1/2}
  double theta_plus = 0.0;   // alpha * s_plus^2
  double theta_minus = 0.0;  // alpha * s_minus^2
  double gamma = 0.0;        // alpha * s_plus * s_minus
  double upsilon = 0.0;      // sqrt(1 - alpha^2)
};

// T_H = 1 / (8 pi M)
inline double hawking_temperature_from_mass(double mass) {
  if (!(mass > 0.0)) throw std::domain_error("black-hole mass must be positive");
  return 1.0 / (8.0 * std::acos(-1.0) * mass);
}

// Populates all derived coefficients. The exponentials are evaluated in
// overflow-free form, so omega/T_H large enough to underflow e^{-omega/T_H}
// quietly drives s_plus (and with it theta_plus, gamma) to zero.
inline HorizonParams derive_coefficients(double alpha, double omega, double t_hawking) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  if (!(omega > 0.0)) throw std::domain_error("omega must be positive");
  if (!(t_hawking > 0.0)) throw std::domain_error("t_hawking must be positive");

  HorizonParams p;
  p.alpha = alpha;
  p.omega = omega;
  p.t_hawking = t_hawking;

  const double x = omega / t_hawking;
  const double em = std::exp(-x);  // e^{-omega/T_H}, never overflows
  p.s_minus = 1.0 / std::sqrt(1.0 + em);
  p.s_plus = std::exp(-0.5 * x) / std::sqrt(1.0 + em);  // == (e^{x}+1)^{-1/2}

  p.theta_plus = alpha * p.s_plus * p.s_plus;
  p.theta_minus = alpha * p.s_minus * p.s_minus;
  p.gamma = alpha * p.s_plus * p.s_minus;
  p.upsilon = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return p;
}

// Basis index of |f_A f_b f_B f_c f_C> with site A most significant.
inline constexpr std::size_t ket_index(unsigned fA, unsigned fb, unsigned fB, unsigned fc,
                                       unsigned fC) {
  return (fA << 4) | (fb << 3) | (fB << 2) | (fc << 1) | fC;
}

// The five-term pure state on (A, b, B, c, C):
//   theta_plus  |0 1 1 1 1>  +  theta_minus |0 0 0 0 0>
//   + gamma (|0 0 0 1 1> + |0 1 1 0 0>)  +  upsilon |1 0 1 0 1>
inline Ket build_pentapartite_state(const HorizonParams& p) {
  std::vector<complexd> amps(32, complexd{});
  amps[ket_index(0, 1, 1, 1, 1)] = p.theta_plus;
  amps[ket_index(0, 0, 0, 0, 0)] = p.theta_minus;
  amps[ket_index(0, 0, 0, 1, 1)] = p.gamma;
  amps[ket_index(0, 1, 1, 0, 0)] = p.gamma;
  amps[ket_index(1, 0, 1, 0, 1)] = p.upsilon;
  return Ket(std::move(amps));
}

struct Scenario {
  std::string name;      // e.g. "ABC" or a custom label string
  SubsetSelector sites;  // kept sites in global order

  static Scenario ABC() { return {"ABC", {Subsystem::A, Subsystem::B, Subsystem::C}}; }
  static Scenario Abc() { return {"Abc", {Subsystem::A, Subsystem::b, Subsystem::c}}; }
  static Scenario AbB() { return {"AbB", {Subsystem::A, Subsystem::b, Subsystem::B}}; }
  static Scenario ABc() { return {"ABc", {Subsystem::A, Subsystem::B, Subsystem::c}}; }

  static Scenario custom(SubsetSelector subset) {
    if (subset.size() > 4) throw std::invalid_argument("scenario subsets have size 1 to 4");
    SubsetSelector sites = normalize_subset(std::move(subset));
    return {subset_label(sites), std::move(sites)};
  }
};

// Accepts the four named scenarios or any duplicate-free label string over
// {A, b, B, c, C} of length 1 to 4 (e.g. "bBC").
inline Scenario parse_scenario(const std::string& text) {
  SubsetSelector subset;
  for (char ch : text) {
    const auto s = subsystem_from_label(ch);
    if (!s) throw std::invalid_argument("unknown subsystem label '" + std::string(1, ch) + "'");
    subset.push_back(*s);
  }
  return Scenario::custom(std::move(subset));
}

// Reduced density operator of |psi><psi| on `subset`, sites ordered per the
// global ordering.
inline ComplexMatrix reduce_to_subset(const Ket& psi, const SubsetSelector& subset) {
  if (psi.dim() != 32) throw dimension_error("expected the 32-dimensional five-qubit state");
  const SubsetSelector sites = normalize_subset(subset);
  if (sites.size() > 4) throw std::invalid_argument("reductions keep between 1 and 4 sites");
  std::vector<std::size_t> keep;
  for (Subsystem s : sites) keep.push_back(static_cast<std::size_t>(s));
  return partial_trace(outer(psi), {2, 2, 2, 2, 2}, keep);
}

inline ComplexMatrix reduce_to_scenario(const Ket& psi, const Scenario& scenario) {
  return reduce_to_subset(psi, scenario.sites);
}

// Closed-form reduced states assembled directly from the model coefficients,
// bypassing the 32-dimensional state. Supported subsets: the five singles and
// the pairs AB, AC, BC, Ab, Ac, Bc, bB, cC (global ordering).
inline ComplexMatrix appendix_oracle(const SubsetSelector& subset, const HorizonParams& p) {
  const SubsetSelector sites = normalize_subset(subset);
  const std::string key = subset_label(sites);

  const double tp2 = p.theta_plus * p.theta_plus;
  const double tm2 = p.theta_minus * p.theta_minus;
  const double g2 = p.gamma * p.gamma;
  const double u2 = p.upsilon * p.upsilon;
  const double cross = p.gamma * (p.theta_plus + p.theta_minus);

  auto diag4 = [](double d0, double d1, double d2, double d3) {
    return ComplexMatrix::diagonal({d0, d1, d2, d3});
  };

  if (key == "A") return ComplexMatrix::diagonal({tp2 + 2.0 * g2 + tm2, u2});
  if (key == "b" || key == "c") return ComplexMatrix::diagonal({u2 + g2 + tm2, tp2 + g2});
  if (key == "B" || key == "C") return ComplexMatrix::diagonal({g2 + tm2, tp2 + u2 + g2});

  if (key == "AB" || key == "AC") return diag4(g2 + tm2, tp2 + g2, 0.0, u2);
  if (key == "Ab" || key == "Ac") return diag4(g2 + tm2, tp2 + g2, u2, 0.0);
  if (key == "BC") return diag4(tm2, g2, g2, tp2 + u2);
  if (key == "Bc") return diag4(tm2, g2, u2 + g2, tp2);
  if (key == "bB" || key == "cC") {
    // Coherent |00><11| block Gamma (theta_plus + theta_minus).
    ComplexMatrix m = diag4(g2 + tm2, u2, 0.0, tp2 + g2);
    m(0, 3) = cross;
    m(3, 0) = cross;
    return m;
  }

  throw std::invalid_argument("no closed form for subset " + key);
}

// The eleven one/two-qubit subsets covered by the closed forms above.
inline const std::vector<SubsetSelector>& oracle_subsets() {
  using S = Subsystem;
  static const std::vector<SubsetSelector> subsets = {
      {S::A},       {S::b},       {S::B},       {S::c},       {S::C},
      {S::A, S::B}, {S::A, S::C}, {S::B, S::C}, {S::A, S::b}, {S::A, S::c},
      {S::B, S::c}, {S::b, S::B}, {S::c, S::C},
  };
  return subsets;
}

// Mutual-information pairs reported for a scenario, in figure order.
inline std::vector<SubsetSelector> mutual_information_pairs(const Scenario& scenario) {
  using S = Subsystem;
  if (scenario.name == "ABC") return {{S::A, S::B}, {S::A, S::C}};
  if (scenario.name == "Abc") return {{S::A, S::b}, {S::A, S::c}};
  if (scenario.name == "AbB") return {{S::A, S::B}, {S::A, S::b}};
  if (scenario.name == "ABc") return {{S::A, S::B}, {S::A, S::c}};
  if (scenario.sites.size() < 2) return {};
  std::vector<SubsetSelector> pairs;
  for (std::size_t k = 1; k < scenario.sites.size(); ++k)
    pairs.push_back({scenario.sites[0], scenario.sites[k]});
  return pairs;
}

}  // namespace qhorizon
