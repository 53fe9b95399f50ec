#pragma once

// Rational functions arising from small electrical networks: two driving-point
// impedance topologies, a 2m x 2m two-input feedback interconnection, and the
// construction that turns any non-positive-real starting function into a
// combination with a right-half-plane pole.

#include "mcic/rational.hpp"

namespace mcic {

struct CircuitSpec {
  enum class Topology {
    SeriesShuntRc,   // resistor in series with a parallel resistor-capacitor
    LosslessLadder,  // three parallel branches: (C_a series L_b), L_c, C_d
  };
  Topology topology = Topology::SeriesShuntRc;
  // SeriesShuntRc values:
  double r1 = 1.0;
  double r2 = 1.0;
  double c = 1.0;
  // LosslessLadder values:
  double ca = 1.0;
  double lb = 1.0;
  double lc = 1.0;
  double cd = 1.0;
};

namespace detail {

// Impedance of a single element: resistor r -> r, inductor l -> s*l,
// capacitor c -> 1/(s*c).
inline Rational impedance_r(double r) { return Rational::constant(r); }
inline Rational impedance_l(double l) {
  return Rational(Polynomial({0.0, l}), Polynomial::one());
}
inline Rational impedance_c(double c) {
  return Rational(Polynomial::one(), Polynomial({0.0, c}));
}

inline Rational parallel(const Rational& a, const Rational& b) {
  return (a.reciprocal() + b.reciprocal()).reciprocal();
}

}  // namespace detail

// Driving-point impedance of the requested topology as a 1x1 function.
//
// SeriesShuntRc: Z(s) = R1 + (R2 parallel 1/(sC)) = d + b/(s+a) with d = R1,
// b = 1/C, a = 1/(R2 C).
// LosslessLadder: Z(s) = ( ((sCa)^-1 + sLb)^-1 + (sLc)^-1 + sCd )^-1, the
// three branch admittances summed and inverted.
inline RationalMatrix ladder_impedance(const CircuitSpec& spec) {
  RationalMatrix out(1);
  switch (spec.topology) {
    case CircuitSpec::Topology::SeriesShuntRc: {
      require(spec.r1 > 0.0 && spec.r2 > 0.0 && spec.c > 0.0,
              "ladder_impedance: element values must be positive");
      Rational shunt = detail::parallel(detail::impedance_r(spec.r2),
                                        detail::impedance_c(spec.c));
      out.at(0, 0) = detail::impedance_r(spec.r1) + shunt;
      return out;
    }
    case CircuitSpec::Topology::LosslessLadder: {
      require(spec.ca > 0.0 && spec.lb > 0.0 && spec.lc > 0.0 && spec.cd > 0.0,
              "ladder_impedance: element values must be positive");
      Rational branch1 =
          detail::impedance_c(spec.ca) + detail::impedance_l(spec.lb);
      Rational admittance = branch1.reciprocal() +
                            detail::impedance_l(spec.lc).reciprocal() +
                            detail::impedance_c(spec.cd).reciprocal();
      out.at(0, 0) = admittance.reciprocal();
      return out;
    }
  }
  throw Error("ladder_impedance: unknown topology");
}

// Two-input feedback interconnection of four m x m blocks. With
// Fc_hat = Fc^-1 + Fd and Fa_hat = Fa^-1 + Fb, the port map
// (In1, In2) -> (Out1, Out2) is
//
//   H = [ S            -S * Fa_hat^-1          ]
//       [ Fa_hat^-1*S  (Fc_hat^-1 + Fa_hat)^-1 ],    S = (Fc_hat + Fa_hat^-1)^-1.
//
// The upper-left block equals phi(phi(Fc, Fd), phi(Fa, Fb)).
inline RationalMatrix feedback_network(const RationalMatrix& fa,
                                       const RationalMatrix& fb,
                                       const RationalMatrix& fc,
                                       const RationalMatrix& fd) {
  int m = fa.size();
  require(fb.size() == m && fc.size() == m && fd.size() == m,
          "feedback_network: block size mismatch");
  RationalMatrix fc_hat = fc.inverse() + fd;
  RationalMatrix fa_hat = fa.inverse() + fb;
  RationalMatrix fa_hat_inv = fa_hat.inverse();
  RationalMatrix s = (fc_hat + fa_hat_inv).inverse();
  RationalMatrix lower_right = (fc_hat.inverse() + fa_hat).inverse();
  return rational_block_2x2(s, -(s * fa_hat_inv), fa_hat_inv * s, lower_right);
}

struct MaximalityCounterexample {
  RationalMatrix function;       // (G + a I + b^2 (G + a I)^-1)^-1
  double pre_inverse_sigma_min;  // smallest singular value at s0 (pole check)
};

// Given G analytic in the right half-plane whose value at s0 (Re s0 > 0) has
// eigenvalue -a + ib with a > 0, build the scaling/sum/inversion combination
// of G and the constant identity that acquires a pole at s0. A constant G
// equal to -a I makes the combination identically singular; that degenerate
// case surfaces as an inversion error.
inline MaximalityCounterexample maximality_counterexample(
    const RationalMatrix& g, Complex s0, double a, double b,
    double tol = kDefaultTol) {
  require(a > 0.0, "maximality_counterexample: a must be positive");
  require(s0.real() > 0.0,
          "maximality_counterexample: s0 must lie in the open right half-plane");

  // Precondition: -a + ib is (numerically) an eigenvalue of G(s0).
  RationalMatrix::Eval eg = g(s0);
  require(eg.min_den_headroom > 1e-9,
          "maximality_counterexample: G has a pole at s0");
  Eigendecomposition ed = eigen_decompose(eg.value);
  Complex target(-a, b);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ed.values.size(); ++i) {
    best = std::min(best, std::abs(ed.values(i) - target));
  }
  double scale = std::max(1.0, spectral_norm(eg.value));
  require(best <= 1e-6 * scale,
          "maximality_counterexample: G(s0) has no eigenvalue at -a + ib");

  RationalMatrix shifted =
      g + RationalMatrix::scalar_lift(Rational::constant(a), g.size());
  RationalMatrix pre_inverse = shifted;
  if (b != 0.0) {
    pre_inverse = pre_inverse + (b * b) * shifted.inverse();
  }

  MaximalityCounterexample out;
  out.function = pre_inverse.inverse();
  RationalMatrix::Eval ep = pre_inverse(s0);
  out.pre_inverse_sigma_min = smallest_singular_value(ep.value, tol).sigma_min;
  return out;
}

}  // namespace mcic
