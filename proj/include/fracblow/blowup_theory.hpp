#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracblow/evolution.hpp"
#include "fracblow/frac_operator.hpp"

namespace fracblow {

/// Raised when Re(alpha lambda) <= 0.
class ConditionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct BlowupConstants {
  int dim = 1;
  double p = 2.0;
  /// Hoelder conjugate p / (p - 1).
  double p_conj = 2.0;
  /// Surface measure of the unit sphere: 2 (n = 1), 2 pi (n = 2).
  double omega = 2.0;
  /// int <x>^{-n-1} dx and its quadrature error.
  double W = 0.0;
  double W_error = 0.0;
  double A = 0.0;
  double C = 0.0;
  double D = 0.0;
  double re_alpha_lambda = 0.0;
  double abs_alpha = 0.0;

  /// C R^{n - 1/(p-1)}.
  double threshold(double R) const;
};

/// W_n by adaptive quadrature with an analytic tail; error below `tolerance`.
Estimate weight_mass(int dim, double tolerance = 1e-12);

/// Constants C, D, W, omega for the given problem and lemma constant A.
BlowupConstants compute_constants(const ProblemParams& params, double A, double tolerance = 1e-12);

/// -Im(alpha int u <x/R>^{-n-1} dx) by lattice quadrature; weight.q must equal n + 1.
double M_R(const Field& u, Complex alpha, const WeightProfile& weight);

struct LifespanReport {
  double R = 0.0;
  double M0 = 0.0;
  double threshold = 0.0;
  /// M0 - threshold.
  double gap = 0.0;
  bool condition_holds = false;
  /// Infinite when the condition fails (no conclusion).
  double T_bound = 0.0;
};

LifespanReport lifespan_bound(double M0, const BlowupConstants& constants, double R);

/// {gap^{-p+1} - (p-1) D R^{-n(p-1)} t}^{-1/(p-1)}; +inf once t reaches the
/// bound. Throws std::invalid_argument when the gap is not positive.
std::vector<double> ode_lower_envelope(double M0, const BlowupConstants& constants, double R,
                                       std::span<const double> times);

enum class DataKind { integrable, inner_singular, outer_decay };

std::string to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& name);

struct InitialDataSpec {
  DataKind kind = DataKind::inner_singular;
  double mu = 1.0;
  double k = 0.25;
  /// Width of the smooth transition at |x| = 1 (outward for inner-singular
  /// data, inward for outer-decay data).
  double edge_width = 0.25;

  /// Throws std::invalid_argument naming the violated inequality.
  void validate(int dim, double p) const;
};

/// Real profile P with -Im(alpha f) = P for the corollary data, before
/// scaling by mu. `cap` bounds |x| from below in |x|^{-k}.
double data_profile(const InitialDataSpec& spec, double r, double cap);

/// mu f with f = -i conj(alpha) / |alpha|^2 P, so -Im(alpha f) = P and
/// Re(alpha f) = 0. Inner singularities are capped at dx / 2.
Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid, Complex alpha, double p);

struct CorollaryReport {
  DataKind kind = DataKind::inner_singular;
  double mu = 0.0;
  double k = 0.0;
  double R_star = 0.0;
  double I = 0.0;
  /// Predicted exponent of T in mu.
  double exponent = 0.0;
  /// Closed-form bound (p-1)^{-1} D^{-1} (2C)^{...} (mu I)^{exponent}.
  double T_formula = 0.0;
  /// Lifespan bound at R_star with the lattice M_R(0).
  LifespanReport at_radius;
  /// R_star < 1 (inner) or R_star > 10 (outer).
  bool in_regime = false;
  /// Lattice M_R(0) exceeds C R^{n - 1/(p-1)} at R_star.
  bool gate = false;
  /// The lifespan bound at R_star applies (same as gate); the closed form
  /// T_formula is only meaningful when in_regime also holds.
  bool conclusive = false;
  std::string note;
};

/// R_1 or R_2 with its I constant and lifespan bounds; the blow-up gate is checked
/// on the lattice data u0.
CorollaryReport corollary_radius(const InitialDataSpec& spec, const BlowupConstants& constants,
                                 const ProblemParams& params, const Field& u0);

/// I_1 or I_2 for the given data.
double corollary_I(const InitialDataSpec& spec, int dim);
/// -1 / (1/(p-1) - k) or -1 / (1/(p-1) - min(n, k)).
double corollary_exponent(const InitialDataSpec& spec, int dim, double p);
/// R_1 or R_2 from mu.
double corollary_R(const InitialDataSpec& spec, const BlowupConstants& constants);

}  // namespace fracblow
