// core.hpp
// Bloch-sphere geometry, exact sphere moments and shared result types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qse {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using BlochVector = Vec3<double>;
using Matrix3 = Mat3<double>;

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kDegenerateNorm = 1e-14;

enum class StateSpace { Planar2D, Full3D };

std::string_view to_string(StateSpace mode);
StateSpace parse_state_space(std::string_view text);

/// Throws std::invalid_argument unless |v| = 1 within kUnitTolerance.
template <typename Derived>
void require_unit(const Eigen::MatrixBase<Derived>& v, const char* what) {
  using std::abs;
  if (!(abs(v.norm() - 1) <= kUnitTolerance))
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

/// Throws std::invalid_argument if a Planar2D vector has a z component.
void require_in_mode(const BlochVector& v, StateSpace mode, const char* what);

/// Overlap score (1 + n.M)/2 between the true state and a guess.
template <typename Scalar>
Scalar fidelity(const Vec3<Scalar>& n, const Vec3<Scalar>& guess) {
  require_unit(n, "state");
  require_unit(guess, "guess");
  return (Scalar(1) + n.dot(guess)) / Scalar(2);
}

/// Axis used when the data carry no directional information.
/// +z for the full sphere, +x on the equator.
BlochVector tie_break_axis(StateSpace mode);

struct Guess {
  BlochVector axis;
  bool degenerate = false;
};

/// Unit guess V/|V|, or the tie-break axis (flagged) when |V| vanishes.
Guess optimal_guess(const BlochVector& v, StateSpace mode = StateSpace::Full3D);

/// Unit vector from polar angle theta and azimuth phi.
template <typename Scalar>
Vec3<Scalar> from_angles(Scalar theta, Scalar phi) {
  using std::cos;
  using std::sin;
  return {sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta)};
}

/// Exact rational with 64-bit parts, always stored in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// C(n, k): exact integer arithmetic for n <= 60, log-gamma above.
double binomial(int n, int k);
/// log C(n, k) via log-gamma.
double log_binomial(int n, int k);

struct Exponents {
  int x = 0;
  int y = 0;
  int z = 0;
};

/// Prior average of n_x^a n_y^b n_z^c. The Planar2D prior is d(theta)/2pi on
/// the equator; Full3D is the invariant measure d(cos theta) d(phi)/4pi.
Rational sphere_monomial_integral(StateSpace mode, Exponents e);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit generator.
template <typename Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws an isotropic prior sample; Planar2D samples have z = 0 exactly.
template <typename Rng>
BlochVector sample_prior(StateSpace mode, Rng& rng) {
  const double phi = 2 * std::numbers::pi * uniform01(rng);
  if (mode == StateSpace::Planar2D) return {std::cos(phi), std::sin(phi), 0.0};
  const double u = 2 * uniform01(rng) - 1;
  const double s = std::sqrt(std::max(0.0, 1 - u * u));
  return {s * std::cos(phi), s * std::sin(phi), u};
}

/// Measurement record, digits[0] being the first outcome. Printed most
/// recent first, i.e. "i_k ... i_1".
struct OutcomeString {
  std::vector<std::uint8_t> digits;

  std::size_t length() const { return digits.size(); }
  std::string str() const;
  static OutcomeString parse(std::string_view text);
  /// Binary record from the low `length` bits of code, bit j = outcome j+1.
  static OutcomeString from_code(std::uint64_t code, int length);
  std::uint64_t code() const;
  friend bool operator==(const OutcomeString&, const OutcomeString&) = default;
};

enum class Method { ClosedForm, ExactEnumeration, Quadrature, MonteCarlo };

std::string_view to_string(Method method);

struct FidelityResult {
  int N = 0;
  double F = 0;
  double delta = 0;
  double epsilonN = 0;
  double std_error = 0;  // zero for every exact method
  Method method = Method::ClosedForm;
  long trials = 0;
  std::uint64_t seed = 0;
  /// Probability of outcomes whose guess fell back to the tie-break axis.
  double degenerate_mass = 0;

  static FidelityResult exact(int N, double F, Method method);
  static FidelityResult monte_carlo(int N, double F, double stderr_of_mean,
                                    long trials, std::uint64_t seed);
};

}  // namespace qse
