#include "qse/core.hpp"

#include <numeric>

namespace qse {

std::string_view to_string(StateSpace mode) {
  return mode == StateSpace::Planar2D ? "2d" : "3d";
}

StateSpace parse_state_space(std::string_view text) {
  if (text == "2d" || text == "2D") return StateSpace::Planar2D;
  if (text == "3d" || text == "3D") return StateSpace::Full3D;
  throw std::invalid_argument("unknown state space '" + std::string(text) + "'");
}

void require_in_mode(const BlochVector& v, StateSpace mode, const char* what) {
  if (mode == StateSpace::Planar2D && v.z() != 0.0)
    throw std::invalid_argument(std::string(what) + " must lie in the xy plane");
}

BlochVector tie_break_axis(StateSpace mode) {
  return mode == StateSpace::Planar2D ? BlochVector::UnitX() : BlochVector::UnitZ();
}

Guess optimal_guess(const BlochVector& v, StateSpace mode) {
  const double norm = v.norm();
  if (norm <= kDegenerateNorm) return {tie_break_axis(mode), true};
  return {v / norm, false};
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t d1 = g1 == 0 ? 1 : g1;
  const std::int64_t d2 = g2 == 0 ? 1 : g2;
  return {checked_mul(a.num_ / d1, b.num_ / d2), checked_mul(a.den_ / d2, b.den_ / d1)};
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero rational");
  return a * Rational(b.den_, b.num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t l = std::lcm(a.den_, b.den_);
  return {checked_mul(a.num_, l / a.den_) + checked_mul(b.num_, l / b.den_), l};
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > 60) return std::exp(log_binomial(n, k));
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return static_cast<double>(c);
}

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial index out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Rational sphere_monomial_integral(StateSpace mode, Exponents e) {
  if (e.x < 0 || e.y < 0 || e.z < 0) throw std::invalid_argument("negative exponent");
  if (mode == StateSpace::Planar2D && e.z != 0)
    throw std::invalid_argument("Planar2D monomials cannot involve n_z");
  if (e.x % 2 || e.y % 2 || e.z % 2) return Rational(0);

  // Full3D: (a-1)!!(b-1)!!(c-1)!! / (a+b+c+1)!!
  // Planar2D: (a-1)!!(b-1)!! / (a+b)!!
  Rational r(1);
  auto numerator_odd_factorial = [&](int q) {
    for (int k = q - 1; k > 1; k -= 2) r = r * Rational(k);
  };
  numerator_odd_factorial(e.x);
  numerator_odd_factorial(e.y);
  numerator_odd_factorial(e.z);
  const int top = mode == StateSpace::Full3D ? e.x + e.y + e.z + 1 : e.x + e.y;
  for (int k = top; k > 1; k -= 2) r = r / Rational(k);
  return r;
}

std::string OutcomeString::str() const {
  std::string s;
  s.reserve(digits.size());
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
  return s;
}

OutcomeString OutcomeString::parse(std::string_view text) {
  OutcomeString out;
  for (auto it = text.rbegin(); it != text.rend(); ++it) {
    if (*it < '0' || *it > '9') throw std::invalid_argument("outcome digits must be 0-9");
    out.digits.push_back(static_cast<std::uint8_t>(*it - '0'));
  }
  return out;
}

OutcomeString OutcomeString::from_code(std::uint64_t code, int length) {
  OutcomeString out;
  out.digits.resize(static_cast<std::size_t>(length));
  for (int j = 0; j < length; ++j) out.digits[static_cast<std::size_t>(j)] = (code >> j) & 1U;
  return out;
}

std::uint64_t OutcomeString::code() const {
  std::uint64_t c = 0;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] > 1) throw std::invalid_argument("code() requires a binary outcome string");
    c |= std::uint64_t{digits[j]} << j;
  }
  return c;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ClosedForm: return "closed-form";
    case Method::ExactEnumeration: return "exact-enumeration";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

FidelityResult FidelityResult::exact(int N, double F, Method method) {
  FidelityResult r;
  r.N = N;
  r.F = F;
  r.delta = 2 * F - 1;
  r.epsilonN = N * (1 - F);
  r.method = method;
  return r;
}

FidelityResult FidelityResult::monte_carlo(int N, double F, double stderr_of_mean, long trials,
                                           std::uint64_t seed) {
  FidelityResult r = exact(N, F, Method::MonteCarlo);
  r.std_error = stderr_of_mean;
  r.trials = trials;
  r.seed = seed;
  return r;
}

}  // namespace qse
