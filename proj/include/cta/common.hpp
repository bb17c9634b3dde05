#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cta {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CTA_ERROR_TYPE(Name)                                   \
  struct Name : Error {                                        \
    explicit Name(const std::string& what) : Error(what) {}    \
  }

CTA_ERROR_TYPE(UnsupportedOrder);
CTA_ERROR_TYPE(LengthMismatch);
CTA_ERROR_TYPE(DegenerateKnots);
CTA_ERROR_TYPE(PatternViolation);
CTA_ERROR_TYPE(BadR);
CTA_ERROR_TYPE(EmptyRange);
CTA_ERROR_TYPE(ZeroPolynomial);
CTA_ERROR_TYPE(TooFewCells);
CTA_ERROR_TYPE(NotMonotone);
CTA_ERROR_TYPE(DegenerateSpan);
CTA_ERROR_TYPE(HypothesisViolation);
CTA_ERROR_TYPE(RegimeUnsupported);
CTA_ERROR_TYPE(Infeasible);
CTA_ERROR_TYPE(Unbounded);
CTA_ERROR_TYPE(IterationLimit);
CTA_ERROR_TYPE(BadRegime);
CTA_ERROR_TYPE(NTooSmall);
CTA_ERROR_TYPE(DeltaNotFound);
CTA_ERROR_TYPE(InsufficientData);
CTA_ERROR_TYPE(CertificationFailed);

#undef CTA_ERROR_TYPE

/// Contract check for caller errors that are not domain error conditions.
inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Wraps x into [-pi, pi).
inline double wrap_angle(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0) y += kTwoPi;
  return y - kPi;
}

/// max of |f| over a uniform closed grid on [a, b].
inline double grid_sup(const std::function<double(double)>& f, double a,
                       double b, int count) {
  double m = 0.0;
  for (int i = 0; i < count; ++i) {
    double x = (count == 1) ? a : a + (b - a) * i / (count - 1);
    m = std::max(m, std::abs(f(x)));
  }
  return m;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// FNV-1a, used to fingerprint report configurations.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace cta
