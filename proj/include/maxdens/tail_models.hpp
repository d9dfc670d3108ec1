#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace maxdens {

enum class TailTag { hall, weibull, bounded };

/// 1 - F(x) ~ A x^{-alpha} (1 + B x^{-beta}) as x -> infinity.
struct HallTail {
  double alpha;
  double beta;
  double A;
  double B;
};

/// 1 - F(x) ~ exp(-C x^kappa) as x -> infinity.
struct WeibullTail {
  double kappa;
  double C;
};

/// 1 - F(x) ~ (x* - x)^{-mu} (D + E (x* - x)^{mu sigma}) as x -> x*.
struct BoundedTail {
  double mu;
  double sigma;
  double D;
  double E;
  double xstar;
};

/// Second-order tail description of a distribution in one of the three classes.
class TailClass {
 public:
  // Validating constructors; throw DomainError when the class invariants fail.
  explicit TailClass(HallTail t);
  explicit TailClass(WeibullTail t);
  explicit TailClass(BoundedTail t);

  TailTag tag() const;
  /// Extreme value index: 1/alpha, 0 or 1/mu.
  double gamma() const;

  const HallTail& hall() const { return std::get<HallTail>(params_); }
  const WeibullTail& weibull() const { return std::get<WeibullTail>(params_); }
  const BoundedTail& bounded() const { return std::get<BoundedTail>(params_); }

 private:
  std::variant<HallTail, WeibullTail, BoundedTail> params_;
};

enum class Family { pareto, student_t, burr, frechet, weibull, reversed_burr };

/// One of the six benchmark distribution families with exact pdf, cdf,
/// quantile and sampler, plus its derived tail class.
class TailModel {
 public:
  static TailModel pareto(double l);
  static TailModel student_t(double l);
  static TailModel burr(double c, double l);
  static TailModel frechet(double g);
  static TailModel weibull(double k);
  /// Reversed Burr with c < 0, l < 0; tail exponents mu = -1/(c l), sigma = 1/c, x* = 1.
  static TailModel reversed_burr(double c, double l);

  /// Parses `pareto(l=1)`, `t(l=3)`, `burr(c=1,l=3)`, `frechet(g=0.5)`,
  /// `weibull(k=2)`, `revburr(c=-1,l=-2)`.
  static TailModel parse(std::string_view spec);

  Family family() const { return family_; }
  const TailClass& tail() const { return tail_; }
  double gamma() const { return tail_.gamma(); }

  /// Short family name as used in the CLI grammar (`pareto`, `t`, ...).
  std::string name() const;
  /// Parameter list without the family name, e.g. `c=1,l=3`.
  std::string params() const;
  /// Canonical spec string; parse(spec()) reproduces the model.
  std::string spec() const;

  double support_lo() const;
  double support_hi() const;

  double pdf(double x) const;
  double cdf(double x) const;
  /// 1 - cdf(x), computed without cancellation in the upper tail.
  double survival(double x) const;
  double quantile(double q) const;
  /// Quantile at upper-tail probability s, i.e. quantile(1 - s) without cancellation.
  double upper_quantile(double s) const;

  /// n i.i.d. draws by inversion from the stream keyed by `seed`.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  TailModel(Family f, double p1, double p2, TailClass tail);

  Family family_;
  double p1_;  // l, l, c, g, k, c
  double p2_;  // -, -, l, -, -, l
  TailClass tail_;
};

/// Density of the maximum of m i.i.d. draws: m f F^{m-1}.
double smd_pdf(const TailModel& model, double m, double x);
/// Distribution function of the maximum of m draws: F^m.
double smd_cdf(const TailModel& model, double m, double x);
/// q-th quantile of the maximum of m draws.
double smd_quantile(const TailModel& model, double m, double q);

}  // namespace maxdens
