#include "maxdens/tail_models.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "maxdens/errors.hpp"
#include "maxdens/rng.hpp"

namespace maxdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  auto one = [&](std::string_view t) {
    t = trim(t);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ParseError("not a number: '" + std::string(t) + "'");
    return v;
  };
  if (auto slash = s.find('/'); slash != std::string_view::npos)
    return one(s.substr(0, slash)) / one(s.substr(slash + 1));
  return one(s);
}

boost::math::students_t_distribution<double> t_dist(double l) {
  return boost::math::students_t_distribution<double>(l);
}

}  // namespace

// --- TailClass --------------------------------------------------------------

TailClass::TailClass(HallTail t) : params_(t) {
  // B = 0 is allowed: the exact Pareto law has no second-order term.
  if (!(t.alpha > 0 && t.beta > 0 && t.A > 0))
    throw DomainError("Hall tail requires alpha > 0, beta > 0, A > 0");
}

TailClass::TailClass(WeibullTail t) : params_(t) {
  if (!(t.kappa > 0 && t.C > 0)) throw DomainError("Weibull tail requires kappa > 0, C > 0");
}

TailClass::TailClass(BoundedTail t) : params_(t) {
  if (!(t.mu < 0 && t.sigma < 0)) throw DomainError("bounded tail requires mu < 0, sigma < 0");
}

TailTag TailClass::tag() const {
  return static_cast<TailTag>(params_.index());
}

double TailClass::gamma() const {
  switch (tag()) {
    case TailTag::hall:
      return 1.0 / hall().alpha;
    case TailTag::weibull:
      return 0.0;
    case TailTag::bounded:
      return 1.0 / bounded().mu;
  }
  return 0.0;
}

// --- TailModel construction -------------------------------------------------

TailModel::TailModel(Family f, double p1, double p2, TailClass tail)
    : family_(f), p1_(p1), p2_(p2), tail_(tail) {}

TailModel TailModel::pareto(double l) {
  if (!(l > 0)) throw DomainError("pareto requires l > 0");
  return TailModel(Family::pareto, l, 0.0, TailClass(HallTail{l, 1.0, 1.0, 0.0}));
}

TailModel TailModel::student_t(double l) {
  if (!(l > 0)) throw DomainError("t requires l > 0");
  using boost::math::tgamma;
  const double c = tgamma((l + 1) / 2) / (std::sqrt(l * std::numbers::pi) * tgamma(l / 2));
  const double A = c * std::pow(l, (l - 1) / 2);
  const double B = -l * l * (l + 1) / (2 * (l + 2));
  return TailModel(Family::student_t, l, 0.0, TailClass(HallTail{l, 2.0, A, B}));
}

TailModel TailModel::burr(double c, double l) {
  if (!(c > 0 && l > 0)) throw DomainError("burr requires c > 0, l > 0");
  return TailModel(Family::burr, c, l, TailClass(HallTail{c * l, c, 1.0, -l}));
}

TailModel TailModel::frechet(double g) {
  if (!(g > 0)) throw DomainError("frechet requires g > 0");
  const double alpha = 1.0 / g;
  return TailModel(Family::frechet, g, 0.0, TailClass(HallTail{alpha, alpha, 1.0, -0.5}));
}

TailModel TailModel::weibull(double k) {
  if (!(k > 0)) throw DomainError("weibull requires k > 0");
  return TailModel(Family::weibull, k, 0.0, TailClass(WeibullTail{k, 1.0}));
}

TailModel TailModel::reversed_burr(double c, double l) {
  if (!(c < 0 && l < 0)) throw DomainError("revburr requires c < 0, l < 0");
  const double mu = -1.0 / (c * l);
  const double sigma = 1.0 / c;
  return TailModel(Family::reversed_burr, c, l,
                   TailClass(BoundedTail{mu, sigma, 1.0, 1.0 / sigma, 1.0}));
}

TailModel TailModel::parse(std::string_view spec) {
  const auto open = spec.find('(');
  const auto close = spec.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw ParseError("family spec must look like name(key=value,...): '" + std::string(spec) + "'");
  std::string name;
  for (char ch : spec.substr(0, open))
    if (!std::isspace(static_cast<unsigned char>(ch))) name += static_cast<char>(std::tolower(ch));

  std::map<std::string, double> kv;
  std::string_view body = spec.substr(open + 1, close - open - 1);
  while (!body.empty()) {
    const auto comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value in '" + std::string(item) + "'");
    std::string key;
    for (char ch : item.substr(0, eq))
      if (!std::isspace(static_cast<unsigned char>(ch))) key += ch;
    kv[key] = parse_number(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }

  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("family '" + name + "' needs parameter " + key);
    return it->second;
  };
  auto expect_keys = [&](std::size_t count) {
    if (kv.size() != count) throw ParseError("unexpected parameters for family '" + name + "'");
  };

  if (name == "pareto") {
    expect_keys(1);
    return pareto(need("l"));
  }
  if (name == "t") {
    expect_keys(1);
    return student_t(need("l"));
  }
  if (name == "burr") {
    expect_keys(2);
    return burr(need("c"), need("l"));
  }
  if (name == "frechet") {
    expect_keys(1);
    return frechet(need("g"));
  }
  if (name == "weibull") {
    expect_keys(1);
    return weibull(need("k"));
  }
  if (name == "revburr") {
    expect_keys(2);
    return reversed_burr(need("c"), need("l"));
  }
  throw ParseError("unknown family '" + name + "'");
}

std::string TailModel::name() const {
  switch (family_) {
    case Family::pareto: return "pareto";
    case Family::student_t: return "t";
    case Family::burr: return "burr";
    case Family::frechet: return "frechet";
    case Family::weibull: return "weibull";
    case Family::reversed_burr: return "revburr";
  }
  return {};
}

std::string TailModel::params() const {
  switch (family_) {
    case Family::pareto:
    case Family::student_t:
      return "l=" + format_number(p1_);
    case Family::burr:
    case Family::reversed_burr:
      return "c=" + format_number(p1_) + ",l=" + format_number(p2_);
    case Family::frechet:
      return "g=" + format_number(p1_);
    case Family::weibull:
      return "k=" + format_number(p1_);
  }
  return {};
}

std::string TailModel::spec() const { return name() + "(" + params() + ")"; }

// --- distribution functions -------------------------------------------------

double TailModel::support_lo() const {
  switch (family_) {
    case Family::pareto: return 1.0;
    case Family::student_t: return -kInf;
    case Family::burr:
    case Family::frechet:
    case Family::weibull: return 0.0;
    case Family::reversed_burr: return -kInf;
  }
  return -kInf;
}

double TailModel::support_hi() const {
  return family_ == Family::reversed_burr ? tail_.bounded().xstar : kInf;
}

double TailModel::pdf(double x) const {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  switch (family_) {
    case Family::pareto:
      return x < 1.0 ? 0.0 : p1_ * std::pow(x, -p1_ - 1.0);
    case Family::student_t:
      if (std::isinf(x)) return 0.0;
      return boost::math::pdf(t_dist(p1_), x);
    case Family::burr: {
      if (x <= 0.0 || std::isinf(x)) return 0.0;
      const double c = p1_, l = p2_;
      const double xc = std::pow(x, c);
      return c * l * std::pow(x, c - 1.0) * std::exp((-l - 1.0) * std::log1p(xc));
    }
    case Family::frechet: {
      if (x <= 0.0 || std::isinf(x)) return 0.0;
      const double a = 1.0 / p1_;
      const double lx = std::log(x);
      return a * std::exp(-(a + 1.0) * lx - std::exp(-a * lx));
    }
    case Family::weibull: {
      if (x < 0.0 || std::isinf(x)) return 0.0;
      const double k = p1_;
      if (x == 0.0) return k < 1.0 ? kInf : (k == 1.0 ? 1.0 : 0.0);
      const double lx = std::log(x);
      return k * std::exp((k - 1.0) * lx - std::exp(k * lx));
    }
    case Family::reversed_burr: {
      const auto& b = tail_.bounded();
      const double t = b.xstar - x;
      if (t <= 0.0 || std::isinf(t)) return 0.0;
      const double e = -b.mu * b.sigma;  // negative
      const double te = std::pow(t, e);
      return -b.mu * te / t * std::exp((1.0 / b.sigma - 1.0) * std::log1p(te));
    }
  }
  return 0.0;
}

double TailModel::cdf(double x) const {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  switch (family_) {
    case Family::pareto:
      return x <= 1.0 ? 0.0 : -std::expm1(-p1_ * std::log(x));
    case Family::student_t:
      if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
      return boost::math::cdf(t_dist(p1_), x);
    case Family::burr:
      if (x <= 0.0) return 0.0;
      if (std::isinf(x)) return 1.0;
      return -std::expm1(-p2_ * std::log1p(std::pow(x, p1_)));
    case Family::frechet:
      if (x <= 0.0) return 0.0;
      return std::exp(-std::pow(x, -1.0 / p1_));
    case Family::weibull:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-std::pow(x, p1_));
    case Family::reversed_burr: {
      const auto& b = tail_.bounded();
      const double t = b.xstar - x;
      if (t <= 0.0) return 1.0;
      if (std::isinf(t)) return 0.0;
      return -std::expm1(std::log1p(std::pow(t, -b.mu * b.sigma)) / b.sigma);
    }
  }
  return 0.0;
}

double TailModel::survival(double x) const {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  switch (family_) {
    case Family::pareto:
      return x <= 1.0 ? 1.0 : std::pow(x, -p1_);
    case Family::student_t:
      if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
      return boost::math::cdf(boost::math::complement(t_dist(p1_), x));
    case Family::burr:
      if (x <= 0.0) return 1.0;
      if (std::isinf(x)) return 0.0;
      return std::exp(-p2_ * std::log1p(std::pow(x, p1_)));
    case Family::frechet:
      if (x <= 0.0) return 1.0;
      return -std::expm1(-std::pow(x, -1.0 / p1_));
    case Family::weibull:
      if (x <= 0.0) return 1.0;
      return std::exp(-std::pow(x, p1_));
    case Family::reversed_burr: {
      const auto& b = tail_.bounded();
      const double t = b.xstar - x;
      if (t <= 0.0) return 0.0;
      if (std::isinf(t)) return 1.0;
      return std::exp(std::log1p(std::pow(t, -b.mu * b.sigma)) / b.sigma);
    }
  }
  return 0.0;
}

double TailModel::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile requires 0 < q < 1");
  switch (family_) {
    case Family::student_t:
      return boost::math::quantile(t_dist(p1_), q);
    case Family::frechet:
      return std::pow(-std::log(q), -p1_);
    default:
      // survival-parametrized closed forms lose nothing for q < 1/2 either
      return upper_quantile(1.0 - q);
  }
}

double TailModel::upper_quantile(double s) const {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("upper quantile requires 0 < s < 1");
  switch (family_) {
    case Family::pareto:
      return std::exp(-std::log(s) / p1_);
    case Family::student_t:
      return boost::math::quantile(boost::math::complement(t_dist(p1_), s));
    case Family::burr:
      return std::pow(std::expm1(-std::log(s) / p2_), 1.0 / p1_);
    case Family::frechet:
      return std::pow(-std::log1p(-s), -p1_);
    case Family::weibull:
      return std::pow(-std::log(s), 1.0 / p1_);
    case Family::reversed_burr: {
      const auto& b = tail_.bounded();
      const double t = std::pow(std::expm1(b.sigma * std::log(s)), -1.0 / (b.mu * b.sigma));
      return b.xstar - t;
    }
  }
  return 0.0;
}

std::vector<double> TailModel::sample(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw DomainError("sample size must be at least 1");
  UniformStream stream(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = upper_quantile(stream.next());
  return out;
}

// --- sample maximum ---------------------------------------------------------

double smd_pdf(const TailModel& model, double m, double x) {
  if (!(m >= 1.0)) throw DomainError("smd requires m >= 1");
  const double f = model.pdf(x);
  if (f == 0.0 || m == 1.0) return m * f;
  const double s = model.survival(x);
  const double Fm1 = s < 0.5 ? std::exp((m - 1.0) * std::log1p(-s))
                             : std::pow(model.cdf(x), m - 1.0);
  // an unbounded density at the lower end point is dominated by F^{m-1}
  if (Fm1 == 0.0) return 0.0;
  return m * f * Fm1;
}

double smd_cdf(const TailModel& model, double m, double x) {
  if (!(m >= 1.0)) throw DomainError("smd requires m >= 1");
  const double s = model.survival(x);
  return s < 0.5 ? std::exp(m * std::log1p(-s)) : std::pow(model.cdf(x), m);
}

double smd_quantile(const TailModel& model, double m, double q) {
  if (!(m >= 1.0)) throw DomainError("smd requires m >= 1");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("smd quantile requires 0 < q < 1");
  // F(Q) = q^{1/m}; pass the upper-tail probability 1 - q^{1/m} to keep precision
  const double s = -std::expm1(std::log(q) / m);
  if (s <= 0.0 || s >= 1.0) return model.quantile(std::pow(q, 1.0 / m));
  return model.upper_quantile(s);
}

}  // namespace maxdens
