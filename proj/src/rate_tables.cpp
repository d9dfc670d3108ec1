#include "maxdens/rate_tables.hpp"

#include <cmath>
#include <string>

#include "maxdens/errors.hpp"

namespace maxdens {

namespace {

struct RawRow {
  Family family;
  const char* label;
  const char* first;
  const char* second;
  std::array<const char*, 9> raw;
  std::array<const char*, 9> normalized;
};

// Printed tables; the reversed Burr parameters "-3,1" are read as (-3,-1),
// the only pair consistent with the printed (mu, sigma) = (-1/3, -1/3).
constexpr RawRow kRows[] = {
    {Family::pareto, "1/2", "1/2", "1", {"-1/2", "-8/5", "-1", "-1", "-12/5", "-6/5", "-3/2", "-16/5", "-7/5"}, {"--", "-11/10", "-1/2", "--", "-7/5", "-1/5", "--", "-17/10", "--"}},
    {Family::pareto, "1", "1", "1", {"-1/2", "-11/10", "-7/10", "-1", "-7/5", "-3/5", "-3/2", "-17/10", "-1/2"}, {"-1/4", "-17/20", "-9/20", "-1/2", "-9/10", "-1/10", "-3/4", "-19/20", "--"}},
    {Family::pareto, "3", "3", "1", {"-1/3", "-23/30", "-1/2", "-2/3", "-11/15", "-1/5", "-3/4", "-7/10", "--"}, {"-1/4", "-41/60", "-5/12", "-1/2", "-17/30", "-1/30", "-1/2", "-9/20", "--"}},
    {Family::pareto, "10", "10", "1", {"-1/10", "-13/20", "-43/100", "-1/5", "-1/2", "-3/50", "-3/10", "-7/20", "--"}, {"-3/40", "-5/8", "-81/200", "-3/20", "-9/20", "-1/100", "-9/40", "-11/40", "--"}},
    {Family::student_t, "1/2", "1/2", "2", {"-3/2", "-8/5", "-1", "-5/2", "-12/5", "-6/5", "-13/4", "-16/5", "-7/5"}, {"-1", "-11/10", "-1/2", "-3/2", "-7/5", "-1/5", "-7/4", "-17/10", "--"}},
    {Family::student_t, "1", "1", "2", {"-1/2", "-11/10", "-7/10", "-3/2", "-7/5", "-3/5", "-7/4", "-17/10", "-1/2"}, {"-1/4", "-17/20", "-9/20", "-1", "-9/10", "-1/10", "-1", "-19/20", "--"}},
    {Family::student_t, "3", "3", "2", {"-1/3", "-23/30", "-1/2", "-2/3", "-11/15", "-1/5", "-3/4", "-7/10", "--"}, {"-1/4", "-41/60", "-5/12", "-1/2", "-17/30", "-1/30", "-1/2", "-9/20", "--"}},
    {Family::student_t, "10", "10", "2", {"-1/10", "-13/20", "-43/100", "-1/5", "-1/2", "-3/50", "-3/10", "-7/20", "--"}, {"-3/40", "-5/8", "-81/200", "-3/20", "-9/20", "-1/100", "-9/40", "-11/40", "--"}},
    {Family::burr, "1/2,1/2", "1/4", "1/2", {"-5/2", "-13/5", "-8/5", "-9/2", "-22/5", "-12/5", "-25/4", "-31/5", "-16/5"}, {"-3/2", "-8/5", "-3/5", "-5/2", "-12/5", "-2/5", "-13/4", "-16/5", "-1/5"}},
    {Family::burr, "1,1/2", "1/2", "1", {"-1/2", "-8/5", "-1", "-1", "-12/5", "-6/5", "-3/2", "-16/5", "-7/5"}, {"--", "-11/10", "-1/2", "--", "-7/5", "-1/5", "--", "-17/10", "--"}},
    {Family::burr, "3,1/2", "3/2", "3", {"-2/3", "-14/15", "-3/5", "-7/6", "-16/15", "-2/5", "-5/4", "-6/5", "-1/5"}, {"-7/24", "-67/120", "-9/40", "-3/28", "-19/60", "--", "-1/8", "-3/40", "--"}},
    {Family::burr, "1/2,1", "1/2", "1/2", {"-3/2", "-8/5", "-1", "-3/2", "-12/5", "-6/5", "-13/4", "-16/5", "-7/5"}, {"-1", "-11/10", "-1/2", "-1/2", "-7/5", "-1/5", "-7/4", "-17/10", "--"}},
    {Family::burr, "1,1", "1", "1", {"-1/2", "-11/10", "-7/10", "-1", "-7/5", "-3/5", "-3/2", "-17/10", "-1/2"}, {"-1/4", "-17/20", "-9/20", "-1", "-9/10", "-1/10", "-1", "-19/20", "--"}},
    {Family::burr, "3,1", "3", "3", {"-1/3", "-23/30", "-1/2", "-2/3", "-11/15", "-1/5", "-3/4", "-7/10", "--"}, {"-1/4", "-41/60", "-5/12", "-1/2", "-17/30", "-1/30", "-1/2", "-9/20", "--"}},
    {Family::burr, "1/2,3", "3/2", "1/2", {"-1/2", "-14/15", "-3/5", "-1", "-16/15", "-2/5", "-5/4", "-6/5", "-1/5"}, {"-1/8", "-67/120", "-9/40", "-1/4", "-19/60", "--", "-1/8", "-3/40", "--"}},
    {Family::burr, "1,3", "3", "1", {"-1/3", "-23/30", "-1/2", "-2/3", "-11/15", "-1/5", "-3/4", "-7/10", "--"}, {"-1/4", "-41/60", "-5/12", "-1/2", "-17/30", "-1/30", "-1/2", "-9/20", "--"}},
    {Family::burr, "3,3", "9", "3", {"-1/9", "-59/90", "-13/30", "-2/9", "-23/45", "-1/15", "-1/3", "-11/30", "--"}, {"-1/12", "-113/180", "-73/180", "-1/6", "-41/90", "-1/90", "-1/4", "-17/60", "--"}},
    {Family::frechet, "5", "1/5", "1/5", {"--", "-31/10", "-19/10", "--", "-27/5", "-3", "--", "-77/10", "-11/10"}, {"--", "-74/40", "-26/40", "--", "-29/10", "-1/2", "--", "-79/20", "--"}},
    {Family::frechet, "2", "1/2", "1/2", {"-3/2", "-8/5", "-1", "-3/2", "-12/5", "-6/5", "-13/4", "-16/5", "-7/5"}, {"-1", "-11/10", "-1/2", "-1/2", "-7/5", "-1/5", "-7/4", "-17/10", "--"}},
    {Family::frechet, "1", "1", "1", {"-1/2", "-11/10", "-7/10", "-1", "-7/5", "-3/5", "-3/2", "-17/10", "-1/2"}, {"-1/4", "-17/20", "-9/20", "-1", "-9/10", "-1/10", "-1", "-19/20", "--"}},
    {Family::frechet, "1/2", "2", "1", {"-1/2", "-17/20", "-11/20", "-1", "-9/10", "-3/10", "-1", "-19/20", "-1/20"}, {"-3/8", "-29/40", "-17/40", "-3/4", "-13/20", "-1/20", "-5/8", "-21/40", "--"}},
    {Family::frechet, "1/4", "4", "1", {"-1/4", "-29/40", "-19/40", "-1/2", "-13/20", "-3/20", "-5/8", "-23/40", "--"}, {"-3/16", "-53/80", "-33/80", "-3/8", "-21/40", "-1/40", "-7/16", "-31/80", "--"}},
    {Family::weibull, "1/2", "0", "0", {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}, {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}},
    {Family::weibull, "1", "0", "0", {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}, {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}},
    {Family::weibull, "3", "0", "0", {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}, {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}},
    {Family::weibull, "10", "0", "0", {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}, {"--", "-3/5", "-2/5", "--", "-2/5", "--", "--", "-1/5", "--"}},
    {Family::reversed_burr, "-1/2,-1/3", "-6", "-2", {"-1/12", "-31/60", "-7/20", "-1/6", "-7/30", "--", "--", "--", "--"}, {"-1/8", "-67/120", "-47/120", "-1/4", "-19/60", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-1,-1/3", "-3", "-1", {"--", "-13/30", "-3/10", "--", "-1/15", "--", "--", "--", "--"}, {"--", "-31/60", "-23/60", "--", "-7/30", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-3,-1/3", "-1", "-1/3", {"--", "-1/10", "-1/10", "--", "--", "--", "--", "--", "--"}, {"--", "-7/20", "-7/20", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-1/2,-1", "-2", "-2", {"--", "-7/20", "-1/4", "--", "--", "--", "--", "--", "--"}, {"--", "-19/40", "-3/8", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-1,-1", "-1", "-1", {"--", "-1/10", "-1/10", "--", "--", "--", "--", "--", "--"}, {"--", "-7/20", "-7/20", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-3,-1", "-1/3", "-1/3", {"--", "--", "--", "--", "--", "--", "--", "--", "--"}, {"--", "--", "--", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-1/2,-2", "-1", "-2", {"--", "-1/10", "-1/10", "--", "--", "--", "--", "--", "--"}, {"--", "-7/20", "-7/20", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-1,-2", "-1/2", "-1", {"--", "--", "--", "--", "--", "--", "--", "--", "--"}, {"--", "--", "--", "--", "--", "--", "--", "--", "--"}},
    {Family::reversed_burr, "-3,-2", "-1/6", "-1/3", {"--", "--", "--", "--", "--", "--", "--", "--", "--"}, {"--", "--", "--", "--", "--", "--", "--", "--", "--"}},
};

std::vector<Rational> split_params(const std::string& label) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = label.find(',', start);
    out.push_back(parse_rational(label.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double as_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::vector<ReferenceRateRow> build_rows() {
  std::vector<ReferenceRateRow> rows;
  for (const auto& raw : kRows) {
    ReferenceRateRow r;
    r.row.family = raw.family;
    r.row.label = raw.label;
    const Rational first = parse_rational(raw.first);
    const Rational second = parse_rational(raw.second);
    switch (raw.family) {
      case Family::weibull:
        r.row.tag = TailTag::weibull;
        r.row.gamma = 0;
        r.row.first = 0;
        r.row.second = 0;
        break;
      case Family::reversed_burr:
        r.row.tag = TailTag::bounded;
        r.row.gamma = 1 / first;
        r.row.first = first;
        r.row.second = second;
        break;
      default:
        r.row.tag = TailTag::hall;
        r.row.gamma = 1 / first;
        r.row.first = first;
        r.row.second = second;
        break;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.raw[i][j] = RateExponent::parse(raw.raw[3 * i + j]);
        r.normalized[i][j] = RateExponent::parse(raw.normalized[3 * i + j]);
      }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

const std::array<Rational, 3>& table_rhos() {
  static const std::array<Rational, 3> rhos{Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  return rhos;
}

std::span<const ReferenceRateRow> reference_rate_rows() {
  static const std::vector<ReferenceRateRow> rows = build_rows();
  return rows;
}

TailModel row_model(const RateRow& row) {
  const auto p = split_params(row.label);
  switch (row.family) {
    case Family::pareto: return TailModel::pareto(as_double(p.at(0)));
    case Family::student_t: return TailModel::student_t(as_double(p.at(0)));
    case Family::burr: return TailModel::burr(as_double(p.at(0)), as_double(p.at(1)));
    case Family::frechet: return TailModel::frechet(as_double(p.at(0)));
    case Family::weibull: return TailModel::weibull(as_double(p.at(0)));
    case Family::reversed_burr: return TailModel::reversed_burr(as_double(p.at(0)), as_double(p.at(1)));
  }
  throw DomainError("unknown family");
}

RateRow rate_row(const TailModel& model) {
  const TailClass& tail = model.tail();
  // "c=-1,l=-2" -> "-1,-2", the label form of the tabulated rows
  std::string label;
  const std::string params = model.params();
  std::size_t start = 0;
  while (start <= params.size()) {
    auto comma = params.find(',', start);
    if (comma == std::string::npos) comma = params.size();
    std::string item = params.substr(start, comma - start);
    if (const auto eq = item.find('='); eq != std::string::npos) item = item.substr(eq + 1);
    if (!label.empty()) label += ',';
    label += to_string(to_rational(std::stod(item)));
    start = comma + 1;
  }
  RateRow row{model.family(), label, tail.tag(), Rational(0), Rational(0), Rational(0)};
  switch (tail.tag()) {
    case TailTag::hall:
      row.first = to_rational(tail.hall().alpha);
      row.second = to_rational(tail.hall().beta);
      row.gamma = 1 / row.first;
      break;
    case TailTag::weibull:
      break;
    case TailTag::bounded:
      row.first = to_rational(tail.bounded().mu);
      row.second = to_rational(tail.bounded().sigma);
      row.gamma = 1 / row.first;
      break;
  }
  return row;
}

std::vector<RateDiff> diff_against_reference(bool include_normalized) {
  std::vector<RateDiff> diffs;
  const auto& rhos = table_rhos();
  const EstimatorKind kinds[] = {EstimatorKind::pe, EstimatorKind::ne1, EstimatorKind::ne2};
  for (const auto& r : reference_rate_rows()) {
    for (int i = 0; i < 3; ++i) {
      const RateExponents raw = rate_exponents(r.row, rhos[i]);
      const RateExponents norm = normalized_rate_exponents(r.row, rhos[i]);
      for (int j = 0; j < 3; ++j) {
        if (!(raw[kinds[j]] == r.raw[i][j]))
          diffs.push_back({&r, rhos[i], kinds[j], false, raw[kinds[j]], r.raw[i][j]});
        if (include_normalized && !(norm[kinds[j]] == r.normalized[i][j]))
          diffs.push_back({&r, rhos[i], kinds[j], true, norm[kinds[j]], r.normalized[i][j]});
      }
    }
  }
  return diffs;
}

std::vector<std::string> tail_parameter_discrepancies() {
  std::vector<std::string> out;
  auto close = [](double a, const Rational& b) { return std::abs(a - as_double(b)) < 1e-12 * (1 + std::abs(a)); };
  for (const auto& r : reference_rate_rows()) {
    const TailModel model = row_model(r.row);
    const TailClass& tail = model.tail();
    const std::string name = model.spec();
    if (tail.tag() != r.row.tag) {
      out.push_back(name + ": tail class differs");
      continue;
    }
    if (!close(tail.gamma(), r.row.gamma)) out.push_back(name + ": gamma differs");
    if (tail.tag() == TailTag::hall) {
      if (!close(tail.hall().alpha, r.row.first))
        out.push_back(name + ": alpha " + std::to_string(tail.hall().alpha) + " vs printed " + to_string(r.row.first));
      if (!close(tail.hall().beta, r.row.second))
        out.push_back(name + ": beta " + std::to_string(tail.hall().beta) + " vs printed " + to_string(r.row.second));
    } else if (tail.tag() == TailTag::bounded) {
      if (!close(tail.bounded().mu, r.row.first))
        out.push_back(name + ": mu " + std::to_string(tail.bounded().mu) + " vs printed " + to_string(r.row.first));
      if (!close(tail.bounded().sigma, r.row.second))
        out.push_back(name + ": sigma " + std::to_string(tail.bounded().sigma) + " vs printed " +
                      to_string(r.row.second));
    }
  }
  return out;
}

}  // namespace maxdens
