#include "trustsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace trustsim::harness {

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1)
};

Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n < 2) return m;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    ss += d * d;
  }
  m.variance = ss / static_cast<double>(m.n - 1);
  return m;
}

int group_key(world::Group g) { return static_cast<int>(g); }

}  // namespace

double student_t_two_tailed_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  if (df <= 0.0) return 1.0;
  const double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha) {
  WelchResult result;
  const Moments ma = moments(a);
  const Moments mb = moments(b);

  const bool degenerate =
      ma.n < 2 || mb.n < 2 || (ma.variance == 0.0 && mb.variance == 0.0);
  if (degenerate) {
    const bool too_small = ma.n < 2 || mb.n < 2;
    if (!too_small && ma.mean != mb.mean) {
      result.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
      result.p_value = 0.0;
      result.significant = true;
    } else {
      result.p_value = 1.0;
      result.significant = false;
    }
    return result;
  }

  const double se_a = ma.variance / static_cast<double>(ma.n);
  const double se_b = mb.variance / static_cast<double>(mb.n);
  const double se = std::sqrt(se_a + se_b);
  result.t = (ma.mean - mb.mean) / se;
  result.df = (se_a + se_b) * (se_a + se_b) /
              (se_a * se_a / static_cast<double>(ma.n - 1) +
               se_b * se_b / static_cast<double>(mb.n - 1));
  result.p_value = student_t_two_tailed_p(result.t, result.df);
  result.significant = result.p_value < alpha;
  return result;
}

double mean_of(std::span<const double> xs) { return moments(xs).mean; }

SampleTable::SampleTable(std::span<const sim::InteractionLog> logs) {
  std::set<int> groups;
  for (const auto& row : logs) {
    cells_[{group_key(row.group), row.interaction_index}].push_back(row.ug);
    groups.insert(group_key(row.group));
  }
  for (int g : groups) groups_present_.push_back(static_cast<world::Group>(g));
}

std::span<const double> SampleTable::samples(world::Group group, std::int32_t index) const {
  auto it = cells_.find({group_key(group), index});
  if (it == cells_.end()) return {};
  return it->second;
}

std::vector<std::int32_t> SampleTable::indices() const {
  std::set<std::int32_t> all;
  for (const auto& [key, values] : cells_) all.insert(key.second);
  return {all.begin(), all.end()};
}

std::int32_t SampleTable::max_index() const {
  std::int32_t best = 0;
  for (const auto& [key, values] : cells_) best = std::max(best, key.second);
  return best;
}

std::int32_t SampleTable::index_cap(std::int64_t min_count) const {
  std::int32_t cap = 0;
  for (std::int32_t idx : indices()) {
    bool ok = true;
    for (world::Group g : groups_present_) {
      if (static_cast<std::int64_t>(samples(g, idx).size()) < min_count) {
        ok = false;
        break;
      }
    }
    if (ok) cap = std::max(cap, idx);
  }
  return cap;
}

std::vector<AggregateRow> SampleTable::aggregate(const std::string& experiment) const {
  std::vector<AggregateRow> rows;
  rows.reserve(cells_.size());
  for (const auto& [key, values] : cells_) {
    const Moments m = moments(values);
    AggregateRow row;
    row.experiment = experiment;
    row.group = static_cast<world::Group>(key.first);
    row.interaction_index = key.second;
    row.mean_ug = m.mean;
    row.sample_count = static_cast<std::int64_t>(m.n);
    row.std_dev = m.n >= 2 ? std::sqrt(m.variance) : 0.0;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    const std::string ga = world::group_name(a.group);
    const std::string gb = world::group_name(b.group);
    if (a.experiment != b.experiment) return a.experiment < b.experiment;
    if (ga != gb) return ga < gb;
    return a.interaction_index < b.interaction_index;
  });
  return rows;
}

std::vector<RankRow> rank_pair(const SampleTable& table, const std::string& experiment,
                               world::Group a, world::Group b, double alpha,
                               std::int32_t index_limit) {
  std::vector<RankRow> rows;
  for (std::int32_t idx : table.indices()) {
    if (index_limit > 0 && idx > index_limit) break;
    const auto sa = table.samples(a, idx);
    const auto sb = table.samples(b, idx);
    if (sa.empty() || sb.empty()) continue;
    const WelchResult test = welch_t_test(sa, sb, alpha);
    RankRow row;
    row.experiment = experiment;
    row.interaction_index = idx;
    row.group_a = a;
    row.group_b = b;
    row.mean_a = mean_of(sa);
    row.mean_b = mean_of(sb);
    row.p_value = test.p_value;
    if (test.significant) {
      row.rank_a = row.mean_a > row.mean_b ? 2 : 1;
      row.rank_b = row.mean_b > row.mean_a ? 2 : 1;
    } else {
      row.rank_a = 1;
      row.rank_b = 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace trustsim::harness
