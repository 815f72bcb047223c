#include "trustsim/fire_model.hpp"

#include <algorithm>
#include <cstddef>

namespace trustsim::fire {

void RatingDb::record(const RatingRecord& rating, int capacity) {
  if (rating.value < -1.0 || rating.value > 1.0) return;  // out-of-range rejected
  auto& history = by_target_[{rating.ratee, rating.term}];
  history.push_back(rating);
  if (history.size() > static_cast<std::size_t>(capacity)) {
    history.erase(history.begin());
  }
}

std::span<const RatingRecord> RatingDb::ratings_of(AgentId ratee, std::int32_t term) const {
  auto it = by_target_.find({ratee, term});
  if (it == by_target_.end()) return {};
  return it->second;
}

std::size_t RatingDb::total_count() const {
  std::size_t n = 0;
  for (const auto& [key, history] : by_target_) n += history.size();
  return n;
}

void CertifiedStore::offer(const RatingRecord& rating, int capacity) {
  if (refs_.size() < static_cast<std::size_t>(capacity)) {
    refs_.push_back(rating);
    return;
  }
  auto lowest = std::min_element(refs_.begin(), refs_.end(),
                                 [](const RatingRecord& a, const RatingRecord& b) {
                                   return a.value < b.value;
                                 });
  if (lowest != refs_.end() && rating.value > lowest->value) *lowest = rating;
}

TrustReport component_trust(std::span<const RatingRecord> records, std::int32_t now,
                            double gamma, double lambda) {
  if (records.empty()) return {};
  double weight_sum = 0.0;
  double weighted_value = 0.0;
  for (const RatingRecord& r : records) {
    const double age = static_cast<double>(now - r.round);
    const double w = std::exp(-age / lambda);
    weight_sum += w;
    weighted_value += w * r.value;
  }
  const double value = weighted_value / weight_sum;
  double weighted_abs_dev = 0.0;
  for (const RatingRecord& r : records) {
    const double age = static_cast<double>(now - r.round);
    const double w = std::exp(-age / lambda);
    weighted_abs_dev += w * std::abs(r.value - value);
  }
  const double rho_rating = 1.0 - std::exp(-gamma * weight_sum);
  const double rho_deviation = 1.0 - (weighted_abs_dev / weight_sum) / 2.0;
  return {value, rho_rating * rho_deviation};
}

TrustReport witness_reputation(AgentId consumer, AgentId provider,
                               const TrustDirectory& directory, const FireParams& params,
                               std::int32_t now, Rng& rng) {
  std::vector<RatingRecord> collected;
  std::vector<AgentId> visited{consumer};
  std::vector<AgentId> frontier{consumer};
  std::vector<AgentId> next;

  auto seen = [&](AgentId id) {
    return std::find(visited.begin(), visited.end(), id) != visited.end();
  };

  for (int depth = 1; depth <= params.referral_length && !frontier.empty(); ++depth) {
    next.clear();
    for (AgentId node : frontier) {
      const auto acq = directory.acquaintances(node);
      if (acq.empty()) continue;
      const int fanout = std::min<int>(params.branching_factor, static_cast<int>(acq.size()));
      // Sample fanout distinct positions from the acquaintance list.
      AgentId picks[2];
      std::vector<AgentId> extra;
      std::span<AgentId> chosen;
      if (static_cast<int>(acq.size()) <= params.branching_factor) {
        extra.assign(acq.begin(), acq.end());
        chosen = extra;
      } else if (fanout <= 2) {
        const auto n = static_cast<std::int64_t>(acq.size());
        const auto i = rng.uniform_int(0, n - 1);
        picks[0] = acq[static_cast<std::size_t>(i)];
        if (fanout == 2) {
          auto j = rng.uniform_int(0, n - 2);
          if (j >= i) ++j;
          picks[1] = acq[static_cast<std::size_t>(j)];
        }
        chosen = std::span<AgentId>(picks, static_cast<std::size_t>(fanout));
      } else {
        extra.assign(acq.begin(), acq.end());
        rng.shuffle(extra);
        extra.resize(static_cast<std::size_t>(fanout));
        chosen = extra;
      }
      for (AgentId candidate : chosen) {
        if (seen(candidate)) continue;
        visited.push_back(candidate);
        const auto ratings = directory.ratings_of(candidate, provider);
        if (!ratings.empty()) {
          collected.insert(collected.end(), ratings.begin(), ratings.end());
        } else {
          next.push_back(candidate);
        }
      }
    }
    frontier.swap(next);
  }

  if (collected.empty()) return {};
  return component_trust(collected, now, params.gamma_witness, params.recency_scale);
}

TrustReport certified_reputation(AgentId provider, const CertifiedStore& store,
                                 const FireParams& params, std::int32_t now) {
  (void)provider;
  return component_trust(store.references(), now, params.gamma_certified,
                         params.recency_scale);
}

TrustReport role_based_trust(AgentId consumer, AgentId provider,
                             std::span<const RoleRule> rules) {
  (void)consumer;
  (void)provider;
  double rho_sum = 0.0;
  double weighted_value = 0.0;
  double plain_value = 0.0;
  int matched = 0;
  for (const RoleRule& rule : rules) {
    if (!rule.applies_to_all) continue;
    ++matched;
    rho_sum += rule.reliability;
    weighted_value += rule.reliability * rule.value;
    plain_value += rule.value;
  }
  if (matched == 0) return {};
  const double value =
      rho_sum > 0.0 ? weighted_value / rho_sum : plain_value / matched;
  return {value, rho_sum / matched};
}

TrustReport composite_trust(const TrustReport& interaction, const TrustReport& role,
                            const TrustReport& witness, const TrustReport& certified,
                            const FireParams& params) {
  const TrustReport* reports[] = {&interaction, &role, &witness, &certified};
  const double weights[] = {params.w_interaction, params.w_role, params.w_witness,
                            params.w_certified};
  double coeff_sum = 0.0;
  double weighted_value = 0.0;
  double total_weight = 0.0;
  bool any = false;
  for (int k = 0; k < 4; ++k) {
    total_weight += weights[k];
    if (!reports[k]->has_value()) continue;
    any = true;
    const double coeff = weights[k] * reports[k]->reliability;
    coeff_sum += coeff;
    weighted_value += coeff * *reports[k]->value;
  }
  if (!any) return {};
  const double value = coeff_sum > 0.0 ? weighted_value / coeff_sum : 0.0;
  return {value, coeff_sum / total_weight};
}

TrustReport evaluate_provider(AgentId consumer, AgentId provider, const RatingDb& own_db,
                              const TrustDirectory& directory,
                              std::span<const RoleRule> rules, const FireParams& params,
                              std::int32_t now, Rng& rng) {
  const TrustReport it = component_trust(own_db.ratings_of(provider), now,
                                         params.gamma_interaction, params.recency_scale);
  const TrustReport rt = role_based_trust(consumer, provider, rules);
  const TrustReport wr = witness_reputation(consumer, provider, directory, params, now, rng);
  const CertifiedStore* store = directory.certified_store(provider);
  const TrustReport cr = store != nullptr
                             ? certified_reputation(provider, *store, params, now)
                             : TrustReport{};
  return composite_trust(it, rt, wr, cr, params);
}

std::optional<AgentId> argmax_candidate(std::span<const AgentId> ids,
                                        std::span<const double> values) {
  if (ids.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (values[i] > values[best] || (values[i] == values[best] && ids[i] < ids[best])) {
      best = i;
    }
  }
  return ids[best];
}

std::optional<AgentId> select_provider(AgentId consumer, std::span<const AgentId> candidates,
                                       const RatingDb& own_db, const TrustDirectory& directory,
                                       std::span<const RoleRule> rules,
                                       const FireParams& params, std::int32_t now, Rng& rng) {
  if (candidates.empty()) return std::nullopt;

  std::vector<AgentId> rated_ids;
  std::vector<double> rated_values;
  std::vector<AgentId> unrated;
  rated_ids.reserve(candidates.size());
  rated_values.reserve(candidates.size());
  for (AgentId candidate : candidates) {
    const TrustReport report =
        evaluate_provider(consumer, candidate, own_db, directory, rules, params, now, rng);
    if (report.has_value()) {
      rated_ids.push_back(candidate);
      rated_values.push_back(*report.value);
    } else {
      unrated.push_back(candidate);
    }
  }

  if (rated_ids.empty()) {
    return unrated[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(unrated.size()) - 1))];
  }
  if (!unrated.empty() && rng.bernoulli(params.exploration)) {
    return unrated[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(unrated.size()) - 1))];
  }
  return argmax_candidate(rated_ids, rated_values);
}

}  // namespace trustsim::fire
