#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "trustsim/rng.hpp"

// Consumer-side trust and reputation model with four components: interaction
// trust (own rating history), role-based trust (rule base, empty in this
// testbed), witness reputation (referral search over acquaintances), and
// certified reputation (references the provider itself retains).

namespace trustsim::fire {

struct FireParams {
  int history_size = 10;                          // H
  double recency_scale = -5.0 / std::log(0.5);    // lambda
  int branching_factor = 2;                       // n_BF
  int referral_length = 5;                        // n_RL
  double w_interaction = 2.0;
  double w_role = 2.0;
  double w_witness = 1.0;
  double w_certified = 0.5;
  double gamma_interaction = -std::log(0.5);
  double gamma_role = -std::log(0.5);
  double gamma_witness = -std::log(0.5);
  double gamma_certified = -std::log(0.5);
  double exploration = 0.1;  // probability of trying an unrated candidate
};

struct RatingRecord {
  AgentId rater = 0;
  AgentId ratee = 0;
  std::int32_t term = 0;  // single service term in this testbed
  std::int32_t round = 0;
  double value = 0.0;  // normalized utility, in [-1, 1]
};

// One agent's local rating history: per (ratee, term), at most `capacity`
// records, oldest evicted first.
class RatingDb {
 public:
  void record(const RatingRecord& rating, int capacity);
  std::span<const RatingRecord> ratings_of(AgentId ratee, std::int32_t term = 0) const;
  std::size_t total_count() const;

 private:
  std::map<std::pair<AgentId, std::int32_t>, std::vector<RatingRecord>> by_target_;
};

// References a provider chooses to retain: its `capacity` highest-valued
// received ratings (replacement only for strictly higher values).
class CertifiedStore {
 public:
  void offer(const RatingRecord& rating, int capacity);
  std::span<const RatingRecord> references() const { return refs_; }
  bool empty() const { return refs_.empty(); }

 private:
  std::vector<RatingRecord> refs_;
};

struct TrustReport {
  std::optional<double> value;
  double reliability = 0.0;

  bool has_value() const { return value.has_value(); }
};

// Recency-weighted aggregation of a rating set:
//   w_i    = exp(-(now - round_i) / lambda)
//   value  = sum(w_i v_i) / sum(w_i)
//   rho_R  = 1 - exp(-gamma * sum(w_i))          (rating reliability)
//   rho_D  = 1 - (sum(w_i |v_i - value|) / sum(w_i)) / 2   (deviation reliability)
//   reliability = rho_R * rho_D
// Empty input yields (absent, 0).
TrustReport component_trust(std::span<const RatingRecord> records, std::int32_t now,
                            double gamma, double lambda);

// Read-only view of the world used by witness search and provider evaluation.
class TrustDirectory {
 public:
  virtual ~TrustDirectory() = default;
  virtual std::span<const AgentId> acquaintances(AgentId agent) const = 0;
  // The agent's locally stored ratings of the provider (empty for agents
  // without a rating history).
  virtual std::span<const RatingRecord> ratings_of(AgentId owner, AgentId provider) const = 0;
  virtual const CertifiedStore* certified_store(AgentId provider) const = 0;
};

// Breadth-first referral search rooted at the consumer. The consumer itself is
// not queried and does not count toward the referral length; each queried node
// either contributes its local ratings of the provider (and stops) or forwards
// to branching_factor randomly chosen acquaintances, up to referral_length
// hops. Collected ratings are aggregated with gamma_witness.
TrustReport witness_reputation(AgentId consumer, AgentId provider,
                               const TrustDirectory& directory, const FireParams& params,
                               std::int32_t now, Rng& rng);

TrustReport certified_reputation(AgentId provider, const CertifiedStore& store,
                                 const FireParams& params, std::int32_t now);

struct RoleRule {
  bool applies_to_all = true;  // the testbed rule base is empty or global
  double value = 0.0;
  double reliability = 0.0;
};

// Reliability-weighted mean over matching rules; (absent, 0) when none match.
TrustReport role_based_trust(AgentId consumer, AgentId provider,
                             std::span<const RoleRule> rules);

// Combination across components with present values:
//   value       = sum(W_K rho_K value_K) / sum(W_K rho_K)
//   reliability = sum(W_K rho_K) / sum over all components of W_K
TrustReport composite_trust(const TrustReport& interaction, const TrustReport& role,
                            const TrustReport& witness, const TrustReport& certified,
                            const FireParams& params);

// Full evaluation of one candidate provider from the consumer's viewpoint.
TrustReport evaluate_provider(AgentId consumer, AgentId provider, const RatingDb& own_db,
                              const TrustDirectory& directory,
                              std::span<const RoleRule> rules, const FireParams& params,
                              std::int32_t now, Rng& rng);

// Provider selection: evaluate all candidates; with probability `exploration`
// pick uniformly among candidates without any trust value (when such
// candidates exist); otherwise pick the rated candidate with the highest
// composite value (ties: lowest id). Empty candidate list yields nullopt.
std::optional<AgentId> select_provider(AgentId consumer, std::span<const AgentId> candidates,
                                       const RatingDb& own_db, const TrustDirectory& directory,
                                       std::span<const RoleRule> rules,
                                       const FireParams& params, std::int32_t now, Rng& rng);

// Deterministic argmax used by selection: highest value, ties to lowest id.
std::optional<AgentId> argmax_candidate(std::span<const AgentId> ids,
                                        std::span<const double> values);

}  // namespace trustsim::fire
