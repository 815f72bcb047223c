#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "trustsim/rng.hpp"

// Trustee-side trust model: each provider keeps weighted connections to the
// consumers it has heard from, one per (consumer, task). The provider accepts
// a request iff the connection weight reaches the acceptance threshold.
// Two algorithm variants are supported: V2 (cold-start averaging plus upward
// generalization) and V3 (V2 plus bad-provider self-classification).

namespace trustsim::ca {

// Service quality levels, ordered strictest first.
enum class Level : std::int8_t { kPerfect = 0, kGood = 1, kOk = 2, kBad = 3, kWorst = 4 };

inline constexpr Level kAllLevels[] = {Level::kPerfect, Level::kGood, Level::kOk,
                                       Level::kBad, Level::kWorst};

// Utility-gain constant of a level: 10, 5, 0, -5, -10.
double utility_constant(Level level);

// Minimum delivered performance that counts as a successful execution at a
// level. Equals the level's utility constant; PERFECT effectively demands the
// full score of 10 since performance is capped there.
double min_successful_performance(Level level);

inline bool meets_requirement(double performance, Level level) {
  return performance >= min_successful_performance(level);
}

const char* level_name(Level level);
bool is_stricter(Level a, Level b);  // a demands more than b

struct TaskSpec {
  std::int32_t service_id = 0;
  Level level = Level::kPerfect;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
  friend auto operator<=>(const TaskSpec&, const TaskSpec&) = default;
};

struct CaParams {
  double threshold = 0.5;
  double alpha = 0.1;
  double beta = 0.1;
};

struct RequestMessage {
  AgentId consumer = 0;
  TaskSpec task;
  std::int32_t round = 0;
};

enum class Variant { kV2, kV3 };

// Weight update on success: min(1, w + alpha * (1 - w)).
double strengthen(double w, double alpha);
// Weight update on failure: max(0, w - beta * (1 - w)).
double weaken(double w, double beta);

struct Connection {
  AgentId provider = 0;
  AgentId consumer = 0;
  TaskSpec task;
  double weight = 0.5;
};

// One provider's connection store and inbox for one algorithm variant.
// Operations are sequential within a simulation step (single writer).
class TrustState {
 public:
  bool has_connection(AgentId consumer, const TaskSpec& task) const;
  std::optional<double> weight(AgentId consumer, const TaskSpec& task) const;

  // Cold-start initialization. Weight is the arithmetic mean of this task's
  // connections with other consumers, or 0.5 when there are none. V3 forces
  // 0.45 for OK-or-better tasks while the provider classifies itself bad.
  // Precondition: no connection exists for (consumer, task).
  double init_connection_v2(AgentId consumer, const TaskSpec& task);
  double init_connection_v3(AgentId consumer, const TaskSpec& task);

  // V3 re-check on a repeated request: a self-classified bad provider
  // overwrites the existing weight with 0.45 for OK-or-better tasks.
  // Precondition: the connection exists.
  double refresh_connection_v3(AgentId consumer, const TaskSpec& task);

  // Inbox handling for one incoming request: stores the message (duplicate
  // (consumer, task) entries are ignored) and initializes or refreshes the
  // connection per the variant. Returns the connection weight after handling.
  double receive_request(const RequestMessage& message, Variant variant);

  struct Decision {
    RequestMessage message;
    bool accept = false;
    double weight = 0.0;
  };

  // Drains the pending inbox in descending connection-weight order (ties:
  // earliest arrival, then lowest consumer id). A message is accepted iff its
  // weight meets the threshold and the task is still available at decision
  // time. All pending messages are removed, accepted or not.
  std::vector<Decision> select_and_decide(
      const CaParams& params,
      const std::function<bool(const RequestMessage&)>& available);

  // Post-execution weight update; returns the new weight.
  double record_outcome(AgentId consumer, const TaskSpec& task, bool success,
                        const CaParams& params);

  // After executing `executed` for `consumer` with the given performance,
  // raises to the threshold every below-threshold connection of the same
  // consumer and service whose level is stricter than the executed one and
  // whose requirement the performance would have met.
  std::vector<Connection> generalize_upward(AgentId consumer, const TaskSpec& executed,
                                            double performance, const CaParams& params);

  // V3 self-classification after each provision: bad iff performance <= 0.
  bool update_bad_flag(double performance);
  bool bad_flag() const { return bad_; }

  std::size_t pending_count() const { return pending_.size(); }
  std::size_t connection_count() const;
  std::vector<Connection> connections(AgentId self = 0) const;

 private:
  struct TaskConnections {
    std::vector<AgentId> owners;
    std::vector<double> weights;  // parallel to owners
    std::unordered_map<AgentId, std::size_t> index;
  };

  double* find_weight(AgentId consumer, const TaskSpec& task);
  const double* find_weight(AgentId consumer, const TaskSpec& task) const;
  double store_connection(AgentId consumer, const TaskSpec& task, double weight);
  double mean_other_weights(const TaskSpec& task) const;  // 0.5 when none exist

  std::map<TaskSpec, TaskConnections> tasks_;
  std::vector<RequestMessage> pending_;
  bool bad_ = false;
};

}  // namespace trustsim::ca
