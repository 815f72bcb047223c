#include "trustsim/ca_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trustsim::ca {

double utility_constant(Level level) {
  switch (level) {
    case Level::kPerfect: return 10.0;
    case Level::kGood: return 5.0;
    case Level::kOk: return 0.0;
    case Level::kBad: return -5.0;
    case Level::kWorst: return -10.0;
  }
  return 0.0;
}

double min_successful_performance(Level level) { return utility_constant(level); }

const char* level_name(Level level) {
  switch (level) {
    case Level::kPerfect: return "PERFECT";
    case Level::kGood: return "GOOD";
    case Level::kOk: return "OK";
    case Level::kBad: return "BAD";
    case Level::kWorst: return "WORST";
  }
  return "?";
}

bool is_stricter(Level a, Level b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

double strengthen(double w, double alpha) {
  return std::min(1.0, w + alpha * (1.0 - w));
}

double weaken(double w, double beta) {
  return std::max(0.0, w - beta * (1.0 - w));
}

bool TrustState::has_connection(AgentId consumer, const TaskSpec& task) const {
  return find_weight(consumer, task) != nullptr;
}

std::optional<double> TrustState::weight(AgentId consumer, const TaskSpec& task) const {
  const double* w = find_weight(consumer, task);
  if (w == nullptr) return std::nullopt;
  return *w;
}

double* TrustState::find_weight(AgentId consumer, const TaskSpec& task) {
  auto it = tasks_.find(task);
  if (it == tasks_.end()) return nullptr;
  auto idx = it->second.index.find(consumer);
  if (idx == it->second.index.end()) return nullptr;
  return &it->second.weights[idx->second];
}

const double* TrustState::find_weight(AgentId consumer, const TaskSpec& task) const {
  return const_cast<TrustState*>(this)->find_weight(consumer, task);
}

double TrustState::mean_other_weights(const TaskSpec& task) const {
  auto it = tasks_.find(task);
  if (it == tasks_.end() || it->second.weights.empty()) return 0.5;
  const auto& w = it->second.weights;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  return sum / static_cast<double>(w.size());
}

double TrustState::store_connection(AgentId consumer, const TaskSpec& task, double weight) {
  auto& conns = tasks_[task];
  conns.index.emplace(consumer, conns.owners.size());
  conns.owners.push_back(consumer);
  conns.weights.push_back(weight);
  return weight;
}

double TrustState::init_connection_v2(AgentId consumer, const TaskSpec& task) {
  return store_connection(consumer, task, mean_other_weights(task));
}

double TrustState::init_connection_v3(AgentId consumer, const TaskSpec& task) {
  if (bad_ && is_stricter(task.level, Level::kBad)) {
    return store_connection(consumer, task, 0.45);
  }
  return init_connection_v2(consumer, task);
}

double TrustState::refresh_connection_v3(AgentId consumer, const TaskSpec& task) {
  double* w = find_weight(consumer, task);
  if (w == nullptr) {
    throw std::logic_error("refresh_connection_v3: connection does not exist");
  }
  if (bad_ && is_stricter(task.level, Level::kBad)) *w = 0.45;
  return *w;
}

double TrustState::receive_request(const RequestMessage& message, Variant variant) {
  const bool duplicate =
      std::any_of(pending_.begin(), pending_.end(), [&](const RequestMessage& m) {
        return m.consumer == message.consumer && m.task == message.task;
      });
  if (!duplicate) pending_.push_back(message);

  if (!has_connection(message.consumer, message.task)) {
    return variant == Variant::kV3 ? init_connection_v3(message.consumer, message.task)
                                   : init_connection_v2(message.consumer, message.task);
  }
  if (variant == Variant::kV3) {
    return refresh_connection_v3(message.consumer, message.task);
  }
  return *find_weight(message.consumer, message.task);
}

std::vector<TrustState::Decision> TrustState::select_and_decide(
    const CaParams& params,
    const std::function<bool(const RequestMessage&)>& available) {
  struct Entry {
    std::size_t arrival;
    double weight;
  };
  std::vector<Entry> entries;
  entries.reserve(pending_.size());
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const double* w = find_weight(pending_[i].consumer, pending_[i].task);
    if (w == nullptr) {
      throw std::logic_error("select_and_decide: pending message without connection");
    }
    entries.push_back({i, *w});
  }
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return pending_[a.arrival].consumer < pending_[b.arrival].consumer;
  });

  std::vector<Decision> decisions;
  decisions.reserve(entries.size());
  for (const Entry& e : entries) {
    const RequestMessage& m = pending_[e.arrival];
    const bool accept = e.weight >= params.threshold && available(m);
    decisions.push_back({m, accept, e.weight});
  }
  pending_.clear();
  return decisions;
}

double TrustState::record_outcome(AgentId consumer, const TaskSpec& task, bool success,
                                  const CaParams& params) {
  double* w = find_weight(consumer, task);
  if (w == nullptr) {
    throw std::logic_error("record_outcome: connection does not exist");
  }
  *w = success ? strengthen(*w, params.alpha) : weaken(*w, params.beta);
  return *w;
}

std::vector<Connection> TrustState::generalize_upward(AgentId consumer,
                                                      const TaskSpec& executed,
                                                      double performance,
                                                      const CaParams& params) {
  std::vector<Connection> updated;
  for (auto& [task, conns] : tasks_) {
    if (task.service_id != executed.service_id) continue;
    if (!is_stricter(task.level, executed.level)) continue;
    if (performance < min_successful_performance(task.level)) continue;
    auto idx = conns.index.find(consumer);
    if (idx == conns.index.end()) continue;
    double& w = conns.weights[idx->second];
    if (w < params.threshold) {
      w = params.threshold;
      updated.push_back({0, consumer, task, w});
    }
  }
  return updated;
}

bool TrustState::update_bad_flag(double performance) {
  bad_ = performance <= 0.0;
  return bad_;
}

std::size_t TrustState::connection_count() const {
  std::size_t n = 0;
  for (const auto& [task, conns] : tasks_) n += conns.owners.size();
  return n;
}

std::vector<Connection> TrustState::connections(AgentId self) const {
  std::vector<Connection> out;
  out.reserve(connection_count());
  for (const auto& [task, conns] : tasks_) {
    for (std::size_t i = 0; i < conns.owners.size(); ++i) {
      out.push_back({self, conns.owners[i], task, conns.weights[i]});
    }
  }
  return out;
}

}  // namespace trustsim::ca
