#include "trustsim/kernel.hpp"

#include <algorithm>
#include <ostream>

namespace trustsim::sim {

namespace {

// World view handed to FIRE's trust evaluation. Only consumers own rating
// histories; providers answer witness queries with nothing.
class WorldDirectory final : public fire::TrustDirectory {
 public:
  explicit WorldDirectory(const world::World& w) : world_(w) {}

  std::span<const AgentId> acquaintances(AgentId agent) const override {
    return world_.nearby(agent);
  }

  std::span<const fire::RatingRecord> ratings_of(AgentId owner,
                                                 AgentId provider) const override {
    const world::ConsumerAgent* consumer = world_.find_consumer(owner);
    if (consumer == nullptr || consumer->group != world::Group::kFire) return {};
    return consumer->ratings.ratings_of(provider);
  }

  const fire::CertifiedStore* certified_store(AgentId provider) const override {
    const world::ProviderAgent* p = world_.find_provider(provider);
    return p != nullptr ? &p->certified : nullptr;
  }

 private:
  const world::World& world_;
};

double euclidean(const world::Cartesian& a, const world::Cartesian& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void write_trace(std::ostream* trace, const InteractionLog& row) {
  if (trace == nullptr) return;
  *trace << "round=" << row.round << " consumer=" << row.consumer
         << " group=" << world::group_name(row.group) << " provider=" << row.provider
         << " level=" << (row.level ? ca::level_name(*row.level) : "-")
         << " ug=" << row.ug << '\n';
}

}  // namespace

std::optional<InteractionLog> fire_interaction(world::World& world,
                                               world::ConsumerAgent& consumer,
                                               const ModelParams& params,
                                               std::int32_t round, std::int32_t run_id,
                                               Rng& rng) {
  const std::vector<AgentId> candidates = world.nearby_providers(consumer.id);
  if (candidates.empty()) return std::nullopt;

  WorldDirectory directory(world);
  const std::optional<AgentId> chosen =
      fire::select_provider(consumer.id, candidates, consumer.ratings, directory, {},
                            params.fire, round, rng);
  if (!chosen) return std::nullopt;

  world::ProviderAgent* provider = world.find_provider(*chosen);
  const double dist = euclidean(consumer.pos, provider->pos);
  const double raw = world::sample_performance(provider->profile, rng);
  const double ug = world::degrade(raw, dist, world.config().operational_radius,
                                   world.config().world_radius);

  const fire::RatingRecord rating{consumer.id, provider->id, 0, round, ug / 10.0};
  consumer.ratings.record(rating, params.fire.history_size);
  provider->certified.offer(rating, params.fire.history_size);

  InteractionLog row;
  row.run_id = run_id;
  row.round = round;
  row.consumer = consumer.id;
  row.group = consumer.group;
  row.interaction_index = ++consumer.interaction_count;
  row.ug = ug;
  row.provider = provider->id;
  return row;
}

std::optional<InteractionLog> ca_escalation(world::World& world,
                                            world::ConsumerAgent& consumer,
                                            const ModelParams& params, std::int32_t round,
                                            std::int32_t run_id, Rng& rng) {
  const ca::Variant variant =
      consumer.group == world::Group::kCaNew ? ca::Variant::kV3 : ca::Variant::kV2;
  const std::vector<AgentId> providers = world.nearby_providers(consumer.id);
  if (providers.empty()) return std::nullopt;

  for (ca::Level level : ca::kAllLevels) {
    const ca::TaskSpec task{0, level};
    const ca::RequestMessage message{consumer.id, task, round};

    // Broadcast: every nearby provider stores the request and initializes or
    // refreshes its connection.
    for (AgentId pid : providers) {
      world::ProviderAgent* p = world.find_provider(pid);
      ca::TrustState& state = variant == ca::Variant::kV3 ? p->ca_new : p->ca_old;
      state.receive_request(message, variant);
    }

    // Poll in random order; the first acceptor serves, the rest still purge
    // their inboxes.
    std::vector<AgentId> order = providers;
    rng.shuffle(order);
    bool done = false;
    InteractionLog row;
    for (AgentId pid : order) {
      world::ProviderAgent* p = world.find_provider(pid);
      ca::TrustState& state = variant == ca::Variant::kV3 ? p->ca_new : p->ca_old;
      const auto decisions = state.select_and_decide(
          params.ca, [&](const ca::RequestMessage&) { return !done; });
      for (const auto& decision : decisions) {
        if (!decision.accept || done) continue;
        const double dist = euclidean(consumer.pos, p->pos);
        const double raw = world::sample_performance(p->profile, rng);
        const double ug = world::degrade(raw, dist, world.config().operational_radius,
                                         world.config().world_radius);
        const bool success = ca::meets_requirement(ug, level);
        state.record_outcome(consumer.id, task, success, params.ca);
        if (variant == ca::Variant::kV3) state.update_bad_flag(ug);
        state.generalize_upward(consumer.id, task, ug, params.ca);

        row.run_id = run_id;
        row.round = round;
        row.consumer = consumer.id;
        row.group = consumer.group;
        row.interaction_index = ++consumer.interaction_count;
        row.ug = ug;
        row.provider = pid;
        row.level = level;
        done = true;
      }
    }
    if (done) return row;
  }
  return std::nullopt;
}

void run_round(world::World& world, const world::DynamicsConfig& dynamics,
               const ModelParams& params, std::int32_t round, std::int32_t run_id,
               Rng& rng, std::vector<InteractionLog>& logs, std::ostream* trace) {
  auto consumers = world.consumers();

  std::vector<char> active(consumers.size());
  for (std::size_t i = 0; i < consumers.size(); ++i) {
    active[i] = rng.bernoulli(consumers[i].activity) ? 1 : 0;
  }

  for (std::size_t i = 0; i < consumers.size(); ++i) {
    if (!active[i] || consumers[i].group != world::Group::kFire) continue;
    if (auto row = fire_interaction(world, consumers[i], params, round, run_id, rng)) {
      write_trace(trace, *row);
      logs.push_back(*row);
    }
  }

  for (std::size_t i = 0; i < consumers.size(); ++i) {
    if (!active[i] || consumers[i].group == world::Group::kFire) continue;
    if (auto row = ca_escalation(world, consumers[i], params, round, run_id, rng)) {
      write_trace(trace, *row);
      logs.push_back(*row);
    }
  }

  world.apply_dynamics(dynamics, rng);
}

std::vector<InteractionLog> run_simulation(const world::WorldConfig& world_config,
                                           const world::DynamicsConfig& dynamics,
                                           const ModelParams& params, std::uint64_t seed,
                                           std::int32_t run_id, std::ostream* trace) {
  Rng rng(seed);
  world::World w(world_config, rng);
  std::vector<InteractionLog> logs;
  for (std::int32_t round = 1; round <= world_config.rounds; ++round) {
    run_round(w, dynamics, params, round, run_id, rng, logs, trace);
  }
  return logs;
}

}  // namespace trustsim::sim
