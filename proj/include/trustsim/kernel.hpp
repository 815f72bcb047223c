#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trustsim/ca_model.hpp"
#include "trustsim/fire_model.hpp"
#include "trustsim/world.hpp"

// Round protocol: consumer activation, FIRE select-and-interact, CA
// broadcast/escalation/service, feedback delivery, logging, end-of-round
// dynamics. One run is one sequential execution.

namespace trustsim::sim {

struct ModelParams {
  ca::CaParams ca;
  fire::FireParams fire;
};

struct InteractionLog {
  std::int32_t run_id = 0;
  std::int32_t round = 0;
  AgentId consumer = 0;
  world::Group group = world::Group::kFire;
  std::int32_t interaction_index = 0;  // consumer's lifetime count, 1-based
  double ug = 0.0;
  AgentId provider = 0;
  std::optional<ca::Level> level;  // level served; absent for FIRE
};

// Executes one round: activation draws for every consumer, FIRE interactions,
// CA escalations, then end-of-round dynamics. Appends log rows for completed
// interactions; unserved consumers leave no row.
void run_round(world::World& world, const world::DynamicsConfig& dynamics,
               const ModelParams& params, std::int32_t round, std::int32_t run_id,
               Rng& rng, std::vector<InteractionLog>& logs, std::ostream* trace = nullptr);

// One FIRE interaction: select a nearby provider by composite trust, use the
// service, record the normalized rating locally and offer it to the
// provider's certified store.
std::optional<InteractionLog> fire_interaction(world::World& world,
                                               world::ConsumerAgent& consumer,
                                               const ModelParams& params,
                                               std::int32_t round, std::int32_t run_id,
                                               Rng& rng);

// One CA escalation: request levels from PERFECT down to WORST; per level,
// broadcast to all nearby providers and poll them in seeded random order; the
// first provider whose trust state accepts performs the task. Every polled
// provider drains its inbox whether or not it serves.
std::optional<InteractionLog> ca_escalation(world::World& world,
                                            world::ConsumerAgent& consumer,
                                            const ModelParams& params, std::int32_t round,
                                            std::int32_t run_id, Rng& rng);

// Full deterministic run: world init plus rounds 1..N.
std::vector<InteractionLog> run_simulation(const world::WorldConfig& world_config,
                                           const world::DynamicsConfig& dynamics,
                                           const ModelParams& params, std::uint64_t seed,
                                           std::int32_t run_id = 0,
                                           std::ostream* trace = nullptr);

}  // namespace trustsim::sim
