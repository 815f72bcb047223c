#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "trustsim/ca_model.hpp"
#include "trustsim/fire_model.hpp"
#include "trustsim/rng.hpp"

// Spherical-world testbed: agents live inside a ball of radius 1.0, interact
// within an operational radius of 0.5, and are subject to per-round dynamics
// (performance drift, profile switching, location drift, churn).

namespace trustsim::world {

struct Location {
  double r = 0.0;      // radial distance, [0, 1]
  double phi = 0.0;    // azimuth, [0, 2*pi)
  double theta = 0.0;  // polar angle, [0, pi]
};

struct Cartesian {
  double x = 0.0, y = 0.0, z = 0.0;
};

Cartesian to_cartesian(const Location& loc);
double distance(const Location& a, const Location& b);

enum class ProfileKind : std::int8_t { kGood = 0, kOrdinary = 1, kIntermittent = 2, kBad = 3 };

const char* profile_name(ProfileKind kind);

struct ProviderProfile {
  ProfileKind kind = ProfileKind::kOrdinary;
  double mu = 0.0;     // mean performance; unused for intermittent providers
  double sigma = 0.0;  // performance standard deviation; unused for intermittent
};

// Fresh profile of the given kind: mu uniform in the kind's range
// (good [5,10], ordinary [0,5], bad [-10,0]) and the kind's sigma.
ProviderProfile make_profile(ProfileKind kind, Rng& rng);

// One service draw: normal(mu, sigma) for good/ordinary/bad, uniform [-5, 5]
// for intermittent; always clamped into [-10, 10].
double sample_performance(const ProviderProfile& profile, Rng& rng);

// Linear quality loss beyond the provider's radius. Within the radius the raw
// performance passes through; beyond it the loss grows with slope
// (PL_PERFECT - PL_WORST) / (2 * world_radius - provider_radius), and the
// result is clamped into [-10, 10].
double degrade(double raw, double dist, double provider_radius, double world_radius);

enum class Group : std::int8_t { kFire = 0, kCaOld = 1, kCaNew = 2 };

const char* group_name(Group group);

struct DynamicsConfig {
  double p_consumer_population_change = 0.0;  // p_CPC
  double p_provider_population_change = 0.0;  // p_PPC
  double p_consumer_location_change = 0.0;    // p_CLC
  double p_provider_location_change = 0.0;    // p_PLC
  double max_angle_change = 0.0;              // delta-phi bound
  double p_mu_change = 0.0;                   // p_muC
  double mu_change_magnitude = 0.0;           // M
  double p_profile_switch = 0.0;

  bool all_zero() const;
};

struct WorldConfig {
  int rounds = 500;
  int n_providers = 100;
  int n_good = 10;
  int n_ordinary = 40;
  int n_intermittent = 5;
  int n_bad = 45;
  int n_consumers = 500;
  double activity_min = 0.25;
  double activity_max = 1.00;
  double world_radius = 1.0;
  double operational_radius = 0.5;
};

struct ProviderAgent {
  AgentId id = 0;
  Location loc;
  Cartesian pos;
  ProviderProfile profile;
  ca::TrustState ca_old;  // serves CA_OLD consumers (variant V2)
  ca::TrustState ca_new;  // serves CA_NEW consumers (variant V3)
  fire::CertifiedStore certified;
};

struct ConsumerAgent {
  AgentId id = 0;
  Location loc;
  Cartesian pos;
  double activity = 0.5;
  Group group = Group::kFire;
  std::int32_t interaction_count = 0;
  fire::RatingDb ratings;  // used by the FIRE group only
};

struct DynamicsReport {
  int mu_drifts = 0;
  int profile_switches = 0;
  int consumer_moves = 0;
  int provider_moves = 0;
  int consumers_replaced = 0;
  int providers_replaced = 0;
};

class World {
 public:
  // Populated world per config: uniform-in-ball placement, profile counts per
  // config, consumer groups split as evenly as possible (cycling FIRE,
  // CA_OLD, CA_NEW). Throws std::invalid_argument on inconsistent counts.
  World(const WorldConfig& config, Rng& rng);

  // Empty world for hand-built scenarios (tests, custom setups).
  explicit World(const WorldConfig& config);

  const WorldConfig& config() const { return config_; }

  std::span<const ProviderAgent> providers() const { return providers_; }
  std::span<const ConsumerAgent> consumers() const { return consumers_; }
  std::span<ProviderAgent> providers() { return providers_; }
  std::span<ConsumerAgent> consumers() { return consumers_; }

  ProviderAgent* find_provider(AgentId id);
  const ProviderAgent* find_provider(AgentId id) const;
  ConsumerAgent* find_consumer(AgentId id);
  const ConsumerAgent* find_consumer(AgentId id) const;
  bool is_provider(AgentId id) const;

  AgentId add_provider(const Location& loc, const ProviderProfile& profile);
  AgentId add_consumer(const Location& loc, double activity, Group group);

  // All agents (either kind) within the operational radius of the given
  // agent, excluding itself; closed ball, sorted by id.
  std::span<const AgentId> nearby(AgentId agent) const;
  std::vector<AgentId> nearby_providers(AgentId agent) const;

  // End-of-round dynamics, applied in a fixed order: mu drift, profile
  // switch, location changes, churn.
  DynamicsReport apply_dynamics(const DynamicsConfig& dynamics, Rng& rng);

 private:
  void rebuild_index();
  void rebuild_adjacency() const;
  void place_randomly(Location& loc, Cartesian& pos, Rng& rng);

  WorldConfig config_;
  std::vector<ProviderAgent> providers_;
  std::vector<ConsumerAgent> consumers_;
  AgentId next_id_ = 1;

  // id -> (is_provider, index into the owning vector)
  std::unordered_map<AgentId, std::pair<bool, std::size_t>> index_;

  mutable bool adjacency_valid_ = false;
  mutable std::unordered_map<AgentId, std::vector<AgentId>> adjacency_;
};

Location random_location(double world_radius, Rng& rng);

}  // namespace trustsim::world
