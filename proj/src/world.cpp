#include "trustsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trustsim::world {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kPerformanceMin = -10.0;
constexpr double kPerformanceMax = 10.0;

double clamp_performance(double p) {
  return std::clamp(p, kPerformanceMin, kPerformanceMax);
}

// Wrap an azimuth into [0, 2*pi).
double wrap_phi(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
  return phi;
}

// Reflect a polar angle into [0, pi].
double reflect_theta(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  if (theta > kPi) theta = 2.0 * kPi - theta;
  return theta;
}

}  // namespace

Cartesian to_cartesian(const Location& loc) {
  const double sin_theta = std::sin(loc.theta);
  return {loc.r * sin_theta * std::cos(loc.phi), loc.r * sin_theta * std::sin(loc.phi),
          loc.r * std::cos(loc.theta)};
}

double distance(const Location& a, const Location& b) {
  const Cartesian ca = to_cartesian(a);
  const Cartesian cb = to_cartesian(b);
  const double dx = ca.x - cb.x;
  const double dy = ca.y - cb.y;
  const double dz = ca.z - cb.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const char* profile_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kGood: return "good";
    case ProfileKind::kOrdinary: return "ordinary";
    case ProfileKind::kIntermittent: return "intermittent";
    case ProfileKind::kBad: return "bad";
  }
  return "?";
}

const char* group_name(Group group) {
  switch (group) {
    case Group::kFire: return "FIRE";
    case Group::kCaOld: return "CA_OLD";
    case Group::kCaNew: return "CA_NEW";
  }
  return "?";
}

bool DynamicsConfig::all_zero() const {
  return p_consumer_population_change == 0.0 && p_provider_population_change == 0.0 &&
         p_consumer_location_change == 0.0 && p_provider_location_change == 0.0 &&
         p_mu_change == 0.0 && p_profile_switch == 0.0;
}

ProviderProfile make_profile(ProfileKind kind, Rng& rng) {
  switch (kind) {
    case ProfileKind::kGood: return {kind, rng.uniform(5.0, 10.0), 1.0};
    case ProfileKind::kOrdinary: return {kind, rng.uniform(0.0, 5.0), 2.0};
    case ProfileKind::kBad: return {kind, rng.uniform(-10.0, 0.0), 2.0};
    case ProfileKind::kIntermittent: return {kind, 0.0, 0.0};
  }
  return {};
}

double sample_performance(const ProviderProfile& profile, Rng& rng) {
  if (profile.kind == ProfileKind::kIntermittent) {
    return rng.uniform(-5.0, 5.0);
  }
  return clamp_performance(rng.normal(profile.mu, profile.sigma));
}

double degrade(double raw, double dist, double provider_radius, double world_radius) {
  if (dist <= provider_radius) return clamp_performance(raw);
  const double slope =
      (kPerformanceMax - kPerformanceMin) / (2.0 * world_radius - provider_radius);
  return clamp_performance(raw - slope * (dist - provider_radius));
}

Location random_location(double world_radius, Rng& rng) {
  const double r = world_radius * std::cbrt(rng.uniform());
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double theta = std::acos(1.0 - 2.0 * rng.uniform());
  return {r, phi, theta};
}

World::World(const WorldConfig& config) : config_(config) {}

World::World(const WorldConfig& config, Rng& rng) : config_(config) {
  if (config.n_good + config.n_ordinary + config.n_intermittent + config.n_bad !=
      config.n_providers) {
    throw std::invalid_argument("provider kind counts do not sum to n_providers");
  }
  if (config.n_providers < 0 || config.n_consumers < 0 || config.rounds < 0) {
    throw std::invalid_argument("negative population or round count");
  }
  if (config.activity_min > config.activity_max || config.activity_min < 0.0 ||
      config.activity_max > 1.0) {
    throw std::invalid_argument("invalid activity range");
  }

  providers_.reserve(config.n_providers);
  const std::pair<ProfileKind, int> kinds[] = {
      {ProfileKind::kGood, config.n_good},
      {ProfileKind::kOrdinary, config.n_ordinary},
      {ProfileKind::kIntermittent, config.n_intermittent},
      {ProfileKind::kBad, config.n_bad},
  };
  for (const auto& [kind, count] : kinds) {
    for (int i = 0; i < count; ++i) {
      ProviderAgent p;
      p.id = next_id_++;
      p.loc = random_location(config.world_radius, rng);
      p.pos = to_cartesian(p.loc);
      p.profile = make_profile(kind, rng);
      providers_.push_back(std::move(p));
    }
  }

  consumers_.reserve(config.n_consumers);
  const Group cycle[] = {Group::kFire, Group::kCaOld, Group::kCaNew};
  for (int i = 0; i < config.n_consumers; ++i) {
    ConsumerAgent c;
    c.id = next_id_++;
    c.loc = random_location(config.world_radius, rng);
    c.pos = to_cartesian(c.loc);
    c.activity = rng.uniform(config.activity_min, config.activity_max);
    c.group = cycle[i % 3];
    consumers_.push_back(std::move(c));
  }

  rebuild_index();
}

void World::rebuild_index() {
  index_.clear();
  index_.reserve(providers_.size() + consumers_.size());
  for (std::size_t i = 0; i < providers_.size(); ++i) {
    index_[providers_[i].id] = {true, i};
  }
  for (std::size_t i = 0; i < consumers_.size(); ++i) {
    index_[consumers_[i].id] = {false, i};
  }
  adjacency_valid_ = false;
}

ProviderAgent* World::find_provider(AgentId id) {
  auto it = index_.find(id);
  if (it == index_.end() || !it->second.first) return nullptr;
  return &providers_[it->second.second];
}

const ProviderAgent* World::find_provider(AgentId id) const {
  return const_cast<World*>(this)->find_provider(id);
}

ConsumerAgent* World::find_consumer(AgentId id) {
  auto it = index_.find(id);
  if (it == index_.end() || it->second.first) return nullptr;
  return &consumers_[it->second.second];
}

const ConsumerAgent* World::find_consumer(AgentId id) const {
  return const_cast<World*>(this)->find_consumer(id);
}

bool World::is_provider(AgentId id) const {
  auto it = index_.find(id);
  return it != index_.end() && it->second.first;
}

AgentId World::add_provider(const Location& loc, const ProviderProfile& profile) {
  ProviderAgent p;
  p.id = next_id_++;
  p.loc = loc;
  p.pos = to_cartesian(loc);
  p.profile = profile;
  providers_.push_back(std::move(p));
  index_[providers_.back().id] = {true, providers_.size() - 1};
  adjacency_valid_ = false;
  return providers_.back().id;
}

AgentId World::add_consumer(const Location& loc, double activity, Group group) {
  ConsumerAgent c;
  c.id = next_id_++;
  c.loc = loc;
  c.pos = to_cartesian(loc);
  c.activity = activity;
  c.group = group;
  consumers_.push_back(std::move(c));
  index_[consumers_.back().id] = {false, consumers_.size() - 1};
  adjacency_valid_ = false;
  return consumers_.back().id;
}

void World::rebuild_adjacency() const {
  adjacency_.clear();
  std::vector<std::pair<AgentId, const Cartesian*>> all;
  all.reserve(providers_.size() + consumers_.size());
  for (const auto& p : providers_) all.emplace_back(p.id, &p.pos);
  for (const auto& c : consumers_) all.emplace_back(c.id, &c.pos);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const double r0 = config_.operational_radius;
  const double r0_sq = r0 * r0;
  adjacency_.reserve(all.size());
  for (const auto& [id, pos] : all) adjacency_[id];
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double dx = all[i].second->x - all[j].second->x;
      const double dy = all[i].second->y - all[j].second->y;
      const double dz = all[i].second->z - all[j].second->z;
      if (dx * dx + dy * dy + dz * dz <= r0_sq) {
        adjacency_[all[i].first].push_back(all[j].first);
        adjacency_[all[j].first].push_back(all[i].first);
      }
    }
  }
  adjacency_valid_ = true;
}

std::span<const AgentId> World::nearby(AgentId agent) const {
  if (!adjacency_valid_) rebuild_adjacency();
  auto it = adjacency_.find(agent);
  if (it == adjacency_.end()) return {};
  return it->second;
}

std::vector<AgentId> World::nearby_providers(AgentId agent) const {
  std::vector<AgentId> out;
  for (AgentId id : nearby(agent)) {
    if (is_provider(id)) out.push_back(id);
  }
  return out;
}

DynamicsReport World::apply_dynamics(const DynamicsConfig& dynamics, Rng& rng) {
  DynamicsReport report;
  bool moved = false;

  // 1. Performance drift.
  if (dynamics.p_mu_change > 0.0) {
    for (auto& p : providers_) {
      if (p.profile.kind == ProfileKind::kIntermittent) continue;
      if (!rng.bernoulli(dynamics.p_mu_change)) continue;
      const double delta =
          rng.uniform(-dynamics.mu_change_magnitude, dynamics.mu_change_magnitude);
      p.profile.mu = std::clamp(p.profile.mu + delta, kPerformanceMin, kPerformanceMax);
      ++report.mu_drifts;
    }
  }

  // 2. Profile switch to a uniformly chosen different kind.
  if (dynamics.p_profile_switch > 0.0) {
    const ProfileKind kinds[] = {ProfileKind::kGood, ProfileKind::kOrdinary,
                                 ProfileKind::kIntermittent, ProfileKind::kBad};
    for (auto& p : providers_) {
      if (!rng.bernoulli(dynamics.p_profile_switch)) continue;
      ProfileKind others[3];
      int n = 0;
      for (ProfileKind k : kinds) {
        if (k != p.profile.kind) others[n++] = k;
      }
      const ProfileKind chosen = others[rng.uniform_int(0, 2)];
      p.profile = make_profile(chosen, rng);
      ++report.profile_switches;
    }
  }

  // 3. Location drift: angles move by uniform deltas, radius is unchanged.
  auto drift_location = [&](Location& loc, Cartesian& pos) {
    loc.phi = wrap_phi(loc.phi + rng.uniform(-dynamics.max_angle_change,
                                             dynamics.max_angle_change));
    loc.theta = reflect_theta(loc.theta + rng.uniform(-dynamics.max_angle_change,
                                                      dynamics.max_angle_change));
    pos = to_cartesian(loc);
  };
  if (dynamics.p_consumer_location_change > 0.0) {
    for (auto& c : consumers_) {
      if (!rng.bernoulli(dynamics.p_consumer_location_change)) continue;
      drift_location(c.loc, c.pos);
      ++report.consumer_moves;
      moved = true;
    }
  }
  if (dynamics.p_provider_location_change > 0.0) {
    for (auto& p : providers_) {
      if (!rng.bernoulli(dynamics.p_provider_location_change)) continue;
      drift_location(p.loc, p.pos);
      ++report.provider_moves;
      moved = true;
    }
  }

  // 4. Churn: replace up to floor(p * N) uniformly chosen agents with fresh
  // ones that keep the departed agent's group or profile kind.
  auto pick_distinct = [&](std::size_t population, int count) {
    std::vector<std::size_t> indices(population);
    for (std::size_t i = 0; i < population; ++i) indices[i] = i;
    for (int i = 0; i < count; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(i, static_cast<std::int64_t>(population) - 1));
      std::swap(indices[static_cast<std::size_t>(i)], indices[j]);
    }
    indices.resize(static_cast<std::size_t>(count));
    return indices;
  };

  if (dynamics.p_consumer_population_change > 0.0 && !consumers_.empty()) {
    const int cap = static_cast<int>(dynamics.p_consumer_population_change *
                                     static_cast<double>(consumers_.size()));
    const int n = static_cast<int>(rng.uniform_int(0, cap));
    for (std::size_t idx : pick_distinct(consumers_.size(), n)) {
      ConsumerAgent& old = consumers_[idx];
      ConsumerAgent fresh;
      fresh.id = next_id_++;
      fresh.loc = random_location(config_.world_radius, rng);
      fresh.pos = to_cartesian(fresh.loc);
      fresh.activity = rng.uniform(config_.activity_min, config_.activity_max);
      fresh.group = old.group;
      old = std::move(fresh);
      ++report.consumers_replaced;
    }
  }
  if (dynamics.p_provider_population_change > 0.0 && !providers_.empty()) {
    const int cap = static_cast<int>(dynamics.p_provider_population_change *
                                     static_cast<double>(providers_.size()));
    const int n = static_cast<int>(rng.uniform_int(0, cap));
    for (std::size_t idx : pick_distinct(providers_.size(), n)) {
      ProviderAgent& old = providers_[idx];
      ProviderAgent fresh;
      fresh.id = next_id_++;
      fresh.loc = random_location(config_.world_radius, rng);
      fresh.pos = to_cartesian(fresh.loc);
      fresh.profile = make_profile(old.profile.kind, rng);
      old = std::move(fresh);
      ++report.providers_replaced;
    }
  }

  if (report.consumers_replaced > 0 || report.providers_replaced > 0) {
    rebuild_index();
  } else if (moved) {
    adjacency_valid_ = false;
  }
  return report;
}

}  // namespace trustsim::world
