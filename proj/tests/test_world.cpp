#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "trustsim/world.hpp"

using namespace trustsim;
using world::DynamicsConfig;
using world::Group;
using world::Location;
using world::ProfileKind;
using world::ProviderProfile;
using world::World;
using world::WorldConfig;

namespace {

constexpr double kPi = 3.141592653589793;

std::map<ProfileKind, int> kind_counts(const World& w) {
  std::map<ProfileKind, int> counts;
  for (const auto& p : w.providers()) ++counts[p.profile.kind];
  return counts;
}

std::map<Group, int> group_counts(const World& w) {
  std::map<Group, int> counts;
  for (const auto& c : w.consumers()) ++counts[c.group];
  return counts;
}

}  // namespace

TEST_CASE("world init follows the configured populations") {
  Rng rng(1);
  World w{WorldConfig{}, rng};
  CHECK(w.providers().size() == 100);
  CHECK(w.consumers().size() == 500);

  const auto kinds = kind_counts(w);
  CHECK(kinds.at(ProfileKind::kGood) == 10);
  CHECK(kinds.at(ProfileKind::kOrdinary) == 40);
  CHECK(kinds.at(ProfileKind::kIntermittent) == 5);
  CHECK(kinds.at(ProfileKind::kBad) == 45);

  const auto groups = group_counts(w);
  CHECK(groups.at(Group::kFire) + groups.at(Group::kCaOld) + groups.at(Group::kCaNew) == 500);
  CHECK(std::abs(groups.at(Group::kFire) - groups.at(Group::kCaNew)) <= 1);
  CHECK(std::abs(groups.at(Group::kCaOld) - groups.at(Group::kCaNew)) <= 1);

  for (const auto& c : w.consumers()) {
    CHECK(c.activity >= 0.25);
    CHECK(c.activity <= 1.0);
  }
  for (const auto& p : w.providers()) {
    CHECK(p.loc.r <= 1.0);
    CHECK(p.loc.theta >= 0.0);
    CHECK(p.loc.theta <= kPi);
    switch (p.profile.kind) {
      case ProfileKind::kGood:
        CHECK(p.profile.mu >= 5.0);
        CHECK(p.profile.mu <= 10.0);
        CHECK(p.profile.sigma == 1.0);
        break;
      case ProfileKind::kOrdinary:
        CHECK(p.profile.mu >= 0.0);
        CHECK(p.profile.mu <= 5.0);
        CHECK(p.profile.sigma == 2.0);
        break;
      case ProfileKind::kBad:
        CHECK(p.profile.mu >= -10.0);
        CHECK(p.profile.mu <= 0.0);
        CHECK(p.profile.sigma == 2.0);
        break;
      case ProfileKind::kIntermittent:
        break;
    }
  }
}

TEST_CASE("three consumers split one per group") {
  WorldConfig config;
  config.n_consumers = 3;
  Rng rng(2);
  World w{config, rng};
  const auto groups = group_counts(w);
  CHECK(groups.at(Group::kFire) == 1);
  CHECK(groups.at(Group::kCaOld) == 1);
  CHECK(groups.at(Group::kCaNew) == 1);
}

TEST_CASE("inconsistent configs are rejected") {
  WorldConfig bad_counts;
  bad_counts.n_good = 50;  // no longer sums to n_providers
  Rng rng(3);
  CHECK_THROWS_AS((World{bad_counts, rng}), std::invalid_argument);

  WorldConfig bad_activity;
  bad_activity.activity_min = 0.9;
  bad_activity.activity_max = 0.3;
  CHECK_THROWS_AS((World{bad_activity, rng}), std::invalid_argument);
}

TEST_CASE("identical seeds build identical worlds") {
  Rng rng_a(99);
  Rng rng_b(99);
  World a{WorldConfig{}, rng_a};
  World b{WorldConfig{}, rng_b};
  REQUIRE(a.providers().size() == b.providers().size());
  for (std::size_t i = 0; i < a.providers().size(); ++i) {
    CHECK(a.providers()[i].id == b.providers()[i].id);
    CHECK(a.providers()[i].loc.phi == b.providers()[i].loc.phi);
    CHECK(a.providers()[i].profile.mu == b.providers()[i].profile.mu);
  }
  for (std::size_t i = 0; i < a.consumers().size(); ++i) {
    CHECK(a.consumers()[i].activity == b.consumers()[i].activity);
    CHECK(a.consumers()[i].loc.theta == b.consumers()[i].loc.theta);
  }
}

TEST_CASE("neighbourhood is the closed ball of the operational radius") {
  World w{WorldConfig{}};
  // Centre agent plus one at exactly 0.5 along the polar axis (theta = 0
  // makes the conversion exact), one just beyond, and a pair at antipodes.
  const AgentId centre = w.add_consumer({0.0, 0.0, 0.0}, 0.5, Group::kFire);
  const AgentId at_radius = w.add_provider({0.5, 0.0, 0.0}, {ProfileKind::kGood, 7.0, 1.0});
  const AgentId beyond = w.add_provider({0.5000001, 0.0, 0.0}, {ProfileKind::kGood, 7.0, 1.0});
  const AgentId north = w.add_consumer({1.0, 0.0, 0.0}, 0.5, Group::kFire);
  const AgentId south = w.add_consumer({1.0, 0.0, kPi}, 0.5, Group::kFire);
  const AgentId twin = w.add_consumer({1.0, 0.0, kPi}, 0.5, Group::kCaOld);

  auto contains = [&](AgentId who, AgentId target) {
    const auto list = w.nearby(who);
    return std::find(list.begin(), list.end(), target) != list.end();
  };

  CHECK(contains(centre, at_radius));
  CHECK(contains(at_radius, centre));
  CHECK_FALSE(contains(centre, beyond));
  CHECK_FALSE(contains(north, south));  // distance 2.0
  CHECK(contains(south, twin));         // identical locations
  CHECK_FALSE(contains(south, south));  // self excluded

  const auto providers = w.nearby_providers(centre);
  CHECK(providers == std::vector<AgentId>{at_radius});
}

TEST_CASE("performance sampling respects profile ranges") {
  Rng rng(5);

  ProviderProfile bad{ProfileKind::kBad, -10.0, 2.0};
  for (int i = 0; i < 500; ++i) {
    const double p = world::sample_performance(bad, rng);
    CHECK(p >= -10.0);
    CHECK(p <= 10.0);
  }

  ProviderProfile intermittent{ProfileKind::kIntermittent, 0.0, 0.0};
  for (int i = 0; i < 500; ++i) {
    const double p = world::sample_performance(intermittent, rng);
    CHECK(p >= -5.0);
    CHECK(p <= 5.0);
  }

  ProviderProfile exact{ProfileKind::kGood, 7.5, 0.0};
  for (int i = 0; i < 10; ++i) {
    CHECK(world::sample_performance(exact, rng) == doctest::Approx(7.5).epsilon(1e-12));
  }
}

TEST_CASE("quality degrades linearly beyond the provider radius") {
  CHECK(world::degrade(4.2, 0.4, 0.5, 1.0) == 4.2);
  CHECK(world::degrade(4.2, 0.5, 0.5, 1.0) == 4.2);
  CHECK(world::degrade(-10.0, 1.7, 0.5, 1.0) == -10.0);
  // Max separation in a unit ball: slope (20 / 1.5) over excess 1.5.
  CHECK(world::degrade(10.0, 2.0, 0.5, 1.0) == doctest::Approx(-10.0).epsilon(1e-12));

  double previous = world::degrade(10.0, 0.5, 0.5, 1.0);
  for (double d = 0.6; d <= 2.0; d += 0.1) {
    const double now = world::degrade(10.0, d, 0.5, 1.0);
    CHECK(now <= previous + 1e-12);
    previous = now;
  }
}

TEST_CASE("zeroed dynamics leave the world untouched") {
  Rng rng(7);
  World w{WorldConfig{}, rng};
  const auto before_providers = std::vector<world::ProviderAgent>(
      w.providers().begin(), w.providers().end());
  const auto report = w.apply_dynamics(DynamicsConfig{}, rng);
  CHECK(report.mu_drifts == 0);
  CHECK(report.profile_switches == 0);
  CHECK(report.consumers_replaced == 0);
  CHECK(report.providers_replaced == 0);
  for (std::size_t i = 0; i < before_providers.size(); ++i) {
    CHECK(w.providers()[i].id == before_providers[i].id);
    CHECK(w.providers()[i].profile.mu == before_providers[i].profile.mu);
    CHECK(w.providers()[i].loc.phi == before_providers[i].loc.phi);
  }
}

TEST_CASE("profile switches always land on a different kind") {
  Rng rng(8);
  World w{WorldConfig{}, rng};
  const auto before = std::vector<world::ProviderAgent>(
      w.providers().begin(), w.providers().end());
  DynamicsConfig dynamics;
  dynamics.p_profile_switch = 1.0;
  w.apply_dynamics(dynamics, rng);
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(w.providers()[i].profile.kind != before[i].profile.kind);
  }
}

TEST_CASE("churn is capped, preserves proportions, and resets fresh agents") {
  Rng rng(9);
  World w{WorldConfig{}, rng};
  const auto kinds_before = kind_counts(w);
  const auto groups_before = group_counts(w);
  const std::set<AgentId> ids_before = [&] {
    std::set<AgentId> ids;
    for (const auto& p : w.providers()) ids.insert(p.id);
    return ids;
  }();

  DynamicsConfig dynamics;
  dynamics.p_provider_population_change = 0.02;
  dynamics.p_consumer_population_change = 0.02;
  int max_providers_replaced = 0;
  for (int round = 0; round < 50; ++round) {
    const auto report = w.apply_dynamics(dynamics, rng);
    max_providers_replaced = std::max(max_providers_replaced, report.providers_replaced);
    CHECK(report.providers_replaced <= 2);   // floor(0.02 * 100)
    CHECK(report.consumers_replaced <= 10);  // floor(0.02 * 500)
  }
  CHECK(max_providers_replaced > 0);
  CHECK(kind_counts(w) == kinds_before);
  CHECK(group_counts(w) == groups_before);
  CHECK(w.providers().size() == 100);
  CHECK(w.consumers().size() == 500);

  // Fresh providers carry new ids and empty trust state.
  for (const auto& p : w.providers()) {
    if (ids_before.count(p.id) == 0) {
      CHECK(p.ca_old.connection_count() == 0);
      CHECK(p.ca_new.connection_count() == 0);
      CHECK_FALSE(p.ca_new.bad_flag());
      CHECK(p.certified.empty());
    }
  }
}

TEST_CASE("mu drift stays within the performance band") {
  Rng rng(10);
  World w{WorldConfig{}, rng};
  DynamicsConfig dynamics;
  dynamics.p_mu_change = 1.0;
  dynamics.mu_change_magnitude = 8.0;
  for (int round = 0; round < 30; ++round) w.apply_dynamics(dynamics, rng);
  for (const auto& p : w.providers()) {
    if (p.profile.kind == ProfileKind::kIntermittent) continue;
    CHECK(p.profile.mu >= -10.0);
    CHECK(p.profile.mu <= 10.0);
  }
}

TEST_CASE("location drift keeps coordinates in range and radius fixed") {
  Rng rng(11);
  World w{WorldConfig{}, rng};
  const auto radii_before = [&] {
    std::vector<double> radii;
    for (const auto& c : w.consumers()) radii.push_back(c.loc.r);
    return radii;
  }();
  DynamicsConfig dynamics;
  dynamics.p_consumer_location_change = 1.0;
  dynamics.p_provider_location_change = 1.0;
  dynamics.max_angle_change = kPi / 4.0;
  for (int round = 0; round < 20; ++round) w.apply_dynamics(dynamics, rng);
  for (std::size_t i = 0; i < w.consumers().size(); ++i) {
    const auto& c = w.consumers()[i];
    CHECK(c.loc.r == radii_before[i]);
    CHECK(c.loc.phi >= 0.0);
    CHECK(c.loc.phi < 2.0 * kPi);
    CHECK(c.loc.theta >= 0.0);
    CHECK(c.loc.theta <= kPi);
  }
}
