#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dtswarm/errors.hpp"
#include "dtswarm/swarm.hpp"

namespace swarm = dtswarm::swarm;
using swarm::AgentState;
using swarm::Vec3;

namespace {

std::vector<AgentState> line(const std::vector<double>& xs) {
  std::vector<AgentState> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({Vec3(xs[i], 0, 0), Vec3::Zero(), static_cast<int>(i)});
  return out;
}

}  // namespace

TEST(SwarmConfig, Validation) {
  swarm::SwarmConfig c;
  EXPECT_NO_THROW(c.validate());
  c.r_s = c.r_d;
  try {
    c.validate();
    FAIL();
  } catch (const dtswarm::ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("r_s"), std::string::npos);
    EXPECT_NE(msg.find("r_d"), std::string::npos);
  }
  c = {};
  c.fov_deg = 0.0;
  EXPECT_THROW(c.validate(), dtswarm::ConfigError);
  c.fov_deg = 181.0;
  EXPECT_THROW(c.validate(), dtswarm::ConfigError);
  c = {};
  c.n_uavs = 0;
  EXPECT_THROW(c.validate(), dtswarm::ConfigError);
}

TEST(StepDynamics, Examples) {
  const AgentState rest{Vec3(1, 2, 3), Vec3::Zero(), 0};
  const AgentState same = swarm::step_dynamics(rest, Vec3::Zero(), 0.01);
  EXPECT_EQ(same.p, rest.p);
  EXPECT_EQ(same.v, rest.v);

  const AgentState moving = swarm::step_dynamics({Vec3::Zero(), Vec3(1, 0, 0), 0}, Vec3::Zero(), 0.01);
  EXPECT_EQ(moving.p, Vec3(0.01, 0, 0));

  // Position advances with the pre-update velocity.
  const AgentState pushed = swarm::step_dynamics({Vec3::Zero(), Vec3::Zero(), 0}, Vec3(0, 0, 5), 0.1);
  EXPECT_EQ(pushed.p, Vec3::Zero());
  EXPECT_EQ(pushed.v, Vec3(0, 0, 0.5));
}

TEST(StepDynamics, DoubleIntegratorAgainstClosedForm) {
  AgentState a;
  for (int k = 0; k < 100; ++k) a = swarm::step_dynamics(a, Vec3(0, 0, 1), 0.01);
  // Euler gives sum_{k<100} k * dt^2 = 0.495 against the analytic 0.5.
  EXPECT_NEAR(a.p.z(), 0.5, 0.5 * 0.01 + 1e-12);
  EXPECT_NEAR(a.p.z(), 0.495, 1e-12);
}

TEST(StepDynamics, SpeedConservedWithoutInput) {
  AgentState a{Vec3(0, 0, 0), Vec3(0.3, -1.2, 2.0), 0};
  const double speed = a.v.norm();
  for (int k = 0; k < 1000; ++k) a = swarm::step_dynamics(a, Vec3::Zero(), 0.01);
  EXPECT_EQ(a.v.norm(), speed);
}

TEST(Neighborhood, Examples) {
  const auto pair = line({0, 2});
  EXPECT_EQ(swarm::neighborhood(0, pair, 3.0), std::vector<int>{1});
  EXPECT_EQ(swarm::neighborhood(1, pair, 3.0), std::vector<int>{0});

  const auto edge = line({0, 3});
  EXPECT_TRUE(swarm::neighborhood(0, edge, 3.0).empty());
  EXPECT_TRUE(swarm::neighborhood(1, edge, 3.0).empty());

  const auto four = line({0, 1, 2, 10});
  EXPECT_EQ(swarm::neighborhood(0, four, 1.5), std::vector<int>{1});
  EXPECT_EQ(swarm::neighborhood(1, four, 1.5), (std::vector<int>{0, 2}));
  EXPECT_EQ(swarm::neighborhood(2, four, 1.5), std::vector<int>{1});
  EXPECT_TRUE(swarm::neighborhood(3, four, 1.5).empty());
}

TEST(Neighborhood, SymmetricOnRandomFleets) {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<AgentState> agents(12);
    for (int i = 0; i < 12; ++i) agents[static_cast<std::size_t>(i)] = {Vec3(u(g), u(g), u(g)), Vec3::Zero(), i};
    for (int i = 0; i < 12; ++i) {
      for (int j : swarm::neighborhood(i, agents, 2.5)) {
        const auto back = swarm::neighborhood(j, agents, 2.5);
        EXPECT_NE(std::find(back.begin(), back.end(), i), back.end());
        EXPECT_NE(i, j);
      }
    }
  }
}

TEST(RelativeState, ExamplesAndAntisymmetry) {
  std::vector<AgentState> agents = {{Vec3::Zero(), Vec3(1, 1, 1), 0}, {Vec3(1, 2, 3), Vec3(0, 1, 4), 1}};
  const auto [pij, vij] = swarm::relative_state(0, 1, agents);
  EXPECT_EQ(pij, Vec3(1, 2, 3));
  EXPECT_EQ(vij, Vec3(-1, 0, 3));
  const auto [pji, vji] = swarm::relative_state(1, 0, agents);
  EXPECT_EQ(pij, -pji);
  EXPECT_EQ(vij, -vji);

  std::vector<AgentState> twins = {agents[0], agents[0]};
  const auto [p0, v0] = swarm::relative_state(0, 1, twins);
  EXPECT_TRUE(p0.isZero(0.0));
  EXPECT_TRUE(v0.isZero(0.0));

  EXPECT_THROW(swarm::relative_state(0, 0, agents), dtswarm::DomainError);
  EXPECT_THROW(swarm::relative_state(0, 5, agents), dtswarm::DomainError);
}

TEST(MinPairwiseDistance, Basic) {
  EXPECT_TRUE(std::isinf(swarm::min_pairwise_distance(line({1}))));
  EXPECT_DOUBLE_EQ(swarm::min_pairwise_distance(line({0, 5, 5.5, 9})), 0.5);
}
