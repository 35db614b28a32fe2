#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finmode/families.hpp"

namespace finmode {

struct CampaignResult {
  std::string lemma;
  int trials = 0;
  int failures = 0;
  double max_deviation = 0.0;
  std::optional<std::string> counterexample;  // first failure

  bool passed() const { return failures == 0; }
};

// two-mode, rotation-loop, sip, beltrami-noninteraction, gauss-bonnet
const std::vector<std::string>& campaign_names();

// Throws std::invalid_argument for an unknown lemma or trials < 1.
CampaignResult run_campaign(const std::string& lemma, int trials, std::uint64_t seed);

// Vertices on a circle of angular radius in [0.05, pi/2 - 0.05] about a random center,
// in random rotational order, consecutive angular gaps at least 0.05.
std::vector<Vec3> random_cap_polygon(int p, Rng& rng);

// Spherical excess by fan triangulation with tan(E/2) = |a.(b x c)| / (1 + a.b + b.c + c.a).
double girard_area(const std::vector<Vec3>& vertices);

}  // namespace finmode
