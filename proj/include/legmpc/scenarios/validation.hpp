// Copyright 2026 The legmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEGMPC_SCENARIOS_VALIDATION_HPP_
#define LEGMPC_SCENARIOS_VALIDATION_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "legmpc/scenarios/terrain_costs.hpp"

namespace legmpc {

struct TerrainSpec {
  std::vector<GapSpec> gaps;
  std::optional<StoneField> stones;

  bool empty() const { return gaps.empty() && !stones.has_value(); }
};

struct FootholdCheck {
  bool in_gap = false;
  bool off_stone = false;
  double stone_distance = std::numeric_limits<double>::infinity();
};

struct ViolationReport {
  std::vector<FootholdCheck> checks;
  int gap_violations = 0;
  int stone_violations = 0;

  int total() const { return static_cast<int>(checks.size()); }
  int violations() const { return gap_violations + stone_violations; }
  double gap_rate() const { return total() ? double(gap_violations) / total() : 0.0; }
  double stone_rate() const { return total() ? double(stone_violations) / total() : 0.0; }
};

inline FootholdCheck check_foothold(const Vector3& s, const TerrainSpec& terrain) {
  FootholdCheck c;
  for (const GapSpec& g : terrain.gaps) c.in_gap = c.in_gap || std::abs(s.x() - g.g_x) < g.half_width;
  if (terrain.stones) {
    for (const Vector3& t : terrain.stones->stones) {
      c.stone_distance = std::min(c.stone_distance, (s - t).norm());
    }
    c.off_stone = c.stone_distance > terrain.stones->radius;
  }
  return c;
}

inline ViolationReport validate_footholds(const std::vector<Vector3>& footholds,
                                          const TerrainSpec& terrain) {
  ViolationReport r;
  for (const Vector3& s : footholds) {
    const FootholdCheck c = check_foothold(s, terrain);
    r.gap_violations += c.in_gap ? 1 : 0;
    r.stone_violations += c.off_stone ? 1 : 0;
    r.checks.push_back(c);
  }
  return r;
}

}  // namespace legmpc

#endif  // LEGMPC_SCENARIOS_VALIDATION_HPP_
