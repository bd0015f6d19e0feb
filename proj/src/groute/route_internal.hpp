#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oar/groute/route.hpp"
#include "oar/rng.hpp"

namespace oar::groute::detail {

double edge_cost(const GcellGrid& g, const std::vector<std::int32_t>& demand, EdgeId e, const CostWeights& w);

}  // namespace oar::groute::detail

namespace oar::groute {

inline std::uint64_t derive_net_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
  return derive_seed(seed, h);
}

}  // namespace oar::groute
