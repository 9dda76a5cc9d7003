#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarsim/world.hpp"

namespace polarsim {

// Zipf(s) sampler over ranks 0..n-1, probability proportional to (rank+1)^-s.
class ZipfSampler {
 public:
  ZipfSampler(std::uint32_t n, double exponent);
  std::uint32_t draw(Rng& g) const;  // returns a 0-based rank

 private:
  std::vector<double> cdf_;
};

struct CommunityCheck {
  std::string topic;
  std::size_t node_count = 0;
  bool skipped = false;  // empty community: metrics undefined
  double reciprocity = 0.0;
  double clustering = 0.0;
  double tail_exponent = 0.0;  // MLE on in-degrees of the community subgraph
  bool reciprocity_ok = true;
  bool clustering_ok = true;   // only checked when a target is configured
  bool tail_ok = true;         // only checked for broadcast regimes
};

struct ValidationReport {
  std::vector<CommunityCheck> communities;
  bool pass = true;
  std::string to_text() const;
};

World generate_world(const WorldConfig& config);
ValidationReport validate_world(const World& world, const WorldConfig& config,
                                double tolerance = 0.1);

}  // namespace polarsim
