#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarsim/bot.hpp"
#include "polarsim/graph.hpp"
#include "polarsim/world.hpp"

namespace polarsim {

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PcrPoint {
  double t = 0.0;    // normalized time in [0,1]
  double pcr = 0.0;  // cumulative preferred content ratio over [0,t]
};

struct PcrSeries {
  TopicId preference = 0;
  std::vector<PcrPoint> points;
};

// Frequencies are per-message document frequencies: a word counts at most once
// per message, divided by the number of messages in scope.
struct WordFrequencyTable {
  std::map<WordId, double> entries;
  std::size_t total_messages = 0;

  std::vector<std::pair<WordId, double>> top_k(std::size_t k) const;
};

enum class WordScope { all, preferred_only };

// Correlation that may be undefined (zero variance or too few points).
struct MaybeCorrelation {
  double value = 0.0;
  bool degenerate = false;
};

struct DegreeTailPoint {
  std::uint32_t k = 0;
  double p_ge = 0.0;  // P(K >= k)
};

struct PerNodeReciprocal {
  NodeId node = 0;
  std::uint32_t n_e = 0;  // incident reciprocal pairs
  std::uint32_t n_a = 0;  // incident arcs, both directions
};

struct NetworkReport {
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  std::vector<DegreeTailPoint> in_degree_tail;
  std::vector<DegreeTailPoint> out_degree_tail;
  MaybeCorrelation in_out_degree_corr;
  double mean_directed_clustering = 0.0;
  double mean_reciprocal_ratio = 0.0;  // node-mean of n_e/n_a
  double global_reciprocity = 0.0;     // fraction of arcs with a reverse arc
  MaybeCorrelation reciprocal_corr_all;
  MaybeCorrelation reciprocal_corr_positive;  // nodes with n_e > 0 only
  std::vector<PerNodeReciprocal> per_node;
};

struct FollowingsAttributes {
  double same_preference_fraction = 0.0;
  double mean_followings_of_followings = 0.0;
  double mean_followers_of_followings = 0.0;
};

struct ReciprocalMetrics {
  double mean_ratio = 0.0;         // mean over nodes with n_a > 0 of n_e/n_a
  double global_reciprocity = 0.0;
  std::vector<PerNodeReciprocal> per_node;
};

enum class ReciprocalCorrVariant { all_nodes, positive_only };

PcrSeries pcr_series(const std::vector<ExposureRecord>& exposure_log,
                     TopicId preference, std::size_t bin_count);

WordFrequencyTable word_frequencies(const World& world,
                                    const std::vector<ExposureRecord>& exposure_log,
                                    WordScope scope);

// Offline variant: the caller supplies the message_id -> word list mapping
// (e.g. reloaded from persisted logs).
using WordsLookup = std::function<const std::vector<WordId>&(MessageId)>;
WordFrequencyTable word_frequencies_lookup(const std::vector<ExposureRecord>& exposure_log,
                                           WordScope scope, const WordsLookup& words);

ReciprocalMetrics reciprocal_metrics(const DirectedGraph& graph);

MaybeCorrelation reciprocal_degree_correlation(const DirectedGraph& graph,
                                               ReciprocalCorrVariant variant);

// Fagiolo-style total directed clustering, nodes with total degree < 2 excluded.
double directed_clustering(const DirectedGraph& graph);
double directed_clustering_node(const DirectedGraph& graph, NodeId u, bool& defined);

struct DegreeStats {
  std::vector<DegreeTailPoint> in_tail;
  std::vector<DegreeTailPoint> out_tail;
  MaybeCorrelation in_out_corr;
};
DegreeStats degree_stats(const DirectedGraph& graph);

// Personal network of a finished bot: followings plus out-neighbors of
// followings, all world arcs among them, the bot excluded. When
// followings_only, the node set is just the followings.
struct PersonalNetwork {
  DirectedGraph graph;
  std::vector<UserId> node_users;  // graph node -> world user
};
PersonalNetwork extract_personal_network(const World& world, const BotState& bot,
                                         bool followings_only = false);

FollowingsAttributes followings_attributes(const World& world, const BotState& bot);

NetworkReport network_report(const DirectedGraph& graph);

}  // namespace polarsim
