#include "polarsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "polarsim/stats.hpp"

namespace polarsim {

namespace {

MaybeCorrelation correlate(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) return {0.0, true};
  const PearsonResult r = pearson(x, y);
  return {r.r, r.degenerate};
}

std::vector<DegreeTailPoint> inverse_cdf(std::vector<std::uint32_t> degrees) {
  std::sort(degrees.begin(), degrees.end());
  std::vector<DegreeTailPoint> out;
  const double n = static_cast<double>(degrees.size());
  if (degrees.empty()) return out;
  for (std::size_t i = 0; i < degrees.size();) {
    const std::uint32_t k = degrees[i];
    out.push_back({k, static_cast<double>(degrees.size() - i) / n});
    while (i < degrees.size() && degrees[i] == k) ++i;
  }
  return out;
}

}  // namespace

PcrSeries pcr_series(const std::vector<ExposureRecord>& exposure_log,
                     TopicId preference, std::size_t bin_count) {
  if (exposure_log.empty()) throw MetricError("pcr_series: empty exposure log");
  if (bin_count < 2) throw MetricError("pcr_series: need at least 2 bins");

  const double t0 = exposure_log.front().wake_time;
  const double t1 = exposure_log.back().wake_time;
  const double span = t1 - t0;

  // cumulative counts at each wake
  std::vector<double> times;
  std::vector<std::size_t> cum_total, cum_pref;
  std::size_t total = 0, pref = 0;
  for (const auto& rec : exposure_log) {
    for (const auto& m : rec.messages) {
      ++total;
      if (m.verdict == Verdict::preferred) ++pref;
    }
    times.push_back(span > 0.0 ? (rec.wake_time - t0) / span : 0.0);
    cum_total.push_back(total);
    cum_pref.push_back(pref);
  }

  PcrSeries series;
  series.preference = preference;
  for (std::size_t b = 0; b < bin_count; ++b) {
    const double t = static_cast<double>(b) / static_cast<double>(bin_count - 1);
    // last wake with normalized time <= t
    std::size_t idx = 0;
    bool any = false;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] <= t + 1e-12) {
        idx = i;
        any = true;
      }
    double v = 0.0;
    if (any && cum_total[idx] > 0)
      v = static_cast<double>(cum_pref[idx]) / static_cast<double>(cum_total[idx]);
    else if (!any)
      v = cum_total[0] > 0
              ? static_cast<double>(cum_pref[0]) / static_cast<double>(cum_total[0])
              : 0.0;
    series.points.push_back({t, v});
  }
  return series;
}

WordFrequencyTable word_frequencies_lookup(const std::vector<ExposureRecord>& exposure_log,
                                           WordScope scope, const WordsLookup& words) {
  if (exposure_log.empty()) throw MetricError("word_frequencies: empty exposure log");
  WordFrequencyTable table;
  std::map<WordId, std::size_t> counts;
  std::unordered_set<WordId> seen;
  for (const auto& rec : exposure_log) {
    for (const auto& m : rec.messages) {
      if (scope == WordScope::preferred_only && m.verdict != Verdict::preferred) continue;
      ++table.total_messages;
      seen.clear();
      for (WordId w : words(m.id))
        if (seen.insert(w).second) ++counts[w];
    }
  }
  for (const auto& [w, c] : counts)
    table.entries[w] = static_cast<double>(c) / static_cast<double>(table.total_messages);
  return table;
}

WordFrequencyTable word_frequencies(const World& world,
                                    const std::vector<ExposureRecord>& exposure_log,
                                    WordScope scope) {
  return word_frequencies_lookup(
      exposure_log, scope,
      [&world](MessageId id) -> const std::vector<WordId>& { return world.messages.words(id); });
}

std::vector<std::pair<WordId, double>> WordFrequencyTable::top_k(std::size_t k) const {
  std::vector<std::pair<WordId, double>> v(entries.begin(), entries.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (v.size() > k) v.resize(k);
  return v;
}

ReciprocalMetrics reciprocal_metrics(const DirectedGraph& graph) {
  if (graph.arc_count() == 0) throw MetricError("reciprocal_metrics: graph has no arcs");
  ReciprocalMetrics out;
  std::size_t reciprocal_arcs = 0;
  double ratio_sum = 0.0;
  std::size_t qualifying = 0;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    std::uint32_t n_e = 0;
    for (NodeId v : graph.out(u))
      if (graph.has_arc(v, u)) {
        ++n_e;
        ++reciprocal_arcs;  // counts arc u->v once; total over u counts each arc once
      }
    const std::uint32_t n_a =
        static_cast<std::uint32_t>(graph.out_degree(u) + graph.in_degree(u));
    if (n_a == 0) continue;
    out.per_node.push_back({u, n_e, n_a});
    ratio_sum += static_cast<double>(n_e) / static_cast<double>(n_a);
    ++qualifying;
  }
  out.mean_ratio = qualifying ? ratio_sum / static_cast<double>(qualifying) : 0.0;
  out.global_reciprocity =
      static_cast<double>(reciprocal_arcs) / static_cast<double>(graph.arc_count());
  return out;
}

MaybeCorrelation reciprocal_degree_correlation(const DirectedGraph& graph,
                                               ReciprocalCorrVariant variant) {
  const auto metrics = reciprocal_metrics(graph);
  std::vector<double> ratio, total;
  for (const auto& n : metrics.per_node) {
    if (variant == ReciprocalCorrVariant::positive_only && n.n_e == 0) continue;
    ratio.push_back(static_cast<double>(n.n_e) / static_cast<double>(n.n_a));
    total.push_back(static_cast<double>(n.n_a));
  }
  if (ratio.size() < 3)
    throw MetricError("reciprocal_degree_correlation: fewer than 3 qualifying nodes");
  return correlate(ratio, total);
}

double directed_clustering_node(const DirectedGraph& graph, NodeId u, bool& defined) {
  // Total directed clustering: all triangle orientations over all possible,
  // numerator [(A+A^T)^3]_uu / 2, denominator d_tot(d_tot-1) - 2*d_bi.
  std::unordered_map<NodeId, int> nbr;  // (u->x) + (x->u)
  for (NodeId v : graph.out(u)) nbr[v] += 1;
  for (NodeId v : graph.in(u)) nbr[v] += 1;
  const std::size_t d_tot = graph.out_degree(u) + graph.in_degree(u);
  std::size_t d_bi = 0;
  for (const auto& [v, c] : nbr)
    if (c == 2) ++d_bi;
  const double denom = static_cast<double>(d_tot) * (static_cast<double>(d_tot) - 1.0) -
                       2.0 * static_cast<double>(d_bi);
  if (d_tot < 2 || denom <= 0.0) {
    defined = false;
    return 0.0;
  }
  double tri2 = 0.0;  // [(A+A^T)^3]_uu
  for (const auto& [v, cv] : nbr) {
    for (const auto& [w, cw] : nbr) {
      if (v == w) continue;
      const int vw = (graph.has_arc(v, w) ? 1 : 0) + (graph.has_arc(w, v) ? 1 : 0);
      tri2 += static_cast<double>(cv) * static_cast<double>(vw) * static_cast<double>(cw);
    }
  }
  defined = true;
  return tri2 / (2.0 * denom);
}

double directed_clustering(const DirectedGraph& graph) {
  if (graph.node_count() < 3) throw MetricError("directed_clustering: need >= 3 nodes");
  double sum = 0.0;
  std::size_t count = 0;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    bool defined = false;
    const double c = directed_clustering_node(graph, u, defined);
    if (defined) {
      sum += c;
      ++count;
    }
  }
  if (count == 0) throw MetricError("directed_clustering: no node with degree >= 2");
  return sum / static_cast<double>(count);
}

DegreeStats degree_stats(const DirectedGraph& graph) {
  if (graph.node_count() < 2) throw MetricError("degree_stats: need >= 2 nodes");
  DegreeStats out;
  std::vector<std::uint32_t> ind, outd;
  std::vector<double> xi, yo;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    ind.push_back(static_cast<std::uint32_t>(graph.in_degree(u)));
    outd.push_back(static_cast<std::uint32_t>(graph.out_degree(u)));
    xi.push_back(static_cast<double>(graph.in_degree(u)));
    yo.push_back(static_cast<double>(graph.out_degree(u)));
  }
  out.in_tail = inverse_cdf(ind);
  out.out_tail = inverse_cdf(outd);
  out.in_out_corr = correlate(xi, yo);
  return out;
}

PersonalNetwork extract_personal_network(const World& world, const BotState& bot,
                                         bool followings_only) {
  PersonalNetwork pn;
  std::unordered_map<UserId, NodeId> index;
  auto add_node = [&](UserId u) {
    if (index.emplace(u, static_cast<NodeId>(pn.node_users.size())).second)
      pn.node_users.push_back(u);
  };
  for (UserId u : bot.followings) add_node(u);
  if (!followings_only) {
    for (UserId u : bot.followings)
      for (UserId v : world.graph.out(u)) add_node(v);
  }
  pn.graph.resize(pn.node_users.size());
  for (std::size_t i = 0; i < pn.node_users.size(); ++i) {
    for (UserId v : world.graph.out(pn.node_users[i])) {
      auto it = index.find(v);
      if (it != index.end()) pn.graph.add_arc(static_cast<NodeId>(i), it->second);
    }
  }
  return pn;
}

FollowingsAttributes followings_attributes(const World& world, const BotState& bot) {
  FollowingsAttributes attrs;
  if (bot.followings.empty()) return attrs;
  std::size_t same = 0;
  double followings_sum = 0.0, followers_sum = 0.0;
  for (UserId u : bot.followings) {
    if (world.users[u].topic == bot.preference) ++same;
    followings_sum += static_cast<double>(world.graph.out_degree(u));
    followers_sum += static_cast<double>(world.graph.in_degree(u));
  }
  const double n = static_cast<double>(bot.followings.size());
  attrs.same_preference_fraction = static_cast<double>(same) / n;
  attrs.mean_followings_of_followings = followings_sum / n;
  attrs.mean_followers_of_followings = followers_sum / n;
  return attrs;
}

NetworkReport network_report(const DirectedGraph& graph) {
  NetworkReport r;
  r.node_count = graph.node_count();
  r.arc_count = graph.arc_count();
  if (graph.node_count() >= 2) {
    auto ds = degree_stats(graph);
    r.in_degree_tail = std::move(ds.in_tail);
    r.out_degree_tail = std::move(ds.out_tail);
    r.in_out_degree_corr = ds.in_out_corr;
  }
  if (graph.node_count() >= 3) {
    try {
      r.mean_directed_clustering = directed_clustering(graph);
    } catch (const MetricError&) {
      r.mean_directed_clustering = 0.0;
    }
  }
  if (graph.arc_count() > 0) {
    auto rm = reciprocal_metrics(graph);
    r.mean_reciprocal_ratio = rm.mean_ratio;
    r.global_reciprocity = rm.global_reciprocity;
    r.per_node = std::move(rm.per_node);
    try {
      r.reciprocal_corr_all =
          reciprocal_degree_correlation(graph, ReciprocalCorrVariant::all_nodes);
    } catch (const MetricError&) {
      r.reciprocal_corr_all = {0.0, true};
    }
    try {
      r.reciprocal_corr_positive =
          reciprocal_degree_correlation(graph, ReciprocalCorrVariant::positive_only);
    } catch (const MetricError&) {
      r.reciprocal_corr_positive = {0.0, true};
    }
  }
  return r;
}

}  // namespace polarsim
