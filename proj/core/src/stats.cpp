#include "polarsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace polarsim {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

// Regularized upper incomplete gamma Q(a, x), series + continued fraction.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return 1.0;
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Q(a,x) by Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// Midranks of the pooled sample; also accumulates sum(t^3 - t) over tie groups.
std::vector<double> midranks(const std::vector<double>& pooled, double& tie_term) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  return ranks;
}

double u_from_ranks(const std::vector<double>& ranks, const std::vector<bool>& in_a,
                    std::size_t n_a) {
  double r_a = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    if (in_a[i]) r_a += ranks[i];
  return r_a - 0.5 * static_cast<double>(n_a) * (static_cast<double>(n_a) + 1.0);
}

// Count, over all C(N, n_a) assignments of pooled ranks to group a, how many
// have |U - mu| >= |U_obs - mu|.
void enumerate_exact(const std::vector<double>& sorted_ranks, std::size_t n_a,
                     double mu, double threshold, std::size_t pos, double rank_sum,
                     std::size_t chosen, std::size_t& hits, std::size_t& total) {
  const std::size_t n = sorted_ranks.size();
  if (chosen == n_a) {
    ++total;
    const double u = rank_sum - 0.5 * static_cast<double>(n_a) * (static_cast<double>(n_a) + 1.0);
    if (std::abs(u - mu) >= threshold - 1e-9) ++hits;
    return;
  }
  if (n - pos < n_a - chosen) return;
  enumerate_exact(sorted_ranks, n_a, mu, threshold, pos + 1, rank_sum + sorted_ranks[pos],
                  chosen + 1, hits, total);
  enumerate_exact(sorted_ranks, n_a, mu, threshold, pos + 1, rank_sum, chosen, hits, total);
}

}  // namespace

double chi_square_sf(double x, double df) { return gamma_q(df / 2.0, x / 2.0); }

double student_t_two_sided(double t, double df) {
  return ibeta(df / 2.0, 0.5, df / (df + t * t));
}

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                          bool continuity_correction) {
  if (a.empty() || b.empty()) throw StatsError("mann_whitney_u: empty sample");
  const std::size_t n_a = a.size(), n_b = b.size(), n = n_a + n_b;
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  double tie_term = 0.0;
  const std::vector<double> ranks = midranks(pooled, tie_term);
  std::vector<bool> in_a(n, false);
  for (std::size_t i = 0; i < n_a; ++i) in_a[i] = true;
  const double u = u_from_ranks(ranks, in_a, n_a);
  const double mu = 0.5 * static_cast<double>(n_a) * static_cast<double>(n_b);

  TestResult res;
  res.statistic = u;
  res.n_per_group = {n_a, n_b};

  if (n_a <= 8 && n_b <= 8) {
    std::vector<double> sorted_ranks = ranks;
    std::sort(sorted_ranks.begin(), sorted_ranks.end());
    std::size_t hits = 0, total = 0;
    enumerate_exact(sorted_ranks, n_a, mu, std::abs(u - mu), 0, 0.0, 0, hits, total);
    res.p_value = static_cast<double>(hits) / static_cast<double>(total);
    res.method = PMethod::exact;
    return res;
  }

  const double nn = static_cast<double>(n);
  const double var = (static_cast<double>(n_a) * static_cast<double>(n_b) / 12.0) *
                     ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  res.method = PMethod::normal_approx;
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  const double cc = continuity_correction ? 0.5 : 0.0;
  const double z = std::max(0.0, std::abs(u - mu) - cc) / std::sqrt(var);
  res.p_value = std::min(1.0, 2.0 * normal_sf(z));
  return res;
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                   bool posthoc) {
  if (groups.size() < 2) throw StatsError("kruskal_wallis: need >= 2 groups");
  for (const auto& g : groups)
    if (g.empty()) throw StatsError("kruskal_wallis: empty group");

  std::vector<double> pooled;
  for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
  double tie_term = 0.0;
  const std::vector<double> ranks = midranks(pooled, tie_term);

  const double n = static_cast<double>(pooled.size());
  double h = 0.0;
  std::size_t offset = 0;
  KruskalWallisResult out;
  // centered form: rank sums are exact doubles, so h vanishes exactly when
  // every group mean rank equals the grand mean (the textbook sum-of-squares
  // minus 3(N+1) cancels catastrophically there)
  const double grand_mean = 0.5 * (n + 1.0);
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    const double dev = r - static_cast<double>(g.size()) * grand_mean;
    h += dev * dev / static_cast<double>(g.size());
    offset += g.size();
    out.omnibus.n_per_group.push_back(g.size());
  }
  h *= 12.0 / (n * (n + 1.0));
  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction > 0.0)
    h /= correction;
  else
    h = 0.0;  // everything tied

  out.omnibus.statistic = h;
  out.omnibus.method = PMethod::chi_square_approx;
  out.omnibus.p_value = chi_square_sf(h, static_cast<double>(groups.size() - 1));

  if (posthoc) {
    const std::size_t g = groups.size();
    const double pairs = static_cast<double>(g * (g - 1) / 2);
    out.pairwise_p.assign(g, std::vector<double>(g, 1.0));
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i + 1; j < g; ++j) {
        const double p = mann_whitney_u(groups[i], groups[j]).p_value;
        out.pairwise_p[i][j] = out.pairwise_p[j][i] = std::min(1.0, p * pairs);
      }
  }
  return out;
}

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw StatsError("pearson: length mismatch");
  if (x.size() < 3) throw StatsError("pearson: need length >= 3");
  PearsonResult res;
  res.n = x.size();
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    res.degenerate = true;
    return res;
  }
  res.r = sxy / std::sqrt(sxx * syy);
  res.r = std::clamp(res.r, -1.0, 1.0);
  if (std::abs(res.r) >= 1.0) {
    res.p_value = 0.0;
    return res;
  }
  const double df = n - 2.0;
  const double t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
  res.p_value = student_t_two_sided(t, df);
  return res;
}

double sample_power_law_continuous(double alpha, double x_min, double u01) {
  return x_min * std::pow(1.0 - u01, -1.0 / (alpha - 1.0));
}

namespace {

// Hurwitz zeta by Euler-Maclaurin; valid for s > 1, q > 0.
double hurwitz_zeta(double s, double q) {
  const int burn = 15;
  double sum = 0.0;
  for (int k = 0; k < burn; ++k) sum += std::pow(q + k, -s);
  const double a = q + burn;
  sum += std::pow(a, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(a, -s);
  sum += s * std::pow(a, -s - 1.0) / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) / 720.0;
  return sum;
}

}  // namespace

// Least-squares fit over explicit (x, P(X >= x)) tail points; slope of the
// inverse CDF converted to the density exponent alpha = |slope| + 1.
PowerLawFit fit_power_law_tail_points(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw StatsError("fit_power_law: too few tail points");
  std::vector<double> lx, lp;
  for (const auto& [x, p] : points) {
    if (x <= 0.0 || p <= 0.0) continue;
    lx.push_back(std::log(x));
    lp.push_back(std::log(p));
  }
  if (lx.size() < 3) throw StatsError("fit_power_law: too few tail points");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += lp[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (lp[i] - my);
    syy += (lp[i] - my) * (lp[i] - my);
  }
  if (sxx <= 0.0) throw StatsError("fit_power_law: degenerate x range");
  const double slope = sxy / sxx;
  PowerLawFit fit;
  fit.fit_method = FitMethod::loglog_lsq;
  fit.alpha = std::abs(slope) + 1.0;
  fit.sample_count = lx.size();
  fit.goodness = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;  // R^2
  return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& values, double x_min,
                          FitMethod method, bool discrete) {
  std::vector<double> tail;
  for (double v : values)
    if (v >= x_min) tail.push_back(v);
  if (tail.size() < 30) throw StatsError("fit_power_law: fewer than 30 tail observations");
  std::sort(tail.begin(), tail.end());

  PowerLawFit fit;
  fit.x_min = x_min;
  fit.discrete = discrete;
  fit.sample_count = tail.size();

  if (method == FitMethod::loglog_lsq) {
    // empirical inverse CDF at distinct tail values
    std::vector<std::pair<double, double>> pts;
    const double n = static_cast<double>(tail.size());
    for (std::size_t i = 0; i < tail.size();) {
      pts.emplace_back(tail[i], static_cast<double>(tail.size() - i) / n);
      const double v = tail[i];
      while (i < tail.size() && tail[i] == v) ++i;
    }
    PowerLawFit lsq = fit_power_law_tail_points(pts);
    lsq.x_min = x_min;
    lsq.discrete = discrete;
    lsq.sample_count = tail.size();
    return lsq;
  }

  fit.fit_method = FitMethod::mle;
  const double n = static_cast<double>(tail.size());
  double log_sum = 0.0;
  for (double v : tail) log_sum += std::log(v);

  if (!discrete) {
    double shifted = 0.0;
    for (double v : tail) shifted += std::log(v / x_min);
    fit.alpha = 1.0 + n / shifted;
    fit.goodness = n * std::log(fit.alpha - 1.0) - n * std::log(x_min) -
                   fit.alpha * shifted;
    return fit;
  }

  // discrete MLE: minimize n*ln zeta(alpha, x_min) + alpha*sum(ln x)
  auto nll = [&](double alpha) {
    return n * std::log(hurwitz_zeta(alpha, x_min)) + alpha * log_sum;
  };
  double lo = 1.000001, hi = 20.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (nll(m1) < nll(m2))
      hi = m2;
    else
      lo = m1;
  }
  fit.alpha = 0.5 * (lo + hi);
  fit.goodness = -nll(fit.alpha);
  return fit;
}

}  // namespace polarsim
