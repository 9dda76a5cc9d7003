#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarsim {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Distribution helpers (two-sided tails).
double normal_sf(double z);                 // P(Z > z)
double chi_square_sf(double x, double df);  // P(X > x)
double student_t_two_sided(double t, double df);

enum class PMethod { exact, normal_approx, chi_square_approx, t_approx };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  PMethod method = PMethod::exact;
  std::vector<std::size_t> n_per_group;
};

// Two-sided Mann-Whitney U with midrank ties. Exact enumeration of all
// C(n_a+n_b, n_a) group assignments when both sizes are <= 8, otherwise the
// normal approximation with tie and (optional) continuity correction.
TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                          bool continuity_correction = true);

struct KruskalWallisResult {
  TestResult omnibus;
  // Bonferroni-corrected pairwise two-sided Mann-Whitney p-values, indexed
  // [i][j] for i < j; empty unless posthoc was requested.
  std::vector<std::vector<double>> pairwise_p;
};

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                   bool posthoc = false);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // zero variance in either input
  std::size_t n = 0;
};

PearsonResult pearson(const std::vector<double>& x, const std::vector<double>& y);

enum class FitMethod { loglog_lsq, mle };

// alpha always uses the density convention y ~ x^-alpha; the inverse-CDF
// slope reported by the lsq route is alpha - 1.
struct PowerLawFit {
  double alpha = 0.0;
  FitMethod fit_method = FitMethod::mle;
  double x_min = 1.0;
  double goodness = 0.0;  // R^2 for lsq, log-likelihood for mle
  std::size_t sample_count = 0;
  bool discrete = false;
};

PowerLawFit fit_power_law(const std::vector<double>& values, double x_min,
                          FitMethod method, bool discrete = false);

// Least-squares route over explicit (x, P(X >= x)) tail points.
PowerLawFit fit_power_law_tail_points(const std::vector<std::pair<double, double>>& points);

// Inverse-transform samplers used as ground truth in tests and tuning.
double sample_power_law_continuous(double alpha, double x_min, double u01);

}  // namespace polarsim
