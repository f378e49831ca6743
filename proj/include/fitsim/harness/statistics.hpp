#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fitsim::harness {

// I_x(a, b), the regularized incomplete beta function, via Lentz's continued
// fraction. Accurate to ~1e-14 over the parameter ranges used here (F and t
// tail probabilities).
double regularized_incomplete_beta(double a, double b, double x);

struct AnovaResult {
    double f = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    double ms_within = 0.0;  // pooled variance, reused by pairwise comparisons
    double grand_mean = 0.0;
    std::vector<double> group_means;
    std::vector<std::size_t> group_sizes;
};

// One-way fixed-effects ANOVA. Requires >= 2 groups with >= 2 samples each
// and nonzero within-group variance.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Two-sided p-value of a t statistic with df degrees of freedom.
double t_two_sided_p(double t, int df);

// Student-t quantile (inverse CDF) for probability q in (0, 1).
double t_quantile(double q, int df);

struct ComparisonRow {
    std::string comparison;  // "<reference>-<other>"
    double mean_diff = 0.0;  // mean(reference) - mean(other)
    double se = 0.0;
    double p = 1.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double p_bonferroni = 1.0;  // p scaled by the comparison count, capped at 1
};

struct NamedGroup {
    std::string name;
    std::vector<double> values;
};

// LSD-style post-hoc comparisons of `reference` against every other group:
// pooled-variance SE from the omnibus ANOVA, unadjusted two-sided t p-value,
// 95% CI. A Bonferroni-scaled p is carried alongside for reporting.
std::vector<ComparisonRow> pairwise_comparisons(const std::vector<NamedGroup>& groups,
                                                const std::string& reference);

// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// stats.csv: header comparison,mean_diff,se,p,ci_lo,ci_hi.
void write_stats_csv(const std::vector<ComparisonRow>& rows, const std::string& path);

}  // namespace fitsim::harness
