#include "fitsim/harness/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "fitsim/harness/records.hpp"

namespace fitsim::harness {

namespace {

// Continued-fraction kernel for I_x(a,b) (modified Lentz), valid for
// x < (a+1)/(a+b+2); the symmetry relation covers the rest.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a, b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::domain_error("anova: need >= 2 groups");
    AnovaResult r;
    std::size_t n_total = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::domain_error("anova: each group needs >= 2 samples");
        n_total += g.size();
        grand_sum = std::accumulate(g.begin(), g.end(), grand_sum);
        r.group_means.push_back(mean_of(g));
        r.group_sizes.push_back(g.size());
    }
    r.grand_mean = grand_sum / static_cast<double>(n_total);

    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double dm = r.group_means[i] - r.grand_mean;
        r.ss_between += static_cast<double>(r.group_sizes[i]) * dm * dm;
        for (double x : groups[i]) {
            const double d = x - r.group_means[i];
            r.ss_within += d * d;
        }
    }
    r.df_between = static_cast<int>(groups.size()) - 1;
    r.df_within = static_cast<int>(n_total - groups.size());
    if (r.ss_within <= 0.0) {
        throw std::domain_error("anova: zero within-group variance (degenerate groups)");
    }
    r.ms_within = r.ss_within / r.df_within;
    const double ms_between = r.ss_between / r.df_between;
    r.f = ms_between / r.ms_within;

    // P(F_{d1,d2} > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2).
    const double d1 = r.df_between;
    const double d2 = r.df_within;
    r.p = regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * r.f));
    return r;
}

double t_two_sided_p(double t, int df) {
    if (df < 1) throw std::domain_error("t p-value: df must be >= 1");
    if (std::isnan(t)) throw std::domain_error("t p-value: statistic is NaN");
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

double t_quantile(double q, int df) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("t quantile: q must be in (0,1)");
    if (df < 1) throw std::domain_error("t quantile: df must be >= 1");
    if (q == 0.5) return 0.0;
    const bool upper = q > 0.5;
    const double tail = upper ? 1.0 - q : q;  // target two-sided p = 2*tail for t > 0
    double lo = 0.0, hi = 1e3;
    // Bisection on the two-sided p, monotone decreasing in |t|.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (t_two_sided_p(mid, df) / 2.0 > tail) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double magnitude = 0.5 * (lo + hi);
    return upper ? magnitude : -magnitude;
}

std::vector<ComparisonRow> pairwise_comparisons(const std::vector<NamedGroup>& groups,
                                                const std::string& reference) {
    std::vector<std::vector<double>> samples;
    samples.reserve(groups.size());
    std::size_t ref_idx = groups.size();
    for (std::size_t i = 0; i < groups.size(); ++i) {
        samples.push_back(groups[i].values);
        if (groups[i].name == reference) ref_idx = i;
    }
    if (ref_idx == groups.size()) {
        throw std::invalid_argument("reference group '" + reference + "' not present");
    }
    const AnovaResult omnibus = anova_oneway(samples);
    const double t_crit = t_quantile(0.975, omnibus.df_within);
    const int n_comparisons = static_cast<int>(groups.size()) - 1;

    std::vector<ComparisonRow> rows;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        if (j == ref_idx) continue;
        ComparisonRow row;
        row.comparison = reference + "-" + groups[j].name;
        row.mean_diff = omnibus.group_means[ref_idx] - omnibus.group_means[j];
        row.se = std::sqrt(omnibus.ms_within *
                           (1.0 / static_cast<double>(omnibus.group_sizes[ref_idx]) +
                            1.0 / static_cast<double>(omnibus.group_sizes[j])));
        const double t = row.mean_diff / row.se;
        row.p = t_two_sided_p(t, omnibus.df_within);
        row.ci_lo = row.mean_diff - t_crit * row.se;
        row.ci_hi = row.mean_diff + t_crit * row.se;
        row.p_bonferroni = std::min(1.0, row.p * n_comparisons);
        rows.push_back(std::move(row));
    }
    return rows;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman: need two equal-length series of >= 2 points");
    }
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;  // average rank for ties
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean_of(rx);
    const double my = mean_of(ry);
    double num = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) {
        throw std::domain_error("spearman: a series is constant, rank correlation undefined");
    }
    return num / std::sqrt(vx * vy);
}

void write_stats_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "comparison,mean_diff,se,p,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
        out << r.comparison << ',' << format_double(r.mean_diff) << ',' << format_double(r.se)
            << ',' << format_double(r.p) << ',' << format_double(r.ci_lo) << ','
            << format_double(r.ci_hi) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace fitsim::harness
