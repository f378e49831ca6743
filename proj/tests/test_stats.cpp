#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fitsim/harness/statistics.hpp"

using namespace fitsim::harness;

TEST_CASE("regularized incomplete beta obeys its identities") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // Symmetry point of a symmetric beta.
    CHECK(regularized_incomplete_beta(4.0, 4.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // Reflection identity I_x(a,b) = 1 - I_{1-x}(b,a).
    for (double x : {0.1, 0.3, 0.62, 0.9}) {
        CHECK(regularized_incomplete_beta(2.5, 7.0, x) ==
              doctest::Approx(1.0 - regularized_incomplete_beta(7.0, 2.5, 1.0 - x)).epsilon(1e-12));
    }
    // I_x(1,1) = x (uniform CDF).
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
    // Monotone in x.
    double prev = -1.0;
    for (double x = 0.0; x <= 1.0; x += 0.05) {
        const double v = regularized_incomplete_beta(3.0, 2.0, x);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS(regularized_incomplete_beta(0.0, 1.0, 0.5));
    CHECK_THROWS(regularized_incomplete_beta(1.0, 1.0, -0.1));
    CHECK_THROWS(regularized_incomplete_beta(1.0, 1.0, 1.1));
}

TEST_CASE("anova matches the hand-worked two-group oracle") {
    // Groups {1,2,3} and {4,5,6}: SSB = 13.5, SSW = 4, df = (1,4),
    // F = 13.5 / 1 = 13.5, p = 0.021312 (checked against t^2 = F below).
    const std::vector<std::vector<double>> groups{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
    const AnovaResult r = anova_oneway(groups);
    CHECK(r.f == doctest::Approx(13.5).epsilon(1e-12));
    CHECK(r.df_between == 1);
    CHECK(r.df_within == 4);
    CHECK(r.p == doctest::Approx(0.021312).epsilon(1e-3));
    CHECK(r.ss_between == doctest::Approx(13.5).epsilon(1e-12));
    CHECK(r.ss_within == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.ms_within == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.grand_mean == doctest::Approx(3.5));
    REQUIRE(r.group_means.size() == 2);
    CHECK(r.group_means[0] == doctest::Approx(2.0));
    CHECK(r.group_means[1] == doctest::Approx(5.0));
    CHECK(r.group_sizes == std::vector<std::size_t>{3, 3});
}

TEST_CASE("anova invariances and degenerate inputs") {
    const std::vector<std::vector<double>> groups{
        {12.1, 14.3, 11.8, 13.0}, {15.2, 16.1, 14.8}, {11.0, 10.5, 12.2, 11.7}};
    const AnovaResult base = anova_oneway(groups);

    SUBCASE("group order does not change F or p") {
        const AnovaResult perm = anova_oneway({groups[2], groups[0], groups[1]});
        CHECK(perm.f == doctest::Approx(base.f).epsilon(1e-12));
        CHECK(perm.p == doctest::Approx(base.p).epsilon(1e-12));
    }
    SUBCASE("adding a constant to every observation changes nothing") {
        std::vector<std::vector<double>> shifted = groups;
        for (auto& g : shifted) {
            for (auto& v : g) v += 1000.0;
        }
        const AnovaResult s = anova_oneway(shifted);
        CHECK(s.f == doctest::Approx(base.f).epsilon(1e-9));
        CHECK(s.p == doctest::Approx(base.p).epsilon(1e-9));
    }
    SUBCASE("identical group means give F = 0 and p = 1") {
        const AnovaResult r = anova_oneway({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}});
        CHECK(r.f == doctest::Approx(0.0));
        CHECK(r.p == doctest::Approx(1.0));
    }
    SUBCASE("degenerate designs are rejected") {
        CHECK_THROWS_AS(anova_oneway({{1.0, 2.0}}), std::domain_error);              // one group
        CHECK_THROWS_AS(anova_oneway({{1.0, 2.0}, {3.0}}), std::domain_error);       // size 1
        CHECK_THROWS_AS(anova_oneway({{2.0, 2.0}, {2.0, 2.0}}), std::domain_error);  // no variance
        CHECK_THROWS_AS(anova_oneway({}), std::domain_error);
    }
}

TEST_CASE("two-group anova F equals the squared pooled t statistic") {
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> na(10.0, 2.0), nb(11.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 8; ++i) a.push_back(na(gen));
        for (int i = 0; i < 11; ++i) b.push_back(nb(gen));

        const AnovaResult r = anova_oneway({a, b});

        // Pooled two-sample t computed independently.
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        auto ss = [&](const std::vector<double>& v) {
            const double m = mean(v);
            double s = 0.0;
            for (double x : v) s += (x - m) * (x - m);
            return s;
        };
        const double sp2 = (ss(a) + ss(b)) / static_cast<double>(a.size() + b.size() - 2);
        const double t = (mean(a) - mean(b)) /
                         std::sqrt(sp2 * (1.0 / a.size() + 1.0 / b.size()));
        CHECK(r.f == doctest::Approx(t * t).epsilon(1e-9));
        CHECK(r.p == doctest::Approx(t_two_sided_p(t, r.df_within)).epsilon(1e-9));
    }
}

TEST_CASE("t distribution quantiles and tail probabilities") {
    // Reference values from standard t tables.
    CHECK(t_quantile(0.975, 4) == doctest::Approx(2.776445).epsilon(1e-5));
    CHECK(t_quantile(0.975, 29) == doctest::Approx(2.045230).epsilon(1e-5));
    CHECK(t_quantile(0.95, 29) == doctest::Approx(1.699127).epsilon(1e-5));
    CHECK(t_quantile(0.5, 7) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(t_quantile(0.025, 4) == doctest::Approx(-2.776445).epsilon(1e-5));

    // Quantile and p-value are inverses: P(|T| > t_{0.975}) = 0.05.
    for (int df : {2, 5, 10, 29, 100}) {
        const double q = t_quantile(0.975, df);
        CHECK(t_two_sided_p(q, df) == doctest::Approx(0.05).epsilon(1e-9));
    }
    CHECK(t_two_sided_p(0.0, 10) == doctest::Approx(1.0));
    CHECK(t_two_sided_p(-3.0, 10) == doctest::Approx(t_two_sided_p(3.0, 10)).epsilon(1e-12));
    CHECK(t_two_sided_p(50.0, 10) < 1e-9);

    CHECK_THROWS_AS(t_two_sided_p(std::nan(""), 10), std::domain_error);
    CHECK_THROWS(t_quantile(0.0, 10));
    CHECK_THROWS(t_quantile(1.0, 10));
    CHECK_THROWS(t_quantile(0.5, 0));
}

TEST_CASE("pairwise comparisons match the hand-worked LSD oracle") {
    // Same data as the ANOVA oracle: diff = 5 - 2 = 3, pooled MSW = 1,
    // SE = sqrt(1 * (1/3 + 1/3)) = 0.81650, t = 3.674, df = 4, p = 0.021312,
    // CI = 3 +- 2.776445 * SE = [0.73304, 5.26696].
    const std::vector<NamedGroup> groups{{"ml", {4.0, 5.0, 6.0}}, {"weak", {1.0, 2.0, 3.0}}};
    const auto rows = pairwise_comparisons(groups, "ml");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].comparison == "ml-weak");
    CHECK(rows[0].mean_diff == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rows[0].se == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(rows[0].p == doctest::Approx(0.021312).epsilon(1e-3));
    CHECK(rows[0].ci_lo == doctest::Approx(0.73304).epsilon(1e-4));
    CHECK(rows[0].ci_hi == doctest::Approx(5.26696).epsilon(1e-4));
    // Single comparison: Bonferroni is a no-op.
    CHECK(rows[0].p_bonferroni == doctest::Approx(rows[0].p).epsilon(1e-12));
    // The CI always brackets the point estimate.
    CHECK(rows[0].ci_lo < rows[0].mean_diff);
    CHECK(rows[0].mean_diff < rows[0].ci_hi);
}

TEST_CASE("pairwise comparisons reproduce the published improvement gap") {
    // Published result: adaptive mean 1392.77 vs weak-goal mean 1260.91
    // over equal-size groups; the contrast must come out at 131.86.
    auto group_with_mean = [](const std::string& name, double mean) {
        NamedGroup g;
        g.name = name;
        g.values = {mean - 40.0, mean - 15.0, mean + 5.0, mean + 50.0};  // mean preserved
        return g;
    };
    const std::vector<NamedGroup> groups{
        group_with_mean("ml", 1392.77),
        group_with_mean("weak", 1260.91),
        group_with_mean("none", 1100.0),
    };
    const auto rows = pairwise_comparisons(groups, "ml");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].comparison == "ml-weak");
    CHECK(rows[0].mean_diff == doctest::Approx(131.86).epsilon(1e-6));
    CHECK(rows[1].comparison == "ml-none");
    CHECK(rows[1].mean_diff == doctest::Approx(292.77).epsilon(1e-6));
    // Bonferroni scales by the number of comparisons, capped at 1.
    for (const auto& row : rows) {
        CHECK(row.p_bonferroni == doctest::Approx(std::min(1.0, row.p * 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("pairwise comparison edge cases") {
    SUBCASE("antisymmetry under swapped reference") {
        const std::vector<NamedGroup> groups{{"a", {1.0, 2.0, 4.0}}, {"b", {3.0, 5.0, 6.0}}};
        const auto ab = pairwise_comparisons(groups, "a");
        const auto ba = pairwise_comparisons(groups, "b");
        CHECK(ab[0].mean_diff == doctest::Approx(-ba[0].mean_diff).epsilon(1e-12));
        CHECK(ab[0].p == doctest::Approx(ba[0].p).epsilon(1e-12));
        CHECK(ab[0].ci_lo == doctest::Approx(-ba[0].ci_hi).epsilon(1e-9));
        CHECK(ab[0].ci_hi == doctest::Approx(-ba[0].ci_lo).epsilon(1e-9));
    }
    SUBCASE("identical groups compare as a wash") {
        const std::vector<NamedGroup> groups{{"a", {1.0, 2.0, 3.0}}, {"b", {1.0, 2.0, 3.0}}};
        const auto rows = pairwise_comparisons(groups, "a");
        CHECK(rows[0].mean_diff == doctest::Approx(0.0));
        CHECK(rows[0].p == doctest::Approx(1.0));
        CHECK(rows[0].ci_lo == doctest::Approx(-rows[0].ci_hi).epsilon(1e-9));
    }
    SUBCASE("unknown reference and degenerate groups are rejected") {
        const std::vector<NamedGroup> groups{{"a", {1.0, 2.0, 3.0}}, {"b", {2.0, 3.0, 4.0}}};
        CHECK_THROWS(pairwise_comparisons(groups, "zz"));
        CHECK_THROWS(pairwise_comparisons({{"a", {1.0, 2.0}}}, "a"));
    }
}

TEST_CASE("spearman rank correlation with and without ties") {
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}) == doctest::Approx(1.0));
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
    // Classic textbook example: one swapped adjacent pair per half.
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}) == doctest::Approx(0.8).epsilon(1e-12));
    // Monotone nonlinear map preserves rho = 1.
    CHECK(spearman_rho({1, 2, 3, 4}, {1, 8, 27, 64}) == doctest::Approx(1.0));
    // Average ranks for ties: y ties exactly where x ties, still perfectly
    // concordant.
    CHECK(spearman_rho({1, 2, 2, 3}, {10, 20, 20, 30}) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(spearman_rho({1, 1, 1}, {1, 2, 3}), std::domain_error);  // constant input
    CHECK_THROWS(spearman_rho({1, 2}, {1, 2, 3}));                           // length mismatch
    CHECK_THROWS(spearman_rho({1}, {1}));                                    // too short
}

TEST_CASE("stats csv uses the canonical six-column schema") {
    const std::vector<NamedGroup> groups{{"ml", {4.0, 5.0, 6.0}}, {"weak", {1.0, 2.0, 3.0}}};
    const auto rows = pairwise_comparisons(groups, "ml");

    const auto path = (std::filesystem::temp_directory_path() / "fitsim_stats.csv").string();
    write_stats_csv(rows, path);

    std::ifstream is(path);
    std::string header, line;
    REQUIRE(std::getline(is, header));
    CHECK(header == "comparison,mean_diff,se,p,ci_lo,ci_hi");
    REQUIRE(std::getline(is, line));
    CHECK(line.rfind("ml-weak,", 0) == 0);
    // Exactly one data row, six fields.
    int commas = 0;
    for (char c : line) commas += c == ',' ? 1 : 0;
    CHECK(commas == 5);
    CHECK_FALSE(std::getline(is, line));
    std::filesystem::remove(path);
}
