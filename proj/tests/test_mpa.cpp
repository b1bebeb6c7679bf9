#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asep/mpa.hpp"
#include "asep/twolayer.hpp"

using namespace asep;

namespace {

const RatFanParams kTasep = rat_fan_params("0", "0", "0", "0", "0");

// Catalan numbers C_1..C_15
const long kCatalan[] = {1, 1,  2,   5,    14,   42,    132,    429,   1430,
                         4862, 16796, 58786, 208012, 742900, 2674440, 9694845};

}  // namespace

TEST_CASE("ED representation entries at the TASEP point") {
    const auto rep = build_ed(kTasep, 2);
    CHECK(rep.d_diag[0] == Rat(1));
    CHECK(rep.d_upper[0] == Rat(1));
    CHECK(rep.d_diag[1] == Rat(1));
    CHECK(rep.e_diag[0] == Rat(1));
    CHECK(rep.e_lower[0] == Rat(1));
    CHECK(rep.w[0] == Rat(1));
    CHECK(rep.w[1] == Rat(0));
    CHECK(rep.v[0] == Rat(1));
    CHECK(rep.v[1] == Rat(0));
}

TEST_CASE("ED representation entries at a q point") {
    const auto rep = build_ed(FanParams{0.1, 0.1, -0.5, -0.5, 0.5}, 4);
    CHECK(rep.d_diag[1] == doctest::Approx(1.5));  // (1 + q d)/(1 - q) = 0.75/0.5
    CHECK(rep.v[0] == doctest::Approx(1.0));
    // V rejects ab >= 1
    const FanParams shock{2, 2, 0, 0, 0};
    CHECK_THROWS_AS(build_ed(shock, 4), std::domain_error);
    CHECK_THROWS_AS(build_ed(kTasep, 1), std::invalid_argument);
}

TEST_CASE("DEHP relations are exact in rational mode") {
    const auto rep = build_ed(kTasep, 8);
    const auto res = check_dehp(rep, from_fan(kTasep));
    CHECK(res.bulk == 0.0);
    CHECK(res.left == 0.0);
    CHECK(res.right == 0.0);

    const RatFanParams gen = rat_fan_params("1/2", "1/2", "-2/5", "-3/10", "3/10");
    const auto rep2 = build_ed(gen, 8);
    const auto res2 = check_dehp(rep2, from_fan(gen));
    CHECK(res2.max_abs() == 0.0);
}

TEST_CASE("DEHP residuals small in float mode, large under perturbation") {
    const BoundaryRates rates{0.6, 0.7, 0.2, 0.1, 0.3};
    const FanParams p = to_fan(rates);
    auto rep = build_ed(p, 16);
    const auto res = check_dehp(rep, BoundaryRatesT<double>{rates.alpha, rates.beta, rates.gamma, rates.delta, rates.q});
    CHECK(res.max_abs() <= 1e-13);
    // negative control
    rep.d_diag[0] += 1e-3;
    const auto bad = check_dehp(rep, BoundaryRatesT<double>{rates.alpha, rates.beta, rates.gamma, rates.delta, rates.q});
    CHECK(bad.max_abs() >= 1e-4);
}

TEST_CASE("<W|V> series against closed form") {
    // q = 0, c = d = 0, ab = 1/2: geometric series = 2
    const auto g = wv_inner(FanParams{0.5, 1.0, 0, 0, 0}, 1e-13);
    CHECK(g.series == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.closed_form == doctest::Approx(2.0).epsilon(1e-12));
    // a = 0: only the k = 0 term survives
    const auto z = wv_inner(FanParams{0.0, 0.7, -0.2, -0.1, 0.4}, 1e-13);
    CHECK(z.series == doctest::Approx(1.0));
    // general point
    const auto w = wv_inner(FanParams{0.5, 0.5, -0.4, -0.4, 0.3}, 1e-13);
    CHECK(w.series == doctest::Approx(w.closed_form).epsilon(1e-12));
}

TEST_CASE("stationary measure at N = 1 matches the two-state balance") {
    const BoundaryRates rates{0.7, 0.4, 0.2, 0.3, 0.5};
    const FanParams p = to_fan(rates);
    const double expect = (rates.alpha + rates.delta) / (rates.alpha + rates.beta + rates.gamma + rates.delta);
    double err = 0.0;
    const double got = stationary_prob(p, Occupation{1}, 1e-12, &err);
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    CHECK(err < 1e-9);
}

TEST_CASE("stationary measure at N = 2 for TASEP alpha = beta = 1") {
    const auto table = stationary_table(to_float(kTasep), 2, 1e-12);
    CHECK(table[0] == doctest::Approx(0.2).epsilon(1e-12));  // (0,0)
    CHECK(table[1] == doctest::Approx(0.2).epsilon(1e-12));  // (0,1)
    CHECK(table[2] == doctest::Approx(0.4).epsilon(1e-12));  // (1,0)
    CHECK(table[3] == doctest::Approx(0.2).epsilon(1e-12));  // (1,1)

    const auto exact = stationary_table_exact(kTasep, 2, 0);
    CHECK(exact[0] == Rat(1, 5));
    CHECK(exact[1] == Rat(1, 5));
    CHECK(exact[2] == Rat(2, 5));
    CHECK(exact[3] == Rat(1, 5));
}

TEST_CASE("measures sum to one") {
    for (const FanParams p : {FanParams{0.5, 0.5, -0.4, -0.4, 0.3}, FanParams{2, 0.2, 0, -0.3, 0.7}}) {
        const auto table = stationary_table(p, 6, 1e-12);
        double s = 0.0;
        for (double x : table) s += x;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    // exact normalization for a rational point
    const auto exact = stationary_table_exact(rat_fan_params("1/2", "1/2", "-2/5", "0", "3/10"), 5, 40);
    Rat s(0);
    for (const auto& r : exact) s += r;
    CHECK(s == Rat(1));
}

TEST_CASE("near the ab = 1 boundary the measure approaches product Bernoulli(1/2)") {
    // a = b -> 1 with c = d = q = 0
    const long n = 4;
    for (double abv : {0.9, 0.99, 0.999}) {
        const auto table = stationary_table(FanParams{abv, abv, 0, 0, 0}, n, 1e-12);
        double worst = 0.0;
        for (double x : table) worst = std::max(worst, std::abs(x - std::pow(0.5, n)));
        // deviation shrinks roughly like 1 - ab
        CHECK(worst <= 2.0 * (1.0 - abv * abv));
    }
}

TEST_CASE("partition function equals Catalan numbers in the TASEP corner") {
    CHECK(partition_log_z(to_float(kTasep), 1, 1e-12) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(partition_log_z(to_float(kTasep), 2, 1e-12) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    for (long n = 1; n <= 14; ++n) {
        CHECK(partition_z_exact(kTasep, n, 0) == Rat(kCatalan[n + 1]));
    }
}

TEST_CASE("truncation certificate is honored") {
    const FanParams p{0.5, 0.5, -0.4, -0.4, 0.3};
    const auto tr = choose_truncation(p, 12, 1e-12);
    CHECK(tr.log_rel_bound <= std::log(1e-12));
    // enlarging the cut does not move the value beyond the certificate
    const double z1 = partition_log_z(p, 12, 1e-12);
    const Rat z_small = partition_z_exact(rat_fan_params("1/2", "1/2", "-2/5", "-2/5", "3/10"), 12, tr.g0_cut);
    const Rat z_big = partition_z_exact(rat_fan_params("1/2", "1/2", "-2/5", "-2/5", "3/10"), 12, tr.g0_cut + 40);
    CHECK(to_double(Rat((z_big - z_small) / z_big)) <= 1e-12);
    CHECK(z1 == doctest::Approx(std::log(to_double(z_big))).epsilon(1e-10));
}

TEST_CASE("generator stationarity oracle") {
    // N = 1: both sides solve the same two-state balance
    CHECK(generator_stationarity_check({0.7, 0.4, 0.2, 0.3, 0.5}, 1, 1e-12) <= 1e-12);
    // N = 6 at a general q point
    CHECK(generator_stationarity_check({0.6, 0.7, 0.2, 0.1, 0.3}, 6, 1e-12) <= 1e-9);
    // negative control: uniform measure is far from stationary
    const std::vector<double> uniform(1ULL << 3, 1.0 / 8.0);
    CHECK(generator_residual({1, 1, 0, 0, 0}, uniform) > 0.01);
}

TEST_CASE("particle-hole / left-right symmetry at alpha = beta, gamma = delta") {
    const RatFanParams sym = rat_fan_params("1/2", "1/2", "-3/10", "-3/10", "2/5");
    const long n = 6;
    const long cut = choose_truncation(to_float(sym), n, 1e-13).g0_cut;
    const auto table = stationary_table_exact(sym, n, cut);
    for (std::uint64_t ix = 0; ix < table.size(); ++ix) {
        // spatial reversal combined with particle-hole exchange
        std::uint64_t jx = 0;
        for (long i = 0; i < n; ++i) {
            const std::uint64_t bit = (ix >> i) & 1ULL;
            jx |= (1ULL - bit) << (n - 1 - i);
        }
        CHECK(table[ix] == table[jx]);
    }
}

TEST_CASE("pinned height law at N = 1 and N = 2") {
    const FanParams tasep = to_float(kTasep);
    const auto law1 = height_marginal_dist(tasep, 1, {1}, 1e-12);
    const auto table1 = stationary_table(tasep, 1, 1e-12);
    CHECK(law1.pmf[0] == doctest::Approx(table1[0]).epsilon(1e-12));
    CHECK(law1.pmf[1] == doctest::Approx(table1[1]).epsilon(1e-12));

    const auto law2 = height_marginal_dist(tasep, 2, {2}, 1e-12);
    CHECK(law2.pmf[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(law2.pmf[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(law2.pmf[2] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("pinned joint law marginalizes consistently") {
    const FanParams p{0.5, 0.5, -0.4, 0, 0.3};
    const long n = 6;
    const auto joint = height_marginal_dist(p, n, {2, 4}, 1e-12);
    const auto single = height_marginal_dist(p, n, {4}, 1e-12);
    for (long c4 = 0; c4 <= 4; ++c4) {
        double acc = 0.0;
        for (long c2 = 0; c2 <= 2; ++c2) acc += joint.at({c2, c4});
        CHECK(acc == doctest::Approx(single.pmf[c4]).epsilon(1e-9));
    }
    // joint support respects the increment bound c4 - c2 <= 2
    for (long c2 = 0; c2 <= 2; ++c2)
        for (long c4 = 0; c4 <= 4; ++c4)
            if (c4 < c2 || c4 - c2 > 2) CHECK(joint.at({c2, c4}) == 0.0);
}

TEST_CASE("pinned mean density lies in the effective-density envelope") {
    const FanParams p{2, 0.2, -0.3, -0.3, 0.5};
    const long n = 100;
    const auto law = height_marginal_dist(p, n, {n}, 1e-10);
    double mean = 0.0;
    for (long k = 0; k <= n; ++k) mean += k * law.pmf[k];
    mean /= n;
    const auto [rho_left, rho_right] = effective_densities(p);
    CHECK(mean >= rho_right - 0.05);
    CHECK(mean <= rho_left + 0.05);
}

TEST_CASE("log-partition scan approaches -log J") {
    const FanParams p{0, 0, 0, 0, 0};
    const auto scan = asymptotic_logz_scan(p, {125, 250, 500}, 1e-10);
    CHECK(std::abs(scan[2].second) < std::abs(scan[1].second));
    CHECK(std::abs(scan[1].second) < std::abs(scan[0].second));
    CHECK(std::abs(scan[2].second) < 0.05);
}
