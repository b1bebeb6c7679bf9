#include "asep/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "asep/ratefn.hpp"

namespace asep {

std::vector<LdpRow> ldp_convergence(const FanParams& p, const std::vector<double>& rhos, const std::vector<long>& ns,
                                    double tol) {
    p.require_fan();
    std::vector<LdpRow> out;
    for (long n : ns) {
        const PinnedLaw law = height_marginal_dist(p, n, {n}, tol);
        for (double rho : rhos) {
            const long k = static_cast<long>(std::floor(rho * n + 1e-9));
            LdpRow row;
            row.rho = rho;
            row.n = n;
            row.k = k;
            const double prob = law.pmf[k];
            row.empirical = -std::log(prob) / n;
            // reference evaluated at the realized atom k/n (single pin: the
            // pin interpolant is provably optimal, no grid search needed)
            PinnedSpec spec{{1.0}, {static_cast<double>(k) / n}};
            row.reference = finite_dim_rate(spec, p.a, p.b, VariationalOptions{0, 0, 0});
            out.push_back(row);
        }
    }
    return out;
}

std::vector<RatFanParams> default_fan_grid() {
    const std::vector<std::array<const char*, 2>> abs = {
        {"0", "0"}, {"1/2", "1/2"}, {"2", "1/5"}, {"1/5", "2"}};
    const std::vector<std::array<const char*, 3>> qcd = {
        {"0", "0", "0"}, {"3/10", "-2/5", "-2/5"}, {"7/10", "-2/5", "0"}};
    std::vector<RatFanParams> grid;
    for (const auto& ab : abs)
        for (const auto& t : qcd) grid.push_back(rat_fan_params(ab[0], ab[1], t[1], t[2], t[0]));
    return grid;
}

MarginalGridReport run_theorem23_grid(const std::vector<RatFanParams>& grid, long n_float, long n_exact, double tol) {
    MarginalGridReport rep;
    for (const auto& rp : grid) {
        const FanParams p = to_float(rp);
        p.require_fan();
        // float route
        const auto marg = first_layer_marginal(p, n_float, tol);
        const auto height = stationary_table(p, n_float, tol);
        double tv = 0.0;
        for (size_t i = 0; i < marg.size(); ++i) tv += std::abs(marg[i] - height[i]);
        rep.max_tv_float = std::max(rep.max_tv_float, 0.5 * tv);
        ++rep.points;
        // exact route on the sub-grid, shared start-gap cut
        const long cut = choose_truncation(p, n_exact, tol).g0_cut;
        const auto marg_x = first_layer_marginal_exact(rp, n_exact, cut);
        const auto height_x = stationary_table_exact(rp, n_exact, cut);
        for (size_t i = 0; i < marg_x.size(); ++i)
            if (marg_x[i] != height_x[i]) rep.exact_all_zero = false;
        ++rep.exact_points;
    }
    return rep;
}

RatioTrendReport run_corollary26(const FanParams& p, const WindowSpec& w, const std::vector<long>& ns, double tol) {
    RatioTrendReport rep;
    rep.params = p;
    rep.window = w;
    rep.points = ratio_window_logasy(p, w, ns, tol);
    return rep;
}

SeparationReport run_prop25(double a, double b, long r, double eps, const WindowSpec& w, const std::vector<long>& ns,
                            long target_accepted, std::uint64_t seed) {
    SeparationReport rep;
    rep.a = a;
    rep.b = b;
    for (long n : ns) rep.estimates.push_back(separation_probability(a, b, r, eps, w, n, target_accepted, seed));
    return rep;
}

}  // namespace asep
