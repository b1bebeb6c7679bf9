#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asep/params.hpp"
#include "asep/twolayer.hpp"

namespace asep {

/// One row of the finite-size large-deviation scan: the exact pinned-count
/// probability against the rate-function reference.
struct LdpRow {
    double rho;
    long n;
    long k;            // the pinned count floor(rho N)
    double empirical;  // -(1/N) log P(lambda1(N) = k)
    double reference;  // finite-dimensional rate at x = k/N
    double gap() const { return empirical - reference; }
};

std::vector<LdpRow> ldp_convergence(const FanParams& p, const std::vector<double>& rhos, const std::vector<long>& ns,
                                    double tol);

/// Worst-case total variation between the first-layer law and the height law
/// over a parameter grid (float route, and exact route on the sub-grid).
struct MarginalGridReport {
    double max_tv_float = 0.0;
    bool exact_all_zero = true;
    long points = 0;
    long exact_points = 0;
};
MarginalGridReport run_theorem23_grid(const std::vector<RatFanParams>& grid, long n_float, long n_exact, double tol);

/// Default 12-point fan grid used by the verification suites.
std::vector<RatFanParams> default_fan_grid();

struct RatioTrendReport {
    FanParams params;
    WindowSpec window;
    std::vector<RatioPoint> points;
};
RatioTrendReport run_corollary26(const FanParams& p, const WindowSpec& w, const std::vector<long>& ns, double tol);

struct SeparationReport {
    double a, b;
    std::vector<SeparationEstimate> estimates;
};
SeparationReport run_prop25(double a, double b, long r, double eps, const WindowSpec& w, const std::vector<long>& ns,
                            long target_accepted, std::uint64_t seed);

}  // namespace asep
