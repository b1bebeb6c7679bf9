#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "asep/kernels.hpp"
#include "asep/mpa.hpp"
#include "asep/numeric.hpp"
#include "asep/params.hpp"
#include "asep/qkernel.hpp"
#include "asep/rng.hpp"

namespace asep {

/// An ordered pair of up/flat paths on [0,N] with lambda1(0) = 0 and
/// lambda1 >= lambda2 pointwise.
struct TwoLayerConfig {
    std::vector<long> lambda1, lambda2;

    long n() const { return static_cast<long>(lambda1.size()) - 1; }
    long gap(long j) const { return lambda1[j] - lambda2[j]; }
    void validate() const;
};

/// Boundary factors a^{gap(0)}, b^{gap(N)} (cd;q)/(q;q) times the product of
/// local step weights, evaluated directly from the definition.
template <class T>
T config_weight(const TwoLayerConfig& cfg, const FanParamsT<T>& p);

double partition_log_z_transfer(const FanParams& p, long n, double tol, Truncation* cert = nullptr);
Rat partition_z_transfer_exact(const RatFanParams& p, long n, long g0_cut);

/// Brute-force list of every configuration with start gap <= g0_cut.
std::vector<std::pair<TwoLayerConfig, Rat>> enumerate_configs(const RatFanParams& p, long n, long g0_cut);

/// First-layer path law, indexed by the increment word (first step = most
/// significant bit). Sums the second layer out through the gap chain.
std::vector<double> first_layer_marginal(const FanParams& p, long n, double tol);
std::vector<Rat> first_layer_marginal_exact(const RatFanParams& p, long n, long g0_cut);

/// Exact forward-backward sampler of the two-layer measure.
class TwoLayerSampler {
  public:
    TwoLayerSampler(const FanParams& p, long n, double tol);
    TwoLayerConfig sample(Rng& rng) const;
    const Truncation& cert() const { return cert_; }
    long n() const { return n_; }

  private:
    FanParams p_;
    long n_;
    Truncation cert_;
    kernels::TransferTables tables_;
    std::vector<std::vector<double>> forward_;  // per-site gap masses, each normalized
    std::vector<double> terminal_;              // end-gap distribution
};

/// weight(cfg; q,a,b,c,d) / weight(cfg; 0,a,b,0,0).
double boltzmann_factor(const TwoLayerConfig& cfg, const FanParams& p);

/// Height window constraints h(theta_j) in (lo_j, hi_j), theta_{d+1} = 1.
struct WindowSpec {
    std::vector<double> thetas, lows, highs;
    void validate() const;
};

struct RatioPoint {
    long n;
    double log_ratio;         // log of the windowed weight-sum ratio
    double log_ratio_over_n;  // (1/N) of the above
};

/// Windowed two-layer mass under (q,a,b,c,d) against the same mass under
/// (0,a,b,0,0), by exact dynamic programming.
std::vector<RatioPoint> ratio_window_logasy(const FanParams& p, const WindowSpec& w, const std::vector<long>& ns,
                                            double tol);

struct RejectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeparationEstimate {
    long n = 0;
    long r = 0;
    double eps = 0;
    double estimate = 0;          // conditional P(#{j: gap <= r} <= ceil(eps N) | window)
    double ci_low = 0, ci_high = 0;  // Wilson 95% interval
    double bound = 0;             // exp(-N^{4/5})
    long accepted = 0;            // window hits used
    long attempted = 0;
};

/// Monte Carlo separation experiment at q = c = d = 0: exact sampling plus
/// window rejection. `target_accepted` window hits are collected (in
/// deterministic blocks, so results do not depend on the thread count).
SeparationEstimate separation_probability(double a, double b, long r, double eps, const WindowSpec& w, long n,
                                          long target_accepted, std::uint64_t seed);

}  // namespace asep
