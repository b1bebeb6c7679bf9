#pragma once

#include <climits>
#include <cstdint>
#include <utility>
#include <vector>

#include "asep/numeric.hpp"
#include "asep/rng.hpp"

namespace asep {

inline constexpr long kNoCeiling = LONG_MAX / 4;
inline constexpr long kNoFloor = LONG_MIN / 4;

/// A path on [0,n] with increments in {0,1}.
struct BernoulliPath {
    std::vector<long> v;
    long n() const { return static_cast<long>(v.size()) - 1; }
    bool valid() const;
};

/// Bridge data: endpoints x -> y in n steps, optional ceiling f (path <= f)
/// and floor g (path >= g), entry sentinels kNoCeiling / kNoFloor.
struct BridgeSpec {
    long n = 0;
    long x = 0, y = 0;
    std::vector<long> ceiling;  // empty or size n+1
    std::vector<long> floor;    // empty or size n+1

    long ceil_at(long j) const { return ceiling.empty() ? kNoCeiling : ceiling[j]; }
    long floor_at(long j) const { return floor.empty() ? kNoFloor : floor[j]; }
    void validate() const;
};

/// |Omega(n,x,y,f,g)| by exact counting; 0 signals an empty set.
BigInt count_paths(const BridgeSpec& spec);

/// Uniform sample. Unconstrained bridges use the sequential rule
/// P(up at j) = (y - L(j))/(n - j); constrained ones sample proportionally
/// to exact suffix counts.
BernoulliPath sample_bridge(const BridgeSpec& spec, Rng& rng);

/// Exact E[L(j)] under the uniform constrained bridge, per site.
std::vector<Rat> exact_site_expectations(const BridgeSpec& spec);

struct PathPair {
    BernoulliPath l1, l2;  // l1 >= l2 pointwise
    bool ordered() const;
};

BigInt count_pairs(long n, long x1, long x2, long y1, long y2);
PathPair sample_pair(long n, long x1, long x2, long y1, long y2, Rng& rng);

/// Replaces layer `which` (1 or 2) on [a,b] by a fresh constrained bridge,
/// endpoints kept, the other layer acting as floor/ceiling.
PathPair gibbs_resample(const PathPair& pair, long a, long b, int which, Rng& rng);

/// Shared-randomness systematic-scan heat-bath coupling of two bridge
/// measures with ordered data; the returned paths are ordered pointwise.
/// Marginals approach their uniform laws with the sweep budget.
std::pair<BernoulliPath, BernoulliPath> monotone_couple(const BridgeSpec& bottom, const BridgeSpec& top, Rng& rng,
                                                        long sweeps = -1);

struct IneqReport {
    Rat lhs, rhs;
    bool satisfied = false;
    double lhs_d() const { return to_double(lhs); }
    double rhs_d() const { return to_double(rhs); }
};

/// Exact check of P(L1 >= h1, L2 <= h2) >= P(L1 >= h1) P(L2 <= h2) under the
/// ordered pair measure vs the product of single bridge measures.
IneqReport verify_two_path_monotone(long n, long x1, long x2, long y1, long y2, const std::vector<long>& h1,
                                    const std::vector<long>& h2);

/// Monotone threshold event: all sites j with a finite threshold must
/// satisfy L(j) >= t_j (increasing) or L(j) <= t_j (decreasing).
struct ThresholdEvent {
    bool increasing = true;
    std::vector<long> thresholds;  // size n+1; kNoFloor / kNoCeiling = unconstrained
};

IneqReport verify_fkg(const BridgeSpec& spec, const ThresholdEvent& b, const ThresholdEvent& c);

/// P(L(m) = k) for the bridge 0 -> h: C(m,k) C(n-m,h-k) / C(n,h).
std::vector<Rat> hypergeometric_onepoint(long n, long h, long m);

/// Exact check of P(L(m) <= s) / P(L(m) <= t) >= n^{-1-t+s}.
IneqReport verify_hypergeometric_ratio(long n, long h, long m, long s, long t);

struct TailEstimate {
    double estimate = 0;
    double ci_low = 0, ci_high = 0;
    bool exact = false;
};

/// P(sup_j |L(j) - mj/n| <= M) for the bridge 0 -> m: exact by enumeration
/// when samples == 0 (n <= 24), otherwise Monte Carlo with a Wilson interval.
TailEstimate fluctuation_tail(long n, long m, double bound_m, long samples, std::uint64_t seed);

/// Wilson 95% score interval for `hits` successes out of `trials`.
std::pair<double, double> wilson_interval(long hits, long trials);

}  // namespace asep
