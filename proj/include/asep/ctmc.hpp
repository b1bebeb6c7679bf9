#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "asep/params.hpp"
#include "asep/ratefn.hpp"
#include "asep/rng.hpp"

namespace asep {

/// Site occupations tau_1..tau_N, entries 0/1.
using Occupation = std::vector<int>;

inline std::uint64_t occupation_index(const Occupation& tau) {
    std::uint64_t ix = 0;
    for (int t : tau) ix = (ix << 1) | static_cast<std::uint64_t>(t);
    return ix;
}

Occupation occupation_from_index(std::uint64_t ix, long n);

/// All moves enabled from `tau`: bulk right hops at rate 1, left hops at
/// rate q, entry/exit at the walls at rates alpha, gamma (left) and delta,
/// beta (right).
std::vector<std::pair<Occupation, double>> enabled_transitions(const Occupation& tau, const BoundaryRates& rates);

struct SimStats {
    long n = 0;
    double total_time = 0.0;          // post burn-in occupation time
    std::uint64_t events = 0;
    std::vector<double> state_time;   // occupation time per configuration (n <= 20), else empty
    std::vector<double> site_time;    // occupied time per site

    std::vector<double> empirical_measure() const;   // state_time / total_time
    std::vector<double> site_density() const;        // site_time / total_time
};

/// `max_events` > 0 additionally stops the run after that many jumps.
SimStats gillespie_run(const BoundaryRates& rates, long n, double horizon_t, double burnin_t, Rng& rng,
                       std::uint64_t max_events = 0);

/// Rescaled height profile h(k/N) = (1/N) sum_{i<=k} tau_i.
PiecewiseLinearProfile height_profile(const Occupation& tau);

}  // namespace asep
