#include "asep/ctmc.hpp"

#include <cmath>
#include <stdexcept>

namespace asep {

Occupation occupation_from_index(std::uint64_t ix, long n) {
    Occupation tau(n);
    for (long i = 0; i < n; ++i) tau[i] = static_cast<int>((ix >> (n - 1 - i)) & 1ULL);
    return tau;
}

std::vector<std::pair<Occupation, double>> enabled_transitions(const Occupation& tau, const BoundaryRates& rates) {
    rates.validate();
    const long n = static_cast<long>(tau.size());
    if (n < 1) throw std::invalid_argument("enabled_transitions: empty configuration");
    std::vector<std::pair<Occupation, double>> out;
    Occupation next = tau;
    // left wall
    if (tau[0] == 0 && rates.alpha > 0) {
        next[0] = 1;
        out.emplace_back(next, rates.alpha);
        next[0] = 0;
    }
    if (tau[0] == 1 && rates.gamma > 0) {
        next[0] = 0;
        out.emplace_back(next, rates.gamma);
        next[0] = 1;
    }
    // right wall
    if (tau[n - 1] == 1 && rates.beta > 0) {
        next[n - 1] = 0;
        out.emplace_back(next, rates.beta);
        next[n - 1] = 1;
    }
    if (tau[n - 1] == 0 && rates.delta > 0) {
        next[n - 1] = 1;
        out.emplace_back(next, rates.delta);
        next[n - 1] = 0;
    }
    // bulk hops
    for (long i = 0; i + 1 < n; ++i) {
        if (tau[i] == 1 && tau[i + 1] == 0) {
            next[i] = 0;
            next[i + 1] = 1;
            out.emplace_back(next, 1.0);
            next[i] = 1;
            next[i + 1] = 0;
        }
        if (rates.q > 0 && tau[i] == 0 && tau[i + 1] == 1) {
            next[i] = 1;
            next[i + 1] = 0;
            out.emplace_back(next, rates.q);
            next[i] = 0;
            next[i + 1] = 1;
        }
    }
    return out;
}

std::vector<double> SimStats::empirical_measure() const {
    std::vector<double> out(state_time.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = total_time > 0 ? state_time[i] / total_time : 0.0;
    return out;
}

std::vector<double> SimStats::site_density() const {
    std::vector<double> out(site_time.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = total_time > 0 ? site_time[i] / total_time : 0.0;
    return out;
}

SimStats gillespie_run(const BoundaryRates& rates, long n, double horizon_t, double burnin_t, Rng& rng,
                       std::uint64_t max_events) {
    rates.validate();
    if (!(horizon_t > burnin_t) || burnin_t < 0) throw std::invalid_argument("gillespie_run: need horizon > burnin >= 0");
    SimStats stats;
    stats.n = n;
    if (n <= 20) stats.state_time.assign(1ULL << n, 0.0);
    stats.site_time.assign(n, 0.0);

    Occupation tau(n, 0);
    double t = 0.0;
    while (t < horizon_t) {
        auto moves = enabled_transitions(tau, rates);
        double total = 0.0;
        for (const auto& m : moves) total += m.second;
        double dt = (total > 0) ? rng.exponential(total) : (horizon_t - t);
        double t_next = std::min(t + dt, horizon_t);
        // occupation-time accumulation, clipped to the post burn-in window
        const double lo = std::max(t, burnin_t), hi = t_next;
        if (hi > lo) {
            const double w = hi - lo;
            stats.total_time += w;
            if (!stats.state_time.empty()) stats.state_time[occupation_index(tau)] += w;
            for (long i = 0; i < n; ++i)
                if (tau[i]) stats.site_time[i] += w;
        }
        if (t + dt >= horizon_t || total == 0.0) break;
        t += dt;
        // pick the move by cumulative rate
        double u = rng.uniform() * total, acc = 0.0;
        size_t pick = moves.size() - 1;
        for (size_t i = 0; i < moves.size(); ++i) {
            acc += moves[i].second;
            if (u < acc) {
                pick = i;
                break;
            }
        }
        tau = moves[pick].first;
        ++stats.events;
        if (max_events > 0 && stats.events >= max_events) break;
    }
    return stats;
}

PiecewiseLinearProfile height_profile(const Occupation& tau) {
    const long n = static_cast<long>(tau.size());
    PiecewiseLinearProfile f;
    f.xs.resize(n + 1);
    f.ys.resize(n + 1);
    long acc = 0;
    for (long k = 0; k <= n; ++k) {
        if (k > 0) acc += tau[k - 1];
        f.xs[k] = static_cast<double>(k) / n;
        f.ys[k] = static_cast<double>(acc) / n;
    }
    return f;
}

}  // namespace asep
