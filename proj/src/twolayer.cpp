#include "asep/twolayer.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "asep/bridges.hpp"
#include "asep/kernels.hpp"

namespace asep {

void TwoLayerConfig::validate() const {
    const long nn = n();
    if (nn < 1 || lambda2.size() != lambda1.size()) throw std::invalid_argument("two-layer config: bad sizes");
    if (lambda1[0] != 0) throw std::invalid_argument("two-layer config: lambda1(0) must be 0");
    for (long j = 0; j <= nn; ++j)
        if (lambda1[j] < lambda2[j]) throw std::invalid_argument("two-layer config: layers must stay ordered");
    for (long j = 1; j <= nn; ++j) {
        const long du = lambda1[j] - lambda1[j - 1], dv = lambda2[j] - lambda2[j - 1];
        if (du < 0 || du > 1 || dv < 0 || dv > 1) throw std::invalid_argument("two-layer config: steps must be 0 or 1");
    }
}

template <class T>
T config_weight(const TwoLayerConfig& cfg, const FanParamsT<T>& p) {
    p.require_fan();
    cfg.validate();
    const long n = cfg.n();
    const long g0 = cfg.gap(0), gn = cfg.gap(n);
    T w = ipow(p.a, g0) * ipow(p.b, gn) * qpochhammer(T(p.c * p.d), p.q, gn) / qpochhammer(p.q, p.q, gn);
    for (long j = 1; j <= n; ++j) {
        const int u = static_cast<int>(cfg.lambda1[j] - cfg.lambda1[j - 1]);
        const int v = static_cast<int>(cfg.lambda2[j] - cfg.lambda2[j - 1]);
        w *= step_weight(cfg.gap(j), u, v, p.q, p.c, p.d);
    }
    return w;
}

template double config_weight<double>(const TwoLayerConfig&, const FanParamsT<double>&);
template Rat config_weight<Rat>(const TwoLayerConfig&, const FanParamsT<Rat>&);

double partition_log_z_transfer(const FanParams& p, long n, double tol, Truncation* cert) {
    const Truncation tr = choose_truncation(p, n, tol);
    if (cert) *cert = tr;
    const auto t = kernels::make_transfer_tables(p, tr.g0_cut, tr.g0_cut + n);
    return kernels::gap_partition_log(t, n);
}

Rat partition_z_transfer_exact(const RatFanParams& p, long n, long g0_cut) {
    p.require_fan();
    const long gmax = g0_cut + n;
    const auto w = make_step_weights(p, gmax);
    std::vector<Rat> cur(gmax + 1, Rat(0)), nxt(gmax + 1);
    for (long g = 0; g <= g0_cut; ++g) cur[g] = w.astart[g];
    for (long j = 1; j <= n; ++j) {
        for (long g = 0; g <= gmax; ++g) {
            Rat acc = cur[g] * (w.flat_c[g] + w.flat_d[g]);
            if (g + 1 <= gmax) acc += cur[g + 1] * w.down[g];
            if (g >= 1) acc += cur[g - 1] * w.up[g];
            nxt[g] = acc;
        }
        cur.swap(nxt);
    }
    Rat z(0);
    for (long g = 0; g <= gmax; ++g) z += cur[g] * w.bend[g];
    return z;
}

std::vector<std::pair<TwoLayerConfig, Rat>> enumerate_configs(const RatFanParams& p, long n, long g0_cut) {
    p.require_fan();
    if (n > 10) throw ResourceError("enumerate_configs: n too large for brute force");
    std::vector<std::pair<TwoLayerConfig, Rat>> out;
    const std::uint64_t total = 1ULL << n;
    for (long g0 = 0; g0 <= g0_cut; ++g0) {
        if (p.a == 0 && g0 > 0) break;
        for (std::uint64_t wu = 0; wu < total; ++wu)
            for (std::uint64_t wv = 0; wv < total; ++wv) {
                TwoLayerConfig cfg;
                cfg.lambda1.resize(n + 1);
                cfg.lambda2.resize(n + 1);
                cfg.lambda1[0] = 0;
                cfg.lambda2[0] = -g0;
                bool ok = true;
                for (long j = 1; j <= n && ok; ++j) {
                    cfg.lambda1[j] = cfg.lambda1[j - 1] + static_cast<long>((wu >> (n - j)) & 1ULL);
                    cfg.lambda2[j] = cfg.lambda2[j - 1] + static_cast<long>((wv >> (n - j)) & 1ULL);
                    ok = cfg.lambda1[j] >= cfg.lambda2[j];
                }
                if (!ok) continue;
                Rat wgt = config_weight(cfg, p);
                if (wgt != 0) out.emplace_back(std::move(cfg), std::move(wgt));
            }
    }
    return out;
}

namespace {

// Gap-chain contraction for one fixed first-layer increment word.
template <class T, class W>
T word_mass(const W& w, long n, long g0_cut, long gmax, std::uint64_t word) {
    std::vector<T> cur(gmax + 1, T(0)), nxt(gmax + 1);
    for (long g = 0; g <= g0_cut; ++g) cur[g] = w.astart[g];
    for (long j = 1; j <= n; ++j) {
        const int u = static_cast<int>((word >> (n - j)) & 1ULL);
        for (long g = 0; g <= gmax; ++g) {
            T acc(0);
            if (u == 1) {
                acc = cur[g] * w.flat_d[g];
                if (g >= 1) acc += cur[g - 1] * w.up[g];
            } else {
                acc = cur[g] * w.flat_c[g];
                if (g + 1 <= gmax) acc += cur[g + 1] * w.down[g];
            }
            nxt[g] = acc;
        }
        cur.swap(nxt);
    }
    T z(0);
    for (long g = 0; g <= gmax; ++g) z += cur[g] * w.bend[g];
    return z;
}

}  // namespace

std::vector<Rat> first_layer_marginal_exact(const RatFanParams& p, long n, long g0_cut) {
    p.require_fan();
    if (n > 12) throw ResourceError("first_layer_marginal_exact: n too large");
    const long gmax = g0_cut + n;
    const auto w = make_step_weights(p, gmax);
    const std::uint64_t total = 1ULL << n;
    std::vector<Rat> mass(total);
    Rat z(0);
    for (std::uint64_t word = 0; word < total; ++word) {
        mass[word] = word_mass<Rat>(w, n, g0_cut, gmax, word);
        z += mass[word];
    }
    for (auto& m : mass) m /= z;
    return mass;
}

std::vector<double> first_layer_marginal(const FanParams& p, long n, double tol) {
    p.require_fan();
    if (n > 16) throw ResourceError("first_layer_marginal: n too large");
    const Truncation tr = choose_truncation(p, n, tol);
    const long gmax = tr.g0_cut + n;
    // plain-double step weights are safe at oracle sizes
    FanParamsT<double> pd = p;
    auto w = make_step_weights(pd, gmax);
    for (long g = std::min<long>(tr.g0_cut + 1, gmax + 1); g <= gmax; ++g) w.astart[g] = 0.0;
    const std::uint64_t total = 1ULL << n;
    std::vector<double> mass(total);
    double z = 0.0;
    for (std::uint64_t word = 0; word < total; ++word) {
        mass[word] = word_mass<double>(w, n, tr.g0_cut, gmax, word);
        z += mass[word];
    }
    for (auto& m : mass) m /= z;
    return mass;
}

TwoLayerSampler::TwoLayerSampler(const FanParams& p, long n, double tol) : p_(p), n_(n) {
    p.require_fan();
    cert_ = choose_truncation(p, n, tol);
    const long gmax = cert_.g0_cut + n;
    tables_ = kernels::make_transfer_tables(p, cert_.g0_cut, gmax);
    forward_.assign(n + 1, std::vector<double>(gmax + 1, 0.0));
    double s0 = -kInf;
    for (long g = 0; g <= cert_.g0_cut; ++g) s0 = std::max(s0, tables_.log_astart[g]);
    for (long g = 0; g <= cert_.g0_cut; ++g)
        if (tables_.log_astart[g] > -kInf) forward_[0][g] = std::exp(tables_.log_astart[g] - s0);
    for (long j = 1; j <= n; ++j) {
        auto& cur = forward_[j];
        const auto& prev = forward_[j - 1];
        double norm = 0.0;
        for (long g = 0; g <= gmax; ++g) {
            double acc = prev[g] * (tables_.flat_c[g] + tables_.flat_d[g]);
            if (g + 1 <= gmax) acc += prev[g + 1] * tables_.down[g];
            if (g >= 1) acc += prev[g - 1] * tables_.up[g];
            cur[g] = acc;
            norm += acc;
        }
        for (long g = 0; g <= gmax; ++g) cur[g] /= norm;
    }
    // terminal distribution of the end gap
    terminal_.assign(gmax + 1, 0.0);
    double shift = -kInf;
    for (long g = 0; g <= gmax; ++g)
        if (forward_[n][g] > 0 && tables_.log_bend[g] > -kInf)
            shift = std::max(shift, std::log(forward_[n][g]) + tables_.log_bend[g]);
    double tot = 0.0;
    for (long g = 0; g <= gmax; ++g)
        if (forward_[n][g] > 0 && tables_.log_bend[g] > -kInf) {
            terminal_[g] = std::exp(std::log(forward_[n][g]) + tables_.log_bend[g] - shift);
            tot += terminal_[g];
        }
    for (auto& x : terminal_) x /= tot;
}

TwoLayerConfig TwoLayerSampler::sample(Rng& rng) const {
    const long gmax = cert_.g0_cut + n_;
    // end gap
    long g = gmax;
    {
        double u = rng.uniform(), acc = 0.0;
        for (long k = 0; k <= gmax; ++k) {
            acc += terminal_[k];
            if (u < acc) {
                g = k;
                break;
            }
        }
    }
    std::vector<int> us(n_ + 1, 0), vs(n_ + 1, 0);
    std::vector<long> gaps(n_ + 1, 0);
    gaps[n_] = g;
    for (long j = n_; j >= 1; --j) {
        const auto& prev = forward_[j - 1];
        const double wu = (g >= 1) ? prev[g - 1] * tables_.up[g] : 0.0;
        const double wf = prev[g] * (tables_.flat_c[g] + tables_.flat_d[g]);
        const double wd = (g + 1 <= gmax) ? prev[g + 1] * tables_.down[g] : 0.0;
        const double tot = wu + wf + wd;
        double u = rng.uniform() * tot;
        if (u < wu) {
            us[j] = 1;
            vs[j] = 0;
            g -= 1;
        } else if (u < wu + wf) {
            const double pc = tables_.flat_c[g] / (tables_.flat_c[g] + tables_.flat_d[g]);
            const bool hole = rng.uniform() < pc;
            us[j] = vs[j] = hole ? 0 : 1;
        } else {
            us[j] = 0;
            vs[j] = 1;
            g += 1;
        }
        gaps[j - 1] = g;
    }
    TwoLayerConfig cfg;
    cfg.lambda1.assign(n_ + 1, 0);
    cfg.lambda2.assign(n_ + 1, 0);
    cfg.lambda2[0] = -gaps[0];
    for (long j = 1; j <= n_; ++j) {
        cfg.lambda1[j] = cfg.lambda1[j - 1] + us[j];
        cfg.lambda2[j] = cfg.lambda2[j - 1] + vs[j];
    }
    return cfg;
}

double boltzmann_factor(const TwoLayerConfig& cfg, const FanParams& p) {
    p.require_fan();
    cfg.validate();
    const long n = cfg.n();
    double f = 1.0;
    for (long j = 1; j <= n; ++j) {
        const int u = static_cast<int>(cfg.lambda1[j] - cfg.lambda1[j - 1]);
        const int v = static_cast<int>(cfg.lambda2[j] - cfg.lambda2[j - 1]);
        f *= step_weight<double>(cfg.gap(j), u, v, p.q, p.c, p.d);
    }
    const long gn = cfg.gap(n);
    f *= qpochhammer<double>(p.c * p.d, p.q, gn) / qpochhammer<double>(p.q, p.q, gn);
    return f;
}

void WindowSpec::validate() const {
    const size_t d1 = thetas.size();
    if (d1 == 0 || lows.size() != d1 || highs.size() != d1) throw std::invalid_argument("window: bad sizes");
    double prev = 0.0;
    for (size_t j = 0; j < d1; ++j) {
        if (!(thetas[j] > prev)) throw std::invalid_argument("window: thetas must increase from 0");
        prev = thetas[j];
        if (!(lows[j] > 0) || !(lows[j] < highs[j])) throw std::invalid_argument("window: need 0 < u_j < v_j");
    }
    if (std::abs(thetas.back() - 1.0) > 1e-12) throw std::invalid_argument("window: last theta must be 1");
    for (size_t j = 0; j + 1 < d1; ++j)
        if (!(highs.back() - lows[j] < 1.0 - thetas[j]))
            throw std::invalid_argument("window: need v_{d+1} - u_j < 1 - theta_j");
}

namespace {

std::vector<kernels::CountFilter> window_filters(const WindowSpec& w, long n) {
    std::vector<kernels::CountFilter> out;
    for (size_t j = 0; j < w.thetas.size(); ++j) {
        const long site = static_cast<long>(std::floor(w.thetas[j] * n + 1e-9));
        const double un = w.lows[j] * n, vn = w.highs[j] * n;
        const long lo = static_cast<long>(std::floor(un + 1e-9)) + 1;
        const long hi = static_cast<long>(std::ceil(vn - 1e-9)) - 1;
        out.push_back({site, lo, hi});
    }
    return out;
}

}  // namespace

std::vector<RatioPoint> ratio_window_logasy(const FanParams& p, const WindowSpec& w, const std::vector<long>& ns,
                                            double tol) {
    p.require_fan();
    w.validate();
    FanParams p0{p.a, p.b, 0.0, 0.0, 0.0};
    std::vector<RatioPoint> out;
    for (long n : ns) {
        const auto filters = window_filters(w, n);
        const long cut = std::max(choose_truncation(p, n, tol).g0_cut, choose_truncation(p0, n, tol).g0_cut);
        const auto tq = kernels::make_transfer_tables(p, cut, cut + n);
        const auto t0 = kernels::make_transfer_tables(p0, cut, cut + n);
        const double num = kernels::count_layer_close(kernels::count_dp_forward(tq, n, filters), tq);
        const double den = kernels::count_layer_close(kernels::count_dp_forward(t0, n, filters), t0);
        out.push_back({n, num - den, (num - den) / n});
    }
    return out;
}

SeparationEstimate separation_probability(double a, double b, long r, double eps, const WindowSpec& w, long n,
                                          long target_accepted, std::uint64_t seed) {
    if (r < 0 || eps < 0 || eps > 1) throw std::invalid_argument("separation_probability: bad r or eps");
    FanParams p{a, b, 0.0, 0.0, 0.0};
    p.require_fan();
    w.validate();
    const TwoLayerSampler sampler(p, n, 1e-10);
    const auto filters = window_filters(w, n);
    const long small_cap = static_cast<long>(std::ceil(eps * n - 1e-9));

    SeparationEstimate est;
    est.n = n;
    est.r = r;
    est.eps = eps;
    est.bound = std::exp(-std::pow(static_cast<double>(n), 0.8));

    long accepted = 0, success = 0, attempted = 0;
    const long block = 8192;
    const long max_attempts = std::max<long>(1'000'000, 20'000 * target_accepted);
    while (accepted < target_accepted) {
        long blk_acc = 0, blk_succ = 0;
#pragma omp parallel for schedule(static) reduction(+ : blk_acc, blk_succ)
        for (long i = 0; i < block; ++i) {
            Rng rng = fork_rng(seed, static_cast<std::uint64_t>(attempted + i));
            const TwoLayerConfig cfg = sampler.sample(rng);
            bool in_window = true;
            for (const auto& f : filters) {
                const long v = cfg.lambda1[f.site];
                if (v < f.lo || v > f.hi) {
                    in_window = false;
                    break;
                }
            }
            if (!in_window) continue;
            ++blk_acc;
            long close_sites = 0;
            for (long j = 0; j <= n; ++j)
                if (cfg.gap(j) <= r) ++close_sites;
            if (close_sites <= small_cap) ++blk_succ;
        }
        accepted += blk_acc;
        success += blk_succ;
        attempted += block;
        if (attempted >= 100000 && accepted < attempted / 10000)
            throw RejectionError("separation_probability: window acceptance below 1e-4");
        if (attempted >= max_attempts && accepted < target_accepted)
            throw RejectionError("separation_probability: attempt budget exhausted");
    }
    est.accepted = accepted;
    est.attempted = attempted;
    est.estimate = static_cast<double>(success) / accepted;
    std::tie(est.ci_low, est.ci_high) = wilson_interval(success, accepted);
    return est;
}

}  // namespace asep
