#include "asep/ratefn.hpp"

#include <algorithm>
#include <cmath>

#include "asep/kernels.hpp"
#include "asep/qkernel.hpp"

namespace asep {

void PiecewiseLinearProfile::validate_shape() const {
    if (xs.size() < 2 || xs.size() != ys.size()) throw std::invalid_argument("profile: need matching xs/ys, >= 2 points");
    if (std::abs(xs.front()) > 1e-12 || std::abs(xs.back() - 1.0) > 1e-12)
        throw std::invalid_argument("profile: breakpoints must run from 0 to 1");
    if (std::abs(ys.front()) > 1e-12) throw std::invalid_argument("profile: f(0) must be 0");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("profile: breakpoints must increase");
}

bool PiecewiseLinearProfile::admissible(double slack) const {
    validate_shape();
    for (size_t i = 1; i < xs.size(); ++i) {
        const double s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        if (s < -slack || s > 1.0 + slack) return false;
    }
    return true;
}

double PiecewiseLinearProfile::eval(double x) const {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t i = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

PiecewiseLinearProfile line_profile(double rho) { return profile_from_points({0.0, 1.0}, {0.0, rho}); }

PiecewiseLinearProfile profile_from_points(std::vector<double> xs, std::vector<double> ys) {
    PiecewiseLinearProfile f{std::move(xs), std::move(ys)};
    f.validate_shape();
    return f;
}

PiecewiseLinearProfile convex_envelope(const PiecewiseLinearProfile& f) {
    f.validate_shape();
    const size_t n = f.xs.size();
    std::vector<double> hx, hy;
    auto cross = [&](size_t a, size_t b, double px, double py) {
        return (hx[b] - hx[a]) * (py - hy[a]) - (hy[b] - hy[a]) * (px - hx[a]);
    };
    for (size_t i = 0; i < n; ++i) {
        while (hx.size() >= 2 && cross(hx.size() - 2, hx.size() - 1, f.xs[i], f.ys[i]) <= 0.0) {
            hx.pop_back();
            hy.pop_back();
        }
        hx.push_back(f.xs[i]);
        hy.push_back(f.ys[i]);
    }
    return PiecewiseLinearProfile{std::move(hx), std::move(hy)};
}

namespace {

double clamp01(double s) { return std::min(1.0, std::max(0.0, s)); }

double h_integral(const PiecewiseLinearProfile& f) {
    double acc = 0.0;
    for (size_t i = 1; i < f.xs.size(); ++i) {
        const double w = f.xs[i] - f.xs[i - 1];
        acc += w * entropy_h(clamp01((f.ys[i] - f.ys[i - 1]) / w));
    }
    return acc;
}

// int [ s log G*(s) + (1-s) log(1 - G*(s)) ] over the envelope segments,
// G* = clamp(s, [a/(1+a), 1/(1+b)]).
double gstar_integral(const PiecewiseLinearProfile& env, double a, double b) {
    const double lo = a / (1.0 + a), hi = 1.0 / (1.0 + b);
    double acc = 0.0;
    for (size_t i = 1; i < env.xs.size(); ++i) {
        const double w = env.xs[i] - env.xs[i - 1];
        const double s = clamp01((env.ys[i] - env.ys[i - 1]) / w);
        const double g = std::min(hi, std::max(s, lo));
        double term = 0.0;
        if (s > 0) term += s * std::log(g);
        if (s < 1) term += (1.0 - s) * std::log(1.0 - g);
        acc += w * term;
    }
    return acc;
}

}  // namespace

double rate_closed(const PiecewiseLinearProfile& f, double a, double b) {
    FanParams{a, b, 0, 0, 0}.require_fan();
    if (!f.admissible()) return kInf;
    const auto env = convex_envelope(f);
    return h_integral(f) + gstar_integral(env, a, b) - std::log(current_j(a, b));
}

double rate_pair(const PiecewiseLinearProfile& f, const PiecewiseLinearProfile& g, double a, double b) {
    FanParams{a, b, 0, 0, 0}.require_fan();
    if (!f.admissible() || !g.admissible()) return kInf;
    // min of the piecewise linear difference sits at a breakpoint
    std::vector<double> knots;
    knots.reserve(f.xs.size() + g.xs.size());
    knots.insert(knots.end(), f.xs.begin(), f.xs.end());
    knots.insert(knots.end(), g.xs.begin(), g.xs.end());
    std::sort(knots.begin(), knots.end());
    double mn = 0.0;
    for (double x : knots) mn = std::min(mn, f.eval(x) - g.eval(x));
    const double ab = a * b;
    double term_ab = 0.0;
    if (ab > 0) {
        term_ab = std::log(ab) * mn;
    } else if (mn < -1e-12) {
        return kInf;  // log(0) * (negative min) = +inf
    }
    double term_b = 0.0;
    const double endpoint_gap = f.end_value() - g.end_value();
    if (b > 0) {
        term_b = -std::log(b) * endpoint_gap;
    } else if (std::abs(endpoint_gap) > 1e-12) {
        return kInf;  // b = 0 pins g(1) = f(1); min-term already forced g <= f
    }
    return h_integral(f) + h_integral(g) + term_ab + term_b - std::log(current_j(a, b));
}

namespace {

struct GridProfile {
    std::vector<double> values;  // f at the K+1 grid positions
    int segments;
};

GridProfile sample_on_grid(const PiecewiseLinearProfile& f, int k) {
    // every breakpoint of f must sit on the grid, otherwise the barrier and
    // running-minimum bookkeeping below would miss interior minima
    for (double x : f.xs) {
        const double scaled = x * k;
        if (std::abs(scaled - std::llround(scaled)) > 1e-9)
            throw std::invalid_argument("rate_variational: grid does not resolve the profile breakpoints");
    }
    GridProfile g;
    g.segments = k;
    g.values.resize(k + 1);
    for (int i = 0; i <= k; ++i) g.values[i] = f.eval(static_cast<double>(i) / k);
    return g;
}

}  // namespace

double rate_variational(const PiecewiseLinearProfile& f, double a, double b, const VariationalOptions& opt) {
    FanParams{a, b, 0, 0, 0}.require_fan();
    if (!f.admissible()) return kInf;
    const int k = opt.grid_k, s = opt.slope_res, reg = opt.reg_levels;
    if (k < 2 || s < 1 || reg < 1) throw std::invalid_argument("rate_variational: bad options");
    const GridProfile fg = sample_on_grid(f, k);
    const long v_max = static_cast<long>(k) * s;
    const double ab = a * b;
    const bool force_touch = (ab == 0.0);
    const bool pin_end = (b == 0.0);

    kernels::VariationalLayerProblem prob;
    prob.segments = k;
    prob.slope_res = s;
    prob.hseg.resize(s + 1);
    for (int j = 0; j <= s; ++j) prob.hseg[j] = entropy_h(static_cast<double>(j) / s) / k;
    prob.cap.assign(k + 1, v_max);
    prob.terminal.assign(v_max + 1, kInf);

    long v_end = -1;
    if (pin_end) {
        const double scaled = f.end_value() * v_max;
        v_end = std::llround(scaled);
        if (std::abs(scaled - v_end) > 1e-9)
            throw std::invalid_argument("rate_variational: b = 0 pins g(1) = f(1), which must sit on the value grid");
    }

    const double hf = h_integral(f);
    const double log_j = std::log(current_j(a, b));
    const double kappa = ab > 0 ? -std::log(ab) : 0.0;  // penalty per unit of -min(f-g)

    double best = kInf;
    const int r_levels = force_touch ? 1 : reg + 1;
    for (int r = 0; r < r_levels; ++r) {
        const double t_thresh = -static_cast<double>(r) / reg;  // barrier: f - g >= t
        for (int i = 0; i <= k; ++i) {
            const double cap_real = (fg.values[i] - t_thresh) * v_max;
            prob.cap[i] = std::min<long>(static_cast<long>(std::floor(cap_real + 1e-9)), v_max);
        }
        for (long v = 0; v <= v_max; ++v) {
            if (pin_end) {
                prob.terminal[v] = (v == v_end) ? 0.0 : kInf;
            } else {
                prob.terminal[v] = -std::log(b) * (f.end_value() - static_cast<double>(v) / v_max);
            }
        }
        const double dp = kernels::variational_dp(prob);
        const double value = hf + dp + kappa * (static_cast<double>(r) / reg) - log_j;
        best = std::min(best, value);
        // the kappa term eventually dominates: dp >= -log 2 - |log b|
        if (!force_touch && r + 1 < r_levels) {
            const double dp_floor = -std::log(2.0) - std::abs(std::log(b));
            const double next_floor = hf + dp_floor + kappa * (static_cast<double>(r + 1) / reg) - log_j;
            if (next_floor > best) break;
        }
    }
    return best;
}

void PinnedSpec::validate() const {
    if (thetas.empty() || thetas.size() != xs.size()) throw std::invalid_argument("pinned spec: bad sizes");
    double prev = 0.0;
    for (double t : thetas) {
        if (!(t > prev)) throw std::invalid_argument("pinned spec: thetas must increase from 0");
        prev = t;
    }
    if (std::abs(thetas.back() - 1.0) > 1e-12) throw std::invalid_argument("pinned spec: last theta must be 1");
}

bool in_cone(const PinnedSpec& spec) {
    spec.validate();
    double pt = 0.0, px = 0.0;
    for (size_t j = 0; j < spec.thetas.size(); ++j) {
        const double dx = spec.xs[j] - px, dt = spec.thetas[j] - pt;
        if (dx < -1e-12 || dx > dt + 1e-12) return false;
        pt = spec.thetas[j];
        px = spec.xs[j];
    }
    return true;
}

bool in_cone_interior(const PinnedSpec& spec) {
    spec.validate();
    double pt = 0.0, px = 0.0;
    for (size_t j = 0; j < spec.thetas.size(); ++j) {
        const double dx = spec.xs[j] - px, dt = spec.thetas[j] - pt;
        if (dx <= 1e-12 || dx >= dt - 1e-12) return false;
        pt = spec.thetas[j];
        px = spec.xs[j];
    }
    return true;
}

namespace {

PiecewiseLinearProfile pin_interpolant(const PinnedSpec& spec) {
    std::vector<double> xs{0.0}, ys{0.0};
    xs.insert(xs.end(), spec.thetas.begin(), spec.thetas.end());
    ys.insert(ys.end(), spec.xs.begin(), spec.xs.end());
    return profile_from_points(std::move(xs), std::move(ys));
}

// Joint slope-grid search over (f, g) in the two-profile form, with an outer
// loop over min(f-g) thresholds. Returns an upper bound on the pinned
// infimum that does not presuppose piecewise-linearity between pins.
double finite_dim_pair_dp(const PinnedSpec& spec, double a, double b, const VariationalOptions& opt) {
    const int k0 = opt.grid_k, s = opt.slope_res, reg = opt.reg_levels;
    int k = 0;
    for (int kk = k0; kk <= 512; kk += k0) {
        bool ok = true;
        for (double t : spec.thetas) ok = ok && std::abs(t * kk - std::llround(t * kk)) < 1e-9;
        if (ok) {
            k = kk;
            break;
        }
    }
    if (k == 0) throw std::invalid_argument("finite_dim_rate: grid does not resolve the pin locations");
    const long v_max = static_cast<long>(k) * s;
    // pins must sit on the value grid
    std::vector<long> pin_site(spec.thetas.size()), pin_val(spec.thetas.size());
    for (size_t j = 0; j < spec.thetas.size(); ++j) {
        pin_site[j] = std::llround(spec.thetas[j] * k);
        const double scaled = spec.xs[j] * v_max;
        pin_val[j] = std::llround(scaled);
        if (std::abs(scaled - pin_val[j]) > 1e-9)
            throw std::invalid_argument("finite_dim_rate: pin values must sit on the value grid");
    }
    const double ab = a * b;
    const bool force_touch = (ab == 0.0);
    const bool pin_end = (b == 0.0);
    const double kappa = ab > 0 ? -std::log(ab) : 0.0;
    const double log_j = std::log(current_j(a, b));

    std::vector<double> hseg(s + 1);
    for (int j = 0; j <= s; ++j) hseg[j] = entropy_h(static_cast<double>(j) / s) / k;

    const long w = v_max + 1;
    std::vector<double> cur(w * w, kInf), buf(w * w, kInf);
    double best = kInf;
    const int r_levels = force_touch ? 1 : reg + 1;
    for (int r = 0; r < r_levels; ++r) {
        const long slack = (static_cast<long>(r) * v_max) / reg;  // g may exceed f by at most this
        std::fill(cur.begin(), cur.end(), kInf);
        cur[0] = 0.0;
        for (int i = 1; i <= k; ++i) {
            // f-step then g-step: the cost is separable, so two sweeps of
            // (S+1) transitions replace one sweep of (S+1)^2
            const long site = i;
            bool pinned_here = false;
            long pin_v = -1;
            for (size_t j = 0; j < pin_site.size(); ++j)
                if (pin_site[j] == site) {
                    pinned_here = true;
                    pin_v = pin_val[j];
                }
#pragma omp parallel for schedule(static)
            for (long vf = 0; vf < w; ++vf) {
                for (long vg = 0; vg < w; ++vg) {
                    double bestv = kInf;
                    for (int j = 0; j <= std::min<long>(s, vf); ++j) {
                        const double c = cur[(vf - j) * w + vg];
                        if (c + hseg[j] < bestv) bestv = c + hseg[j];
                    }
                    buf[vf * w + vg] = bestv;
                }
            }
#pragma omp parallel for schedule(static)
            for (long vf = 0; vf < w; ++vf) {
                if (pinned_here && vf != pin_v) {
                    for (long vg = 0; vg < w; ++vg) cur[vf * w + vg] = kInf;
                    continue;
                }
                for (long vg = 0; vg < w; ++vg) {
                    if (vg > vf + slack) {  // barrier f - g >= -r/reg
                        cur[vf * w + vg] = kInf;
                        continue;
                    }
                    double bestv = kInf;
                    for (int j = 0; j <= std::min<long>(s, vg); ++j) {
                        const double c = buf[vf * w + (vg - j)];
                        if (c + hseg[j] < bestv) bestv = c + hseg[j];
                    }
                    cur[vf * w + vg] = bestv;
                }
            }
        }
        const long vf_end = pin_val.back();
        for (long vg = 0; vg < w; ++vg) {
            const double c = cur[vf_end * w + vg];
            if (c >= kInf) continue;
            double term = 0.0;
            if (pin_end) {
                if (vg != vf_end) continue;
            } else {
                term = -std::log(b) * (static_cast<double>(vf_end - vg) / v_max);
            }
            best = std::min(best, c + term + kappa * (static_cast<double>(r) / reg) - log_j);
        }
        if (!force_touch && r + 1 < r_levels) {
            const double cost_floor = -2.0 * std::log(2.0) - (pin_end ? 0.0 : std::abs(std::log(b)));
            if (cost_floor + kappa * (static_cast<double>(r + 1) / reg) - log_j > best) break;
        }
    }
    return best;
}

}  // namespace

double finite_dim_rate(const PinnedSpec& spec, double a, double b, const VariationalOptions& opt) {
    FanParams{a, b, 0, 0, 0}.require_fan();
    if (!in_cone(spec)) return kInf;
    const double hull_value = rate_closed(pin_interpolant(spec), a, b);
    if (opt.grid_k <= 0) return hull_value;
    const double dp_value = finite_dim_pair_dp(spec, a, b, opt);
    return std::min(hull_value, dp_value);
}

PiecewiseLinearProfile interior_perturbation(const PiecewiseLinearProfile& f, double eps) {
    if (!f.admissible()) throw std::invalid_argument("interior_perturbation: profile not admissible");
    if (!(eps > 0)) throw std::invalid_argument("interior_perturbation: eps must be > 0");
    struct Ramp {
        double start;
        int sign;
    };
    std::vector<Ramp> ramps;
    for (size_t i = 1; i < f.xs.size(); ++i) {
        const double w = f.xs[i] - f.xs[i - 1];
        const double s = (f.ys[i] - f.ys[i - 1]) / w;
        const bool flat = std::abs(s) < 1e-12, full = std::abs(s - 1.0) < 1e-12;
        if (!flat && !full) continue;
        if (eps >= w - 1e-15) throw std::invalid_argument("interior_perturbation: eps too large for the piece structure");
        ramps.push_back({f.xs[i - 1], flat ? +1 : -1});
    }
    if (ramps.empty()) return f;
    std::vector<double> xs = f.xs;
    for (const auto& r : ramps) xs.push_back(r.start + eps);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double p, double q) { return std::abs(p - q) < 1e-15; }), xs.end());
    auto bump = [&](double x) {
        double acc = 0.0;
        for (const auto& r : ramps) acc += r.sign * std::min(std::max(x - r.start, 0.0), eps);
        return acc;
    };
    std::vector<double> ys(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) ys[i] = f.eval(xs[i]) + bump(xs[i]);
    auto out = profile_from_points(std::move(xs), std::move(ys));
    if (!out.admissible(1e-9)) throw std::logic_error("interior_perturbation: produced inadmissible profile");
    return out;
}

}  // namespace asep
