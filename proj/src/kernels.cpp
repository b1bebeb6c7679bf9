#include "asep/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asep/numeric.hpp"
#include "asep/qkernel.hpp"

namespace asep::kernels {

namespace {
int g_threads = 0;  // 0 = library default
}

void set_threads(int k) { g_threads = k; }
int get_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

TransferTables make_transfer_tables(const FanParams& p, long g0_cut, long gmax) {
    p.require_fan();
    TransferTables t;
    t.g0_cut = g0_cut;
    t.gmax = gmax;
    t.up.resize(gmax + 1);
    t.flat_c.resize(gmax + 1);
    t.flat_d.resize(gmax + 1);
    t.down.resize(gmax + 1);
    t.log_astart.assign(gmax + 1, -kInf);
    t.log_bend.resize(gmax + 1);
    const double cd = p.c * p.d;
    const double la = p.a > 0 ? std::log(p.a) : -kInf;
    const double lb = p.b > 0 ? std::log(p.b) : -kInf;
    double qx = 1.0, lbend = 0.0;
    for (long g = 0; g <= gmax; ++g) {
        t.up[g] = 1.0 - qx;
        t.flat_c[g] = 1.0 + p.c * qx;
        t.flat_d[g] = 1.0 + p.d * qx;
        t.down[g] = 1.0 - cd * qx;
        if (g <= g0_cut) t.log_astart[g] = (g == 0) ? 0.0 : g * la;
        t.log_bend[g] = lbend;
        // ratio from level g to g+1: b (1 - cd q^g)/(1 - q^{g+1})
        lbend = (p.b > 0) ? lbend + lb + std::log1p(-cd * qx) - std::log1p(-p.q * qx) : -kInf;
        qx *= p.q;
    }
    return t;
}

namespace {

// One transfer step of the count DP: row c of `nw` from rows c and c-1 of
// `old`. Weights are indexed by the gap after the step.
inline void count_step_row(const TransferTables& t, const CountLayer& old, CountLayer& nw, long c) {
    const long gmax = t.gmax;
    const double* same = &old.a[c * (gmax + 1)];
    const double* below = c > 0 ? &old.a[(c - 1) * (gmax + 1)] : nullptr;
    double* out = &nw.a[c * (gmax + 1)];
    for (long g = 0; g <= gmax; ++g) {
        double acc = same[g] * t.flat_c[g];
        if (g + 1 <= gmax) acc += same[g + 1] * t.down[g];
        if (below) {
            acc += below[g] * t.flat_d[g];
            if (g >= 1) acc += below[g - 1] * t.up[g];
        }
        out[g] = acc;
    }
}

inline void apply_filter(CountLayer& layer, const CountFilter& f) {
    for (long c = 0; c <= layer.counts; ++c) {
        if (c >= f.lo && c <= f.hi) continue;
        double* row = &layer.a[c * (layer.gmax + 1)];
        std::fill(row, row + layer.gmax + 1, 0.0);
    }
}

// Per-row maxima reduced in fixed row order, so the rescaling (and thus
// every downstream bit) is identical for any thread count.
inline void rescale(CountLayer& layer, bool parallel) {
    const long rows = layer.counts + 1, cols = layer.gmax + 1;
    std::vector<double> rowmax(rows, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (long c = 0; c < rows; ++c) {
        double m = 0.0;
        const double* row = &layer.a[c * cols];
        for (long g = 0; g < cols; ++g) m = std::max(m, row[g]);
        rowmax[c] = m;
    }
    double m = 0.0;
    for (long c = 0; c < rows; ++c) m = std::max(m, rowmax[c]);
    if (m <= 0.0 || (m > 1e-100 && m < 1e100)) return;
    const double inv = 1.0 / m;
#pragma omp parallel for schedule(static) if (parallel)
    for (long c = 0; c < rows; ++c) {
        double* row = &layer.a[c * cols];
        for (long g = 0; g < cols; ++g) row[g] *= inv;
    }
    layer.log_scale += std::log(m);
}

CountLayer count_dp_forward_impl(const TransferTables& t, long n, const std::vector<CountFilter>& filters,
                                 bool parallel) {
    CountLayer cur, nxt;
    cur.counts = nxt.counts = n;
    cur.gmax = nxt.gmax = t.gmax;
    cur.a.assign((n + 1) * (t.gmax + 1), 0.0);
    nxt.a.assign((n + 1) * (t.gmax + 1), 0.0);
    double s0 = 0.0;
    for (long g = 0; g <= t.g0_cut; ++g) s0 = std::max(s0, t.log_astart[g]);
    for (long g = 0; g <= t.g0_cut; ++g)
        if (t.log_astart[g] > -kInf) cur.at(0, g) = std::exp(t.log_astart[g] - s0);
    cur.log_scale = s0;
    for (long j = 1; j <= n; ++j) {
        const long rows = std::min(j, n);
#pragma omp parallel for schedule(static) if (parallel)
        for (long c = 0; c <= rows; ++c) count_step_row(t, cur, nxt, c);
        for (long c = rows + 1; c <= n; ++c)
            std::fill(&nxt.a[c * (t.gmax + 1)], &nxt.a[(c + 1) * (t.gmax + 1)], 0.0);
        nxt.log_scale = cur.log_scale;
        std::swap(cur.a, nxt.a);
        std::swap(cur.log_scale, nxt.log_scale);
        for (const auto& f : filters)
            if (f.site == j) apply_filter(cur, f);
        rescale(cur, parallel);
    }
    return cur;
}

}  // namespace

CountLayer count_dp_forward_serial(const TransferTables& t, long n, const std::vector<CountFilter>& filters) {
    return count_dp_forward_impl(t, n, filters, false);
}
CountLayer count_dp_forward_omp(const TransferTables& t, long n, const std::vector<CountFilter>& filters) {
    return count_dp_forward_impl(t, n, filters, true);
}
CountLayer count_dp_forward(const TransferTables& t, long n, const std::vector<CountFilter>& filters) {
    return get_threads() > 1 ? count_dp_forward_omp(t, n, filters) : count_dp_forward_serial(t, n, filters);
}

std::vector<double> count_layer_close_rows(const CountLayer& layer, const TransferTables& t) {
    double shift = -kInf;
    for (long g = 0; g <= layer.gmax; ++g) shift = std::max(shift, t.log_bend[g]);
    std::vector<double> out(layer.counts + 1, -kInf);
    for (long c = 0; c <= layer.counts; ++c) {
        double s = 0.0;
        for (long g = 0; g <= layer.gmax; ++g)
            if (t.log_bend[g] > -kInf) s += layer.at(c, g) * std::exp(t.log_bend[g] - shift);
        out[c] = s > 0 ? std::log(s) + shift + layer.log_scale : -kInf;
    }
    return out;
}

double count_layer_close(const CountLayer& layer, const TransferTables& t) {
    const auto rows = count_layer_close_rows(layer, t);
    double acc = -kInf;
    for (double r : rows) acc = log_sum_exp(acc, r);
    return acc;
}

namespace {

double gap_partition_log_impl(const TransferTables& t, long n, bool parallel) {
    const long cols = t.gmax + 1;
    std::vector<double> cur(cols, 0.0), nxt(cols, 0.0);
    double s0 = 0.0;
    for (long g = 0; g <= t.g0_cut; ++g) s0 = std::max(s0, t.log_astart[g]);
    for (long g = 0; g <= t.g0_cut; ++g)
        if (t.log_astart[g] > -kInf) cur[g] = std::exp(t.log_astart[g] - s0);
    double log_scale = s0;
    for (long j = 1; j <= n; ++j) {
#pragma omp parallel for schedule(static) if (parallel)
        for (long g = 0; g < cols; ++g) {
            double acc = cur[g] * (t.flat_c[g] + t.flat_d[g]);
            if (g + 1 < cols) acc += cur[g + 1] * t.down[g];
            if (g >= 1) acc += cur[g - 1] * t.up[g];
            nxt[g] = acc;
        }
        std::swap(cur, nxt);
        double m = 0.0;
        for (long g = 0; g < cols; ++g) m = std::max(m, cur[g]);
        if (m > 0.0 && (m <= 1e-100 || m >= 1e100)) {
            const double inv = 1.0 / m;
            for (long g = 0; g < cols; ++g) cur[g] *= inv;
            log_scale += std::log(m);
        }
    }
    double shift = -kInf;
    for (long g = 0; g < cols; ++g) shift = std::max(shift, t.log_bend[g]);
    double s = 0.0;
    for (long g = 0; g < cols; ++g)
        if (t.log_bend[g] > -kInf) s += cur[g] * std::exp(t.log_bend[g] - shift);
    return s > 0 ? std::log(s) + shift + log_scale : -kInf;
}

}  // namespace

double gap_partition_log_serial(const TransferTables& t, long n) { return gap_partition_log_impl(t, n, false); }
double gap_partition_log_omp(const TransferTables& t, long n) { return gap_partition_log_impl(t, n, true); }
double gap_partition_log(const TransferTables& t, long n) {
    return get_threads() > 1 ? gap_partition_log_omp(t, n) : gap_partition_log_serial(t, n);
}

GapVec gap_suffix(const TransferTables& t, long steps) {
    const long cols = t.gmax + 1;
    GapVec v;
    v.a.assign(cols, 0.0);
    double shift = -kInf;
    for (long g = 0; g < cols; ++g) shift = std::max(shift, t.log_bend[g]);
    for (long g = 0; g < cols; ++g)
        if (t.log_bend[g] > -kInf) v.a[g] = std::exp(t.log_bend[g] - shift);
    v.log_scale = shift;
    std::vector<double> nxt(cols, 0.0);
    for (long s = 0; s < steps; ++s) {
        for (long g = 0; g < cols; ++g) {
            double acc = v.a[g] * (t.flat_c[g] + t.flat_d[g]);
            if (g + 1 < cols) acc += v.a[g + 1] * t.up[g + 1];
            if (g >= 1) acc += v.a[g - 1] * t.down[g - 1];
            nxt[g] = acc;
        }
        std::swap(v.a, nxt);
        double m = 0.0;
        for (long g = 0; g < cols; ++g) m = std::max(m, v.a[g]);
        if (m > 0.0 && (m <= 1e-100 || m >= 1e100)) {
            const double inv = 1.0 / m;
            for (long g = 0; g < cols; ++g) v.a[g] *= inv;
            v.log_scale += std::log(m);
        }
    }
    return v;
}

namespace {

double variational_dp_impl(const VariationalLayerProblem& p, bool parallel) {
    const int k = p.segments, s = p.slope_res;
    const long v_max = static_cast<long>(p.terminal.size()) - 1;
    std::vector<double> cur(v_max + 1, kInf), nxt(v_max + 1, kInf);
    if (p.cap.size() != static_cast<size_t>(k) + 1) throw std::invalid_argument("variational_dp: bad cap size");
    if (p.cap[0] < 0) return kInf;
    cur[0] = 0.0;
    for (int i = 1; i <= k; ++i) {
        const long cap = std::min<long>(p.cap[i], v_max);
#pragma omp parallel for schedule(static) if (parallel)
        for (long v = 0; v <= v_max; ++v) {
            double best = kInf;
            if (v <= cap) {
                const long jmax = std::min<long>(s, v);
                for (long j = 0; j <= jmax; ++j) {
                    const double c = cur[v - j];
                    if (c < kInf) best = std::min(best, c + p.hseg[j]);
                }
            }
            nxt[v] = best;
        }
        std::swap(cur, nxt);
    }
    double best = kInf;
    for (long v = 0; v <= v_max; ++v)
        if (cur[v] < kInf && p.terminal[v] < kInf) best = std::min(best, cur[v] + p.terminal[v]);
    return best;
}

}  // namespace

double variational_dp_serial(const VariationalLayerProblem& p) { return variational_dp_impl(p, false); }
double variational_dp_omp(const VariationalLayerProblem& p) { return variational_dp_impl(p, true); }
double variational_dp(const VariationalLayerProblem& p) {
    return get_threads() > 1 ? variational_dp_omp(p) : variational_dp_serial(p);
}

}  // namespace asep::kernels
