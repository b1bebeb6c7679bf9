#pragma once

#include <vector>

#include "asep/params.hpp"

namespace asep::kernels {

/// Global worker count used by the dispatchers (1 = serial reference).
void set_threads(int k);
int get_threads();

/// Float-mode transfer coefficients of the gap chain, indexed by gap level.
/// Step weights are bounded so they stay linear; the boundary weights are
/// kept in log form (a^g and the b-side weight overflow doubles otherwise).
struct TransferTables {
    long g0_cut = 0;
    long gmax = 0;
    std::vector<double> up;      // W(x|1,0) = 1 - q^x, entered at the new gap x
    std::vector<double> flat_c;  // W(x|0,0) = 1 + c q^x
    std::vector<double> flat_d;  // W(x|1,1) = 1 + d q^x
    std::vector<double> down;    // W(x|0,1) = 1 - c d q^x, left from the new gap x
    std::vector<double> log_astart;  // g <= g0_cut: g log a, else -inf
    std::vector<double> log_bend;    // g log b + sum_j<g log((1-cd q^j)/(1-q^{j+1}))
};

TransferTables make_transfer_tables(const FanParams& p, long g0_cut, long gmax);

/// Count bands kept at a given site: rows c outside [lo,hi] are zeroed.
struct CountFilter {
    long site;
    long lo, hi;
};

/// Layered state of the joint (height count, gap) chain, carried as doubles
/// times exp(log_scale).
struct CountLayer {
    long counts = 0;  // rows 0..counts
    long gmax = 0;    // columns 0..gmax
    std::vector<double> a;
    double log_scale = 0.0;

    double& at(long c, long g) { return a[c * (gmax + 1) + g]; }
    double at(long c, long g) const { return a[c * (gmax + 1) + g]; }
};

/// Forward sweep from site 0 to `n`, starting from the a-side boundary
/// weights. A filter at site j applies right after step j. The serial and
/// OpenMP variants produce bit-identical layers.
CountLayer count_dp_forward_serial(const TransferTables& t, long n, const std::vector<CountFilter>& filters);
CountLayer count_dp_forward_omp(const TransferTables& t, long n, const std::vector<CountFilter>& filters);
CountLayer count_dp_forward(const TransferTables& t, long n, const std::vector<CountFilter>& filters);

/// log of sum_{c,g} layer[c][g] * exp(log_bend[g]).
double count_layer_close(const CountLayer& layer, const TransferTables& t);

/// Per-count-row masses in log form (the terminal b-side weight applied).
std::vector<double> count_layer_close_rows(const CountLayer& layer, const TransferTables& t);

/// Plain gap transfer without the count register:
/// log [ sum_g a-side(g) (T^n b-side)(g) ].
double gap_partition_log_serial(const TransferTables& t, long n);
double gap_partition_log_omp(const TransferTables& t, long n);
double gap_partition_log(const TransferTables& t, long n);

/// Backward suffix masses s(g) = (T^steps b-side)(g), log-scaled.
struct GapVec {
    std::vector<double> a;
    double log_scale = 0.0;
};
GapVec gap_suffix(const TransferTables& t, long steps);

/// Barrier-constrained slope-grid shortest path: minimize
/// sum_i hseg[slope_i] + terminal[v_K] over monotone integer paths with
/// v_0 = 0, per-segment increments in [0, slope_res], v_i <= cap[i].
struct VariationalLayerProblem {
    int segments = 0;              // K
    int slope_res = 0;             // S
    std::vector<double> hseg;      // cost per slope index, size S+1
    std::vector<long> cap;         // size K+1
    std::vector<double> terminal;  // size V+1, +inf = forbidden
};
double variational_dp_serial(const VariationalLayerProblem& p);
double variational_dp_omp(const VariationalLayerProblem& p);
double variational_dp(const VariationalLayerProblem& p);

}  // namespace asep::kernels
