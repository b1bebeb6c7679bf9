#pragma once

#include <vector>

#include "asep/ctmc.hpp"
#include "asep/numeric.hpp"
#include "asep/params.hpp"
#include "asep/qkernel.hpp"

namespace asep {

/// Raised when a certified gap truncation cannot reach the requested
/// tolerance within the configured cap.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncated Enaud--Derrida representation: D upper-bidiagonal, E
/// lower-bidiagonal, geometric boundary vectors. Stored by diagonals.
template <class T>
struct EdRep {
    FanParamsT<T> params;
    long dim = 0;
    std::vector<T> d_diag, d_upper;  // D[k][k] = (1+q^k d)/(1-q), D[k][k+1] = (1-q^{k+1})/(1-q)
    std::vector<T> e_diag, e_lower;  // E[k][k] = (1+q^k c)/(1-q), E[k+1][k] = (1-q^k cd)/(1-q)
    std::vector<T> w, v;             // W[k] = a^k, V[k] = b^k (cd;q)_k/(q;q)_k
};

template <class T>
EdRep<T> build_ed(const FanParamsT<T>& p, long dim) {
    p.require_fan();
    if (dim < 2) throw std::invalid_argument("build_ed: dim must be >= 2");
    EdRep<T> rep;
    rep.params = p;
    rep.dim = dim;
    rep.d_diag.resize(dim);
    rep.d_upper.resize(dim - 1);
    rep.e_diag.resize(dim);
    rep.e_lower.resize(dim - 1);
    rep.w.resize(dim);
    rep.v.resize(dim);
    const T one(1), inv = one / (one - p.q);
    const T cd = p.c * p.d;
    T qk(1), apow(1), vk(1);
    for (long k = 0; k < dim; ++k) {
        rep.d_diag[k] = (one + p.d * qk) * inv;
        rep.e_diag[k] = (one + p.c * qk) * inv;
        if (k + 1 < dim) {
            rep.d_upper[k] = (one - qk * p.q) * inv;
            rep.e_lower[k] = (one - cd * qk) * inv;
        }
        rep.w[k] = apow;
        rep.v[k] = vk;
        vk *= p.b * (one - cd * qk) / (one - qk * p.q);
        qk *= p.q;
        apow *= p.a;
    }
    return rep;
}

struct DehpResidual {
    double bulk;   // max |(DE - qED - D - E)[i][j]| over the inner block
    double left;   // max |(W (alpha E - gamma D) - W)[j]|, j < dim-1
    double right;  // max |((beta D - delta E) V - V)[i]|, i < dim-1
    double max_abs() const;
};

/// Residuals of the three defining relations; exact zeros in rational mode.
template <class T>
DehpResidual check_dehp(const EdRep<T>& rep, const BoundaryRatesT<T>& rates);

/// <W|V> by truncated series with a certified geometric tail bound, together
/// with the closed form (abcd;q)_inf/(ab;q)_inf.
struct WvInner {
    double series;
    double closed_form;
    double tail_bound;  // certified absolute bound on the dropped series tail
};
WvInner wv_inner(const FanParams& p, double tol);

/// Start-gap truncation with a certified relative tail bound: mass of start
/// gaps g0 > g0_cut is at most exp(log_rel_bound) times the truncated
/// partition function.
struct Truncation {
    long g0_cut = 0;
    double log_rel_bound = -kInf;
};
Truncation choose_truncation(const FanParams& p, long n, double tol);

/// mu_N(tau) for a single word, float backend; the certified truncation error
/// is returned through `cert_err` when non-null.
double stationary_prob(const FanParams& p, const Occupation& tau, double tol, double* cert_err = nullptr);

/// All 2^n probabilities, indexed by the word read as a binary number
/// (tau_1 = most significant bit).
std::vector<double> stationary_table(const FanParams& p, long n, double tol);
std::vector<Rat> stationary_table_exact(const RatFanParams& p, long n, long g0_cut);

/// log Z_N = log[(1-q)^N <W|(D+E)^N|V>] via bidiagonal matrix products.
double partition_log_z(const FanParams& p, long n, double tol, Truncation* cert = nullptr);
Rat partition_z_exact(const RatFanParams& p, long n, long g0_cut);

/// Joint law of the height increments at up to three pinned sites.
struct PinnedLaw {
    std::vector<long> pins;
    std::vector<long> dims;   // dims[i] = pins[i] + 1
    std::vector<double> pmf;  // row-major over dims
    double& at(const std::vector<long>& counts);
    double at(const std::vector<long>& counts) const;
};
PinnedLaw height_marginal_dist(const FanParams& p, long n, const std::vector<long>& pins, double tol,
                               long state_budget = 400'000'000);

/// ||mu Q||_inf for the measure produced by stationary_table (or a caller
/// supplied measure, for negative controls).
double generator_stationarity_check(const BoundaryRates& rates, long n, double tol);
double generator_residual(const BoundaryRates& rates, const std::vector<double>& mu);

/// (N, (1/N) log Z_N + log J(a,b)) along a schedule of sizes.
std::vector<std::pair<long, double>> asymptotic_logz_scan(const FanParams& p, const std::vector<long>& ns, double tol);

}  // namespace asep
