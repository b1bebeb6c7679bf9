#pragma once

#include <vector>

#include "asep/numeric.hpp"
#include "asep/params.hpp"

namespace asep {

/// Numeric backend selector: exact rationals for oracle-scale instances,
/// log-stabilized doubles for asymptotics.
struct NumericMode {
    enum Kind { ExactRational, LogFloat } kind = LogFloat;
    double tol = 1e-12;

    static NumericMode exact() { return {ExactRational, 0.0}; }
    static NumericMode log_float(double tol = 1e-12) {
        if (!(tol > 0) || tol > 1e-6) throw std::invalid_argument("LogFloat tolerance must lie in (0, 1e-6]");
        return {LogFloat, tol};
    }
};

/// (z;q)_n = prod_{j<n} (1 - z q^j).
template <class T>
T qpochhammer(const T& z, const T& q, long n) {
    if (n < 0) throw std::invalid_argument("qpochhammer: n must be >= 0");
    T acc(1), zq(z);
    for (long j = 0; j < n; ++j) {
        acc *= (T(1) - zq);
        zq *= q;
    }
    return acc;
}

struct QPochInf {
    double value;
    double rel_err_bound;  // multiplicative truncation bound
};

/// (z;q)_infinity, truncated at the first index K with |z| q^K < tol/2;
/// the remainder is bounded by exp(2|z|q^K/(1-q)) - 1.
QPochInf qpochhammer_inf(double z, double q, double tol);

/// x log x + (1-x) log(1-x) on [0,1] (0 log 0 = 0), +infinity elsewhere.
double entropy_h(double x);

/// Stationary current through the system: a/(1+a)^2, b/(1+b)^2, or 1/4
/// depending on which boundary (if either) dominates.
double current_j(double a, double b);

/// Local two-layer step weight W(x | u,v) at gap x for layer increments
/// (u,v), with 0^0 = 1 so q^0 = 1 also at q = 0.
template <class T>
T step_weight(long x, int u, int v, const T& q, const T& c, const T& d) {
    if (x < 0) throw std::invalid_argument("step_weight: gap must be >= 0");
    const T qx = ipow(q, x);
    if (u == 1 && v == 0) return T(1) - qx;
    if (u == 1 && v == 1) return T(1) + d * qx;
    if (u == 0 && v == 0) return T(1) + c * qx;
    if (u == 0 && v == 1) return T(1) - c * d * qx;
    throw std::invalid_argument("step_weight: u and v must be bits");
}

/// Per-gap tables of the four step weights plus the boundary weights,
/// indexed by gap level 0..gmax. These are the transfer coefficients of the
/// gap chain: up-steps enter at the new (higher) gap, down-steps leave from
/// the new (lower) gap.
template <class T>
struct StepWeights {
    std::vector<T> up;       // W(x|1,0) = 1 - q^x
    std::vector<T> flat_c;   // W(x|0,0) = 1 + c q^x
    std::vector<T> flat_d;   // W(x|1,1) = 1 + d q^x
    std::vector<T> down;     // W(x|0,1) = 1 - c d q^x
    std::vector<T> astart;   // a^x
    std::vector<T> bend;     // b^x (cd;q)_x / (q;q)_x
};

template <class T>
StepWeights<T> make_step_weights(const FanParamsT<T>& p, long gmax) {
    StepWeights<T> w;
    w.up.resize(gmax + 1);
    w.flat_c.resize(gmax + 1);
    w.flat_d.resize(gmax + 1);
    w.down.resize(gmax + 1);
    w.astart.resize(gmax + 1);
    w.bend.resize(gmax + 1);
    T qx(1), apow(1), bend(1);
    const T cd = p.c * p.d;
    for (long x = 0; x <= gmax; ++x) {
        w.up[x] = T(1) - qx;
        w.flat_c[x] = T(1) + p.c * qx;
        w.flat_d[x] = T(1) + p.d * qx;
        w.down[x] = T(1) - cd * qx;
        w.astart[x] = apow;
        w.bend[x] = bend;
        // bend ratio from level x to x+1: b (1 - cd q^x)/(1 - q^{x+1})
        bend *= p.b * (T(1) - cd * qx) / (T(1) - qx * p.q);
        qx *= p.q;
        apow *= p.a;
    }
    return w;
}

/// A nonnegative vector carried as w * exp(log_scale); renormalize() keeps
/// the entries within double range across long products.
struct ScaledVec {
    std::vector<double> w;
    double log_scale = 0.0;

    void renormalize();
    double log_sum() const;  // log of the represented total
};

double log_sum_exp(double a, double b);

}  // namespace asep
