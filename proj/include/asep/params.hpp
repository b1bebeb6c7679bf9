#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "asep/numeric.hpp"

namespace asep {

/// Boundary injection/ejection rates and the bulk asymmetry of the open
/// exclusion process: entry alpha / exit gamma at the left wall, exit beta /
/// entry delta at the right wall, left-hop rate q (right hops at rate 1).
template <class T>
struct BoundaryRatesT {
    T alpha, beta, gamma, delta, q;

    void validate() const {
        if (!(alpha > 0) || !(beta > 0)) throw std::domain_error("boundary rates: alpha and beta must be > 0");
        if (gamma < 0 || delta < 0) throw std::domain_error("boundary rates: gamma and delta must be >= 0");
        if (q < 0 || !(q < 1)) throw std::domain_error("boundary rates: need 0 <= q < 1");
    }
};

using BoundaryRates = BoundaryRatesT<double>;
using RatBoundaryRates = BoundaryRatesT<Rat>;

/// The (a,b,c,d,q) coordinates. a,b >= 0 control the boundary densities,
/// c,d in (-1,0] are the subdominant roots, q the asymmetry.
template <class T>
struct FanParamsT {
    T a, b, c, d, q;

    void validate() const {
        if (a < 0 || b < 0) throw std::domain_error("fan params: a and b must be >= 0");
        if (!(c > -1) || c > 0 || !(d > -1) || d > 0) throw std::domain_error("fan params: need -1 < c,d <= 0");
        if (q < 0 || !(q < 1)) throw std::domain_error("fan params: need 0 <= q < 1");
    }

    bool in_fan() const { return a * b < 1; }

    void require_fan() const {
        validate();
        if (!in_fan()) throw std::domain_error("fan params: operation requires the fan region a*b < 1");
    }
};

using FanParams = FanParamsT<double>;
using RatFanParams = FanParamsT<Rat>;

inline FanParams to_float(const RatFanParams& p) {
    return FanParams{to_double(p.a), to_double(p.b), to_double(p.c), to_double(p.d), to_double(p.q)};
}

/// Fan params from decimal strings, exact (for the rational backend).
RatFanParams rat_fan_params(const std::string& a, const std::string& b, const std::string& c, const std::string& d,
                            const std::string& q);

enum class Phase { MaximalCurrent, HighDensity, LowDensity, PhaseBoundary };
enum class Region { Fan, Shock, RegionBoundary };

struct PhaseInfo {
    Phase phase;
    Region region;
};

std::string to_string(Phase p);
std::string to_string(Region r);

enum class Sign { Plus, Minus };

/// The two roots of x z^2 - (1-q-x+y) z - y = 0; the + root is >= 0 and the
/// - root lies in (-1, 0].
double phi(double x, double y, double q, Sign sign);

FanParams to_fan(const BoundaryRates& rates);

/// Closed-form inverse of to_fan: alpha = (1-q)/((1+a)(1+c)), gamma = -ac*alpha,
/// and the mirrored formulas on the right boundary. Exact for rational inputs.
template <class T>
BoundaryRatesT<T> from_fan(const FanParamsT<T>& p) {
    p.validate();
    BoundaryRatesT<T> r;
    r.q = p.q;
    r.alpha = (T(1) - p.q) / ((T(1) + p.a) * (T(1) + p.c));
    r.gamma = -p.a * p.c * r.alpha;
    r.beta = (T(1) - p.q) / ((T(1) + p.b) * (T(1) + p.d));
    r.delta = -p.b * p.d * r.beta;
    r.validate();
    return r;
}

PhaseInfo classify(const FanParams& p);

/// (left, right) effective densities (1/(1+a), b/(1+b)).
std::pair<double, double> effective_densities(const FanParams& p);

}  // namespace asep
