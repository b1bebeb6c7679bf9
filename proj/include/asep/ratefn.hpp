#pragma once

#include <vector>

#include "asep/numeric.hpp"

namespace asep {

/// Piecewise linear profile on [0,1] with f(0) = 0; admissible when every
/// slope lies in [0,1].
struct PiecewiseLinearProfile {
    std::vector<double> xs;  // strictly increasing, xs.front() = 0, xs.back() = 1
    std::vector<double> ys;  // ys.front() = 0

    void validate_shape() const;
    bool admissible(double slack = 1e-12) const;
    double eval(double x) const;
    double end_value() const { return ys.back(); }
};

PiecewiseLinearProfile line_profile(double rho);
PiecewiseLinearProfile profile_from_points(std::vector<double> xs, std::vector<double> ys);

/// Largest convex function below f (lower hull of the graph vertices).
PiecewiseLinearProfile convex_envelope(const PiecewiseLinearProfile& f);

/// Closed-form rate: int H(f') + int [env' log G* + (1-env') log(1-G*)]
/// - log J(a,b), with G* the clamp of env' to [a/(1+a), 1/(1+b)].
double rate_closed(const PiecewiseLinearProfile& f, double a, double b);

/// Two-profile form: int (H(f') + H(g')) + log(ab) min(f-g)
/// - log(b) (f(1)-g(1)) - log J(a,b), extended-value conventions at ab = 0.
double rate_pair(const PiecewiseLinearProfile& f, const PiecewiseLinearProfile& g, double a, double b);

struct VariationalOptions {
    int grid_k = 200;     // position segments
    int slope_res = 50;   // slopes j/slope_res
    int reg_levels = 64;  // resolution of the min(f-g) threshold
};

/// Upper bound on inf_g rate_pair(f, g) by dynamic programming over slope
/// grids; always >= rate_closed(f), the gap shrinking with resolution.
double rate_variational(const PiecewiseLinearProfile& f, double a, double b, const VariationalOptions& opt = {});

/// Pinned values x_j at 0 < theta_1 < ... < theta_{d+1} = 1.
struct PinnedSpec {
    std::vector<double> thetas;
    std::vector<double> xs;
    void validate() const;
};

bool in_cone(const PinnedSpec& spec);
bool in_cone_interior(const PinnedSpec& spec);

/// inf of rate_closed over admissible profiles through the pins: +inf
/// outside the cone, otherwise min(closed form on the pin interpolant,
/// joint slope-grid search in the two-profile form).
double finite_dim_rate(const PinnedSpec& spec, double a, double b, const VariationalOptions& opt = {20, 20, 32});

/// The f_eps construction: adds slope on an eps-prefix of each flat piece and
/// removes it on each full-slope piece, leaving int H(f') unchanged.
PiecewiseLinearProfile interior_perturbation(const PiecewiseLinearProfile& f, double eps);

}  // namespace asep
