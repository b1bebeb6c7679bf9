#include "asep/qkernel.hpp"

#include <algorithm>
#include <cmath>

namespace asep {

QPochInf qpochhammer_inf(double z, double q, double tol) {
    if (q < 0 || !(q < 1)) throw std::domain_error("qpochhammer_inf: need 0 <= q < 1");
    if (!(tol > 0)) throw std::invalid_argument("qpochhammer_inf: tol must be > 0");
    double acc = 1.0, zq = z;
    long k = 0;
    while (std::abs(zq) >= tol / 2) {
        acc *= (1.0 - zq);
        zq *= q;
        if (++k > 100000) throw std::runtime_error("qpochhammer_inf: no convergence");
    }
    const double rel = std::expm1(2.0 * std::abs(zq) / (1.0 - q));
    return {acc, rel};
}

double entropy_h(double x) {
    if (x < 0 || x > 1) return kInf;
    double s = 0.0;
    if (x > 0) s += x * std::log(x);
    if (x < 1) s += (1.0 - x) * std::log(1.0 - x);
    return s;
}

double current_j(double a, double b) {
    if (a < 0 || b < 0) throw std::domain_error("current_j: a and b must be >= 0");
    if (a > 1) return a / ((1.0 + a) * (1.0 + a));
    if (b > 1) return b / ((1.0 + b) * (1.0 + b));
    return 0.25;
}

void ScaledVec::renormalize() {
    double mx = 0.0;
    for (double x : w) mx = std::max(mx, x);
    if (mx <= 0.0) return;
    for (double& x : w) x /= mx;
    log_scale += std::log(mx);
}

double ScaledVec::log_sum() const {
    double s = 0.0;
    for (double x : w) s += x;
    return s > 0 ? std::log(s) + log_scale : -kInf;
}

double log_sum_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace asep
