#include "asep/params.hpp"

#include <cmath>

namespace asep {

Rat rat_from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rat_from_decimal: empty string");
    if (s.find('/') != std::string::npos) return Rat(s);
    const auto dot = s.find('.');
    const auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        // mantissa * 10^exp
        Rat mant = rat_from_decimal(s.substr(0, epos));
        long ex = std::stol(s.substr(epos + 1));
        Rat scale = ipow(Rat(10), std::labs(ex));
        return ex >= 0 ? Rat(mant * scale) : Rat(mant / scale);
    }
    if (dot == std::string::npos) return Rat(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const long frac_len = static_cast<long>(s.size() - dot - 1);
    if (digits == "-" || digits == "+" || digits.empty()) throw std::invalid_argument("rat_from_decimal: bad literal " + s);
    return Rat(BigInt(digits), ipow(BigInt(10), frac_len));
}

RatFanParams rat_fan_params(const std::string& a, const std::string& b, const std::string& c, const std::string& d,
                            const std::string& q) {
    RatFanParams p{rat_from_decimal(a), rat_from_decimal(b), rat_from_decimal(c), rat_from_decimal(d),
                   rat_from_decimal(q)};
    p.validate();
    return p;
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::MaximalCurrent: return "MaximalCurrent";
        case Phase::HighDensity: return "HighDensity";
        case Phase::LowDensity: return "LowDensity";
        case Phase::PhaseBoundary: return "PhaseBoundary";
    }
    return "?";
}

std::string to_string(Region r) {
    switch (r) {
        case Region::Fan: return "Fan";
        case Region::Shock: return "Shock";
        case Region::RegionBoundary: return "RegionBoundary";
    }
    return "?";
}

double phi(double x, double y, double q, Sign sign) {
    if (!(x > 0)) throw std::domain_error("phi: x must be > 0");
    if (y < 0) throw std::domain_error("phi: y must be >= 0");
    if (q < 0 || !(q < 1)) throw std::domain_error("phi: need 0 <= q < 1");
    const double u = 1.0 - q - x + y;
    const double disc = std::sqrt(u * u + 4.0 * x * y);
    return (sign == Sign::Plus) ? (u + disc) / (2.0 * x) : (u - disc) / (2.0 * x);
}

FanParams to_fan(const BoundaryRates& rates) {
    rates.validate();
    FanParams p;
    p.q = rates.q;
    p.a = phi(rates.alpha, rates.gamma, rates.q, Sign::Plus);
    p.c = phi(rates.alpha, rates.gamma, rates.q, Sign::Minus);
    p.b = phi(rates.beta, rates.delta, rates.q, Sign::Plus);
    p.d = phi(rates.beta, rates.delta, rates.q, Sign::Minus);
    // Roundoff guard: phi- of y = 0 is exactly 0, keep it there.
    if (rates.gamma == 0) p.c = 0;
    if (rates.delta == 0) p.d = 0;
    p.validate();
    return p;
}

PhaseInfo classify(const FanParams& p) {
    p.validate();
    PhaseInfo info;
    const double ab = p.a * p.b;
    info.region = ab < 1 ? Region::Fan : (ab > 1 ? Region::Shock : Region::RegionBoundary);
    if (p.a < 1 && p.b < 1)
        info.phase = Phase::MaximalCurrent;
    else if (p.a > 1 && p.a > p.b)
        info.phase = Phase::LowDensity;
    else if (p.b > 1 && p.b > p.a)
        info.phase = Phase::HighDensity;
    else
        info.phase = Phase::PhaseBoundary;
    return info;
}

std::pair<double, double> effective_densities(const FanParams& p) {
    p.validate();
    return {1.0 / (1.0 + p.a), p.b / (1.0 + p.b)};
}

}  // namespace asep
