#include "asep/bridges.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace asep {

bool BernoulliPath::valid() const {
    if (v.size() < 2) return false;
    for (size_t j = 1; j < v.size(); ++j) {
        const long d = v[j] - v[j - 1];
        if (d < 0 || d > 1) return false;
    }
    return true;
}

void BridgeSpec::validate() const {
    if (n < 1) throw std::invalid_argument("bridge: n must be >= 1");
    if (!ceiling.empty() && ceiling.size() != static_cast<size_t>(n) + 1)
        throw std::invalid_argument("bridge: ceiling size must be n+1");
    if (!floor.empty() && floor.size() != static_cast<size_t>(n) + 1)
        throw std::invalid_argument("bridge: floor size must be n+1");
}

bool PathPair::ordered() const {
    for (size_t j = 0; j < l1.v.size(); ++j)
        if (l1.v[j] < l2.v[j]) return false;
    return true;
}

namespace {

BigInt binom(long n, long k) {
    if (k < 0 || k > n) return BigInt(0);
    k = std::min(k, n - k);
    BigInt acc(1);
    for (long i = 1; i <= k; ++i) {
        acc *= (n - k + i);
        acc /= i;
    }
    return acc;
}

inline bool site_ok(const BridgeSpec& spec, long j, long v) {
    return v >= spec.floor_at(j) && v <= spec.ceil_at(j);
}

// suffix[j][o] = number of admissible completions from value spec.x + o at
// site j to the endpoint; offset o in [0, n].
std::vector<std::vector<BigInt>> suffix_counts(const BridgeSpec& spec) {
    spec.validate();
    const long n = spec.n;
    std::vector<std::vector<BigInt>> s(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    const long oy = spec.y - spec.x;
    if (oy >= 0 && oy <= n && site_ok(spec, n, spec.y)) s[n][oy] = 1;
    for (long j = n - 1; j >= 0; --j)
        for (long o = 0; o <= j; ++o) {
            if (!site_ok(spec, j, spec.x + o)) continue;
            BigInt acc = s[j + 1][o];
            if (o + 1 <= n) acc += s[j + 1][o + 1];
            s[j][o] = acc;
        }
    return s;
}

double ratio_to_double(const BigInt& num, const BigInt& den) { return to_double(Rat(num, den)); }

}  // namespace

BigInt count_paths(const BridgeSpec& spec) {
    const auto s = suffix_counts(spec);
    return s[0][0];
}

BernoulliPath sample_bridge(const BridgeSpec& spec, Rng& rng) {
    spec.validate();
    const long n = spec.n;
    BernoulliPath path;
    path.v.assign(n + 1, spec.x);
    if (spec.ceiling.empty() && spec.floor.empty()) {
        // sequential rule for the unconstrained bridge
        if (spec.y < spec.x || spec.y - spec.x > n) throw std::invalid_argument("sample_bridge: empty bridge set");
        long v = spec.x;
        for (long j = 0; j < n; ++j) {
            const double p_up = static_cast<double>(spec.y - v) / static_cast<double>(n - j);
            if (rng.uniform() < p_up) ++v;
            path.v[j + 1] = v;
        }
        return path;
    }
    const auto s = suffix_counts(spec);
    if (s[0][0] == 0) throw std::invalid_argument("sample_bridge: empty bridge set");
    long o = 0;
    for (long j = 0; j < n; ++j) {
        const BigInt& flat = s[j + 1][o];
        const BigInt up = (o + 1 <= n) ? s[j + 1][o + 1] : BigInt(0);
        const double p_up = ratio_to_double(up, flat + up);
        if (rng.uniform() < p_up) ++o;
        path.v[j + 1] = spec.x + o;
    }
    return path;
}

std::vector<Rat> exact_site_expectations(const BridgeSpec& spec) {
    const auto s = suffix_counts(spec);
    const long n = spec.n;
    if (s[0][0] == 0) throw std::invalid_argument("exact_site_expectations: empty bridge set");
    // forward counts
    std::vector<std::vector<BigInt>> f(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    if (site_ok(spec, 0, spec.x)) f[0][0] = 1;
    for (long j = 1; j <= n; ++j)
        for (long o = 0; o <= j; ++o) {
            if (!site_ok(spec, j, spec.x + o)) continue;
            BigInt acc = f[j - 1][o];
            if (o >= 1) acc += f[j - 1][o - 1];
            f[j][o] = acc;
        }
    std::vector<Rat> out(n + 1);
    for (long j = 0; j <= n; ++j) {
        BigInt num(0);
        for (long o = 0; o <= j; ++o) num += (spec.x + o) * f[j][o] * s[j][o];
        out[j] = Rat(num, s[0][0]);
    }
    return out;
}

namespace {

// suffix counts over ordered value pairs, offsets (o1, o2) from (x1, x2)
std::vector<std::vector<BigInt>> pair_suffix_counts(long n, long x1, long x2, long y1, long y2) {
    const long w = n + 1;
    std::vector<std::vector<BigInt>> s(n + 1, std::vector<BigInt>(w * w, BigInt(0)));
    const long oy1 = y1 - x1, oy2 = y2 - x2;
    if (oy1 >= 0 && oy1 <= n && oy2 >= 0 && oy2 <= n && y1 >= y2) s[n][oy1 * w + oy2] = 1;
    for (long j = n - 1; j >= 0; --j)
        for (long o1 = 0; o1 <= j; ++o1)
            for (long o2 = 0; o2 <= j; ++o2) {
                if (x1 + o1 < x2 + o2) continue;
                BigInt acc(0);
                for (int d1 = 0; d1 <= 1; ++d1)
                    for (int d2 = 0; d2 <= 1; ++d2) acc += s[j + 1][(o1 + d1) * w + (o2 + d2)];
                s[j][o1 * w + o2] = acc;
            }
    return s;
}

}  // namespace

BigInt count_pairs(long n, long x1, long x2, long y1, long y2) {
    if (x1 < x2) return BigInt(0);
    return pair_suffix_counts(n, x1, x2, y1, y2)[0][0];
}

PathPair sample_pair(long n, long x1, long x2, long y1, long y2, Rng& rng) {
    const auto s = pair_suffix_counts(n, x1, x2, y1, y2);
    if (x1 < x2 || s[0][0] == 0) throw std::invalid_argument("sample_pair: empty pair set");
    const long w = n + 1;
    PathPair out;
    out.l1.v.assign(n + 1, x1);
    out.l2.v.assign(n + 1, x2);
    long o1 = 0, o2 = 0;
    for (long j = 0; j < n; ++j) {
        BigInt weights[4];
        BigInt total(0);
        for (int k = 0; k < 4; ++k) {
            const int d1 = k >> 1, d2 = k & 1;
            weights[k] = s[j + 1][(o1 + d1) * w + (o2 + d2)];
            total += weights[k];
        }
        double u = rng.uniform();
        int pick = 3;
        BigInt acc(0);
        for (int k = 0; k < 4; ++k) {
            acc += weights[k];
            if (u < ratio_to_double(acc, total)) {
                pick = k;
                break;
            }
        }
        o1 += pick >> 1;
        o2 += pick & 1;
        out.l1.v[j + 1] = x1 + o1;
        out.l2.v[j + 1] = x2 + o2;
    }
    return out;
}

PathPair gibbs_resample(const PathPair& pair, long a, long b, int which, Rng& rng) {
    if (!pair.ordered()) throw std::invalid_argument("gibbs_resample: input pair not ordered");
    const long n = static_cast<long>(pair.l1.v.size()) - 1;
    if (a < 0 || b > n || a > b) throw std::invalid_argument("gibbs_resample: bad interval");
    if (which != 1 && which != 2) throw std::invalid_argument("gibbs_resample: which must be 1 or 2");
    if (a == b) return pair;
    const BernoulliPath& target = (which == 1) ? pair.l1 : pair.l2;
    const BernoulliPath& other = (which == 1) ? pair.l2 : pair.l1;
    BridgeSpec spec;
    spec.n = b - a;
    spec.x = target.v[a];
    spec.y = target.v[b];
    if (which == 1) {
        spec.floor.assign(spec.n + 1, kNoFloor);
        for (long j = 0; j <= spec.n; ++j) spec.floor[j] = other.v[a + j];
    } else {
        spec.ceiling.assign(spec.n + 1, kNoCeiling);
        for (long j = 0; j <= spec.n; ++j) spec.ceiling[j] = other.v[a + j];
    }
    const BernoulliPath refill = sample_bridge(spec, rng);
    PathPair out = pair;
    BernoulliPath& dst = (which == 1) ? out.l1 : out.l2;
    for (long j = 0; j <= spec.n; ++j) dst.v[a + j] = refill.v[j];
    return out;
}

namespace {

// Lowest admissible path of a bridge set; throws if the set is empty.
BernoulliPath minimal_path(const BridgeSpec& spec) {
    spec.validate();
    const long n = spec.n;
    if (!site_ok(spec, 0, spec.x)) throw std::invalid_argument("monotone_couple: empty bridge set");
    BernoulliPath p;
    p.v.assign(n + 1, spec.x);
    for (long j = 1; j <= n; ++j) {
        long v = std::max(p.v[j - 1], std::max(spec.floor_at(j), spec.y - (n - j)));
        if (v > p.v[j - 1] + 1 || v > spec.ceil_at(j)) throw std::invalid_argument("monotone_couple: empty bridge set");
        p.v[j] = v;
    }
    if (p.v[n] != spec.y) throw std::invalid_argument("monotone_couple: empty bridge set");
    return p;
}

// Single-site heat bath: the conditional law given the neighbors is uniform
// on the one or two admissible values; the shared uniform keeps two ordered
// chains ordered.
inline void heat_bath_site(const BridgeSpec& spec, BernoulliPath& p, long j, double u) {
    const long lo = std::max({p.v[j - 1], p.v[j + 1] - 1, spec.floor_at(j)});
    const long hi = std::min({p.v[j - 1] + 1, p.v[j + 1], spec.ceil_at(j)});
    p.v[j] = (u < 0.5) ? lo : hi;
}

}  // namespace

std::pair<BernoulliPath, BernoulliPath> monotone_couple(const BridgeSpec& bottom, const BridgeSpec& top, Rng& rng,
                                                        long sweeps) {
    bottom.validate();
    top.validate();
    if (bottom.n != top.n) throw std::invalid_argument("monotone_couple: lengths differ");
    const long n = bottom.n;
    if (bottom.x > top.x || bottom.y > top.y) throw std::invalid_argument("monotone_couple: unordered endpoints");
    for (long j = 0; j <= n; ++j) {
        if (bottom.floor_at(j) > top.floor_at(j)) throw std::invalid_argument("monotone_couple: unordered floors");
        if (bottom.ceil_at(j) > top.ceil_at(j)) throw std::invalid_argument("monotone_couple: unordered ceilings");
    }
    BernoulliPath pb = minimal_path(bottom), pt = minimal_path(top);
    if (sweeps < 0) sweeps = 4 * n * n + 64;
    for (long s = 0; s < sweeps; ++s)
        for (long j = 1; j < n; ++j) {
            const double u = rng.uniform();
            heat_bath_site(bottom, pb, j, u);
            heat_bath_site(top, pt, j, u);
        }
    for (long j = 0; j <= n; ++j)
        if (pb.v[j] > pt.v[j]) throw std::logic_error("monotone_couple: ordering violated");
    return {pb, pt};
}

namespace {

// All paths of a small bridge set, as value vectors.
void enumerate_paths_rec(const BridgeSpec& spec, long j, BernoulliPath& cur, std::vector<BernoulliPath>& out) {
    const long n = spec.n;
    if (j == n) {
        if (cur.v[n] == spec.y) out.push_back(cur);
        return;
    }
    for (int d = 0; d <= 1; ++d) {
        const long v = cur.v[j] + d;
        // reachability prune
        if (v > spec.y || spec.y - v > n - j - 1) continue;
        if (!site_ok(spec, j + 1, v)) continue;
        cur.v[j + 1] = v;
        enumerate_paths_rec(spec, j + 1, cur, out);
    }
}

std::vector<BernoulliPath> enumerate_paths(const BridgeSpec& spec) {
    spec.validate();
    if (spec.n > 22) throw std::invalid_argument("enumerate_paths: n too large");
    std::vector<BernoulliPath> out;
    if (!site_ok(spec, 0, spec.x)) return out;
    BernoulliPath cur;
    cur.v.assign(spec.n + 1, spec.x);
    enumerate_paths_rec(spec, 0, cur, out);
    return out;
}

bool above(const BernoulliPath& p, const std::vector<long>& h) {
    for (size_t j = 0; j < p.v.size(); ++j)
        if (h[j] != kNoFloor && p.v[j] < h[j]) return false;
    return true;
}

bool below(const BernoulliPath& p, const std::vector<long>& h) {
    for (size_t j = 0; j < p.v.size(); ++j)
        if (h[j] != kNoCeiling && p.v[j] > h[j]) return false;
    return true;
}

}  // namespace

IneqReport verify_two_path_monotone(long n, long x1, long x2, long y1, long y2, const std::vector<long>& h1,
                                    const std::vector<long>& h2) {
    if (n > 12) throw std::invalid_argument("verify_two_path_monotone: n too large for enumeration");
    if (h1.size() != static_cast<size_t>(n) + 1 || h2.size() != static_cast<size_t>(n) + 1)
        throw std::invalid_argument("verify_two_path_monotone: threshold size must be n+1");
    BridgeSpec s1{n, x1, y1, {}, {}}, s2{n, x2, y2, {}, {}};
    const auto paths1 = enumerate_paths(s1), paths2 = enumerate_paths(s2);
    if (paths1.empty() || paths2.empty()) throw std::invalid_argument("verify_two_path_monotone: empty bridge set");
    BigInt pairs(0), pairs_hit(0), one_hit(0), two_hit(0);
    for (const auto& p1 : paths1) {
        const bool e1 = above(p1, h1);
        if (e1) ++one_hit;
        for (const auto& p2 : paths2) {
            bool ordered = true;
            for (long j = 0; j <= n && ordered; ++j) ordered = p1.v[j] >= p2.v[j];
            if (!ordered) continue;
            ++pairs;
            if (e1 && below(p2, h2)) ++pairs_hit;
        }
    }
    for (const auto& p2 : paths2)
        if (below(p2, h2)) ++two_hit;
    if (pairs == 0) throw std::invalid_argument("verify_two_path_monotone: empty ordered pair set");
    IneqReport rep;
    rep.lhs = Rat(pairs_hit, pairs);
    rep.rhs = Rat(one_hit, static_cast<BigInt>(paths1.size())) * Rat(two_hit, static_cast<BigInt>(paths2.size()));
    rep.satisfied = rep.lhs >= rep.rhs;
    return rep;
}

IneqReport verify_fkg(const BridgeSpec& spec, const ThresholdEvent& b, const ThresholdEvent& c) {
    if (spec.n > 12) throw std::invalid_argument("verify_fkg: n too large for enumeration");
    if (b.increasing != c.increasing) throw std::invalid_argument("verify_fkg: events must share monotonicity");
    if (b.thresholds.size() != static_cast<size_t>(spec.n) + 1 || c.thresholds.size() != static_cast<size_t>(spec.n) + 1)
        throw std::invalid_argument("verify_fkg: threshold size must be n+1");
    const auto paths = enumerate_paths(spec);
    if (paths.empty()) throw std::invalid_argument("verify_fkg: empty bridge set");
    auto hit = [&](const BernoulliPath& p, const ThresholdEvent& e) {
        return e.increasing ? above(p, e.thresholds) : below(p, e.thresholds);
    };
    BigInt nb(0), nc(0), nbc(0);
    for (const auto& p : paths) {
        const bool hb = hit(p, b), hc = hit(p, c);
        if (hb) ++nb;
        if (hc) ++nc;
        if (hb && hc) ++nbc;
    }
    const BigInt total(static_cast<long>(paths.size()));
    IneqReport rep;
    rep.lhs = Rat(nbc, total);
    rep.rhs = Rat(nb, total) * Rat(nc, total);
    rep.satisfied = rep.lhs >= rep.rhs;
    return rep;
}

std::vector<Rat> hypergeometric_onepoint(long n, long h, long m) {
    if (m < 0 || m > n || h < 0 || h > n) throw std::invalid_argument("hypergeometric_onepoint: bad arguments");
    const BigInt den = binom(n, h);
    if (den == 0) throw std::invalid_argument("hypergeometric_onepoint: empty bridge set");
    std::vector<Rat> pmf(m + 1, Rat(0));
    for (long k = 0; k <= m; ++k) pmf[k] = Rat(binom(m, k) * binom(n - m, h - k), den);
    return pmf;
}

IneqReport verify_hypergeometric_ratio(long n, long h, long m, long s, long t) {
    if (!(0 <= s && s <= t)) throw std::invalid_argument("verify_hypergeometric_ratio: need 0 <= s <= t");
    if (h - s > n - m) throw std::invalid_argument("verify_hypergeometric_ratio: need h - s <= n - m");
    const auto pmf = hypergeometric_onepoint(n, h, m);
    Rat ps(0), pt(0);
    for (long k = 0; k <= std::min(s, m); ++k) ps += pmf[k];
    for (long k = 0; k <= std::min(t, m); ++k) pt += pmf[k];
    if (pt == 0) throw std::domain_error("verify_hypergeometric_ratio: P(L(m) <= t) = 0");
    IneqReport rep;
    rep.lhs = ps / pt;
    rep.rhs = Rat(1) / ipow(Rat(n), 1 + t - s);
    rep.satisfied = rep.lhs >= rep.rhs;
    return rep;
}

TailEstimate fluctuation_tail(long n, long m, double bound_m, long samples, std::uint64_t seed) {
    if (m < 0 || m > n) throw std::invalid_argument("fluctuation_tail: bad m");
    TailEstimate est;
    if (samples <= 0) {
        // exact count of bridges staying within the tube, site-wise window DP
        std::vector<BigInt> cur(n + 1, BigInt(0)), nxt(n + 1, BigInt(0));
        cur[0] = 1;
        for (long j = 1; j <= n; ++j) {
            const double mean = static_cast<double>(m) * j / n;
            for (long o = 0; o <= j; ++o) {
                if (std::abs(o - mean) > bound_m + 1e-12) {
                    nxt[o] = 0;
                    continue;
                }
                BigInt acc = cur[o];
                if (o >= 1) acc += cur[o - 1];
                nxt[o] = acc;
            }
            for (long o = j + 1; o <= n; ++o) nxt[o] = 0;
            cur.swap(nxt);
            std::fill(nxt.begin(), nxt.end(), BigInt(0));
        }
        const BigInt den = binom(n, m);
        est.estimate = to_double(Rat(cur[m], den));
        est.ci_low = est.ci_high = est.estimate;
        est.exact = true;
        return est;
    }
    long hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long i = 0; i < samples; ++i) {
        Rng rng = fork_rng(seed, static_cast<std::uint64_t>(i));
        long v = 0;
        bool inside = true;
        for (long j = 0; j < n; ++j) {
            const double p_up = static_cast<double>(m - v) / static_cast<double>(n - j);
            if (rng.uniform() < p_up) ++v;
            if (std::abs(v - static_cast<double>(m) * (j + 1) / n) > bound_m + 1e-12) {
                inside = false;
                break;
            }
        }
        if (inside) ++hits;
    }
    est.estimate = static_cast<double>(hits) / samples;
    std::tie(est.ci_low, est.ci_high) = wilson_interval(hits, samples);
    return est;
}

std::pair<double, double> wilson_interval(long hits, long trials) {
    if (trials <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(trials), p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = (p + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace asep
