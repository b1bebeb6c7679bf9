#include "asep/mpa.hpp"

#include <algorithm>
#include <cmath>

#include "asep/kernels.hpp"

namespace asep {

double DehpResidual::max_abs() const { return std::max({bulk, left, right}); }

namespace {

template <class T>
std::vector<std::vector<T>> dense_d(const EdRep<T>& rep) {
    std::vector<std::vector<T>> m(rep.dim, std::vector<T>(rep.dim, T(0)));
    for (long k = 0; k < rep.dim; ++k) {
        m[k][k] = rep.d_diag[k];
        if (k + 1 < rep.dim) m[k][k + 1] = rep.d_upper[k];
    }
    return m;
}

template <class T>
std::vector<std::vector<T>> dense_e(const EdRep<T>& rep) {
    std::vector<std::vector<T>> m(rep.dim, std::vector<T>(rep.dim, T(0)));
    for (long k = 0; k < rep.dim; ++k) {
        m[k][k] = rep.e_diag[k];
        if (k + 1 < rep.dim) m[k + 1][k] = rep.e_lower[k];
    }
    return m;
}

template <class T>
std::vector<std::vector<T>> matmul(const std::vector<std::vector<T>>& x, const std::vector<std::vector<T>>& y) {
    const long n = static_cast<long>(x.size());
    std::vector<std::vector<T>> z(n, std::vector<T>(n, T(0)));
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k) {
            if (x[i][k] == T(0)) continue;
            for (long j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
        }
    return z;
}

double abs_to_double(const Rat& r) { return std::abs(to_double(r)); }
double abs_to_double(double r) { return std::abs(r); }

}  // namespace

template <class T>
DehpResidual check_dehp(const EdRep<T>& rep, const BoundaryRatesT<T>& rates) {
    rates.validate();
    const long m = rep.dim;
    if (m < 3) throw std::invalid_argument("check_dehp: dim must be >= 3");
    const auto d = dense_d(rep), e = dense_e(rep);
    const auto de = matmul(d, e), ed = matmul(e, d);
    DehpResidual res{0, 0, 0};
    // bulk: DE - q ED - D - E on the inner block untouched by truncation
    for (long i = 0; i + 2 < m; ++i)
        for (long j = 0; j + 2 < m; ++j) {
            T r = de[i][j] - rep.params.q * ed[i][j] - d[i][j] - e[i][j];
            res.bulk = std::max(res.bulk, abs_to_double(r));
        }
    // left boundary: W (alpha E - gamma D) = W on the first m-1 coordinates
    for (long j = 0; j + 1 < m; ++j) {
        T acc(0);
        for (long i = 0; i < m; ++i) acc += rep.w[i] * (rates.alpha * e[i][j] - rates.gamma * d[i][j]);
        res.left = std::max(res.left, abs_to_double(T(acc - rep.w[j])));
    }
    // right boundary: (beta D - delta E) V = V on the first m-1 coordinates
    for (long i = 0; i + 1 < m; ++i) {
        T acc(0);
        for (long j = 0; j < m; ++j) acc += (rates.beta * d[i][j] - rates.delta * e[i][j]) * rep.v[j];
        res.right = std::max(res.right, abs_to_double(T(acc - rep.v[i])));
    }
    return res;
}

template DehpResidual check_dehp<double>(const EdRep<double>&, const BoundaryRatesT<double>&);
template DehpResidual check_dehp<Rat>(const EdRep<Rat>&, const BoundaryRatesT<Rat>&);

WvInner wv_inner(const FanParams& p, double tol) {
    p.require_fan();
    const double ab = p.a * p.b, cd = p.c * p.d;
    WvInner out{};
    const auto qq = qpochhammer_inf(p.q, p.q, 1e-15);
    double term = 1.0, sum = 0.0, qk = 1.0;
    long k = 0;
    // V_k W_k = (ab)^k (cd;q)_k/(q;q)_k; tail after K bounded by
    // (ab)^K / ((1-ab) (q;q)_inf).
    while (true) {
        sum += term;
        const double ratio = ab * (1.0 - cd * qk) / (1.0 - p.q * qk);
        term *= ratio;
        qk *= p.q;
        ++k;
        const double tail = std::pow(ab, k) / ((1.0 - ab) * qq.value * (1 - qq.rel_err_bound));
        if (tail < tol || ab == 0.0) {
            out.tail_bound = tail;
            break;
        }
        if (k > 2'000'000) throw TruncationError("wv_inner: series did not reach tolerance");
    }
    out.series = sum;
    out.closed_form = qpochhammer_inf(ab * cd, p.q, 1e-15).value / qpochhammer_inf(ab, p.q, 1e-15).value;
    return out;
}

namespace {

// log of sum_{g=m}^{mm} exp(g*la), closed form, stable on both sides of la=0.
double log_geom_range(double la, long m, long mm) {
    if (mm < m) return -kInf;
    const long cnt = mm - m + 1;
    if (la == 0.0) return std::log(static_cast<double>(cnt));
    if (la < 0) return m * la + std::log1p(-std::exp(cnt * la)) - std::log1p(-std::exp(la));
    return mm * la + std::log1p(-std::exp(-cnt * la)) - std::log1p(-std::exp(-la));
}

// log S(G) with S as in the truncation certificate: sum over start gaps
// g0 > G of a^{g0} max_{|g-g0|<=n} b-side(g), with the (cd;q)/(q;q) part
// bounded by 1/(q;q)_inf separately.
double log_tail_sum(const FanParams& p, long n, long g0_cut) {
    if (p.a == 0) return -kInf;
    const double la = std::log(p.a);
    if (p.b >= 1) {
        const double lab = std::log(p.a * p.b);
        return n * std::log(p.b) + (g0_cut + 1) * lab - std::log1p(-p.a * p.b);
    }
    // b < 1: flat part up to g0 = n, then (ab)-geometric
    const double part1 = log_geom_range(la, g0_cut + 1, n);
    double part2 = -kInf;
    if (p.b > 0) {
        const double lab = std::log(p.a * p.b);
        const long m = std::max(g0_cut + 1, n + 1);
        part2 = -n * std::log(p.b) + m * lab - std::log1p(-p.a * p.b);
    }
    return log_sum_exp(part1, part2);
}

struct EdMatrices {
    std::vector<double> d_diag, d_upper, e_diag, e_lower;  // includes the 1/(1-q) factor
};

EdMatrices build_ed_matrices(const FanParams& p, long dim) {
    EdMatrices m;
    m.d_diag.resize(dim);
    m.d_upper.resize(dim);
    m.e_diag.resize(dim);
    m.e_lower.resize(dim);
    const double inv = 1.0 / (1.0 - p.q), cd = p.c * p.d;
    double qk = 1.0;
    for (long k = 0; k < dim; ++k) {
        m.d_diag[k] = (1.0 + p.d * qk) * inv;
        m.e_diag[k] = (1.0 + p.c * qk) * inv;
        m.d_upper[k] = (1.0 - qk * p.q) * inv;   // entry (k, k+1)
        m.e_lower[k] = (1.0 - cd * qk) * inv;    // entry (k+1, k)
        qk *= p.q;
    }
    return m;
}

// u <- u * M with M = D (particle) or E (hole); ScaledVec row vector.
void row_apply(const EdMatrices& m, ScaledVec& u, bool particle) {
    const long dim = static_cast<long>(u.w.size());
    std::vector<double> out(dim, 0.0);
    if (particle) {
        for (long j = 0; j < dim; ++j) {
            double acc = u.w[j] * m.d_diag[j];
            if (j >= 1) acc += u.w[j - 1] * m.d_upper[j - 1];
            out[j] = acc;
        }
    } else {
        for (long j = 0; j < dim; ++j) {
            double acc = u.w[j] * m.e_diag[j];
            if (j + 1 < dim) acc += u.w[j + 1] * m.e_lower[j];
            out[j] = acc;
        }
    }
    u.w.swap(out);
    u.renormalize();
}

std::vector<double> log_w_vec(const FanParams& p, long g0_cut, long dim) {
    std::vector<double> lw(dim, -kInf);
    const double la = p.a > 0 ? std::log(p.a) : -kInf;
    for (long g = 0; g <= std::min(g0_cut, dim - 1); ++g) lw[g] = g == 0 ? 0.0 : g * la;
    return lw;
}

std::vector<double> log_v_vec(const FanParams& p, long dim) {
    std::vector<double> lv(dim, -kInf);
    const double lb = p.b > 0 ? std::log(p.b) : -kInf;
    const double cd = p.c * p.d;
    double acc = 0.0, qk = 1.0;
    for (long g = 0; g < dim; ++g) {
        lv[g] = acc;
        acc = p.b > 0 ? acc + lb + std::log1p(-cd * qk) - std::log1p(-p.q * qk) : -kInf;
        qk *= p.q;
    }
    return lv;
}

ScaledVec scaled_from_log(const std::vector<double>& lw) {
    ScaledVec u;
    double m = -kInf;
    for (double x : lw) m = std::max(m, x);
    u.w.assign(lw.size(), 0.0);
    if (m == -kInf) return u;
    for (size_t i = 0; i < lw.size(); ++i)
        if (lw[i] > -kInf) u.w[i] = std::exp(lw[i] - m);
    u.log_scale = m;
    return u;
}

double scaled_dot_log(const ScaledVec& u, const std::vector<double>& lv) {
    double m = -kInf;
    for (size_t i = 0; i < lv.size(); ++i)
        if (u.w[i] > 0) m = std::max(m, lv[i]);
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (size_t i = 0; i < lv.size(); ++i)
        if (u.w[i] > 0 && lv[i] > -kInf) s += u.w[i] * std::exp(lv[i] - m);
    return s > 0 ? std::log(s) + m + u.log_scale : -kInf;
}

// log <W| (D+E)^n |V> restricted to start gaps <= g0_cut, plus n log(1-q).
double partition_log_z_at_cut(const FanParams& p, long n, long g0_cut) {
    const long dim = g0_cut + n + 1;
    const auto m = build_ed_matrices(p, dim);
    ScaledVec u = scaled_from_log(log_w_vec(p, g0_cut, dim));
    std::vector<double> out(dim, 0.0);
    for (long site = 0; site < n; ++site) {
        for (long j = 0; j < dim; ++j) {
            double acc = u.w[j] * (m.d_diag[j] + m.e_diag[j]);
            if (j >= 1) acc += u.w[j - 1] * m.d_upper[j - 1];
            if (j + 1 < dim) acc += u.w[j + 1] * m.e_lower[j];
            out[j] = acc;
        }
        u.w.swap(out);
        u.renormalize();
    }
    return scaled_dot_log(u, log_v_vec(p, dim)) + n * std::log1p(-p.q);
}

}  // namespace

Truncation choose_truncation(const FanParams& p, long n, double tol) {
    p.require_fan();
    if (!(tol > 0)) throw std::invalid_argument("choose_truncation: tol must be > 0");
    if (p.a == 0.0) return {0, -kInf};
    if (p.b == 0.0) {
        // terminal weight kills gaps above n - g0; start gaps beyond n never land back at 0
        return {n, -kInf};
    }
    const auto qq = qpochhammer_inf(p.q, p.q, 1e-15);
    const double log_qq = std::log(qq.value * (1 - qq.rel_err_bound));
    const double ab = p.a * p.b;
    long g = 16;
    if (ab > 0 && ab < 1) g = std::max<long>(16, static_cast<long>(std::ceil(std::log(tol * (1 - ab)) / std::log(ab))));
    while (true) {
        const double log_z = partition_log_z_at_cut(p, n, g);
        const double log_bound = n * std::log(4.0) + log_tail_sum(p, n, g) - log_qq - log_z;
        if (log_bound <= std::log(tol)) return {g, log_bound};
        if (g >= 20000) throw TruncationError("choose_truncation: certified tail does not reach tolerance");
        g = std::min<long>(20000, g * 2);
    }
}

double partition_log_z(const FanParams& p, long n, double tol, Truncation* cert) {
    const Truncation tr = choose_truncation(p, n, tol);
    if (cert) *cert = tr;
    return partition_log_z_at_cut(p, n, tr.g0_cut);
}

Rat partition_z_exact(const RatFanParams& p, long n, long g0_cut) {
    p.require_fan();
    const long dim = g0_cut + n + 1;
    const auto rep = build_ed(p, dim);
    std::vector<Rat> u(dim, Rat(0));
    for (long g = 0; g <= g0_cut; ++g) u[g] = rep.w[g];
    std::vector<Rat> out(dim);
    for (long site = 0; site < n; ++site) {
        for (long j = 0; j < dim; ++j) {
            Rat acc = u[j] * (rep.d_diag[j] + rep.e_diag[j]);
            if (j >= 1) acc += u[j - 1] * rep.d_upper[j - 1];
            if (j + 1 < dim) acc += u[j + 1] * rep.e_lower[j];
            out[j] = acc;
        }
        u.swap(out);
    }
    Rat z(0);
    for (long j = 0; j < dim; ++j) z += u[j] * rep.v[j];
    return z * ipow(Rat(1) - p.q, n);
}

namespace {

// One word's numerator log <W| prod M_i |V> (normalization-free, the
// (1-q)^n factors cancel in probabilities).
double word_log_numer(const EdMatrices& m, const std::vector<double>& lw, const std::vector<double>& lv,
                      const Occupation& tau) {
    ScaledVec u = scaled_from_log(lw);
    for (int t : tau) row_apply(m, u, t == 1);
    return scaled_dot_log(u, lv);
}

}  // namespace

std::vector<double> stationary_table(const FanParams& p, long n, double tol) {
    p.require_fan();
    if (n < 1 || n > 20) throw ResourceError("stationary_table: n out of range");
    const Truncation tr = choose_truncation(p, n, tol);
    const long dim = tr.g0_cut + n + 1;
    const auto m = build_ed_matrices(p, dim);
    const auto lw = log_w_vec(p, tr.g0_cut, dim);
    const auto lv = log_v_vec(p, dim);
    const std::uint64_t total = 1ULL << n;
    std::vector<double> logs(total);
    for (std::uint64_t ix = 0; ix < total; ++ix) {
        const Occupation tau = occupation_from_index(ix, n);
        logs[ix] = word_log_numer(m, lw, lv, tau);
    }
    double lz = -kInf;
    for (double l : logs) lz = log_sum_exp(lz, l);
    std::vector<double> out(total);
    for (std::uint64_t ix = 0; ix < total; ++ix) out[ix] = std::exp(logs[ix] - lz);
    return out;
}

double stationary_prob(const FanParams& p, const Occupation& tau, double tol, double* cert_err) {
    p.require_fan();
    const long n = static_cast<long>(tau.size());
    const Truncation tr = choose_truncation(p, n, tol);
    const long dim = tr.g0_cut + n + 1;
    const auto m = build_ed_matrices(p, dim);
    const auto lw = log_w_vec(p, tr.g0_cut, dim);
    const auto lv = log_v_vec(p, dim);
    const double log_num = word_log_numer(m, lw, lv, tau);
    const double log_z = partition_log_z_at_cut(p, n, tr.g0_cut) - n * std::log1p(-p.q);
    const double prob = std::exp(log_num - log_z);
    if (cert_err) {
        // word-numerator tail uses the per-word row-sum bound 2^n
        const auto qq = qpochhammer_inf(p.q, p.q, 1e-15);
        const double log_qq = std::log(qq.value * (1 - qq.rel_err_bound));
        const double num_tail = n * std::log(2.0) + log_tail_sum(p, n, tr.g0_cut) - log_qq - log_z;
        *cert_err = std::exp(num_tail) + prob * std::exp(tr.log_rel_bound);
    }
    return prob;
}

std::vector<Rat> stationary_table_exact(const RatFanParams& p, long n, long g0_cut) {
    p.require_fan();
    if (n < 1 || n > 14) throw ResourceError("stationary_table_exact: n out of range");
    const long dim = g0_cut + n + 1;
    const auto rep = build_ed(p, dim);
    const std::uint64_t total = 1ULL << n;
    std::vector<Rat> numer(total);
    Rat z(0);
    std::vector<Rat> u(dim), out(dim);
    for (std::uint64_t ix = 0; ix < total; ++ix) {
        std::fill(u.begin(), u.end(), Rat(0));
        for (long g = 0; g <= g0_cut; ++g) u[g] = rep.w[g];
        const Occupation tau = occupation_from_index(ix, n);
        for (int t : tau) {
            for (long j = 0; j < dim; ++j) {
                Rat acc(0);
                if (t == 1) {
                    acc = u[j] * rep.d_diag[j];
                    if (j >= 1) acc += u[j - 1] * rep.d_upper[j - 1];
                } else {
                    acc = u[j] * rep.e_diag[j];
                    if (j + 1 < dim) acc += u[j + 1] * rep.e_lower[j];
                }
                out[j] = acc;
            }
            u.swap(out);
        }
        Rat s(0);
        for (long j = 0; j < dim; ++j) s += u[j] * rep.v[j];
        numer[ix] = s;
        z += s;
    }
    for (auto& r : numer) r /= z;
    return numer;
}

double& PinnedLaw::at(const std::vector<long>& counts) {
    long ix = 0;
    for (size_t i = 0; i < dims.size(); ++i) ix = ix * dims[i] + counts[i];
    return pmf[ix];
}
double PinnedLaw::at(const std::vector<long>& counts) const { return const_cast<PinnedLaw*>(this)->at(counts); }

PinnedLaw height_marginal_dist(const FanParams& p, long n, const std::vector<long>& pins, double tol,
                               long state_budget) {
    p.require_fan();
    if (pins.empty() || pins.size() > 3) throw std::invalid_argument("height_marginal_dist: need 1..3 pins");
    if (!std::is_sorted(pins.begin(), pins.end())) throw std::invalid_argument("height_marginal_dist: pins must be sorted");
    if (pins.front() < 1 || pins.back() > n) throw std::invalid_argument("height_marginal_dist: pins out of range");
    const Truncation tr = choose_truncation(p, n, tol);
    const long gmax = tr.g0_cut + n;
    const auto t = kernels::make_transfer_tables(p, tr.g0_cut, gmax);

    PinnedLaw law;
    law.pins = pins;
    for (long m : pins) law.dims.push_back(m + 1);

    if (pins.size() == 1) {
        const long m = pins[0];
        if ((m + 1) * (gmax + 1) > state_budget) throw ResourceError("height_marginal_dist: state budget exceeded");
        const auto layer = kernels::count_dp_forward(t, m, {});
        const auto suffix = kernels::gap_suffix(t, n - m);
        std::vector<double> logmass(m + 1, -kInf);
        double shift = -kInf;
        for (long c = 0; c <= m; ++c) {
            double s = 0.0;
            for (long g = 0; g <= gmax; ++g) s += layer.at(c, g) * suffix.a[g];
            logmass[c] = s > 0 ? std::log(s) + layer.log_scale + suffix.log_scale : -kInf;
            shift = std::max(shift, logmass[c]);
        }
        double z = 0.0;
        for (double lm : logmass)
            if (lm > -kInf) z += std::exp(lm - shift);
        law.pmf.assign(m + 1, 0.0);
        for (long c = 0; c <= m; ++c)
            if (logmass[c] > -kInf) law.pmf[c] = std::exp(logmass[c] - shift) / z;
        return law;
    }

    // two or three pins: per-segment transition tensors over (start gap,
    // increment, end gap). Oracle-tier sizes only; one scale per segment.
    const long cols = gmax + 1;
    long total_states = 0;
    long prev = 0;
    for (long m : pins) {
        total_states += cols * cols * (m - prev + 1);
        prev = m;
    }
    if (total_states > state_budget) throw ResourceError("height_marginal_dist: state budget exceeded");

    // tensor[g0][d*cols + g1] = sum of step-weight products over paths of
    // `len` sites from gap g0 to gap g1 with d first-layer up-steps
    auto segment_tensor = [&](long len) {
        std::vector<std::vector<double>> tensor(cols, std::vector<double>((len + 1) * cols, 0.0));
        std::vector<double> cur((len + 1) * cols), nxt((len + 1) * cols);
        for (long g0 = 0; g0 < cols; ++g0) {
            std::fill(cur.begin(), cur.end(), 0.0);
            cur[g0] = 1.0;
            for (long j = 1; j <= len; ++j) {
                std::fill(nxt.begin(), nxt.end(), 0.0);
                for (long d = 0; d <= std::min(j, len); ++d)
                    for (long g = 0; g < cols; ++g) {
                        double acc = cur[d * cols + g] * t.flat_c[g];
                        if (g + 1 < cols) acc += cur[d * cols + g + 1] * t.down[g];
                        if (d >= 1) {
                            acc += cur[(d - 1) * cols + g] * t.flat_d[g];
                            if (g >= 1) acc += cur[(d - 1) * cols + g - 1] * t.up[g];
                        }
                        nxt[d * cols + g] = acc;
                    }
                cur.swap(nxt);
            }
            tensor[g0] = cur;
        }
        return tensor;
    };

    // joint[(increment tuple)][gap], built segment by segment
    std::vector<double> joint(cols, 0.0);
    for (long g = 0; g <= tr.g0_cut; ++g)
        if (t.log_astart[g] > -kInf) joint[g] = std::exp(t.log_astart[g]);
    std::vector<long> seg_dims;
    prev = 0;
    for (long m : pins) {
        const long len = m - prev;
        const auto tensor = segment_tensor(len);
        long outer = 1;
        for (long d : seg_dims) outer *= d;
        std::vector<double> next(outer * (len + 1) * cols, 0.0);
        for (long o = 0; o < outer; ++o)
            for (long g0 = 0; g0 < cols; ++g0) {
                const double mass = joint[o * cols + g0];
                if (mass == 0.0) continue;
                for (long d = 0; d <= len; ++d)
                    for (long g1 = 0; g1 < cols; ++g1)
                        next[(o * (len + 1) + d) * cols + g1] += mass * tensor[g0][d * cols + g1];
            }
        joint.swap(next);
        seg_dims.push_back(len + 1);
        prev = m;
    }
    const auto suffix = kernels::gap_suffix(t, n - pins.back());
    long outer = 1;
    for (long d : seg_dims) outer *= d;
    std::vector<double> mass(outer, 0.0);
    double z = 0.0;
    for (long o = 0; o < outer; ++o) {
        double sgm = 0.0;
        for (long g = 0; g < cols; ++g) sgm += joint[o * cols + g] * suffix.a[g];
        mass[o] = sgm;
        z += sgm;
    }
    long total_pmf = 1;
    for (long d : law.dims) total_pmf *= d;
    law.pmf.assign(total_pmf, 0.0);
    std::vector<long> idx(seg_dims.size(), 0);
    for (long o = 0; o < outer; ++o) {
        long rest = o;
        for (long i = static_cast<long>(seg_dims.size()) - 1; i >= 0; --i) {
            idx[i] = rest % seg_dims[i];
            rest /= seg_dims[i];
        }
        // per-segment increments -> cumulative counts at the pins
        std::vector<long> counts(idx.size());
        long acc = 0;
        for (size_t i = 0; i < idx.size(); ++i) {
            acc += idx[i];
            counts[i] = acc;
        }
        if (mass[o] > 0) law.at(counts) += mass[o] / z;
    }
    return law;
}

double generator_residual(const BoundaryRates& rates, const std::vector<double>& mu) {
    rates.validate();
    const long n = static_cast<long>(std::llround(std::log2(static_cast<double>(mu.size()))));
    if ((1ULL << n) != mu.size()) throw std::invalid_argument("generator_residual: measure size must be 2^n");
    std::vector<double> flow(mu.size(), 0.0);
    for (std::uint64_t ix = 0; ix < mu.size(); ++ix) {
        const Occupation tau = occupation_from_index(ix, n);
        double total = 0.0;
        for (const auto& [next, rate] : enabled_transitions(tau, rates)) {
            flow[occupation_index(next)] += mu[ix] * rate;
            total += rate;
        }
        flow[ix] -= mu[ix] * total;
    }
    double norm = 0.0;
    for (double f : flow) norm = std::max(norm, std::abs(f));
    return norm;
}

double generator_stationarity_check(const BoundaryRates& rates, long n, double tol) {
    if (n < 1 || n > 10) throw ResourceError("generator_stationarity_check: n must be in [1,10]");
    const FanParams p = to_fan(rates);
    p.require_fan();
    return generator_residual(rates, stationary_table(p, n, tol));
}

std::vector<std::pair<long, double>> asymptotic_logz_scan(const FanParams& p, const std::vector<long>& ns,
                                                          double tol) {
    p.require_fan();
    const double lj = std::log(current_j(p.a, p.b));
    std::vector<std::pair<long, double>> out;
    out.reserve(ns.size());
    for (long n : ns) out.emplace_back(n, partition_log_z(p, n, tol) / n + lj);
    return out;
}

}  // namespace asep
