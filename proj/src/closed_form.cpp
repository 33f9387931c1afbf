#include "aoi/closed_form.hpp"

#include "aoi/kahan.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoi {

namespace {

constexpr double kSingleSourceTol = 1e-12;  // rho_{-i} below this => single

struct Ctx {
    double mu, lambda, lam1, lam_other, eta;
    double rho, rho1, rho_other, beta;
    double ratio;  // beta / rho
    double pi1;    // stationary probability of the empty state
    double tail;   // sum_{k=1..B} ratio^k (no pi1 factor)
    int b_cap, n;
};

bool equal_rates(double rho, double beta) {
    return std::abs(rho - beta) <= 1e-9 * std::max(rho, beta);
}

double pi1_closed(double rho, double beta, int b_cap) {
    if (equal_rates(rho, beta)) return 1.0 / (1.0 + b_cap * (1.0 + rho));
    const double rb = std::pow(rho, b_cap) * (beta - rho);
    return rb / (rb + beta * (1.0 + rho) *
                          (std::pow(beta, b_cap) - std::pow(rho, b_cap)));
}

Ctx make_ctx(const SystemParams& params, int source) {
    const DerivedRates d = derive(params, source);
    Ctx c;
    c.mu = params.service_rate;
    c.lambda = d.total_rate;
    c.lam1 = params.arrival_rates[source - 1];
    c.lam_other = d.other_rate;
    c.eta = params.energy_rate;
    c.rho = d.server_utilization;
    c.rho1 = d.source_utilization;
    c.rho_other = d.other_utilization;
    c.beta = d.energy_utilization;
    c.ratio = c.beta / c.rho;
    c.b_cap = params.battery_capacity;
    c.n = params.n_sources;
    c.pi1 = pi1_closed(c.rho, c.beta, c.b_cap);
    KahanSum t;
    double p = 1.0;
    for (int k = 1; k <= c.b_cap; ++k) {
        p *= c.ratio;
        t.add(p);
    }
    c.tail = t.value();
    return c;
}

// Recursion constants in backward order, lowest index first (see the
// header for the per-variant index labels). The source-aware variants
// shift the index labels but run the same recurrence, so all variants
// share this evaluation; only the s shift distinguishes mean from MGF.
std::vector<double> c_values(CVariant variant, const Ctx& c, double s) {
    const bool with_s =
        variant == CVariant::mgf_wp_ps || variant == CVariant::mgf_sa;
    const double shift = with_s ? s : 0.0;
    const int n = c.b_cap + 1;

    std::vector<double> v(n);
    v[n - 1] = c.lambda - shift;
    for (int i = n - 2; i >= 1; --i) {
        if (with_s)
            v[i] = c.eta + c.lambda - shift -
                   c.mu * c.eta * c.lam_other /
                       (v[i + 1] * (c.mu - shift));
        else
            v[i] = c.eta * (1.0 - c.lam_other / v[i + 1]) + c.lambda;
    }
    if (with_s)
        v[0] = (c.mu - shift) * (c.eta - shift) / (c.mu * c.lam_other) -
               c.eta / v[1];
    else
        v[0] = c.eta * (1.0 / c.lam_other - 1.0 / v[1]);
    return v;
}

// Terms lam_other^{j-1} / prod_{h=0..j} c_h as a running ratio; geometric
// base g generalizes to the MGF series where g = lam_other / (1 - sbar).
struct SeriesRatio {
    const std::vector<double>& c;
    double g;
    double r;  // current g^{j-1} / prod_{h=0..j} c_h
    int j = 0;

    SeriesRatio(const std::vector<double>& cv, double base)
        : c(cv), g(base), r(1.0 / (base * cv[0])) {}
    double value() const { return r; }
    void advance() { r *= g / c[++j]; }
};

// ---------------------------------------------------------------------
// Average AoI
// ---------------------------------------------------------------------

// Idle-row correlation component v_{10} shared by the WP and PS averages;
// PS scales the busy-row series by (1 + rho_other) / (1 + rho).
double v10_mean(const Ctx& c, const std::vector<double>& cv,
                double busy_weight) {
    KahanSum sum;
    sum.add(c.pi1 / (cv[0] * c.lam_other));
    SeriesRatio sr(cv, c.lam_other);
    double ratio_pow = c.ratio;  // ratio^{j+1} at term j
    for (int j = 0; j <= c.b_cap - 1; ++j) {
        if (j >= 1) sum.add(ratio_pow / c.ratio * c.pi1 * sr.value());
        sum.add(busy_weight * c.rho * ratio_pow * c.pi1 * sr.value());
        ratio_pow *= c.ratio;
        sr.advance();
    }
    sum.add(std::pow(c.ratio, c.b_cap) * c.pi1 * sr.value());  // j = B idle
    return sum.value();
}

double avg_wp_single(const Ctx& c) {
    const double r = c.rho, b = c.beta, mu = c.mu;
    const int B = c.b_cap;
    if (equal_rates(r, b))
        return (2.0 * B * r * r + 2.0 * (1 + B) * r + B + 2) /
               (mu * (B * r * r + (1 + B) * r));
    const double bp = std::pow(b, B + 2), rp = std::pow(r, B + 2);
    return (bp * (2 * r * r + 2 * r + 1) - rp * (2 * b * b + 2 * b + 1)) /
           (mu * (bp * (r * r + r) - rp * (b * b + b)));
}

double avg_ps_single(const Ctx& c) {
    const double r = c.rho, b = c.beta, mu = c.mu;
    const int B = c.b_cap;
    if (equal_rates(r, b))
        return (B * r * r * r + (3.0 * B + 1) * r * r + (3.0 * B + 4) * r +
                B + 2) /
               (mu * r * (1 + r) * (r * B + B + 1));
    const double bp = std::pow(b, B + 2), rp = std::pow(r, B + 2);
    return (bp * std::pow(1 + r, 3) -
            rp * ((b * b + b) * (r + 2) + 1 + r)) /
           (mu * (1 + r) * (bp * (r * r + r) - rp * (b * b + b)));
}

// Source-aware idle-state correlation component (the SA average's series).
double v10_sa(const Ctx& c, const std::vector<double>& cv) {
    KahanSum sum;
    sum.add(c.pi1 / (cv[0] * c.lam_other));
    SeriesRatio sr(cv, c.lam_other);
    double ratio_pow = c.ratio;
    const double busy_weight = c.rho1 / (1.0 + c.rho1) + c.rho_other;
    for (int j = 0; j <= c.b_cap - 1; ++j) {
        if (j >= 1) sum.add(ratio_pow / c.ratio * c.pi1 * sr.value());
        sum.add(busy_weight * ratio_pow * c.pi1 * sr.value());
        ratio_pow *= c.ratio;
        sr.advance();
    }
    sum.add(std::pow(c.ratio, c.b_cap) * c.pi1 * sr.value());
    return sum.value();
}

}  // namespace

CConstants c_constants(CVariant variant, const SystemParams& params,
                       int source, double s) {
    const Ctx c = make_ctx(params, source);
    if (c.lam_other <= 0.0)
        throw std::domain_error(
            "single-source: recursion undefined; use single-source branch");
    CConstants out;
    out.variant = variant;
    out.s = s;
    out.values = c_values(variant, c, s);
    return out;
}

double avg_aoi_closed(Discipline d, const SystemParams& params, int source) {
    const Ctx c = make_ctx(params, source);
    if (c.rho_other < kSingleSourceTol) {
        // The two preemptive disciplines coincide for one source.
        return d == Discipline::WP ? avg_wp_single(c) : avg_ps_single(c);
    }

    const double base = (1.0 + c.rho) / (c.mu * c.rho1);
    switch (d) {
        case Discipline::WP: {
            const auto cv = c_values(CVariant::mean_wp_ps, c, 0.0);
            return base + c.rho * c.tail * c.pi1 / c.mu +
                   v10_mean(c, cv, 1.0);
        }
        case Discipline::PS: {
            const auto cv = c_values(CVariant::mean_wp_ps, c, 0.0);
            return base +
                   v10_mean(c, cv, (1.0 + c.rho_other) / (1.0 + c.rho));
        }
        case Discipline::SA: {
            const auto cv = c_values(CVariant::mean_sa, c, 0.0);
            const double t_pi = c.tail * c.pi1;
            return (1.0 + c.rho) / (c.mu * c.rho1 * (1.0 + c.rho1)) +
                   (1.0 + c.rho) * (1.0 - c.rho1 * t_pi) /
                       (c.mu * (1.0 + c.rho1)) +
                   c.rho * t_pi / c.mu + v10_sa(c, cv);
        }
    }
    throw std::logic_error("unreachable");
}

double avg_aoi_limit(Discipline d, const SystemParams& params, int source,
                     LimitKind) {
    const DerivedRates r = derive(params, source);
    const double mu = params.service_rate;
    const double rho = r.server_utilization, rho1 = r.source_utilization;
    const double head = (1.0 + rho) / (mu * rho1);
    switch (d) {
        case Discipline::WP: return head + rho / (mu * (1.0 + rho));
        case Discipline::PS: return head;
        case Discipline::SA:
            return head + r.other_utilization /
                              (mu * (1.0 + rho) * (1.0 + rho1));
    }
    throw std::logic_error("unreachable");
}

double avg_gap(GapPair pair, const SystemParams& params, int source) {
    const Ctx c = make_ctx(params, source);
    const bool single = c.rho_other < kSingleSourceTol;
    const double busy_mass = c.rho * c.tail * c.pi1;  // busy-row total

    if (pair == GapPair::sa_minus_ps && single) return 0.0;

    if (pair == GapPair::wp_minus_ps) {
        if (single)
            return busy_mass / c.mu +
                   c.rho1 * c.pi1 / (c.mu * (1.0 + c.rho));
        const auto cv = c_values(CVariant::mean_wp_ps, c, 0.0);
        KahanSum series;
        SeriesRatio sr(cv, c.lam_other);
        double ratio_pow = c.ratio;
        for (int j = 0; j <= c.b_cap - 1; ++j) {
            series.add(c.rho * ratio_pow * c.pi1 * sr.value());
            ratio_pow *= c.ratio;
            sr.advance();
        }
        return busy_mass / c.mu +
               c.rho1 / (1.0 + c.rho) * series.value();
    }

    if (single) {
        // wp_minus_sa collapses to wp_minus_ps for one source.
        return busy_mass / c.mu + c.rho1 * c.pi1 / (c.mu * (1.0 + c.rho));
    }

    const auto cv = c_values(CVariant::mean_sa, c, 0.0);
    KahanSum series;
    SeriesRatio sr(cv, c.lam_other);
    double ratio_pow = c.ratio;
    for (int j = 0; j <= c.b_cap - 1; ++j) {
        series.add(ratio_pow * sr.value());
        ratio_pow *= c.ratio;
        sr.advance();
    }
    const double denom = 1.0 + (1.0 + c.rho) * c.tail;  // = 1 / pi1
    if (pair == GapPair::wp_minus_sa)
        return c.rho1 * (1.0 + c.rho) * c.tail /
                   (c.mu * (1.0 + c.rho1) * denom) +
               c.pi1 * c.rho1 * c.rho1 / (1.0 + c.rho1) * series.value();
    return c.rho_other * c.tail / (c.mu * (1.0 + c.rho1) * denom) +
           c.pi1 * c.rho1 * c.rho_other /
               ((1.0 + c.rho1) * (1.0 + c.rho)) * series.value();
}

double theta(const SystemParams& params) {
    const DerivedRates r = derive(params, 1);
    const double rho = r.server_utilization, beta = r.energy_utilization;
    const int b_cap = params.battery_capacity;
    if (equal_rates(rho, beta)) return static_cast<double>(b_cap);
    return beta * (std::pow(beta, b_cap) - std::pow(rho, b_cap)) /
           (std::pow(rho, b_cap) * (beta - rho));
}

namespace {

// Recursion constants positive and finite over the whole backward pass.
bool c_values_positive(CVariant variant, const Ctx& c, double s) {
    for (double v : c_values(variant, c, s))
        if (!std::isfinite(v) || v <= 0.0) return false;
    return true;
}

double mgf_single(Discipline d, const Ctx& c, double sbar) {
    const double rho = c.rho, beta = c.beta;
    const double th = equal_rates(rho, beta)
                          ? static_cast<double>(c.b_cap)
                          : beta * (std::pow(beta, c.b_cap) -
                                    std::pow(rho, c.b_cap)) /
                                (std::pow(rho, c.b_cap) * (beta - rho));
    const double bracket = sbar * sbar * th -
                           sbar * th * (1.0 + rho + beta) +
                           beta * (1.0 + th + th * rho);
    if (d == Discipline::WP)
        return rho * c.pi1 * bracket /
               ((1.0 - sbar) * (1.0 - sbar) * (rho - sbar) * (beta - sbar));
    return rho * (1.0 + rho) * c.pi1 * bracket /
           ((1.0 - sbar) * (rho - sbar) * (1.0 + rho - sbar) *
            (beta - sbar));
}

}  // namespace

double mgf_domain_bound(Discipline d, const SystemParams& params,
                        int source) {
    const Ctx c = make_ctx(params, source);
    if (c.rho_other < kSingleSourceTol)
        return std::min({1.0, c.rho, c.beta});

    // Smallest positive root of (1 - sbar)(rho - sbar) - rho_other; it
    // lies in (0, min(1, rho)), so the other explicit factors never bind.
    const double disc =
        (1.0 - c.rho) * (1.0 - c.rho) + 4.0 * c.rho_other;
    double bound = 0.5 * (1.0 + c.rho - std::sqrt(disc));

    // Scan the recursion for loss of positivity below that root.
    const CVariant variant =
        d == Discipline::SA ? CVariant::mgf_sa : CVariant::mgf_wp_ps;
    const int kSteps = 512;
    double prev = 0.0;
    for (int i = 1; i <= kSteps; ++i) {
        double sbar = bound * i / (kSteps + 1);
        if (!c_values_positive(variant, c, sbar * c.mu)) {
            double lo = prev, hi = sbar;
            while (hi - lo > 1e-9 * bound) {
                double mid = 0.5 * (lo + hi);
                (c_values_positive(variant, c, mid * c.mu) ? lo : hi) = mid;
            }
            bound = 0.5 * (lo + hi);
            break;
        }
        prev = sbar;
    }
    return bound;
}

double mgf_closed(Discipline d, const SystemParams& params, int source,
                  double sbar) {
    const Ctx c = make_ctx(params, source);
    const double bound = mgf_domain_bound(d, params, source);
    if (sbar >= bound)
        throw std::domain_error("sbar = " + std::to_string(sbar) +
                                " at/above the MGF domain bound " +
                                std::to_string(bound));

    if (c.rho_other < kSingleSourceTol) return mgf_single(d, c, sbar);

    const double s = sbar * c.mu;
    const double onems = 1.0 - sbar;
    const double q = onems * (c.rho - sbar) - c.rho_other;
    const double g = c.lam_other / onems;
    const double t_pi = c.tail * c.pi1;

    switch (d) {
        case Discipline::WP: {
            const auto cv = c_values(CVariant::mgf_wp_ps, c, s);
            KahanSum sum;  // series carries g^j / prod, so scale by g
            SeriesRatio sr(cv, g);
            double ratio_pow = c.ratio;
            for (int j = 0; j <= c.b_cap - 1; ++j) {
                sum.add(ratio_pow * c.pi1 * sr.value() * g);
                ratio_pow *= c.ratio;
                sr.advance();
            }
            const double v10s = c.rho1 / c.rho_other * sum.value();
            return (c.rho1 * (1.0 + c.rho - sbar) * t_pi +
                    v10s * c.rho1 * onems) /
                   (onems * q);
        }
        case Discipline::PS: {
            const auto cv = c_values(CVariant::mgf_wp_ps, c, s);
            KahanSum sum;
            SeriesRatio sr(cv, g);
            double ratio_pow = c.ratio;
            for (int j = 0; j <= c.b_cap - 1; ++j) {
                sum.add((1.0 + c.rho) * ratio_pow * c.pi1 * sr.value());
                ratio_pow *= c.ratio;
                sr.advance();
            }
            const double v10s =
                c.mu * c.rho1 / (1.0 + c.rho - sbar) * sum.value();
            return c.rho1 * (1.0 - c.pi1 + v10s) / q;
        }
        case Discipline::SA: {
            const auto cv = c_values(CVariant::mgf_sa, c, s);
            KahanSum sum;
            SeriesRatio sr(cv, g);
            double ratio_pow = c.ratio;
            for (int j = 0; j <= c.b_cap - 1; ++j) {
                sum.add((1.0 + c.rho1) * ratio_pow * c.pi1 * sr.value());
                ratio_pow *= c.ratio;
                sr.advance();
            }
            const double head = 1.0 + c.rho1 - sbar;
            const double v10s = c.mu * c.rho1 / head * sum.value();
            return c.rho1 *
                   ((1.0 + c.rho - sbar) * (1.0 + c.rho1) * t_pi +
                    head * v10s) /
                   (head * q);
        }
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------
// Explicit B = 2 moments
// ---------------------------------------------------------------------

namespace {

double poly_beta(const double* coef, int n, double beta) {
    KahanSum sum;
    double bp = 1.0;
    for (int i = 0; i <= n; ++i, bp *= beta) sum.add(coef[i] * bp);
    return sum.value();
}

MomentsPair moments_wp(const Ctx& c) {
    const double r = c.rho, r1 = c.rho1, b = c.beta, mu = c.mu;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r,
                 r6 = r5 * r, r7 = r6 * r;
    MomentsPair out;
    const double opr = 1 + r, opr2 = opr * opr, opr3 = opr2 * opr;
    const double g[6] = {
        r5,
        r4 * (3 + 2 * r),
        r1 * r1 * r + r1 * r2 * (r2 - 2) + r3 * opr * (5 + r),
        r1 * r1 + r1 * r * (3 * r2 - 2) + r2 * opr * (5 + 3 * r),
        3 * r1 * r2 + 3 * r * opr2,
        r1 * r + opr2};
    out.first = poly_beta(g, 5, b) /
                (mu * r1 * b * (b + r) * (b + r) *
                 (r2 + b * opr * (b + r)));
    const double p[8] = {
        r7,
        r6 * (4 + 3 * r) - r1 * r6,
        2 * r1 * r1 * r3 - 4 * r1 * r4 * opr + 3 * r5 * opr * (3 + r),
        r1 * r1 * r1 * r * (2 + r) + r1 * r1 * r2 * (r3 + r + 1) +
            r1 * r3 * (r3 - 12 * r - 8) +
            r4 * (r3 + 12 * r2 + 24 * r + 13),
        2 * r1 * r1 * r1 * opr + r1 * r1 * r * (4 * r3 + 2 * r + 1) +
            2 * r1 * r2 * (2 * r3 - 9 * r - 4) + r3 * opr2 * (13 + 4 * r),
        r1 * r1 * r1 + r1 * r1 * (6 * r3 + r + 2) +
            2 * r1 * r * (3 * r3 - 6 * r - 2) + 3 * r2 * opr2 * (3 + 2 * r),
        4 * r1 * r1 * r2 + 4 * r1 * r * (r2 - 1) + 4 * r * opr3,
        r1 * r1 * r + r1 * (r2 - 1) + opr3};
    out.second = 2 * poly_beta(p, 7, b) /
                 (mu * mu * r1 * r1 * b * b * std::pow(b + r, 3) *
                  (r2 + b * opr * (b + r)));
    return out;
}

MomentsPair moments_ps(const Ctx& c) {
    const double r = c.rho, r1 = c.rho1, b = c.beta, mu = c.mu;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r,
                 r6 = r5 * r, r7 = r6 * r;
    const double opr = 1 + r, opr2 = opr * opr, opr3 = opr2 * opr,
                 opr4 = opr3 * opr, opr5 = opr4 * opr;
    MomentsPair out;
    const double g[6] = {
        r5 * opr,
        r4 * opr * (3 + 2 * r) - r1 * r5,
        r1 * r1 * r * opr - 2 * r1 * r2 * (r2 + r + 1) +
            r3 * opr2 * (5 + r),
        r1 * r1 * opr - r1 * r * (r2 + 2 * r + 2) +
            r2 * opr2 * (5 + 3 * r),
        3 * r * opr3,
        opr3};
    out.first = poly_beta(g, 5, b) /
                (mu * r1 * b * opr * (b + r) * (b + r) *
                 (r2 + b * opr * (b + r)));
    const double p[8] = {
        r7 * opr2,
        r6 * opr2 * (4 + 3 * r) - r1 * r6 * opr * (1 + 2 * r),
        r1 * r1 * r3 * (-r3 + 2 * r2 + 4 * r + 2) -
            2 * r1 * r4 * opr * (r3 + 4 * r2 + 4 * r + 2) +
            3 * r5 * opr3 * (3 + r),
        r1 * r1 * r1 * r * opr * (2 + 3 * r) +
            r1 * r1 * r2 * (5 * r2 + 3 * r + 1) -
            r1 * r3 * opr * (7 * r3 + 20 * r2 + 20 * r + 8) +
            r4 * opr2 * (r3 + 12 * r2 + 24 * r + 13),
        2 * r1 * r1 * r1 * opr * (1 + 2 * r) +
            r1 * r1 * r * (3 * r3 + 9 * r2 + 4 * r + 1) -
            2 * r1 * r2 * opr * (5 * r3 + 14 * r2 + 13 * r + 4) +
            r3 * opr2 * (4 * r3 + 21 * r2 + 30 * r + 13),
        r1 * r1 * r1 * opr + r1 * r1 * (2 * r3 + 6 * r2 + 5 * r + 2) -
            4 * r1 * r * opr * (2 * r3 + 5 * r2 + 4 * r + 1) +
            3 * r2 * opr4 * (3 + 2 * r),
        4 * r * opr5 - 4 * r1 * r * opr3,
        opr5 - r1 * opr3};
    out.second = 2 * poly_beta(p, 7, b) /
                 (mu * mu * r1 * r1 * b * b * std::pow(b + r, 3) * opr2 *
                  (r2 + b * opr * (b + r)));
    return out;
}

// SA general branch; regular at rho == beta and used everywhere.
MomentsPair moments_sa(const Ctx& c) {
    const double r = c.rho, r1 = c.rho1, b = c.beta, mu = c.mu;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r,
                 r6 = r5 * r, r7 = r6 * r;
    const double q1 = r1, q2 = r1 * r1, q3 = q2 * r1, q4 = q3 * r1,
                 q5 = q4 * r1;
    const double opr = 1 + r, opr2 = opr * opr, opr3 = opr2 * opr;
    const double opq = 1 + r1, opq2 = opq * opq;
    MomentsPair out;
    const double g[6] = {
        r5 * opq,
        -q2 * r4 + r4 * (2 * r + 3) * opq,
        q3 * r - q2 * r * opr * (3 * r - 1) +
            q1 * r2 * (r3 + 7 * r2 + 5 * r - 2) + r3 * opr * (5 + r),
        q3 + q2 * (-4 * r2 - 2 * r + 1) +
            q1 * r * (3 * r3 + 11 * r2 + 5 * r - 2) +
            r2 * opr * (5 + 3 * r),
        -3 * q2 * r + 3 * q1 * r * (r2 + 3 * r + 1) + 3 * r * opr2,
        -q2 + q1 * (r2 + 3 * r + 1) + opr2};
    out.first = poly_beta(g, 5, b) /
                (mu * r1 * b * opq * (b + r) * (b + r) *
                 (r2 + b * opr * (b + r)));
    const double p[8] = {
        r7 * opq2,
        -2 * q3 * r6 + q2 * r6 * (1 + 3 * r) + q1 * r6 * (7 + 6 * r) +
            r6 * (4 + 3 * r),
        2 * q4 * r3 - q3 * r3 * (2 * r3 + 9 * r2 + 4 * r - 4) +
            q2 * r3 * (3 * r4 + 10 * r3 - 3 * r2 - 8 * r + 2) +
            2 * q1 * r4 * (3 * r3 + 12 * r2 + 7 * r - 2) +
            3 * r5 * opr * (3 + r),
        2 * q5 * r + q4 * r * (3 * r2 + 2 * r + 4) -
            q3 * r * (8 * r4 + 24 * r3 + 4 * r2 - 3 * r - 2) +
            q2 * r2 * (r5 + 13 * r4 + 17 * r3 - 19 * r2 - 15 * r + 1) +
            q1 * r3 * (2 * r4 + 25 * r3 + 48 * r2 + 14 * r - 8) +
            r4 * opr * (r2 + 11 * r + 13),
        2 * q5 + q4 * (6 * r2 + 3 * r + 4) -
            q3 * (14 * r4 + 35 * r3 - 4 * r - 2) +
            q2 * r * (4 * r5 + 25 * r4 + 20 * r3 - 33 * r2 - 14 * r + 1) +
            2 * q1 * r2 * (4 * r4 + 23 * r3 + 30 * r2 + 4 * r - 4) +
            r3 * (13 + 4 * r) * opr2,
        3 * q4 * opr - q3 * (14 * r3 + 27 * r2 - 5) +
            q2 * (6 * r5 + 27 * r4 + 16 * r3 - 23 * r2 - 7 * r + 2) +
            2 * q1 * r * (6 * r4 + 24 * r3 + 24 * r2 + 3 * r - 2) +
            3 * r2 * (3 + 2 * r) * opr2,
        -4 * q3 * r * (3 + 2 * r) + 4 * q2 * r * (r3 + 4 * r2 + 2 * r - 2) +
            4 * q1 * r * opr * (2 * r2 + 5 * r + 1) + 4 * r * opr3,
        -q3 * (3 + 2 * r) + q2 * (r3 + 4 * r2 + 2 * r - 2) +
            q1 * opr * (2 * r2 + 5 * r + 1) + opr3};
    out.second = 2 * poly_beta(p, 7, b) /
                 (mu * mu * r1 * r1 * b * b * std::pow(b + r, 3) * opq2 *
                  (r2 + b * opr * (b + r)));
    return out;
}

}  // namespace

MomentsPair moments_b2(Discipline d, const SystemParams& params,
                       int source) {
    if (params.battery_capacity != 2)
        throw std::invalid_argument(
            "explicit moment formulas require battery_capacity == 2");
    const Ctx c = make_ctx(params, source);
    switch (d) {
        case Discipline::WP: return moments_wp(c);
        case Discipline::PS: return moments_ps(c);
        case Discipline::SA: return moments_sa(c);
    }
    throw std::logic_error("unreachable");
}

MomentsPair moments_b2_equal_rates_raw(Discipline d,
                                       const SystemParams& params,
                                       int source) {
    if (params.battery_capacity != 2)
        throw std::invalid_argument(
            "explicit moment formulas require battery_capacity == 2");
    const Ctx c = make_ctx(params, source);
    if (!equal_rates(c.rho, c.beta))
        throw std::invalid_argument(
            "equal-rates branch requires rho == beta");
    const double r = c.rho, r1 = c.rho1, rm = c.rho_other, mu = c.mu;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
    const double opr = 1 + r, opr2 = opr * opr;
    const double q1 = r1, q2 = r1 * r1, q3 = q2 * r1, q4 = q3 * r1,
                 q5 = q4 * r1;
    MomentsPair out;
    switch (d) {
        case Discipline::WP: {
            out.first = (q2 + 4 * q1 * r3 + 2 * rm * r +
                         r2 * (4 * r4 + 12 * r + 7)) /
                        (2 * mu * r1 * r2 * (3 + 2 * r));
            const double z0 = r3 * (8 * r3 + 36 * r2 + 28 * r + 15);
            out.second = (2 * q3 * opr + q2 * r * (8 * r3 + 2 * r + 3) +
                          8 * q1 * r5 + 2 * rm * r2 * (6 + 13 * r) + z0) /
                         (2 * mu * mu * q2 * r3 * (3 + 2 * r));
            return out;
        }
        case Discipline::PS: {
            out.first = (q2 * opr + 2 * rm * r * (r2 + r + 1) +
                         r2 * (4 * r3 + 14 * r2 + 19 * r + 7)) /
                        (2 * mu * r1 * r2 * opr * (3 + 2 * r));
            const double z1 =
                2 * r2 * opr * (8 * r3 + 22 * r2 + 19 * r + 6);
            const double z0 =
                r3 * opr * (3 + 2 * r) * (4 * r3 + 8 * r2 + 11 * r + 5);
            out.second = (2 * q3 * opr * (1 + 2 * r) +
                          q2 * r * (2 * r3 + 11 * r2 + 8 * r + 3) +
                          rm * z1 + z0) /
                         (2 * mu * mu * q2 * r3 * opr2 * (3 + 2 * r));
            return out;
        }
        case Discipline::SA: {
            out.first = (q3 + q2 + q1 * r2 * (4 * r2 + 10 * r + 7) +
                         r2 * (4 * r2 + 12 * r + 5) +
                         2 * rm * r * (r1 * (3 * r + 1) + 2)) /
                        (2 * mu * r1 * r2 * (1 + r1) * (3 + 2 * r));
            const double z9 = 12 * r2;
            const double z8 = r2 * (43 * r + 22);
            const double z7 = r2 * (18 * r + 4);
            const double z6 = r2 * (24 * r2 + 74 * r + 8);
            const double z5 = 2;
            const double z4 = 6 * r2 + 5 * r + 4;
            const double z3 = 2 * (4 * r + 1);
            const double z2 = r * (8 * r5 + 20 * r4 + 3);
            const double z1 = r3 * (16 * r3 + 62 * r2 + 61 * r + 6);
            const double z0 = r3 * (8 * r3 + 36 * r2 + 54 * r + 15);
            out.second =
                (z0 + q1 * z1 + q2 * z2 + q3 * z3 + q4 * z4 + q5 * z5 +
                 rm * q2 * z6 + rm * rm * q1 * z7 + rm * q1 * z8 +
                 rm * z9) /
                (2 * mu * mu * q2 * r3 * (1 + r1) * (1 + r1) *
                 (3 + 2 * r));
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace aoi
