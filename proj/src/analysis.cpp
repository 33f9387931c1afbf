#include "aoi/analysis.hpp"

#include "aoi/metrics.hpp"
#include "aoi/shs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoi {

const char* to_string(Method m) {
    return m == Method::closed ? "closed" : "shs";
}

Method method_from_string(const std::string& s) {
    if (s == "closed") return Method::closed;
    if (s == "shs") return Method::shs;
    throw std::invalid_argument("unknown method '" + s +
                                "' (expected closed|shs)");
}

AoiReport analyze(const SystemParams& params, Discipline d, int source,
                  Method method, const std::vector<double>& mgf_at) {
    params.validate();
    AoiReport r;
    r.discipline = d;
    r.source = source;
    const double mu = params.service_rate;

    if (method == Method::closed) {
        r.mean = avg_aoi_closed(d, params, source);
        r.domain_bound = mgf_domain_bound(d, params, source);
        auto m = [&](double sbar) {
            return mgf_closed(d, params, source, sbar);
        };
        if (params.battery_capacity == 2) {
            r.second_moment = moments_b2(d, params, source).second;
        } else {
            r.second_moment =
                moment_from_mgf(m, 2, mu, std::min(0.02, 0.5 * r.domain_bound));
        }
        for (double sbar : mgf_at) r.mgf_samples.emplace_back(sbar, m(sbar));
    } else {
        const ShsModel model = build_chain(d, params, source);
        const SteadyState pi = steady_state(model);
        r.mean = first_moment_vectors(model, pi).sum0();
        r.domain_bound = estimate_s0(model, pi) / mu;
        auto m = [&](double sbar) {
            return mgf_vectors(model, pi, sbar * mu).sum0();
        };
        r.second_moment =
            moment_from_mgf(m, 2, mu, std::min(0.02, 0.5 * r.domain_bound));
        for (double sbar : mgf_at) r.mgf_samples.emplace_back(sbar, m(sbar));
    }
    const double var = r.second_moment - r.mean * r.mean;
    r.std_dev = std::sqrt(std::max(var, 0.0));
    return r;
}

CompareResult compare(const SystemParams& params, int source, Method method,
                      const std::vector<double>& mgf_at) {
    CompareResult out;
    for (Discipline d : {Discipline::WP, Discipline::PS, Discipline::SA}) {
        CompareRow row;
        row.discipline = d;
        std::vector<double> means;
        for (int i = 1; i <= params.n_sources; ++i) {
            row.per_source.push_back(analyze(params, d, i, method, mgf_at));
            means.push_back(row.per_source.back().mean);
        }
        row.sum_aoi = sum_aoi(means);
        row.jfi = jfi(means);
        out.rows.push_back(std::move(row));
    }
    if (method == Method::closed) {
        out.gap_wp_ps = avg_gap(GapPair::wp_minus_ps, params, source);
        out.gap_wp_sa = avg_gap(GapPair::wp_minus_sa, params, source);
        out.gap_sa_ps = avg_gap(GapPair::sa_minus_ps, params, source);
    } else {
        const int i = source - 1;
        const double wp = out.rows[0].per_source[i].mean;
        const double ps = out.rows[1].per_source[i].mean;
        const double sa = out.rows[2].per_source[i].mean;
        out.gap_wp_ps = wp - ps;
        out.gap_wp_sa = wp - sa;
        out.gap_sa_ps = sa - ps;
    }
    return out;
}

}  // namespace aoi
