#include "aoi/chains.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoi {

namespace {

const BinaryMat2 kKeepAge = BinaryMat2::of(1, 0, 0, 0);    // x' = [x0, 0]
const BinaryMat2 kCopyAge = BinaryMat2::of(1, 1, 0, 0);    // x' = [x0, x0]
const BinaryMat2 kDeliver = BinaryMat2::of(0, 0, 1, 0);    // x' = [x1, 0]

// Relative branch threshold for the rho == beta special cases.
bool rates_equal(double rho, double beta) {
    return std::abs(rho - beta) <= 1e-9 * std::max(rho, beta);
}

std::string lambda_label(int i) { return "lambda_" + std::to_string(i); }

}  // namespace

const char* to_string(Discipline d) {
    switch (d) {
        case Discipline::WP: return "wp";
        case Discipline::PS: return "ps";
        case Discipline::SA: return "sa";
    }
    return "?";
}

Discipline discipline_from_string(const std::string& s) {
    if (s == "wp") return Discipline::WP;
    if (s == "ps") return Discipline::PS;
    if (s == "sa") return Discipline::SA;
    throw std::invalid_argument("unknown discipline '" + s +
                                "' (expected wp|ps|sa)");
}

int state_id(Discipline d, int n_sources, int battery, int occupant) {
    if (battery == 0) {
        if (occupant != 0)
            throw std::invalid_argument("busy state requires battery >= 1");
        return 1;
    }
    if (d == Discipline::SA)
        return 2 + occupant + (battery - 1) * (n_sources + 1);
    return occupant == 0 ? 2 * battery : 2 * battery + 1;
}

int state_count(Discipline d, int n_sources, int battery_capacity) {
    return d == Discipline::SA ? 1 + battery_capacity * (n_sources + 1)
                               : 2 * battery_capacity + 1;
}

namespace {

// WP and PS share states and the non-preemptive transition families; PS
// adds the two self-preemption transitions on every busy state.
ShsModel build_wp_ps(const SystemParams& params, int source,
                     bool preemptive) {
    const DerivedRates d = derive(params, source);
    const int b_cap = params.battery_capacity;
    const Discipline disc = preemptive ? Discipline::PS : Discipline::WP;

    ShsModel m;
    m.states.push_back({1, 0, 0});
    for (int k = 1; k <= b_cap; ++k) {
        m.states.push_back({state_id(disc, params.n_sources, k, 0), k, 0});
        m.states.push_back({state_id(disc, params.n_sources, k, 1), k, 1});
    }

    const double lam1 = params.arrival_rates[source - 1];
    for (int k = 1; k <= b_cap; ++k) {
        const int idle_prev = state_id(disc, params.n_sources, k - 1, 0);
        const int idle = state_id(disc, params.n_sources, k, 0);
        const int busy = state_id(disc, params.n_sources, k, 1);
        m.transitions.push_back(
            {idle_prev, idle, params.energy_rate, "eta", kKeepAge});
        m.transitions.push_back({idle, busy, lam1, "lambda_s", kKeepAge});
        if (d.other_rate > 0.0)
            m.transitions.push_back(
                {idle, busy, d.other_rate, "lambda_other", kCopyAge});
        m.transitions.push_back(
            {busy, idle_prev, params.service_rate, "mu", kDeliver});
        if (preemptive) {
            m.transitions.push_back({busy, busy, lam1, "lambda_s", kKeepAge});
            if (d.other_rate > 0.0)
                m.transitions.push_back(
                    {busy, busy, d.other_rate, "lambda_other", kCopyAge});
        }
    }
    return m;
}

}  // namespace

ShsModel build_wp(const SystemParams& params, int source) {
    return build_wp_ps(params, source, false);
}

ShsModel build_ps(const SystemParams& params, int source) {
    return build_wp_ps(params, source, true);
}

ShsModel build_sa(const SystemParams& params, int source) {
    derive(params, source);  // validation
    const int n = params.n_sources;
    const int b_cap = params.battery_capacity;

    ShsModel m;
    m.states.push_back({1, 0, 0});
    for (int k = 1; k <= b_cap; ++k) {
        m.states.push_back({state_id(Discipline::SA, n, k, 0), k, 0});
        for (int i = 1; i <= n; ++i)
            m.states.push_back({state_id(Discipline::SA, n, k, i), k, i});
    }

    // Age components track the source of interest; a packet of any other
    // source never carries its age, so every transition except the tracked
    // source's delivery zeroes or keeps x as [x0, *].
    for (int k = 1; k <= b_cap; ++k) {
        const int idle_prev = state_id(Discipline::SA, n, k - 1, 0);
        const int idle = state_id(Discipline::SA, n, k, 0);
        m.transitions.push_back(
            {idle_prev, idle, params.energy_rate, "eta", kKeepAge});
        for (int i = 1; i <= n; ++i) {
            const int busy = state_id(Discipline::SA, n, k, i);
            const double lam_i = params.arrival_rates[i - 1];
            m.transitions.push_back(
                {idle, busy, lam_i, lambda_label(i), kKeepAge});
            m.transitions.push_back(
                {busy, busy, lam_i, lambda_label(i), kKeepAge});
            m.transitions.push_back({busy, idle_prev, params.service_rate,
                                     "mu",
                                     i == source ? kDeliver : kKeepAge});
        }
    }
    return m;
}

ShsModel build_chain(Discipline d, const SystemParams& params, int source) {
    switch (d) {
        case Discipline::WP: return build_wp(params, source);
        case Discipline::PS: return build_ps(params, source);
        case Discipline::SA: return build_sa(params, source);
    }
    throw std::logic_error("unreachable");
}

SteadyState steady_state_closed(Discipline d, const SystemParams& params,
                                int source) {
    const DerivedRates dr = derive(params, source);
    const double rho = dr.server_utilization;
    const double beta = dr.energy_utilization;
    const int b_cap = params.battery_capacity;
    const int n = params.n_sources;

    double pi1;
    if (rates_equal(rho, beta)) {
        pi1 = 1.0 / (1.0 + b_cap * (1.0 + rho));
    } else {
        const double rb = std::pow(rho, b_cap) * (beta - rho);
        pi1 = rb / (rb + beta * (1.0 + rho) *
                             (std::pow(beta, b_cap) - std::pow(rho, b_cap)));
    }

    SteadyState ss;
    ss.pi.assign(state_count(d, n, b_cap), 0.0);
    ss.pi[0] = pi1;
    double ratio_pow = 1.0;
    for (int k = 1; k <= b_cap; ++k) {
        ratio_pow *= beta / rho;
        ss.pi[state_id(d, n, k, 0) - 1] = ratio_pow * pi1;
        if (d == Discipline::SA) {
            for (int i = 1; i <= n; ++i)
                ss.pi[state_id(d, n, k, i) - 1] =
                    (params.arrival_rates[i - 1] / params.service_rate) *
                    ratio_pow * pi1;
        } else {
            ss.pi[state_id(d, n, k, 1) - 1] = rho * ratio_pow * pi1;
        }
    }
    return ss;
}

}  // namespace aoi
