#include "aoi/shs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aoi {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kNegNoiseTol = -1e-10;   // roundoff
constexpr double kNegFailTol = -1e-6;     // genuine infeasibility

// Sum of outgoing rates per state (self-transitions included; they enter
// both sides of every balance identically).
std::vector<double> outgoing_rates(const ShsModel& model) {
    std::vector<double> out(model.size(), 0.0);
    for (const auto& t : model.transitions) out[t.from - 1] += t.rate;
    return out;
}

void reachability(const ShsModel& model, bool reverse,
                  std::vector<char>& seen) {
    const int m = model.size();
    std::vector<std::vector<int>> adj(m);
    for (const auto& t : model.transitions) {
        int a = t.from - 1, b = t.to - 1;
        if (reverse) std::swap(a, b);
        adj[a].push_back(b);
    }
    seen.assign(m, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int n : adj[q])
            if (!seen[n]) {
                seen[n] = 1;
                stack.push_back(n);
            }
    }
}

}  // namespace

BinaryMat2 hat_matrix(const BinaryMat2& a) {
    BinaryMat2 h;
    for (int j = 0; j < 2; ++j)
        h.m[j][j] = (a.m[0][j] == 0 && a.m[1][j] == 0) ? 1 : 0;
    return h;
}

void ShsModel::validate() const {
    const int m = size();
    if (m == 0) throw std::invalid_argument("model has no states");
    for (int q = 0; q < m; ++q)
        if (states[q].id != q + 1)
            throw std::invalid_argument("state ids must be 1..m in order");
    for (const auto& t : transitions) {
        if (t.from < 1 || t.from > m || t.to < 1 || t.to > m)
            throw std::invalid_argument("transition endpoint out of range");
        if (!(t.rate > 0.0) || !std::isfinite(t.rate))
            throw std::invalid_argument("transition rate must be > 0");
        for (const auto& row : t.reset.m)
            for (int e : row)
                if (e != 0 && e != 1)
                    throw std::invalid_argument("reset map must be binary");
    }
    std::vector<char> fwd, bwd;
    reachability(*this, false, fwd);
    reachability(*this, true, bwd);
    std::string bad;
    for (int q = 0; q < m; ++q)
        if (!fwd[q] || !bwd[q]) bad += " " + std::to_string(q + 1);
    if (!bad.empty())
        throw std::invalid_argument(
            "chain is not irreducible; states not on a cycle through state 1:" +
            bad);
}

std::string ShsModel::dump() const {
    std::ostringstream os;
    int l = 0;
    for (const auto& t : transitions) {
        os << "l=" << ++l << " " << t.from << "->" << t.to << " rate="
           << t.rate_label << " A=[[" << t.reset.m[0][0] << ","
           << t.reset.m[0][1] << "],[" << t.reset.m[1][0] << ","
           << t.reset.m[1][1] << "]]\n";
    }
    return os.str();
}

double MomentVectors::sum0() const {
    double s = 0.0;
    for (const auto& p : v) s += p[0];
    return s;
}

double MgfVectors::sum0() const {
    double s = 0.0;
    for (const auto& p : vs) s += p[0];
    return s;
}

SteadyState steady_state(const ShsModel& model) {
    model.validate();
    const int m = model.size();
    const auto out = outgoing_rates(model);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int q = 0; q < m; ++q) a(q, q) = out[q];
    for (const auto& t : model.transitions)
        a(t.to - 1, t.from - 1) -= t.rate;

    // Keep the replaced row to check its balance residual afterwards.
    Eigen::RowVectorXd replaced = a.row(m - 1);
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd pi = lu.solve(b);

    double scale = *std::max_element(out.begin(), out.end());
    if (!pi.allFinite() || (a * pi - b).cwiseAbs().maxCoeff() >
                               kResidualTol * std::max(1.0, scale))
        throw std::runtime_error("steady state system is singular");
    double replaced_residual = std::abs(replaced.dot(pi));
    if (replaced_residual > kResidualTol * std::max(1.0, scale))
        throw std::runtime_error(
            "steady state inconsistent: dropped balance row residual " +
            std::to_string(replaced_residual));

    SteadyState ss;
    ss.pi.resize(m);
    for (int q = 0; q < m; ++q) {
        if (pi(q) < kNegFailTol)
            throw std::runtime_error("negative stationary probability");
        ss.pi[q] = std::max(pi(q), 0.0);
    }
    return ss;
}

namespace {

// Assembles and solves the 2m-unknown linear system shared by the
// first-moment (s = 0 diagonal, rhs = pi_q) and MGF cases. Unknown
// (q, j) lives at index 2q + j.
Eigen::VectorXd solve_correlation(const ShsModel& model,
                                  const std::vector<double>& out,
                                  double s_shift,
                                  const Eigen::VectorXd& rhs,
                                  bool* ok = nullptr) {
    const int m = model.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int q = 0; q < m; ++q)
        for (int j = 0; j < 2; ++j) a(2 * q + j, 2 * q + j) = out[q] - s_shift;
    for (const auto& t : model.transitions) {
        const int from = t.from - 1, to = t.to - 1;
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                if (t.reset.m[k][j])
                    a(2 * to + j, 2 * from + k) -= t.rate;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = lu.solve(rhs);
    double scale =
        std::max(1.0, *std::max_element(out.begin(), out.end()));
    bool good = x.allFinite() &&
                (a * x - rhs).cwiseAbs().maxCoeff() < kResidualTol * scale;
    if (ok)
        *ok = good;
    else if (!good)
        throw std::runtime_error("correlation-vector system is singular");
    return x;
}

Eigen::VectorXd mgf_rhs(const ShsModel& model, const SteadyState& pi) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * model.size());
    for (const auto& t : model.transitions) {
        const BinaryMat2 hat = hat_matrix(t.reset);
        for (int j = 0; j < 2; ++j)
            if (hat.m[j][j])
                rhs(2 * (t.to - 1) + j) += t.rate * pi.pi[t.from - 1];
    }
    return rhs;
}

// A solution of the MGF system is admissible when it exists and all
// zeroth components are non-negative (up to roundoff).
bool mgf_solution_valid(const ShsModel& model,
                        const std::vector<double>& out,
                        const SteadyState& pi, double s) {
    bool ok = false;
    Eigen::VectorXd x =
        solve_correlation(model, out, s, mgf_rhs(model, pi), &ok);
    if (!ok) return false;
    for (int q = 0; q < model.size(); ++q)
        if (x(2 * q) < kNegNoiseTol) return false;
    return true;
}

}  // namespace

MomentVectors first_moment_vectors(const ShsModel& model,
                                   const SteadyState& pi) {
    const int m = model.size();
    const auto out = outgoing_rates(model);
    Eigen::VectorXd rhs(2 * m);
    for (int q = 0; q < m; ++q) rhs(2 * q) = rhs(2 * q + 1) = pi.pi[q];
    Eigen::VectorXd x = solve_correlation(model, out, 0.0, rhs);

    MomentVectors mv;
    mv.v.resize(m);
    mv.raw_min = x.minCoeff();
    if (mv.raw_min < kNegFailTol)
        throw std::runtime_error(
            "no non-negative limit for the first-moment vectors (min "
            "component " +
            std::to_string(mv.raw_min) + ")");
    for (int q = 0; q < m; ++q)
        for (int j = 0; j < 2; ++j)
            mv.v[q][j] = std::max(x(2 * q + j), 0.0);
    return mv;
}

double average_aoi(const ShsModel& model) {
    return first_moment_vectors(model, steady_state(model)).sum0();
}

MgfVectors mgf_vectors(const ShsModel& model, const SteadyState& pi,
                       double s) {
    const int m = model.size();
    const auto out = outgoing_rates(model);
    bool ok = false;
    Eigen::VectorXd x = solve_correlation(model, out, s, mgf_rhs(model, pi),
                                          &ok);
    bool positive = true;
    if (ok)
        for (int q = 0; q < m && positive; ++q)
            if (x(2 * q) < kNegNoiseTol) positive = false;
    if (!ok || (s > 0.0 && !positive)) {
        double s0 = estimate_s0(model, pi);
        throw std::domain_error(
            "s outside convergence region: s = " + std::to_string(s) +
            ", estimated s0 = " + std::to_string(s0));
    }

    MgfVectors mg;
    mg.s_value = s;
    mg.vs.resize(m);
    for (int q = 0; q < m; ++q)
        for (int j = 0; j < 2; ++j) mg.vs[q][j] = x(2 * q + j);
    return mg;
}

double mgf(const ShsModel& model, double s) {
    return mgf_vectors(model, steady_state(model), s).sum0();
}

double estimate_s0(const ShsModel& model, const SteadyState& pi) {
    const auto out = outgoing_rates(model);
    const double scale =
        *std::max_element(out.begin(), out.end());

    // Grow until invalid, then bisect the validity boundary.
    double lo = 0.0;
    double hi = 0.01 * scale;
    int guard = 0;
    while (mgf_solution_valid(model, out, pi, hi)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 80)
            throw std::runtime_error("no finite MGF convergence bound found");
    }
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        (mgf_solution_valid(model, out, pi, mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double moment_from_mgf(const std::function<double(double)>& mgf_fn, int k,
                       double mu, double h0) {
    if (k != 1 && k != 2)
        throw std::invalid_argument("moment_from_mgf supports k in {1,2}");
    if (!(mu > 0.0) || !(h0 > 0.0))
        throw std::invalid_argument("mu and h0 must be > 0");

    constexpr int kLevels = 4;
    const double f0 = (k == 2) ? mgf_fn(0.0) : 0.0;
    // Central differences have an even error series in h, so each
    // extrapolation level removes an h^2 power.
    double tab[kLevels][kLevels];
    double h = h0;
    for (int i = 0; i < kLevels; ++i, h *= 0.5) {
        const double fp = mgf_fn(h), fm = mgf_fn(-h);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::runtime_error("MGF evaluation failed near 0");
        tab[i][0] = (k == 1) ? (fp - fm) / (2.0 * h)
                             : (fp - 2.0 * f0 + fm) / (h * h);
        double pow4 = 4.0;
        for (int j = 1; j <= i; ++j, pow4 *= 4.0)
            tab[i][j] = (pow4 * tab[i][j - 1] - tab[i - 1][j - 1]) /
                        (pow4 - 1.0);
    }
    return tab[kLevels - 1][kLevels - 1] / std::pow(mu, k);
}

}  // namespace aoi
