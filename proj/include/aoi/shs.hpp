// Generic SHS-for-AoI engine. A model is a finite continuous-time Markov
// chain whose transitions carry 2x2 binary reset maps acting on the age
// vector [x0, x1]. The engine solves the stationary linear systems for the
// state probabilities, the first-moment correlation vectors, and the MGF
// correlation vectors, from which average AoI and the MGF of AoI follow.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace aoi {

// 2x2 binary matrix; reset maps act on the right: x' = x * A.
struct BinaryMat2 {
    std::array<std::array<int, 2>, 2> m{{{0, 0}, {0, 0}}};

    static BinaryMat2 of(int a00, int a01, int a10, int a11) {
        BinaryMat2 r;
        r.m = {{{a00, a01}, {a10, a11}}};
        return r;
    }
    bool operator==(const BinaryMat2&) const = default;
};

// Diagonal companion of a reset map: hat(A)(k,j) = 1 iff k == j and
// column j of A is all-zero.
BinaryMat2 hat_matrix(const BinaryMat2& reset_map);

struct ShsState {
    int id = 0;        // 1-based, following the chain's figure numbering
    int energy = 0;    // battery level e_q in [0..B]
    int occupant = 0;  // 0 = idle; i >= 1 = source i in service
};

struct ShsTransition {
    int from = 0;  // state ids, 1-based; self-transitions allowed
    int to = 0;
    double rate = 0.0;
    std::string rate_label;  // symbolic rate for the model dump
    BinaryMat2 reset;
};

struct ShsModel {
    std::vector<ShsState> states;
    std::vector<ShsTransition> transitions;

    int size() const { return static_cast<int>(states.size()); }
    // Throws std::invalid_argument on bad ids, non-positive rates,
    // non-binary reset entries, or a chain that is not irreducible
    // (the message names the offending states).
    void validate() const;
    // Deterministic text rendering, one line per transition.
    std::string dump() const;
};

struct SteadyState {
    std::vector<double> pi;  // indexed like ShsModel::states
};

struct MomentVectors {
    // v[q] = [v_q0, v_q1]; tiny negative solver noise is clamped to 0,
    // raw_min reports the most negative raw component.
    std::vector<std::array<double, 2>> v;
    double raw_min = 0.0;

    double sum0() const;
};

struct MgfVectors {
    double s_value = 0.0;
    std::vector<std::array<double, 2>> vs;

    double sum0() const;
};

// Stationary probabilities: solves the balance equations with one row
// replaced by the normalization; the replaced row's residual is checked
// post hoc. Throws std::runtime_error on a singular/ill-posed system.
SteadyState steady_state(const ShsModel& model);

// First-moment correlation vectors given the stationary probabilities.
// Throws std::runtime_error if the system is singular or the solution is
// materially negative (no non-negative limit exists).
MomentVectors first_moment_vectors(const ShsModel& model,
                                   const SteadyState& pi);

// Average AoI: sum over states of v_q0.
double average_aoi(const ShsModel& model);

// MGF correlation vectors at exponent s (raw, not normalized by mu).
// Throws std::domain_error("s outside convergence region ...") when the
// system loses a valid solution for s > 0; the message carries a
// bracketed estimate of the convergence bound s0.
MgfVectors mgf_vectors(const ShsModel& model, const SteadyState& pi,
                       double s);

// MGF of AoI: sum over states of vs_q0.
double mgf(const ShsModel& model, double s);

// Bisection bracket (to 1e-6 absolute) of the smallest positive s at
// which the MGF system loses a valid componentwise-positive solution.
double estimate_s0(const ShsModel& model, const SteadyState& pi);

// k-th moment (k in {1,2}) of AoI from an MGF given as a function of the
// normalized exponent sbar = s/mu: returns d^k M / d sbar^k at 0 divided
// by mu^k, via central differences with Richardson extrapolation. h0 is
// the largest step used; the function must be evaluable on [-h0, h0].
double moment_from_mgf(const std::function<double(double)>& mgf_fn, int k,
                       double mu, double h0 = 0.02);

}  // namespace aoi
