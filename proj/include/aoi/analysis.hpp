// Report-level drivers: evaluate one source's AoI statistics through either
// the closed forms or the generic SHS engine, and compare disciplines.
#pragma once

#include "aoi/chains.hpp"
#include "aoi/closed_form.hpp"
#include "aoi/params.hpp"

#include <string>
#include <vector>

namespace aoi {

enum class Method { closed, shs };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct AoiReport {
    Discipline discipline = Discipline::WP;
    int source = 1;
    double mean = 0.0;           // time
    double second_moment = 0.0;  // time^2
    double std_dev = 0.0;        // time
    // Samples of the MGF at the requested normalized exponents sbar;
    // only exponents strictly below domain_bound are evaluable.
    std::vector<std::pair<double, double>> mgf_samples;
    double domain_bound = 0.0;   // sbar units
};

// mgf_at lists normalized exponents sbar = s / mu. The second moment uses
// the explicit B = 2 formulas when available (closed method, B = 2) and
// numerical differentiation of the MGF otherwise.
AoiReport analyze(const SystemParams& params, Discipline d, int source,
                  Method method, const std::vector<double>& mgf_at = {});

struct CompareRow {
    Discipline discipline = Discipline::WP;
    std::vector<AoiReport> per_source;  // index i -> source i+1
    double sum_aoi = 0.0;
    double jfi = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;  // WP, PS, SA
    // Pairwise mean gaps; direct formulas under the closed method, plain
    // differences under the engine method.
    double gap_wp_ps = 0.0;
    double gap_wp_sa = 0.0;
    double gap_sa_ps = 0.0;
};

CompareResult compare(const SystemParams& params, int source, Method method,
                      const std::vector<double>& mgf_at = {});

}  // namespace aoi
