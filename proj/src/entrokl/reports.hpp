#pragma once

#include <string>

#include "entrokl/conditions.hpp"
#include "entrokl/diagnostics.hpp"
#include "entrokl/estimator.hpp"
#include "entrokl/experiments.hpp"

namespace entrokl {

// JSON report emission. Field names and order are part of the external
// interface; doubles carry 17 significant digits.

std::string estimate_report_json(const EntropyEstimate& estimate,
                                 std::int64_t duplicates_handled, std::uint64_t seed);

std::string functional_report_json(const FunctionalEstimate& estimate);

std::string minorization_report_json(const MinorizationReport& report);

std::string log_moment_report_json(const LogMomentIdentityReport& report);

std::string conditional_law_report_json(const ConditionalLawReport& report);

std::string convergence_report_json(const ConvergenceReport& report);

// Raw per-rep records: header "n,rep,h_n,seed", one row per rep, LF endings.
std::string convergence_report_csv(const ConvergenceReport& report);

std::string variance_decomposition_json(const VarianceDecomposition& report);

}  // namespace entrokl
