#include "entrokl/reports.hpp"

#include "entrokl/json_writer.hpp"

namespace entrokl {

namespace {

void write_point(JsonWriter& w, const std::vector<double>& x) {
  w.begin_array();
  for (double v : x) w.value(v);
  w.end_array();
}

}  // namespace

std::string estimate_report_json(const EntropyEstimate& estimate,
                                 std::int64_t duplicates_handled, std::uint64_t seed) {
  JsonWriter w;
  w.begin_object();
  w.key("h_n").value(estimate.h_n);
  w.key("n").value(estimate.n);
  w.key("dim").value(estimate.dim);
  w.key("log_rho_bar").value(estimate.log_rho_bar);
  w.key("method").value(std::string_view(nn_method_name(estimate.method)));
  w.key("duplicates_handled").value(duplicates_handled);
  w.key("seed").value(seed);
  w.end_object();
  return w.str();
}

std::string functional_report_json(const FunctionalEstimate& estimate) {
  JsonWriter w;
  w.begin_object();
  w.key("kind").value(std::string_view(functional_kind_name(estimate.kind)));
  w.key("params").begin_object();
  for (const auto& [name, value] : estimate.params) w.key(name).value(value);
  w.end_object();
  w.key("value").value(estimate.value);
  w.key("std_error").value(estimate.std_error);
  if (estimate.kind == FunctionalKind::A) {
    w.key("half_value").value(estimate.half_value);
    w.key("half_std_error").value(estimate.half_std_error);
    w.key("stable").value(estimate.stable);
  }
  w.key("n_outer").value(estimate.n_outer);
  w.key("n_inner").value(estimate.n_inner);
  w.key("seed").value(estimate.seed);
  w.key("flags").begin_array();
  for (const auto& flag : estimate.flags) w.value(std::string_view(flag));
  w.end_array();
  w.end_object();
  return w.str();
}

std::string minorization_report_json(const MinorizationReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("kind").value(std::string_view("minorization"));
  w.key("params").begin_object();
  w.key("r").value(report.big_r);
  w.end_object();
  w.key("lambda_min").value(report.lambda_min);
  w.key("c").value(report.c);
  w.key("n_probes").value(static_cast<std::int64_t>(report.probes.size()));
  w.key("all_ok").value(report.all_ok);
  w.key("min_margin").value(report.min_margin);
  w.key("seed").value(report.seed);
  w.key("probes").begin_array();
  for (const auto& probe : report.probes) {
    w.begin_object();
    w.key("x");
    write_point(w, probe.x);
    w.key("f_x").value(probe.f_x);
    w.key("m_hat").value(probe.m_hat);
    w.key("std_error").value(probe.std_error);
    w.key("bound").value(probe.bound);
    w.key("margin").value(probe.margin);
    w.key("ok").value(probe.ok);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string log_moment_report_json(const LogMomentIdentityReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("kind").value(std::string_view("lemmaG"));
  w.key("params").begin_object();
  w.key("rate").value(report.rate);
  w.key("quad_tol").value(report.quad_tol);
  w.end_object();
  w.key("identity1_lhs").value(report.identity1_lhs);
  w.key("identity1_rhs").value(report.identity1_rhs);
  w.key("identity1_abs_diff").value(std::fabs(report.identity1_lhs - report.identity1_rhs));
  w.key("identity2_lhs").value(report.identity2_lhs);
  w.key("identity2_rhs").value(report.identity2_rhs);
  w.key("identity2_abs_diff").value(std::fabs(report.identity2_lhs - report.identity2_rhs));
  w.key("ok").value(report.ok);
  w.end_object();
  return w.str();
}

std::string conditional_law_report_json(const ConditionalLawReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("x");
  write_point(w, report.x);
  w.key("n").value(report.n);
  w.key("reps").value(report.reps);
  w.key("ks_distance").value(report.ks_distance);
  w.key("empirical_mean_log").value(report.empirical_mean_log);
  w.key("target_mean_log").value(report.target_mean_log);
  w.key("rate").value(report.rate);
  w.key("seed").value(report.seed);
  w.end_object();
  return w.str();
}

std::string convergence_report_json(const ConvergenceReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("density_spec").raw(report.density_spec_json);
  w.key("n_grid").begin_array();
  for (std::int64_t n : report.n_grid) w.value(n);
  w.end_array();
  w.key("reps").value(report.reps);
  w.key("per_n").begin_array();
  for (const auto& point : report.per_n) {
    w.begin_object();
    w.key("n").value(point.n);
    w.key("mean_h").value(point.mean_h);
    w.key("bias").value(point.bias);
    w.key("var_h").value(point.var_h);
    w.key("mse").value(point.mse);
    w.key("se_mean").value(point.se_mean);
    w.end_object();
  }
  w.end_array();
  w.key("h_true").value(report.h_true);
  w.key("master_seed").value(report.master_seed);
  w.key("backend").value(std::string_view(nn_method_name(report.backend)));
  w.key("failures").begin_array();
  for (const auto& failure : report.failures) {
    w.begin_object();
    w.key("n").value(failure.n);
    w.key("rep").value(failure.rep);
    w.key("seed").value(failure.seed);
    w.key("message").value(std::string_view(failure.message));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string convergence_report_csv(const ConvergenceReport& report) {
  std::string out = "n,rep,h_n,seed\n";
  for (const auto& record : report.rep_records) {
    out += std::to_string(record.n);
    out += ',';
    out += std::to_string(record.rep);
    out += ',';
    out += format_double(record.h_n);
    out += ',';
    out += std::to_string(record.seed);
    out += '\n';
  }
  return out;
}

std::string variance_decomposition_json(const VarianceDecomposition& report) {
  JsonWriter w;
  w.begin_object();
  w.key("n").value(report.n);
  w.key("reps").value(report.reps);
  w.key("var_h_direct").value(report.var_h_direct);
  w.key("var_zeta1").value(report.var_zeta1);
  w.key("cov_zeta12").value(report.cov_zeta12);
  w.key("recombined").value(report.recombined);
  w.key("abs_diff").value(report.abs_diff);
  w.key("se_combined").value(report.se_combined);
  w.key("ok").value(report.ok);
  w.key("master_seed").value(report.master_seed);
  w.end_object();
  return w.str();
}

}  // namespace entrokl
