#pragma once

#include "mdpaccel/iteration_matrix.hpp"
#include "mdpaccel/solve.hpp"
#include "mdpaccel/types.hpp"

#include <json.hpp>

#include <string>

namespace mdpaccel {

/// Instance serialization. Doubles round-trip exactly (the serializer emits
/// shortest-exact decimal forms). Unknown keys are rejected to catch typos in
/// hand-written files.
nlohmann::json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const nlohmann::json& j);

void save_mdp(const Mdp& mdp, const std::string& path);
Mdp load_mdp(const std::string& path);

/// Report JSON: status, iterations, wall_time_ns, plus the run's metadata.
nlohmann::json report_to_json(const SolveReport& report, const std::string& solver,
                              const std::string& schedule, double lambda,
                              double epsilon);

/// Trace CSV with header `iteration,diff_norm,error_to_oracle`; rows start at
/// iteration 1 (the first computed update); the error column is empty when
/// the run had no oracle.
std::string trace_to_csv(const SolveReport& report);

/// Spectrum/radius report: {variant, lambda, kappa, predicted_radius,
/// eigen_moduli, reversible}.
nlohmann::json spectrum_to_json(const IterationMatrix& im, bool reversible);

}  // namespace mdpaccel
