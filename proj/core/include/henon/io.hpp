#pragma once

#include <string>

#include "henon/asymptotics.hpp"
#include "henon/radial.hpp"
#include "henon/second_order.hpp"
#include "henon/shooting.hpp"
#include "henon/stability.hpp"

namespace henon {

// Decimal serialization with 17 significant digits: enough to round-trip any
// finite double bit-exactly.
std::string fmt17(double v);

void write_text(const std::string& path, const std::string& body);

void write_profile_csv(const std::string& path, const RadialProfile& prof);
void write_profile2_csv(const std::string& path, const Profile2& prof);
void write_log_csv(const std::string& path, const LogProfile& log,
                   const EnergyTrace* energy = nullptr);
void write_witness_csv(const std::string& path, const std::vector<double>& r,
                       const std::vector<double>& phi);

std::string profile_sidecar_json(const RadialProfile& prof);
void write_profile_sidecar(const std::string& path, const RadialProfile& prof);

struct SidecarData {
  ProblemParams params;
  std::string kind;
  double r_reached = 0;
  bool lap_crossed = false;
  double lap_cross_r = 0;
  bool threshold_hit = false;
  StepStats stats;
  IntegrateOptions opts;
};

SidecarData read_profile_sidecar(const std::string& path);

std::string shoot_result_json(const ShootResult& res);
std::string stability_report_json(const StabilityReport& rep,
                                  const ProblemParams& params, double beta);

}  // namespace henon
