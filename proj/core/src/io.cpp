#include "henon/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace henon {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string fmt_or_null(double v) {
  return std::isfinite(v) ? fmt17(v) : "null";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string params_json(const ProblemParams& p) {
  std::ostringstream os;
  os << "{\"dim\":" << p.dim << ",\"alpha\":" << fmt17(p.alpha)
     << ",\"delta\":" << fmt17(p.delta) << ",\"beta\":" << fmt17(p.beta)
     << "}";
  return os.str();
}

std::string stats_json(const StepStats& st) {
  std::ostringstream os;
  os << "{\"n_steps\":" << st.n_steps << ",\"n_accepted\":" << st.n_accepted
     << ",\"n_rejected\":" << st.n_rejected << ",\"n_rhs\":" << st.n_rhs
     << ",\"h_min\":" << fmt17(st.h_min) << ",\"h_max\":" << fmt17(st.h_max)
     << "}";
  return os.str();
}

}  // namespace

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PreconditionError("cannot open for writing: " + path);
  out << body;
}

void write_profile_csv(const std::string& path, const RadialProfile& prof) {
  std::ostringstream os;
  os << "r,u,du,lap,dlap\n";
  for (const RadialState& s : prof.samples)
    os << fmt17(s.r) << ',' << fmt17(s.u) << ',' << fmt17(s.du) << ','
       << fmt17(s.lap) << ',' << fmt17(s.dlap) << '\n';
  write_text(path, os.str());
}

void write_profile2_csv(const std::string& path, const Profile2& prof) {
  std::ostringstream os;
  os << "r,u,du\n";
  for (const Sample2& s : prof.samples)
    os << fmt17(s.r) << ',' << fmt17(s.u) << ',' << fmt17(s.du) << '\n';
  write_text(path, os.str());
}

void write_log_csv(const std::string& path, const LogProfile& log,
                   const EnergyTrace* energy) {
  std::ostringstream os;
  os << (energy ? "s,w,w1,E\n" : "s,w,w1\n");
  std::size_t j = 0;
  for (const LogSample& ls : log.samples) {
    os << fmt17(ls.s) << ',' << fmt17(ls.w) << ',' << fmt17(ls.w1);
    if (energy) {
      while (j < energy->samples.size() && energy->samples[j].first < ls.s)
        ++j;
      if (j < energy->samples.size() && energy->samples[j].first == ls.s)
        os << ',' << fmt17(energy->samples[j].second);
      else
        os << ',';
    }
    os << '\n';
  }
  write_text(path, os.str());
}

void write_witness_csv(const std::string& path, const std::vector<double>& r,
                       const std::vector<double>& phi) {
  std::ostringstream os;
  os << "r,phi\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    os << fmt17(r[i]) << ',' << fmt17(phi[i]) << '\n';
  write_text(path, os.str());
}

std::string profile_sidecar_json(const RadialProfile& prof) {
  std::ostringstream os;
  os << "{\"params\":" << params_json(prof.params) << ",\"classification\":{"
     << "\"kind\":"
     << (prof.status.kind == RunStatus::kGlobal ? "\"Global\"" : "\"BlowUp\"")
     << ",\"r_reached\":" << fmt17(prof.status.r_reached)
     << ",\"lap_crossed\":" << (prof.status.lap_crossed ? "true" : "false")
     << ",\"lap_cross_r\":" << fmt17(prof.status.lap_cross_r)
     << ",\"threshold_hit\":" << (prof.status.threshold_hit ? "true" : "false")
     << "},\"stats\":" << stats_json(prof.stats) << ",\"options\":{"
     << "\"rtol\":" << fmt17(prof.opts.rtol)
     << ",\"atol\":" << fmt17(prof.opts.atol)
     << ",\"r_start\":" << fmt17(prof.opts.r_start)
     << ",\"checkpoint_ratio\":" << fmt17(prof.opts.checkpoint_ratio)
     << "},\"n_samples\":" << prof.samples.size() << "}";
  return os.str();
}

void write_profile_sidecar(const std::string& path,
                           const RadialProfile& prof) {
  write_text(path, profile_sidecar_json(prof));
}

SidecarData read_profile_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open sidecar: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  SidecarData d;
  d.params.dim = j["params"]["dim"].get<int>();
  d.params.alpha = j["params"]["alpha"].get<double>();
  d.params.delta = j["params"]["delta"].get<double>();
  d.params.beta = j["params"]["beta"].get<double>();
  d.kind = j["classification"]["kind"].get<std::string>();
  d.r_reached = j["classification"]["r_reached"].get<double>();
  d.lap_crossed = j["classification"]["lap_crossed"].get<bool>();
  d.lap_cross_r = j["classification"]["lap_cross_r"].get<double>();
  d.threshold_hit = j["classification"]["threshold_hit"].get<bool>();
  d.stats.n_steps = j["stats"]["n_steps"].get<std::uint64_t>();
  d.stats.n_accepted = j["stats"]["n_accepted"].get<std::uint64_t>();
  d.stats.n_rejected = j["stats"]["n_rejected"].get<std::uint64_t>();
  d.stats.n_rhs = j["stats"]["n_rhs"].get<std::uint64_t>();
  d.stats.h_min = j["stats"]["h_min"].get<double>();
  d.stats.h_max = j["stats"]["h_max"].get<double>();
  d.opts.rtol = j["options"]["rtol"].get<double>();
  d.opts.atol = j["options"]["atol"].get<double>();
  d.opts.r_start = j["options"]["r_start"].get<double>();
  d.opts.checkpoint_ratio = j["options"]["checkpoint_ratio"].get<double>();
  return d;
}

std::string shoot_result_json(const ShootResult& res) {
  std::ostringstream os;
  os << "{\"params\":" << params_json(res.params)
     << ",\"beta0\":" << fmt17(res.beta0)
     << ",\"beta_low\":" << fmt17(res.beta_low)
     << ",\"beta_high\":" << fmt17(res.beta_high)
     << ",\"bracket\":" << fmt17(res.beta_high - res.beta_low)
     << ",\"iterations\":" << res.iterations
     << ",\"r_max_used\":" << fmt17(res.r_max_used)
     << ",\"low_certificate\":" << quoted(res.low_certificate)
     << ",\"heuristic_used\":" << (res.heuristic_used ? "true" : "false")
     << "}";
  return os.str();
}

std::string stability_report_json(const StabilityReport& rep,
                                  const ProblemParams& params, double beta) {
  const char* cls = rep.classification == StabilityClass::kStable
                        ? "Stable"
                        : rep.classification == StabilityClass::kStableAtInfinity
                              ? "StableAtInfinity"
                              : "UnstableAtInfinity";
  std::ostringstream os;
  ProblemParams p = params;
  p.beta = beta;
  os << "{\"params\":" << params_json(p) << ",\"classification\":"
     << quoted(cls)
     << ",\"hardy_margin_global\":" << fmt_or_null(rep.hardy_margin_global)
     << ",\"hardy_margin_tail\":" << fmt_or_null(rep.hardy_margin_tail)
     << ",\"tail_radius\":" << fmt_or_null(rep.tail_radius)
     << ",\"min_eig\":" << fmt17(rep.min_eig_value)
     << ",\"eig_domain\":[" << fmt17(rep.eig_domain_lo) << ','
     << fmt17(rep.eig_domain_hi) << "]"
     << ",\"eig_converged\":" << (rep.eig_converged ? "true" : "false")
     << ",\"has_witness\":" << (rep.has_witness ? "true" : "false")
     << ",\"witness_q_independent\":" << fmt17(rep.witness_q_independent)
     << ",\"certificate\":" << quoted(rep.certificate) << "}";
  return os.str();
}

}  // namespace henon
