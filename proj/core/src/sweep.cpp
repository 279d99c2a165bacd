#include "henon/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "henon/asymptotics.hpp"
#include "henon/io.hpp"
#include "henon/quadrature.hpp"
#include "henon/shooting.hpp"
#include "henon/stability.hpp"

namespace henon {

namespace fs = std::filesystem;

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "tol") tol = std::stod(value);
  else if (key == "tol_beta") tol_beta = std::stod(value);
  else if (key == "r_max") r_max = std::stod(value);
  else if (key == "r_max_cap") r_max_cap = std::stod(value);
  else if (key == "grid") grid = std::stoi(value);
  else if (key == "out") out_dir = value;
  else if (key == "fixture") fixture_mode = (value == "1" || value == "true");
  else if (key == "jobs") jobs = std::stoi(value);
  else if (!key.empty()) throw PreconditionError("unknown config key: " + key);
  if (tol <= 0 || tol_beta <= 0)
    throw PreconditionError("tolerances must be positive");
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "fixture=" << (fixture_mode ? 1 : 0) << "\ngrid=" << grid
     << "\nr_max=" << fmt17(r_max) << "\nr_max_cap=" << fmt17(r_max_cap)
     << "\ntol=" << fmt17(tol) << "\ntol_beta=" << fmt17(tol_beta) << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string record_json(const SweepRecord& rec) {
  std::ostringstream os;
  os << "{\"dim\":" << rec.dim << ",\"alpha\":" << fmt17(rec.alpha)
     << ",\"ok\":" << (rec.ok ? "true" : "false");
  if (!rec.ok) {
    std::string msg = rec.error;
    for (auto& c : msg)
      if (c == '"' || c == '\\' || c == '\n') c = ' ';
    os << ",\"error\":\"" << msg << "\"";
  } else {
    os << ",\"beta0\":" << fmt17(rec.beta0)
       << ",\"bracket\":" << fmt17(rec.bracket)
       << ",\"n_alpha\":" << fmt17(rec.n_alpha_value);
    if (rec.has_beta1)
      os << ",\"beta1\":" << fmt17(rec.beta1)
         << ",\"beta_prime\":" << fmt17(rec.beta_prime_level);
    os << ",\"samples\":[";
    for (std::size_t i = 0; i < rec.sample_class.size(); ++i) {
      if (i) os << ',';
      os << "{\"beta\":" << fmt17(rec.sample_class[i].first)
         << ",\"class\":\"" << rec.sample_class[i].second << "\"}";
    }
    os << "],\"asym\":\"" << rec.asym_note << "\"";
  }
  os << ",\"timestamp\":\"" << rec.timestamp << "\",\"settings_hash\":\""
     << rec.settings_hash << "\"}";
  return os.str();
}

namespace {

std::string now_iso(bool fixture) {
  if (fixture) return "1970-01-01T00:00:00Z";
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

const char* class_name(StabilityClass c) {
  switch (c) {
    case StabilityClass::kStable: return "Stable";
    case StabilityClass::kStableAtInfinity: return "StableAtInfinity";
    default: return "UnstableAtInfinity";
  }
}

}  // namespace

SweepRecord compute_cell(int dim, double alpha, const RunConfig& cfg) {
  SweepRecord rec;
  rec.dim = dim;
  rec.alpha = alpha;
  rec.timestamp = now_iso(cfg.fixture_mode);
  rec.settings_hash = cfg.hash();
  try {
    rec.n_alpha_value = n_alpha(alpha);

    ProblemParams base;
    base.dim = dim;
    base.alpha = alpha;
    ShootOptions sopts;
    sopts.tol_beta = cfg.tol_beta;
    sopts.r_max = cfg.r_max;
    sopts.r_max_cap = cfg.r_max_cap;
    sopts.integ.rtol = cfg.tol;
    const ShootResult shoot = find_beta0(base, sopts);
    rec.beta0 = shoot.beta0;
    rec.bracket = shoot.beta_high - shoot.beta_low;

    if (dim >= 5 && dim < rec.n_alpha_value) {
      Beta1Options b1;
      b1.r_max = cfg.r_max;
      b1.eig.grid = cfg.grid;
      b1.integ.rtol = cfg.tol;
      const Beta1Result r1 = find_beta1(base, rec.beta0, b1);
      rec.has_beta1 = true;
      rec.beta1 = r1.beta1;
      rec.beta_prime_level = r1.beta_prime_start;
    }

    EigOptions eopt;
    eopt.grid = cfg.grid;
    const double scale = std::abs(rec.beta0);
    const double betas[3] = {shoot.beta_low, rec.beta0 - 0.05 * scale,
                             rec.beta0 - 2.0 * scale};
    for (double b : betas) {
      ProblemParams p = base;
      p.beta = b;
      RadialProfile prof = integrate(p, cfg.r_max, sopts.integ);
      if (!prof.global()) {
        rec.sample_class.emplace_back(b, "BlowUp");
        continue;
      }
      const StabilityReport rep = classify_stability(prof, eopt);
      rec.sample_class.emplace_back(b, class_name(rep.classification));
    }

    std::ostringstream note;
    const RadialProfile& sepw = shoot.global_witness;
    if (dim == 3) {
      const AsymptoticsN3 a3 = coeffs_n3(sepw);
      note << "n3 coeff disagreement " << a3.disagreement();
    } else if (dim == 4) {
      const AsymptoticsN4 a4 = mass_n4(sepw);
      note << "n4 c0 " << a4.c0 << " vs " << a4.c0_expected;
    } else {
      const LimitN5 lim = check_limit_n5(sepw);
      note << "n5 sup|w| tail " << lim.sup_w_tail
           << (lim.oscillatory ? " oscillatory" : " monotone");
    }
    rec.asym_note = note.str();
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

void run_sweep(const std::vector<int>& dims, const std::vector<double>& alphas,
               const RunConfig& cfg, bool resume) {
  fs::create_directories(cfg.out_dir);
  const std::string manifest = cfg.out_dir + "/manifest.jsonl";

  std::set<std::string> done;
  std::vector<std::string> kept_lines;
  if (resume && fs::exists(manifest)) {
    std::ifstream in(manifest);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        nlohmann::json j = nlohmann::json::parse(line);
        done.insert(cell_key(j["dim"].get<int>(), j["alpha"].get<double>()));
        kept_lines.push_back(line);
      } catch (...) {
        // damaged trailing line from an interrupted run: drop it
      }
    }
  }

  struct Cell {
    int dim;
    double alpha;
  };
  std::vector<Cell> todo;
  for (int d : dims)
    for (double a : alphas)
      if (!done.count(cell_key(d, a))) todo.push_back({d, a});

  std::vector<std::string> results(todo.size());
  std::vector<char> ready(todo.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      SweepRecord rec = compute_cell(todo[i].dim, todo[i].alpha, cfg);
      std::lock_guard<std::mutex> lk(mu);
      results[i] = record_json(rec);
      ready[i] = 1;
      cv.notify_all();
    }
  };

  std::ofstream out(manifest, std::ios::binary | std::ios::app);
  if (!out) throw PreconditionError("cannot open manifest: " + manifest);

  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);

  // single-writer ordered commit
  {
    std::unique_lock<std::mutex> lk(mu);
    for (std::size_t i = 0; i < todo.size(); ++i) {
      cv.wait(lk, [&] { return ready[i] == 1; });
      out << results[i] << '\n';
      out.flush();
      kept_lines.push_back(results[i]);
    }
  }
  for (auto& t : pool) t.join();
  out.close();

  // canonical rewrite: grid order by (dim, alpha)
  std::stable_sort(kept_lines.begin(), kept_lines.end(),
                   [](const std::string& a, const std::string& b) {
                     nlohmann::json ja = nlohmann::json::parse(a);
                     nlohmann::json jb = nlohmann::json::parse(b);
                     if (ja["dim"] != jb["dim"])
                       return ja["dim"].get<int>() < jb["dim"].get<int>();
                     return ja["alpha"].get<double>() <
                            jb["alpha"].get<double>();
                   });
  std::ostringstream body;
  for (const auto& l : kept_lines) body << l << '\n';
  const std::string tmp = manifest + ".tmp";
  write_text(tmp, body.str());
  fs::rename(tmp, manifest);
}

}  // namespace henon
