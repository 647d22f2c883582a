#include "neuropde/io.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace neuropde {

std::string backend_kind_name(BackendKind k) {
  switch (k) {
    case BackendKind::Software: return "software";
    case BackendKind::HardwareP: return "hw-p";
    case BackendKind::HardwarePV: return "hw-pv";
  }
  return "software";
}

BackendKind parse_backend_kind(const std::string& name) {
  if (name == "software") return BackendKind::Software;
  if (name == "hw-p") return BackendKind::HardwareP;
  if (name == "hw-pv") return BackendKind::HardwarePV;
  throw std::invalid_argument("unknown backend: " + name +
                              " (expected software|hw-p|hw-pv)");
}

std::string artifact_header(std::uint64_t config_hash, std::uint64_t seed) {
  std::ostringstream os;
  os << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0')
     << config_hash << std::dec << " master_seed=" << seed << "\n";
  return os.str();
}

namespace {
void set_precision(std::ostream& os) {
  os << std::setprecision(17);
}
}  // namespace

void write_solution_1d_csv(std::ostream& os, const std::string& header,
                           const std::vector<double>& x,
                           const std::vector<double>& u_rw_mean,
                           const std::vector<double>& u_an,
                           const std::vector<double>& sigma2) {
  set_precision(os);
  os << header << "x,u_rw_mean,u_an,sigma2\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << x[i] << ',' << u_rw_mean[i] << ',' << u_an[i] << ',' << sigma2[i]
       << '\n';
}

void write_grid_2d_csv(std::ostream& os, const std::string& header, int n,
                       const std::vector<double>& axis,
                       const std::vector<double>& c_rw,
                       const std::vector<double>& c_an,
                       const std::vector<double>& sigma2) {
  set_precision(os);
  os << header << "x,y,c_rw,c_an,sigma2\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n + j;
      os << axis[i] << ',' << axis[j] << ',' << c_rw[k] << ',' << c_an[k]
         << ',' << sigma2[k] << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::string& header,
                     const std::vector<SweepRow>& rows) {
  set_precision(os);
  os << header << "w,backend,max_sigma2\n";
  for (const SweepRow& r : rows)
    os << r.w << ',' << backend_kind_name(r.backend) << ','
       << r.mean_max_sigma2 << '\n';
}

void write_passage_csv(std::ostream& os, const std::string& header,
                       const PassageMatrix& m) {
  os << header << "i,j,count\n";
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.at(i, j) != 0) os << i << ',' << j << ',' << m.at(i, j) << '\n';
}

void write_activation_history_csv(std::ostream& os, const std::string& header,
                                  const std::vector<ActivationRecord>& table) {
  set_precision(os);
  os << header << "trial_id,start_index,outcome,ps_empirical,device_seed\n";
  for (const ActivationRecord& r : table) {
    char oc = 'S';
    if (r.outcome == MoveResult::MovedLeft) oc = 'L';
    if (r.outcome == MoveResult::MovedRight) oc = 'R';
    os << r.trial_id << ',' << r.start_index << ',' << oc << ','
       << r.ps_empirical << ',' << r.device_seed << '\n';
  }
}

nlohmann::json ledger_json(const Ledger& l) {
  nlohmann::json j;
  j["steps"] = l.steps;
  j["hw_time_s"] = l.hw_time_s();
  j["hw_energy_j"] = l.hw_energy_j();
  if (!l.baselines.empty()) {
    nlohmann::json ratios;
    for (const auto& [name, r] : l.report()) {
      ratios[name] = {{"speedup", r.speedup},
                      {"energy_ratio", r.energy_ratio}};
    }
    j["ratios"] = ratios;
  }
  return j;
}

nlohmann::json chain_summary_json(const MarkovChain1D& c) {
  return {{"n", c.n},
          {"dx", c.dx},
          {"dt", c.dt},
          {"ps", c.ps},
          {"pg", c.pg},
          {"left_boundary", "reflect-double"},
          {"right_boundary",
           c.right_boundary == RightBoundary::Absorbing ? "absorbing" : "none"}};
}

nlohmann::json variance_report_json(const VarianceReport& rep) {
  return {{"max_sigma2", rep.max_sigma2},
          {"mean_sigma2", rep.mean_sigma2},
          {"runs", rep.runs},
          {"sigma2", rep.sigma2}};
}

nlohmann::json plot_data_2d_json(const Diffusion2D& p, const Solution2D& sol,
                                 const std::vector<double>& c_mean,
                                 const std::vector<double>& c_an) {
  return {{"n", p.n},
          {"axis", sol.x},
          {"t", p.t()},
          {"c0", p.c0},
          {"d", p.d},
          {"source", {p.source_i, p.source_j}},
          {"c_rw", c_mean},
          {"c_an", c_an}};
}

}  // namespace neuropde
