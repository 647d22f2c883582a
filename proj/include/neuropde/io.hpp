#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "neuropde/cells.hpp"
#include "neuropde/chain.hpp"
#include "neuropde/pde.hpp"
#include "neuropde/walk.hpp"

namespace neuropde {

std::string backend_kind_name(BackendKind k);
BackendKind parse_backend_kind(const std::string& name);

// Header comment carried by every exported file.
std::string artifact_header(std::uint64_t config_hash, std::uint64_t seed);

void write_solution_1d_csv(std::ostream& os, const std::string& header,
                           const std::vector<double>& x,
                           const std::vector<double>& u_rw_mean,
                           const std::vector<double>& u_an,
                           const std::vector<double>& sigma2);

void write_grid_2d_csv(std::ostream& os, const std::string& header, int n,
                       const std::vector<double>& axis,
                       const std::vector<double>& c_rw,
                       const std::vector<double>& c_an,
                       const std::vector<double>& sigma2);

void write_sweep_csv(std::ostream& os, const std::string& header,
                     const std::vector<SweepRow>& rows);

void write_passage_csv(std::ostream& os, const std::string& header,
                       const PassageMatrix& m);

void write_activation_history_csv(std::ostream& os, const std::string& header,
                                  const std::vector<ActivationRecord>& table);

nlohmann::json ledger_json(const Ledger& l);
nlohmann::json chain_summary_json(const MarkovChain1D& c);
nlohmann::json variance_report_json(const VarianceReport& rep);

// 2D plot payload: grid, analytical reference and geometry in one document.
nlohmann::json plot_data_2d_json(const Diffusion2D& p, const Solution2D& sol,
                                 const std::vector<double>& c_mean,
                                 const std::vector<double>& c_an);

}  // namespace neuropde
