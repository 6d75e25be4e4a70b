#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "geoctl/krotov.hpp"
#include "geoctl/sampler.hpp"
#include "geoctl/verify.hpp"

namespace geoctl {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Time series. Header `t,h1,...,hd`, t in units of tau, 17 significant digits.
void write_field_csv(std::ostream& os, const ControlField& field);
ControlField read_field_csv(std::istream& is, double tau = 1.0);
void write_field_csv(const fs::path& path, const ControlField& field);
ControlField read_field_csv(const fs::path& path, double tau = 1.0);

/// `t,F_avg,F_state1..6`.
void write_verification_csv(const fs::path& path, const VerificationReport& r);
/// `t,energy_density`.
void write_energy_density_csv(const fs::path& path, const ControlField& field, const RVector& metric_diagonal);
/// `t,<column names...>`, one column per series; all series share `t`'s length.
void write_series_csv(const fs::path& path, const std::vector<double>& t, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& series);

// Gates: row-major [[re, im], ...] entries, either flat or as nested rows.
json gate_to_json(const CMatrix& u);
CMatrix gate_from_json(const json& j);
CMatrix read_gate_file(const fs::path& path);
/// Named gate, or `file:<path>`.
CMatrix resolve_gate(const std::string& spec);

json to_json(const NoiseParams& p);
NoiseParams noise_from_json(const json& j);
json to_json(const Problem& p);
Problem problem_from_json(const json& j);
json to_json(const NormSchedule& s);
NormSchedule schedule_from_json(const json& j);
json to_json(const RefineOptions& o);
RefineOptions refine_options_from_json(const json& j, RefineOptions base = {});
json to_json(const KrotovConfig& c);
KrotovConfig krotov_config_from_json(const json& j, KrotovConfig base = {});

json to_json(const BankEntry& e);
BankEntry bank_entry_from_json(const json& j, std::size_t index);
/// Header object on the first line, one entry per following line.
void write_bank(std::ostream& os, const SampleBank& bank);
SampleBank read_bank(std::istream& is);
void write_bank(const fs::path& path, const SampleBank& bank);
SampleBank read_bank(const fs::path& path);

json to_json(const SynthesisAttempt& a);
json to_json(const VerificationReport& r);
json to_json(const Comparison& c);

/// `solution.json` and `fields.csv` inside `dir`; `extra` is merged into the report.
void write_solution(const fs::path& dir, const Solution& s, const json& extra = json::object());
Solution read_solution(const fs::path& dir);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& j);

}  // namespace geoctl
