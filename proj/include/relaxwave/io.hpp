#pragma once

// System-definition files and report serialization (JSON documents and CSV
// tables). CSV numbers use the shortest round-trip decimal form so that
// identical runs produce identical data rows.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxwave/profiles.hpp"
#include "relaxwave/rates.hpp"
#include "relaxwave/reduction.hpp"
#include "relaxwave/structure.hpp"
#include "relaxwave/system.hpp"

namespace relaxwave::io {

using json = nlohmann::json;

/// {"name": str, "n": int, "A": [[real]], "B": [[real]], "S": [[real]] (optional)}.
/// Throws ParseError, ShapeError or ValueError.
SystemDef parse_system(const std::string& text);
SystemDef load_system(const std::filesystem::path& path);

json system_to_json(const SystemDef& sys);
void save_system(const SystemDef& sys, const std::filesystem::path& path);

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan".
std::string format_number(double v);

json to_json(cplx z);
/// Real matrices as [[real]]; otherwise {"re": [[...]], "im": [[...]]}.
json to_json(const CMatrix& m);

json to_json(const structure::ConditionResult& r);
json to_json(const structure::ConditionReport& r);
json to_json(const reduction::ChapmanEnskogData& red);
json to_json(const reduction::HighFreqData& hf);
json to_json(const std::vector<reduction::FastDecayGroup>& groups);
json to_json(const reduction::ExpansionOrderReport& rep);
json to_json(const std::vector<reduction::EigencurveSample>& samples);
json to_json(const rates::RateReport& rep);
json to_json(const rates::KernelScan& scan);

/// One CSV table: a "# ..." metadata line, a header row and data rows.
struct CsvTable {
  std::string metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable eigencurves_csv(const std::vector<reduction::EigencurveSample>& samples);
CsvTable expansion_csv(const reduction::ExpansionOrderReport& rep);
CsvTable solution_csv(const profiles::GridSolution& sol);
CsvTable rates_csv(const rates::RateReport& rep);
CsvTable kernel_scan_csv(const rates::KernelScan& scan);
CsvTable conditions_csv(const structure::ConditionReport& rep);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace relaxwave::io
