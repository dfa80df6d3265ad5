#pragma once

#include "compacton/frame.hpp"
#include "compacton/profile.hpp"
#include "compacton/spectrum.hpp"
#include "compacton/stability.hpp"
#include "compacton/variational.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace compacton {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Writes rows as comma-separated values without quoting (fields never contain commas).
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

Json profile_record(const CompactonProfile& profile);
Json spectral_record(const SpectralReport& report, const SchrodingerOperator& op);
Json stability_record(const StabilityReport& report);
StabilityReport stability_from_json(const Json& j);
Json sweep_record(const SweepTable& table);
Json minimization_record(const MinimizationResult& result, double c_oracle, double c_formula);

/// Column contract of the sweep table.
const std::vector<std::string>& sweep_columns();
std::vector<std::string> sweep_row_fields(const SweepRow& row, Model model);

}  // namespace compacton
