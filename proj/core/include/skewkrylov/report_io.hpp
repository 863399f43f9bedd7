#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "skewkrylov/equivalence.hpp"

namespace skewkrylov {

/// JSON document with instance, config, checks, table, notes and summary blocks.
/// Nonfinite numbers are written as the strings "inf", "-inf" and "nan".
std::string to_json(const RunReport& report, int indent = 2);

/// Inverse of to_json; the summary block is ignored (it is derived data).
RunReport report_from_json(std::string_view text);

/// Significant digits for CSV numeric fields: 17 unless SKEWKRYLOV_REPORT_PRECISION
/// holds an integer in [1, 17].
int report_precision();

/// Columns: method,q,res_norm,err_norm,alpha,beta. Missing values are empty fields.
std::string history_csv(const std::vector<MethodRow>& rows, int significant_digits = report_precision());

/// Writes text to path, throwing IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace skewkrylov
