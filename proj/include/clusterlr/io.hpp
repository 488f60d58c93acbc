#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "clusterlr/nonlocality.hpp"
#include "clusterlr/paradox.hpp"
#include "clusterlr/tomography.hpp"

// Textual formats. All doubles are written so they round-trip exactly;
// counts are written as integers. Parsers name the offending line in
// their error messages.

namespace clr {

// {"n": ..., "entries": [[re, im], ...]} row-major.
std::string density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(std::string_view text);

std::string certificate_to_json(const ParadoxCertificate& cert, const GraphSpec& g);
ParadoxCertificate certificate_from_json(std::string_view text);

// setting,outcome,count,duration_s with outcomes as polarization labels;
// one block of 2^n rows per setting.
std::string counts_to_csv(const std::vector<CountsTable>& tables);
std::vector<CountsTable> counts_from_csv(std::string_view text);

// projector,count,duration_s over the full 4^n family.
std::string tomography_to_csv(const TomographySet& t);
TomographySet tomography_from_csv(std::string_view text);

// DensityMatrix JSON plus a "meta" block with the optimizer diagnostics.
std::string mle_to_json(const MleResult& r);

std::string report_to_json(const NonlocalityReport& r);
// Flat statistic,value,sigma rows.
std::string report_to_csv(const NonlocalityReport& r);

// setting,outcome,fraction,sigma for every outcome of every table.
std::string fraction_table_csv(const std::vector<CountsTable>& tables);

// Exact-round-trip double formatting used by every writer.
std::string format_double(double v);

}  // namespace clr
