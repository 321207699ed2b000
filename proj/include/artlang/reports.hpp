#ifndef ARTLANG_REPORTS_HPP
#define ARTLANG_REPORTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "artlang/analysis.hpp"

namespace artlang {

// CSV emitters for the analyze outputs. All files use comma separators,
// '.' decimals, a header row, and shortest round-trip number formatting.

// label,estimate,stderr (intercept first, then mains, then interactions)
void write_coefficients_csv(const std::filesystem::path& path,
                            const MixedModelFit& fit);

// row,column,value,stderr over the full symmetric K x K table
void write_heatmap_csv(const std::filesystem::path& path,
                       const CoefficientHeatmap& heatmap);

// word_order,grammars,mean_perplexity
void write_group_csv(const std::filesystem::path& path,
                     const std::vector<GroupReportRow>& rows);

// label,x,density
void write_density_csv(const std::filesystem::path& path,
                       const std::vector<DistributionReport>& reports);

// Self-contained SVG renderings of the same tables.
std::string heatmap_svg(const CoefficientHeatmap& heatmap);
std::string density_svg(const std::vector<DistributionReport>& reports);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace artlang

#endif  // ARTLANG_REPORTS_HPP
