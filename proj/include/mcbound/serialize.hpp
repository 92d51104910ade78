#pragma once

#include <string>
#include <vector>

#include "mcbound/teich.hpp"

namespace mcb {

// RFC-4180-style quoting: fields with commas, quotes or newlines are wrapped
// and inner quotes doubled.
std::string csv_field(const std::string& raw);
std::string csv_row(const std::vector<std::string>& fields);

// slope label of a direction: "p/q" in lowest terms, "inf" for the vertical,
// fixed-digit decimal for irrational slopes
std::string ray_slope(const FoliationVec& direction, unsigned digits = 20);

// line-delimited limit records: one line per index, then the outcome line
std::string record_line(const LimitRecord& rec, unsigned digits);
std::string outcome_line(const LimitReport& report, unsigned digits);
std::vector<std::string> limit_record_lines(const LimitReport& report, unsigned digits = 40);

// SVG 1.1 circle atlas of scan rays; labels Farey slopes with denominator
// <= label_den_limit; embeds the generating CSV path as a comment
std::string svg_orbit_atlas(const OrbitScan& scan, const std::string& csv_path,
                            int label_den_limit = 10);

}  // namespace mcb
