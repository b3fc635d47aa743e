#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasereg/evaluation.hpp"
#include "phasereg/measure.hpp"
#include "phasereg/warp_map.hpp"

namespace phasereg {

struct PatternCollection {
  Interval domain;
  std::vector<PointPattern> processes;
};

/// {"domain":[lo,hi],"processes":[[x,...],...]}
std::string patterns_to_json(const Interval& domain,
                             std::span<const PointPattern> processes);
/// Throws ParseError (with the offending line) on malformed text and
/// ValidationError on points outside the domain.
PatternCollection patterns_from_json(std::string_view text);

/// CSV with header "x,F", one row per grid node.
std::string measure_to_csv(const DiffuseMeasure& measure);
DiffuseMeasure measure_from_csv(std::string_view text);

/// CSV with header "x,T(x)", one row per grid node.
std::string warp_to_csv(const WarpMap& map);
WarpMap warp_from_csv(std::string_view text);

std::string study_report_to_json(const StudyReport& report);
std::string covariance_report_to_json(const CovarianceReport& report);

/// Whole-file helpers; failures raise IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace phasereg
