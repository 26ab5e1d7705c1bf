#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hazop/diagnostic.hpp"
#include "hazop/metrics.hpp"
#include "hazop/model.hpp"
#include "hazop/store.hpp"

namespace hazop {

struct ReportOptions {
  bool timestamp = true;
  /// Render even when the store has error-level diagnostics, with a banner.
  bool force = false;
  std::optional<GuideWordUsage> usage;
};

/// Rendering refused because the analysis is inconsistent.
class ReportBlocked : public std::runtime_error {
 public:
  explicit ReportBlocked(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Single self-contained HTML page: statistics, hazard, recommendation and
/// hypothesis lists, every HAZOP table and the model text. Rows (UC02.15),
/// hazards (HN6), recommendations (Rec2) and hypotheses (Hyp1) are anchors
/// named by their id and cross-linked both ways. Byte-identical for
/// identical inputs when the timestamp is off.
std::string render_report(const ProjectModel& model, const AnalysisStore& store,
                          const ProjectStats& stats, const ReportOptions& options);

inline const char* const kTableCsvHeader =
    "Entity,Line,Attribute,GuideWord,Deviation,UseCaseEffect,RealWorldEffect,Severity,"
    "PossibleCauses,SafetyRecommendations,Remarks,HazardNumbers";

/// File name (relative to the output directory) -> CSV text. One file per
/// HAZOP table under tables/, plus tables/hazards.csv,
/// tables/recommendations.csv and tables/hypotheses.csv. Orphaned rows are
/// not exported.
std::map<std::string, std::string> export_csv(const AnalysisStore& store);

/// Writes export_csv(store) below `out_dir`; returns the written paths.
std::vector<std::filesystem::path> write_csv_exports(const AnalysisStore& store,
                                                     const std::filesystem::path& out_dir);

}  // namespace hazop
