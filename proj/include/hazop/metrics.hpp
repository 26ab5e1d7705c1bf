#pragma once

#include <map>
#include <string>
#include <vector>

#include "hazop/model.hpp"
#include "hazop/registry.hpp"
#include "hazop/store.hpp"

namespace hazop {

struct DiagramStats {
  int element_count = 0;             // use cases, sequence diagrams or state machines
  int attribute_instance_count = 0;  // conditions, messages or transitions
  int state_count = 0;               // state machines only
  int analyzed_deviations = 0;       // rows not orphaned
  int interpreted_deviations = 0;
  int interpreted_with_recommendation = 0;

  friend bool operator==(const DiagramStats&, const DiagramStats&) = default;
};

struct ProjectStats {
  std::map<DiagramType, DiagramStats> per_diagram;
  int hazard_count = 0;

  const DiagramStats& operator[](DiagramType type) const;
  int interpreted_deviations() const;

  friend bool operator==(const ProjectStats&, const ProjectStats&) = default;
};

ProjectStats compute_stats(const ProjectModel& model, const AnalysisStore& store);

struct GuideWordUsageCell {
  AttributeKind attribute;
  std::string guide_word;
  int interpreted = 0;

  friend bool operator==(const GuideWordUsageCell&, const GuideWordUsageCell&) = default;
};

struct GuideWordUsage {
  /// One cell per registry entry, in registry order; unused words have 0.
  std::vector<GuideWordUsageCell> cells;
  /// Interpreted rows whose guide word is not in the registry.
  int unregistered = 0;

  int total() const;
  int count(const AttributeKind& attribute, std::string_view guide_word) const;
};

GuideWordUsage guideword_usage(const AnalysisStore& store, const GuideWordRegistry& registry);

/// Human-readable statistics table, the layout of the per-project summary.
std::string format_stats(const ProjectStats& stats);
std::string stats_to_csv(const ProjectStats& stats);
std::string usage_to_csv(const GuideWordUsage& usage);

}  // namespace hazop
