#pragma once

// Skeleton generation: every (element attribute instance x applicable guide
// word) pair becomes one HAZOP table line.

#include <map>
#include <string>
#include <vector>

#include "hazop/model.hpp"
#include "hazop/registry.hpp"

namespace hazop {

/// Element sub-id plus the attribute being deviated, e.g. UC02.C1/precondition.
struct AttributeRef {
  std::string element_id;
  AttributeKind attribute;

  std::string str() const;
  /// Inverse of str(); nullopt when malformed.
  static std::optional<AttributeRef> parse(std::string_view text);

  friend bool operator==(const AttributeRef&, const AttributeRef&) = default;
  friend auto operator<=>(const AttributeRef&, const AttributeRef&) = default;
};

struct SkeletonRow {
  std::string table_id;  // UCnn, SDnn or SMnn
  int line_number = 0;
  AttributeRef attribute_ref;
  std::string guide_word;
  std::string deviation_hint;
  std::optional<TriggeredNote> triggered_note;

  friend bool operator==(const SkeletonRow&, const SkeletonRow&) = default;
};

/// Merge identity of a row: (table, attribute, guide word).
struct RowKey {
  std::string table_id;
  std::string attribute_ref;
  std::string guide_word;

  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

RowKey key_of(const SkeletonRow& row);

/// Rows in model order (use cases, sequence diagrams, state machines), then
/// attribute order, then registry order. Line numbers restart at 1 per table.
std::vector<SkeletonRow> generate_skeleton(const ProjectModel& model,
                                           const GuideWordRegistry& registry);

struct MergeCounts {
  int kept = 0;
  int added = 0;
  int orphaned = 0;

  friend bool operator==(const MergeCounts&, const MergeCounts&) = default;
};

struct MergeReport {
  MergeCounts total;
  std::map<std::string, MergeCounts> per_table;

  friend bool operator==(const MergeReport&, const MergeReport&) = default;
};

std::string format_merge_report(const MergeReport& report);

}  // namespace hazop
