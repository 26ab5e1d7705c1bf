#include "hazop/merge.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hazop/dsl.hpp"

namespace hazop {

MergeResult merge_regenerated(AnalysisStore store, const std::vector<SkeletonRow>& fresh) {
  MergeReport report;
  std::map<RowKey, const SkeletonRow*> fresh_keys;
  for (const auto& row : fresh) fresh_keys.emplace(key_of(row), &row);

  for (const auto& row : store.rows) {
    int& high = store.line_high_water[row.table_id];
    high = std::max(high, row.line_number);
  }

  std::set<RowKey> present;
  for (auto& row : store.rows) {
    const RowKey key = row.key();
    auto it = fresh_keys.find(key);
    if (it == fresh_keys.end()) {
      if (row.status != RowStatus::orphaned) {
        row.prior_status = row.status;
        row.status = RowStatus::orphaned;
        ++report.per_table[row.table_id].orphaned;
      }
      continue;
    }
    present.insert(key);
    row.hint = it->second->deviation_hint;
    row.triggered_note = it->second->triggered_note;
    if (row.status == RowStatus::orphaned) {
      row.status = row.prior_status.value_or(RowStatus::skeleton);
      if (row.status == RowStatus::interpreted && row.deviation.empty()) {
        row.status = RowStatus::skeleton;
      }
      row.prior_status.reset();
    }
    ++report.per_table[row.table_id].kept;
  }

  for (const auto& row : fresh) {
    const RowKey key = key_of(row);
    if (present.count(key)) continue;
    present.insert(key);
    DeviationRowRecord record;
    record.table_id = row.table_id;
    record.line_number = ++store.line_high_water[row.table_id];
    record.attribute_ref = row.attribute_ref;
    record.guide_word = row.guide_word;
    record.hint = row.deviation_hint;
    record.triggered_note = row.triggered_note;
    store.rows.push_back(std::move(record));
    ++report.per_table[row.table_id].added;
  }

  for (const auto& [table, counts] : report.per_table) {
    report.total.kept += counts.kept;
    report.total.added += counts.added;
    report.total.orphaned += counts.orphaned;
  }
  return MergeResult{std::move(store), std::move(report)};
}

MergeResult regenerate(const ProjectModel& model, const GuideWordRegistry& registry,
                       AnalysisStore existing) {
  MergeResult result = merge_regenerated(std::move(existing), generate_skeleton(model, registry));
  result.store.model_fingerprint = model_fingerprint(model);
  return result;
}

}  // namespace hazop
