#pragma once

#include <vector>

#include "hazop/deviation.hpp"
#include "hazop/registry.hpp"
#include "hazop/store.hpp"

namespace hazop {

struct MergeResult {
  AnalysisStore store;
  MergeReport report;
};

/// Folds a freshly generated skeleton into an existing analysis.
///  - rows whose (table, attribute, guide word) key is still generated keep
///    their analyst columns and line numbers (previously orphaned rows are
///    revived);
///  - new keys are appended after the highest line number ever issued;
///  - rows whose key disappeared are marked orphaned, never deleted.
MergeResult merge_regenerated(AnalysisStore existing, const std::vector<SkeletonRow>& fresh);

/// generate_skeleton + merge_regenerated + fingerprint update.
MergeResult regenerate(const ProjectModel& model, const GuideWordRegistry& registry,
                       AnalysisStore existing);

}  // namespace hazop
