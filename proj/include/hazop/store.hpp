#pragma once

// The analyst's HAZOP tables together with the hazard, recommendation and
// hypothesis registries that the rows reference.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hazop/deviation.hpp"
#include "hazop/diagnostic.hpp"
#include "hazop/model.hpp"

namespace hazop {

enum class RowStatus { skeleton, interpreted, not_applicable, orphaned };

const char* to_string(RowStatus status);
std::optional<RowStatus> parse_row_status(std::string_view text);

/// Traceability label of a table line, e.g. UC02.15.
struct RowAnchor {
  std::string table_id;
  int line_number = 0;

  std::string str() const;
  static std::optional<RowAnchor> parse(std::string_view text);

  friend bool operator==(const RowAnchor&, const RowAnchor&) = default;
  friend auto operator<=>(const RowAnchor&, const RowAnchor&) = default;
};

enum class DiagramType { use_case, sequence, state_machine };

const char* to_string(DiagramType type);
/// From a table or element id prefix (UC, SD, SM).
std::optional<DiagramType> diagram_type_of(std::string_view id);

struct DeviationRowRecord {
  std::string table_id;
  int line_number = 0;
  AttributeRef attribute_ref;
  std::string guide_word;
  std::string hint;
  std::optional<TriggeredNote> triggered_note;

  // Analyst columns.
  std::string deviation;
  std::string use_case_effect;
  std::string real_world_effect;
  std::string severity;  // empty = not rated
  std::string possible_causes;
  std::vector<std::string> recommendations;
  std::string remarks;
  std::vector<std::string> hazards;

  RowStatus status = RowStatus::skeleton;
  /// Status before the row was orphaned, restored if its key reappears.
  std::optional<RowStatus> prior_status;

  RowAnchor anchor() const { return RowAnchor{table_id, line_number}; }
  RowKey key() const { return RowKey{table_id, attribute_ref.str(), guide_word}; }
  bool has_analyst_content() const;

  friend bool operator==(const DeviationRowRecord&, const DeviationRowRecord&) = default;
};

struct Hazard {
  std::string id;  // HNn
  std::string text;
  std::optional<std::string> note;
  /// Free-form occurrence data from a separate preliminary hazard analysis.
  std::optional<std::string> pha_annotation;

  friend bool operator==(const Hazard&, const Hazard&) = default;
};

struct Recommendation {
  std::string id;  // Recn
  std::string text;
  std::vector<std::string> covers;
  std::vector<RowAnchor> sources;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

enum class HypothesisStatus { open, confirmed, rejected };

const char* to_string(HypothesisStatus status);
std::optional<HypothesisStatus> parse_hypothesis_status(std::string_view text);

struct Hypothesis {
  std::string id;  // Hypn
  std::string text;
  HypothesisStatus status = HypothesisStatus::open;
  std::vector<RowAnchor> sources;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

std::vector<std::string> default_severity_scale();

struct AnalysisStore {
  static constexpr int kFormatVersion = 1;

  std::vector<DeviationRowRecord> rows;
  std::vector<Hazard> hazards;
  std::vector<Recommendation> recommendations;
  std::vector<Hypothesis> hypotheses;
  std::vector<std::string> severity_scale = default_severity_scale();
  std::string model_fingerprint;
  /// Ids of deleted hazards, recommendations and hypotheses; never reissued.
  std::vector<std::string> tombstones;
  /// Highest line number ever issued per table.
  std::map<std::string, int> line_high_water;

  DeviationRowRecord* find_row(std::string_view table_id, int line_number);
  const DeviationRowRecord* find_row(std::string_view table_id, int line_number) const;
  const Hazard* find_hazard(std::string_view id) const;
  const Recommendation* find_recommendation(std::string_view id) const;
  const Hypothesis* find_hypothesis(std::string_view id) const;
  bool severity_in_scale(std::string_view severity) const;
  std::vector<std::string> table_ids() const;

  friend bool operator==(const AnalysisStore&, const AnalysisStore&) = default;
};

namespace code {
inline constexpr const char* kUnknownRow = "UNKNOWN_ROW";
inline constexpr const char* kUnknownItem = "UNKNOWN_ITEM";
inline constexpr const char* kSeverityNotInScale = "SEVERITY_NOT_IN_SCALE";
inline constexpr const char* kDanglingHazard = "DANGLING_HAZARD";
inline constexpr const char* kDanglingRecommendation = "DANGLING_RECOMMENDATION";
inline constexpr const char* kDanglingRow = "DANGLING_ROW";
inline constexpr const char* kInvalidStatus = "INVALID_STATUS";
inline constexpr const char* kInvalidId = "INVALID_ID";
inline constexpr const char* kItemInUse = "ITEM_IN_USE";
inline constexpr const char* kStoreFormat = "STORE_FORMAT";
inline constexpr const char* kStoreIo = "STORE_IO";

inline constexpr const char* kUnknownAttribute = "UNKNOWN_ATTRIBUTE";
inline constexpr const char* kDuplicateRow = "DUPLICATE_ROW";
inline constexpr const char* kDuplicateItem = "DUPLICATE_ITEM";
inline constexpr const char* kInterpretedWithoutDeviation = "INTERPRETED_WITHOUT_DEVIATION";
inline constexpr const char* kFingerprintMismatch = "FINGERPRINT_MISMATCH";
inline constexpr const char* kOrphanHazard = "ORPHAN_HAZARD";
inline constexpr const char* kRecommendationNoCoverage = "REC_NO_COVERAGE";
inline constexpr const char* kRecommendationNoSource = "REC_NO_SOURCE";
inline constexpr const char* kMissingRealWorldEffect = "MISSING_REAL_WORLD_EFFECT";
}  // namespace code

/// Failed store operation. `code` is one of the hazop::code constants.
class StoreError : public std::runtime_error {
 public:
  StoreError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Cross-checks the store against the model and against itself. Error-level
/// findings: dangling references, rows whose attribute left the model (unless
/// orphaned), stale model fingerprint, severities outside the scale.
std::vector<Diagnostic> check_consistency(const ProjectModel& model, const AnalysisStore& store);

/// Partial update of a row's analyst columns. Unset fields are left alone.
struct RowUpdate {
  std::optional<std::string> deviation;
  std::optional<std::string> use_case_effect;
  std::optional<std::string> real_world_effect;
  std::optional<std::string> severity;
  std::optional<std::string> possible_causes;
  std::optional<std::vector<std::string>> recommendations;
  std::optional<std::string> remarks;
  std::optional<std::vector<std::string>> hazards;
  std::optional<RowStatus> status;
  /// Created in the same transaction; ids must be fresh.
  std::vector<Hazard> new_hazards;
  std::vector<Recommendation> new_recommendations;
};

/// Applies all fields or none. Promotes skeleton rows to interpreted once the
/// deviation text is non-empty. Throws StoreError.
AnalysisStore set_row_fields(AnalysisStore store, std::string_view table_id, int line_number,
                             const RowUpdate& update);

/// Adds a further line for the same (attribute, guide word) pair and returns
/// its line number.
int duplicate_row(AnalysisStore& store, std::string_view table_id, int line_number);

enum class IdKind { hazard, recommendation, hypothesis };

const char* id_prefix(IdKind kind);

/// Smallest positive number not used now or historically, with its prefix.
std::string allocate_id(const AnalysisStore& store, IdKind kind);

/// Numeric part of HNn / Recn / Hypn, or nullopt.
std::optional<int> id_number(std::string_view id, IdKind kind);

std::string add_hazard(AnalysisStore& store, std::string text,
                       std::optional<std::string> note = std::nullopt);
std::string add_recommendation(AnalysisStore& store, std::string text,
                               std::vector<std::string> covers, std::vector<RowAnchor> sources);
std::string add_hypothesis(AnalysisStore& store, std::string text, std::vector<RowAnchor> sources);

void update_hazard(AnalysisStore& store, const Hazard& hazard);
void update_recommendation(AnalysisStore& store, const Recommendation& recommendation);
void update_hypothesis(AnalysisStore& store, const Hypothesis& hypothesis);

/// Deletes and tombstones an item. Throws ITEM_IN_USE while referenced.
void remove_item(AnalysisStore& store, std::string_view id);

struct HazardOutput {
  Hazard hazard;
  /// Non-orphaned rows naming the hazard, grouped by diagram type.
  std::map<DiagramType, std::vector<RowAnchor>> rows;
  std::vector<std::string> recommendations;

  std::size_t occurrences(DiagramType type) const;
};

struct ProjectOutputs {
  std::vector<HazardOutput> hazards;
  std::vector<Recommendation> recommendations;
  std::vector<Hypothesis> hypotheses;
};

/// Deduplicated, id-ordered hazard, recommendation and hypothesis lists.
ProjectOutputs concatenate_outputs(const AnalysisStore& store);

std::string outputs_to_json(const ProjectOutputs& outputs);

std::string store_to_json(const AnalysisStore& store);
AnalysisStore store_from_json(std::string_view text);

/// Atomic replace: the file is written next to `path` and renamed over it.
void save_store(const AnalysisStore& store, const std::filesystem::path& path);
AnalysisStore load_store(const std::filesystem::path& path);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace hazop
