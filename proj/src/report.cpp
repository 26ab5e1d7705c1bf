#include "hazop/report.hpp"

#include <algorithm>
#include <ctime>
#include <set>
#include <sstream>

#include "hazop/csv.hpp"
#include "hazop/dsl.hpp"

namespace hazop {

ReportBlocked::ReportBlocked(std::vector<Diagnostic> diagnostics)
    : std::runtime_error("analysis has " + std::to_string(count_errors(diagnostics)) +
                         " error-level diagnostic(s); fix them or force rendering"),
      diagnostics_(std::move(diagnostics)) {}

namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&#39;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

constexpr const char* kStyle = R"(
body { font-family: sans-serif; margin: 2em; color: #222; }
h1 { border-bottom: 2px solid #444; }
table { border-collapse: collapse; margin: 1em 0; width: 100%; }
th, td { border: 1px solid #999; padding: 4px 6px; vertical-align: top; font-size: 0.9em; }
th { background: #e8e8e8; }
.hint { color: #777; font-style: italic; }
.status-orphaned { background: #f4e1e1; }
.status-not_applicable { color: #888; }
.banner { background: #fbe3b0; border: 1px solid #c90; padding: 0.5em 1em; }
.dangling { color: #b00; text-decoration: line-through; }
pre { background: #f6f6f6; padding: 0.5em; overflow-x: auto; }
nav a { margin-right: 1em; }
)";

class HtmlReport {
 public:
  HtmlReport(const ProjectModel& model, const AnalysisStore& store, const ProjectStats& stats,
             const ReportOptions& options, const std::vector<Diagnostic>& diagnostics)
      : model_(model), store_(store), stats_(stats), options_(options), diagnostics_(diagnostics) {
    for (const auto& r : store_.rows) rows_.insert(r.anchor().str());
    for (const auto& h : store_.hazards) items_.insert(h.id);
    for (const auto& r : store_.recommendations) items_.insert(r.id);
    for (const auto& h : store_.hypotheses) items_.insert(h.id);
  }

  std::string render() {
    const std::string title =
        "HAZOP-UML report" + (model_.name.empty() ? std::string() : ": " + model_.name);
    out_ << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
         << escape(title) << "</title>\n<style>" << kStyle << "</style>\n</head>\n<body>\n";
    out_ << "<h1>" << escape(title) << "</h1>\n";
    if (options_.timestamp) out_ << "<p class=\"generated\">Generated " << now_utc() << "</p>\n";
    banner();
    out_ << "<nav><a href=\"#statistics\">Statistics</a><a href=\"#hazards\">Hazards</a>"
            "<a href=\"#recommendations\">Recommendations</a><a href=\"#hypotheses\">Hypotheses</a>"
            "<a href=\"#tables\">HAZOP tables</a><a href=\"#model\">Model</a></nav>\n";
    statistics();
    const ProjectOutputs outputs = concatenate_outputs(store_);
    hazards(outputs);
    recommendations(outputs);
    hypotheses(outputs);
    tables();
    model_section();
    out_ << "</body>\n</html>\n";
    return out_.str();
  }

 private:
  static std::string now_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
  }

  void banner() {
    if (!has_errors(diagnostics_)) return;
    out_ << "<div class=\"banner\"><strong>Inconsistent analysis:</strong> rendered with "
         << count_errors(diagnostics_) << " error-level diagnostic(s).\n<ul>\n";
    for (const auto& d : diagnostics_) {
      if (d.severity == Severity::error) out_ << "<li>" << escape(format_diagnostic(d)) << "</li>\n";
    }
    out_ << "</ul></div>\n";
  }

  std::string row_link(const std::string& anchor) const {
    if (!rows_.count(anchor)) return "<span class=\"dangling\">" + escape(anchor) + "</span>";
    return "<a href=\"#" + escape(anchor) + "\">" + escape(anchor) + "</a>";
  }

  std::string item_link(const std::string& id) const {
    if (!items_.count(id)) return "<span class=\"dangling\">" + escape(id) + "</span>";
    return "<a href=\"#" + escape(id) + "\">" + escape(id) + "</a>";
  }

  template <class Range, class Fn>
  static std::string join(const Range& range, Fn&& fn) {
    std::string out;
    for (const auto& item : range) {
      if (!out.empty()) out += ", ";
      out += fn(item);
    }
    return out;
  }

  void statistics() {
    out_ << "<section id=\"statistics\">\n<h2>Statistics</h2>\n<table>\n"
            "<tr><th></th><th>Use cases</th><th>Sequence diagrams</th><th>State machines</th></tr>\n";
    auto line = [&](const char* label, auto member) {
      out_ << "<tr><th>" << label << "</th>";
      for (DiagramType t : {DiagramType::use_case, DiagramType::sequence, DiagramType::state_machine}) {
        out_ << "<td>" << stats_[t].*member << "</td>";
      }
      out_ << "</tr>\n";
    };
    line("Diagrams", &DiagramStats::element_count);
    line("Conditions / messages / transitions", &DiagramStats::attribute_instance_count);
    line("States", &DiagramStats::state_count);
    line("Analyzed deviations", &DiagramStats::analyzed_deviations);
    line("Interpreted deviations", &DiagramStats::interpreted_deviations);
    line("Interpreted deviations with recommendation",
         &DiagramStats::interpreted_with_recommendation);
    out_ << "<tr><th>Number of hazards</th><td colspan=\"3\">" << stats_.hazard_count
         << "</td></tr>\n</table>\n";
    if (options_.usage) {
      out_ << "<h3 id=\"guide-word-usage\">Guide word usage</h3>\n<table>\n"
              "<tr><th>Element</th><th>Attribute</th><th>Guide word</th><th>Interpreted</th></tr>\n";
      for (const auto& c : options_.usage->cells) {
        out_ << "<tr><td>" << to_string(c.attribute.element_kind) << "</td><td>"
             << escape(c.attribute.attribute) << "</td><td>" << escape(c.guide_word) << "</td><td>"
             << c.interpreted << "</td></tr>\n";
      }
      out_ << "</table>\n";
    }
    out_ << "</section>\n";
  }

  void hazards(const ProjectOutputs& outputs) {
    out_ << "<section id=\"hazards\">\n<h2>Hazards</h2>\n<table>\n"
            "<tr><th>Id</th><th>Hazard</th><th>Note</th><th>Table lines</th>"
            "<th>Recommendations</th><th>UC</th><th>SD</th><th>SM</th><th>PHA</th></tr>\n";
    for (const auto& h : outputs.hazards) {
      std::vector<RowAnchor> all;
      for (const auto& [type, anchors] : h.rows) all.insert(all.end(), anchors.begin(), anchors.end());
      out_ << "<tr id=\"" << escape(h.hazard.id) << "\"><td>" << escape(h.hazard.id) << "</td><td>"
           << escape(h.hazard.text) << "</td><td>" << escape(h.hazard.note.value_or(""))
           << "</td><td>" << join(all, [&](const RowAnchor& a) { return row_link(a.str()); })
           << "</td><td>" << join(h.recommendations, [&](const std::string& r) { return item_link(r); })
           << "</td><td>" << h.occurrences(DiagramType::use_case) << "</td><td>"
           << h.occurrences(DiagramType::sequence) << "</td><td>"
           << h.occurrences(DiagramType::state_machine) << "</td><td>"
           << escape(h.hazard.pha_annotation.value_or("")) << "</td></tr>\n";
    }
    out_ << "</table>\n</section>\n";
  }

  void recommendations(const ProjectOutputs& outputs) {
    out_ << "<section id=\"recommendations\">\n<h2>Recommendations</h2>\n<table>\n"
            "<tr><th>Id</th><th>Recommendation</th><th>Covers</th><th>Formulated in</th></tr>\n";
    for (const auto& r : outputs.recommendations) {
      out_ << "<tr id=\"" << escape(r.id) << "\"><td>" << escape(r.id) << "</td><td>"
           << escape(r.text) << "</td><td>"
           << join(r.covers, [&](const std::string& h) { return item_link(h); }) << "</td><td>"
           << join(r.sources, [&](const RowAnchor& a) { return row_link(a.str()); })
           << "</td></tr>\n";
    }
    out_ << "</table>\n</section>\n";
  }

  void hypotheses(const ProjectOutputs& outputs) {
    out_ << "<section id=\"hypotheses\">\n<h2>Hypotheses</h2>\n<table>\n"
            "<tr><th>Id</th><th>Hypothesis</th><th>Status</th><th>Made in</th></tr>\n";
    for (const auto& h : outputs.hypotheses) {
      out_ << "<tr id=\"" << escape(h.id) << "\"><td>" << escape(h.id) << "</td><td>"
           << escape(h.text) << "</td><td>" << to_string(h.status) << "</td><td>"
           << join(h.sources, [&](const RowAnchor& a) { return row_link(a.str()); })
           << "</td></tr>\n";
    }
    out_ << "</table>\n</section>\n";
  }

  std::string table_title(const std::string& table_id) const {
    if (const auto* uc = model_.find_use_case(table_id)) return uc->name;
    if (const auto* sd = model_.find_sequence(table_id)) return sd->name;
    if (const auto* sm = model_.find_state_machine(table_id)) return sm->object;
    return "not in the current model";
  }

  void tables() {
    out_ << "<section id=\"tables\">\n<h2>HAZOP tables</h2>\n";
    for (const auto& table_id : store_.table_ids()) {
      std::vector<const DeviationRowRecord*> rows;
      for (const auto& r : store_.rows) {
        if (r.table_id == table_id) rows.push_back(&r);
      }
      std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        return a->line_number < b->line_number;
      });
      out_ << "<h3 id=\"table-" << escape(table_id) << "\">";
      if (element_lookup(model_, table_id)) {
        out_ << "<a href=\"#model-" << escape(table_id) << "\">" << escape(table_id) << "</a>";
      } else {
        out_ << escape(table_id);
      }
      out_ << ": " << escape(table_title(table_id)) << "</h3>\n<table>\n"
           << "<tr><th>Line</th><th>Attribute</th><th>Guide word</th><th>Deviation</th>"
              "<th>Use case effect</th><th>Real world effect</th><th>Severity</th>"
              "<th>Possible causes</th><th>Safety recommendations</th><th>Remarks</th>"
              "<th>Hazard numbers</th><th>Status</th></tr>\n";
      for (const auto* r : rows) {
        const std::string anchor = r->anchor().str();
        out_ << "<tr id=\"" << escape(anchor) << "\" class=\"status-" << to_string(r->status)
             << "\"><td>" << escape(anchor) << "</td><td>" << escape(r->attribute_ref.str())
             << "</td><td>" << escape(r->guide_word) << "</td><td>";
        if (r->deviation.empty()) {
          out_ << "<span class=\"hint\">" << escape(r->hint) << "</span>";
        } else {
          out_ << escape(r->deviation);
        }
        out_ << "</td><td>" << escape(r->use_case_effect) << "</td><td>"
             << escape(r->real_world_effect) << "</td><td>" << escape(r->severity) << "</td><td>"
             << escape(r->possible_causes) << "</td><td>"
             << join(r->recommendations, [&](const std::string& id) { return item_link(id); })
             << "</td><td>" << escape(r->remarks) << "</td><td>"
             << join(r->hazards, [&](const std::string& id) { return item_link(id); })
             << "</td><td>" << to_string(r->status) << "</td></tr>\n";
      }
      out_ << "</table>\n";
    }
    out_ << "</section>\n";
  }

  static std::string element_text(ProjectModel single) {
    std::string text = serialize_model(single);
    auto first_block = text.find("\n\n");
    return first_block == std::string::npos ? text : text.substr(first_block + 2);
  }

  void model_section() {
    out_ << "<section id=\"model\">\n<h2>Model</h2>\n";
    for (const auto& uc : model_.use_cases) {
      ProjectModel single;
      single.use_cases.push_back(uc);
      out_ << "<h3>" << escape(uc.id) << ": " << escape(uc.name) << "</h3>\n<pre id=\"model-"
           << escape(uc.id) << "\">" << escape(element_text(std::move(single))) << "</pre>\n";
    }
    for (const auto& sd : model_.sequence_diagrams) {
      ProjectModel single;
      single.sequence_diagrams.push_back(sd);
      out_ << "<h3>" << escape(sd.id) << ": " << escape(sd.name) << " (" << escape(sd.use_case_ref)
           << ")</h3>\n<pre id=\"model-" << escape(sd.id) << "\">"
           << escape(element_text(std::move(single))) << "</pre>\n<ol>\n";
      for (const auto& m : sd.messages) {
        out_ << "<li value=\"" << m.seq_index << "\">" << escape(m.sender) << " &rarr; "
             << escape(m.receiver) << ": " << escape(m.name);
        if (!m.arguments.empty()) {
          out_ << '(' << escape(join(m.arguments, [](const MessageArgument& a) {
            return a.unit.empty() ? a.name : a.name + ": " + a.unit;
          })) << ')';
        }
        if (m.guard) out_ << " [" << escape(*m.guard) << ']';
        if (m.timing) out_ << " {" << escape(*m.timing) << '}';
        out_ << "</li>\n";
      }
      out_ << "</ol>\n";
    }
    for (const auto& sm : model_.state_machines) {
      ProjectModel single;
      single.state_machines.push_back(sm);
      out_ << "<h3>" << escape(sm.id) << ": " << escape(sm.object) << "</h3>\n<pre id=\"model-"
           << escape(sm.id) << "\">" << escape(element_text(std::move(single))) << "</pre>\n";
    }
    out_ << "</section>\n";
  }

  const ProjectModel& model_;
  const AnalysisStore& store_;
  const ProjectStats& stats_;
  const ReportOptions& options_;
  const std::vector<Diagnostic>& diagnostics_;
  std::set<std::string> rows_;
  std::set<std::string> items_;
  std::ostringstream out_;
};

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += "; ";
    out += id;
  }
  return out;
}

std::string join_anchors(const std::vector<RowAnchor>& anchors) {
  std::string out;
  for (const auto& a : anchors) {
    if (!out.empty()) out += "; ";
    out += a.str();
  }
  return out;
}

}  // namespace

std::string render_report(const ProjectModel& model, const AnalysisStore& store,
                          const ProjectStats& stats, const ReportOptions& options) {
  std::vector<Diagnostic> diagnostics = check_consistency(model, store);
  if (has_errors(diagnostics) && !options.force) throw ReportBlocked(std::move(diagnostics));
  return HtmlReport(model, store, stats, options, diagnostics).render();
}

std::map<std::string, std::string> export_csv(const AnalysisStore& store) {
  std::map<std::string, std::string> files;
  for (const auto& table_id : store.table_ids()) {
    std::vector<const DeviationRowRecord*> rows;
    for (const auto& r : store.rows) {
      if (r.table_id == table_id && r.status != RowStatus::orphaned) rows.push_back(&r);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto* a, const auto* b) { return a->line_number < b->line_number; });
    std::string text = std::string(kTableCsvHeader) + "\r\n";
    CsvWriter csv;
    for (const auto* r : rows) {
      csv.row({r->table_id, std::to_string(r->line_number), r->attribute_ref.str(), r->guide_word,
               r->deviation, r->use_case_effect, r->real_world_effect, r->severity,
               r->possible_causes, join_ids(r->recommendations), r->remarks, join_ids(r->hazards)});
    }
    files["tables/" + table_id + ".csv"] = text + csv.str();
  }

  const ProjectOutputs outputs = concatenate_outputs(store);
  CsvWriter hazards;
  hazards.row({"Id", "Hazard", "Note", "Lines", "UC", "SD", "SM", "PHA"});
  for (const auto& h : outputs.hazards) {
    std::vector<RowAnchor> all;
    for (const auto& [type, anchors] : h.rows) all.insert(all.end(), anchors.begin(), anchors.end());
    hazards.row({h.hazard.id, h.hazard.text, h.hazard.note.value_or(""), join_anchors(all),
                 std::to_string(h.occurrences(DiagramType::use_case)),
                 std::to_string(h.occurrences(DiagramType::sequence)),
                 std::to_string(h.occurrences(DiagramType::state_machine)),
                 h.hazard.pha_annotation.value_or("")});
  }
  files["tables/hazards.csv"] = hazards.str();

  CsvWriter recs;
  recs.row({"Id", "Recommendation", "Covers", "Sources"});
  for (const auto& r : outputs.recommendations) {
    recs.row({r.id, r.text, join_ids(r.covers), join_anchors(r.sources)});
  }
  files["tables/recommendations.csv"] = recs.str();

  CsvWriter hyps;
  hyps.row({"Id", "Hypothesis", "Status", "Sources"});
  for (const auto& h : outputs.hypotheses) {
    hyps.row({h.id, h.text, to_string(h.status), join_anchors(h.sources)});
  }
  files["tables/hypotheses.csv"] = hyps.str();
  return files;
}

std::vector<std::filesystem::path> write_csv_exports(const AnalysisStore& store,
                                                     const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : export_csv(store)) {
    std::filesystem::path path = out_dir / name;
    std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace hazop
