#pragma once

// Result tables: JSON for machines, aligned columns for people.

#include <iomanip>
#include <sstream>

#include "psyling/evaluation/metrics.hpp"

namespace psyling {

struct TableRequest {
  bool macro = true;
  bool micro = false;
  bool per_label = false;
};

inline std::string report_name(const EvalReport& r, std::size_t i) {
  if (r.metadata.is_object() && r.metadata.contains("name") && r.metadata["name"].is_string())
    return r.metadata["name"].get<std::string>();
  return "run " + std::to_string(i + 1);
}

inline nlohmann::json render_json(std::span<const EvalReport> reports) {
  if (reports.empty()) throw UsageError("render: no reports");
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(r.to_json());
  return j;
}

namespace detail {

inline std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

inline void emit_table(std::ostream& out, const std::string& title, const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << "  ";
      // first column left-aligned, numbers right-aligned
      if (c == 0)
        out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
      else
        out << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  out << title << '\n';
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
}

}  // namespace detail

/// One row per report in each requested block.
inline std::string render_tables(std::span<const EvalReport> reports, TableRequest req = {}) {
  if (reports.empty()) throw UsageError("render: no reports");
  std::ostringstream out;
  const std::vector<std::string> header = {"model", "precision", "recall", "f1"};
  bool first = true;
  auto block = [&](const std::string& title, auto pick) {
    if (!first) out << '\n';
    first = false;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      auto [p, r, f] = pick(reports[i]);
      rows.push_back({report_name(reports[i], i), detail::fixed4(p), detail::fixed4(r), detail::fixed4(f)});
    }
    detail::emit_table(out, title, header, rows);
  };
  if (req.macro)
    block("macro", [](const EvalReport& r) { return std::tuple{r.macro_precision, r.macro_recall, r.macro_f1}; });
  if (req.micro)
    block("micro", [](const EvalReport& r) { return std::tuple{r.micro_precision, r.micro_recall, r.micro_f1}; });
  if (req.per_label) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (!first) out << '\n';
      first = false;
      std::vector<std::vector<std::string>> rows;
      const auto& r = reports[i];
      for (std::size_t l = 0; l < r.labels.size(); ++l) {
        const auto& s = r.per_label[l];
        rows.push_back({r.labels[l], detail::fixed4(s.precision), detail::fixed4(s.recall), detail::fixed4(s.f1),
                        std::to_string(s.support())});
      }
      detail::emit_table(out, "per-label: " + report_name(r, i), {"label", "precision", "recall", "f1", "support"},
                         rows);
    }
  }
  return out.str();
}

}  // namespace psyling
