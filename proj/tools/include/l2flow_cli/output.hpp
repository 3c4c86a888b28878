#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <string>

#include "l2flow/flow.hpp"

namespace l2flow::cli {

inline constexpr const char* kSeriesHeader =
    "t,vol,F,E,calabi,total_curvature,dissipation,max_abs_s,dt_used";

/// Throws Error if the record breaks an energy invariant: finite fields,
/// vol > 0, F >= 0, calabi >= 0, E >= total_curvature^2 and
/// calabi = F - total_curvature^2 / vol to 1e-8 relative to F.
void check_record(const DiagnosticsRecord& r);

/// One CSV row, 17 significant digits, no trailing newline.
std::string format_record(const DiagnosticsRecord& r);

/// series.csv writer. Rows are checked before they are written.
class SeriesWriter {
 public:
  explicit SeriesWriter(const std::filesystem::path& path);
  ~SeriesWriter();
  SeriesWriter(const SeriesWriter&) = delete;
  SeriesWriter& operator=(const SeriesWriter&) = delete;

  void write(const DiagnosticsRecord& r);
  void close();

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
};

/// Log-scale Calabi and F against t, and vol against t, as a standalone SVG.
void write_summary_svg(const std::filesystem::path& path,
                       std::span<const DiagnosticsRecord> records);

}  // namespace l2flow::cli
