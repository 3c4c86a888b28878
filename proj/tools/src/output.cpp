#include "l2flow_cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "l2flow/error.hpp"

namespace l2flow::cli {
namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void violated(const DiagnosticsRecord& r, const std::string& what) {
  throw Error("record invariant violated at t=" + g17(r.t) + ": " + what);
}

}  // namespace

void check_record(const DiagnosticsRecord& r) {
  for (double x : {r.t, r.vol, r.F, r.E, r.calabi, r.total_curvature,
                   r.dissipation, r.max_abs_s, r.dt_used}) {
    if (!std::isfinite(x)) violated(r, "non-finite value");
  }
  if (!(r.vol > 0.0)) violated(r, "vol <= 0");
  if (r.F < 0.0) violated(r, "F < 0");
  if (r.calabi < 0.0) violated(r, "calabi < 0");
  const double tc2 = r.total_curvature * r.total_curvature;
  const double tol = 1e-12 * std::max(r.E, tc2) + 1e-300;
  if (r.E < tc2 - tol) violated(r, "E < total_curvature^2");
  const double expanded = r.F - tc2 / r.vol;
  if (std::abs(r.calabi - expanded) > 1e-8 * r.F + 1e-14) {
    violated(r, "calabi != F - total_curvature^2 / vol");
  }
}

std::string format_record(const DiagnosticsRecord& r) {
  std::string out;
  for (double x : {r.t, r.vol, r.F, r.E, r.calabi, r.total_curvature,
                   r.dissipation, r.max_abs_s, r.dt_used}) {
    if (!out.empty()) out += ',';
    out += g17(x);
  }
  return out;
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.string().c_str(), "w");
  if (file_ == nullptr) throw Error("cannot write '" + path.string() + "'");
  std::fprintf(file_, "%s\n", kSeriesHeader);
}

SeriesWriter::~SeriesWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void SeriesWriter::write(const DiagnosticsRecord& r) {
  check_record(r);
  if (std::fprintf(file_, "%s\n", format_record(r).c_str()) < 0) {
    throw Error("failed writing '" + path_.string() + "'");
  }
}

void SeriesWriter::close() {
  if (file_ == nullptr) return;
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw Error("failed closing '" + path_.string() + "'");
}

namespace {

constexpr double kPanelW = 560.0;
constexpr double kPanelH = 200.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginT = 30.0;
constexpr double kGap = 50.0;

struct Panel {
  std::string title;
  bool log_scale;
  std::function<double(const DiagnosticsRecord&)> value;
};

void draw_panel(std::ostringstream& svg, const Panel& p, double top,
                std::span<const DiagnosticsRecord> recs) {
  std::vector<double> ts, ys;
  for (const auto& r : recs) {
    double y = p.value(r);
    if (p.log_scale) {
      if (!(y > 0.0)) continue;
      y = std::log10(y);
    }
    ts.push_back(r.t);
    ys.push_back(y);
  }
  svg << "<g transform=\"translate(" << kMarginL << "," << top << ")\">\n";
  svg << "<rect width=\"" << kPanelW << "\" height=\"" << kPanelH
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"0\" y=\"-8\" font-size=\"13\">" << p.title << "</text>\n";
  if (ts.size() >= 2) {
    const auto [tmin, tmax] = std::minmax_element(ts.begin(), ts.end());
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    const double t0 = *tmin, t1 = *tmax > *tmin ? *tmax : *tmin + 1.0;
    double y0 = *ymin, y1 = *ymax;
    if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y0))) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    svg << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double px = (ts[k] - t0) / (t1 - t0) * kPanelW;
      const double py = kPanelH - (ys[k] - y0) / (y1 - y0) * kPanelH;
      svg << px << ',' << py << ' ';
    }
    svg << "\"/>\n";
    auto label = [&](double v) { return p.log_scale ? "1e" + g17(std::round(v * 100) / 100) : g17(v); };
    svg << "<text x=\"-6\" y=\"10\" font-size=\"10\" text-anchor=\"end\">" << label(y1) << "</text>\n";
    svg << "<text x=\"-6\" y=\"" << kPanelH << "\" font-size=\"10\" text-anchor=\"end\">"
        << label(y0) << "</text>\n";
    svg << "<text x=\"0\" y=\"" << kPanelH + 14 << "\" font-size=\"10\">t=" << g17(t0) << "</text>\n";
    svg << "<text x=\"" << kPanelW << "\" y=\"" << kPanelH + 14
        << "\" font-size=\"10\" text-anchor=\"end\">t=" << g17(t1) << "</text>\n";
  }
  svg << "</g>\n";
}

}  // namespace

void write_summary_svg(const std::filesystem::path& path,
                       std::span<const DiagnosticsRecord> records) {
  const std::vector<Panel> panels = {
      {"Calabi energy (log scale)", true, [](const auto& r) { return r.calabi; }},
      {"F (log scale)", true, [](const auto& r) { return r.F; }},
      {"volume", false, [](const auto& r) { return r.vol; }},
  };
  std::ostringstream svg;
  svg.precision(6);
  const double height = kMarginT + panels.size() * (kPanelH + kGap);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelW + kMarginL + 30
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    draw_panel(svg, panels[k], kMarginT + k * (kPanelH + kGap), records);
  }
  svg << "</svg>\n";
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << svg.str();
}

}  // namespace l2flow::cli
