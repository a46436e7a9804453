#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mrfnet/errors.hpp"
#include "mrfnet/experiment.hpp"
#include "mrfnet/io.hpp"

namespace mrfnet {

namespace {

using io::format_double;

std::string failure_name(FailureKind k) {
  switch (k) {
    case FailureKind::SamplerTimeout: return "sampler_timeout";
    case FailureKind::Numerical: return "numerical";
    case FailureKind::Other: break;
  }
  return "other";
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string report_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "setting_r,beta,n,a_n,b_n,boundary_size,rel_mse_mean,rel_mse_sd,precision_mean,"
         "recall_mean,iters_mean,wall_ms\n";
  for (const auto& r : report.rows) {
    out << r.r << ',' << format_double(r.beta) << ',' << r.n << ',' << r.a_n << ','
        << format_double(r.b_n) << ',' << r.boundary_size << ',' << format_double(r.rel_mse_mean)
        << ',' << format_double(r.rel_mse_sd) << ',' << format_double(r.precision_mean) << ','
        << format_double(r.recall_mean) << ',' << format_double(r.iters_mean) << ','
        << format_double(r.wall_ms) << '\n';
  }
  return out.str();
}

static std::string annotations_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "setting_r,beta,replication,kind,message\n";
  for (const auto& a : report.annotations)
    out << a.r << ',' << format_double(a.beta) << ',' << a.replication << ','
        << failure_name(a.kind) << ',' << csv_quote(a.message) << '\n';
  return out.str();
}

std::string report_svg(const MetricsReport& report) {
  constexpr double W = 640, H = 420, L = 70, R = 130, T = 30, B = 60;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  std::map<std::size_t, std::vector<const ReportRow*>> curves;
  double bmin = INFINITY, bmax = -INFINITY, ymax = 0.0;
  for (const auto& row : report.rows) {
    curves[row.r].push_back(&row);
    bmin = std::min(bmin, row.beta);
    bmax = std::max(bmax, row.beta);
    if (std::isfinite(row.rel_mse_mean))
      ymax = std::max(ymax, row.rel_mse_mean + (std::isfinite(row.rel_mse_sd) ? row.rel_mse_sd : 0));
  }
  if (curves.empty()) bmin = 0, bmax = 1;
  if (bmax <= bmin) bmax = bmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;

  auto sx = [&](double b) { return L + (b - bmin) / (bmax - bmin) * (W - L - R); };
  auto sy = [&](double v) { return H - B - std::max(0.0, v) / ymax * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    s << "<text x=\"" << L - 8 << "\" y=\"" << fixed(sy(v) + 4) << "\" text-anchor=\"end\">"
      << fixed(v, 3) << "</text>\n";
  }
  std::vector<double> betas;
  for (const auto& row : report.rows) betas.push_back(row.beta);
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  for (double b : betas)
    s << "<text x=\"" << fixed(sx(b)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
      << format_double(b) << "</text>\n";
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
    << "\" text-anchor=\"middle\">beta</text>\n";
  s << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (T + H - B) / 2 << ")\">relative MSE</text>\n";

  std::size_t ci = 0;
  for (const auto& [r, rows] : curves) {
    const char* color = palette[ci % std::size(palette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto* row : rows) {
      if (!std::isfinite(row->rel_mse_mean)) continue;
      s << (first ? "" : " ") << fixed(sx(row->beta)) << ',' << fixed(sy(row->rel_mse_mean));
      first = false;
    }
    s << "\"/>\n";
    for (const auto* row : rows) {
      if (!std::isfinite(row->rel_mse_mean)) continue;
      const double x = sx(row->beta);
      const double sd = std::isfinite(row->rel_mse_sd) ? row->rel_mse_sd : 0.0;
      s << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(sy(row->rel_mse_mean - sd))
        << "\" x2=\"" << fixed(x) << "\" y2=\"" << fixed(sy(row->rel_mse_mean + sd))
        << "\" stroke=\"" << color << "\"/>\n";
      s << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(sy(row->rel_mse_mean))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = T + 10 + 20.0 * static_cast<double>(ci);
    s << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\""
      << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\">r = " << r << "</text>\n";
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

void emit_report(const MetricsReport& report, const ExperimentConfig& cfg,
                 const std::filesystem::path& out_dir) {
  if (report.rows.empty()) throw ArgumentError("empty report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ArgumentError("cannot create " + out_dir.string() + ": " + ec.message());
  io::write_file(out_dir / "report.csv", report_csv(report));
  io::write_file(out_dir / "annotations.csv", annotations_csv(report));
  io::write_file(out_dir / "mse_vs_beta.svg", report_svg(report));
  io::write_file(out_dir / "config.resolved.json", to_json(cfg).dump(2) + "\n");
}

}  // namespace mrfnet
