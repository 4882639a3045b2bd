#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "horoeq/harness.hpp"
#include "horoeq/stats.hpp"

namespace horoeq::harness {

namespace {

using nlohmann::json;

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 80, kRight = 280, kTop = 30, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// "--" may not appear inside an XML comment.
std::string comment_safe(std::string s) {
  for (std::size_t pos; (pos = s.find("--")) != std::string::npos;) s.replace(pos, 2, "- -");
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

PlotCurve curve_from_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open report " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, path.string() + ": " + e.what());
  }
  PlotCurve c;
  const json meta = doc.value("meta", json::object());
  c.label = meta.contains("observable") ? meta.at("observable").get<std::string>() : path.stem().string();
  c.floor = meta.value("fit_floor", 1e-15);
  for (const auto& row : doc.value("rows", json::array())) {
    if (!row.contains("n") || !row.contains("abs_error") || !row.at("abs_error").is_number()) continue;
    c.n_values.push_back(row.at("n").get<u64>());
    c.errors.push_back(row.at("abs_error").get<double>());
  }
  return c;
}

PlotCurve curve_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open report " + path.string());
  std::string line;
  if (!std::getline(in, line)) return {path.stem().string(), {}, {}, 1e-15};
  const auto header = split_csv_line(line);
  const auto n_col = std::find(header.begin(), header.end(), "n") - header.begin();
  const auto e_col = std::find(header.begin(), header.end(), "abs_error") - header.begin();
  const auto width = static_cast<std::ptrdiff_t>(header.size());
  if (n_col == width || e_col == width) {
    throw Error(Errc::InvalidArgument, path.string() + " has no n/abs_error columns");
  }
  PlotCurve c{path.stem().string(), {}, {}, 1e-15};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<std::ptrdiff_t>(cells.size()) != width) continue;
    c.n_values.push_back(std::stoull(cells[n_col]));
    c.errors.push_back(std::stod(cells[e_col]));
  }
  return c;
}

}  // namespace

std::vector<PlotCurve> load_curves(const std::vector<std::filesystem::path>& reports) {
  std::vector<PlotCurve> curves;
  for (const auto& p : reports) {
    curves.push_back(p.extension() == ".csv" ? curve_from_csv(p) : curve_from_json(p));
  }
  return curves;
}

std::string render_plot(const std::vector<PlotCurve>& curves) {
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.errors.size(); ++i) {
      if (!(c.errors[i] > 0) || c.n_values[i] == 0) continue;
      x_lo = std::min(x_lo, std::log10(static_cast<double>(c.n_values[i])));
      x_hi = std::max(x_hi, std::log10(static_cast<double>(c.n_values[i])));
      y_lo = std::min(y_lo, std::log10(c.errors[i]));
      y_hi = std::max(y_hi, std::log10(c.errors[i]));
    }
  }
  if (!(x_lo <= x_hi)) throw Error(Errc::NoData, "no positive errors to plot");
  x_lo = std::floor(x_lo);
  x_hi = std::max(std::ceil(x_hi), x_lo + 1);
  y_lo = std::floor(y_lo);
  y_hi = std::max(std::ceil(y_hi), y_lo + 1);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return kTop + (y_hi - ly) / (y_hi - y_lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<!-- data\nlabel,n,abs_error\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.errors.size(); ++i) {
      os << comment_safe(c.label) << "," << c.n_values[i] << "," << format_number(c.errors[i]) << "\n";
    }
  }
  os << "-->\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  for (double e = x_lo; e <= x_hi; e += 1) {
    const std::string x = fmt("%.2f", px(e));
    os << "<line x1=\"" << x << "\" y1=\"" << fmt("%.2f", py(y_lo)) << "\" x2=\"" << x << "\" y2=\""
       << fmt("%.2f", py(y_hi)) << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << fmt("%.2f", py(y_lo) + 18) << "\" text-anchor=\"middle\">10<tspan dy=\"-5\" font-size=\"9\">"
       << static_cast<long>(e) << "</tspan></text>\n";
  }
  for (double e = y_lo; e <= y_hi; e += 1) {
    const std::string y = fmt("%.2f", py(e));
    os << "<line x1=\"" << fmt("%.2f", px(x_lo)) << "\" y1=\"" << y << "\" x2=\"" << fmt("%.2f", px(x_hi))
       << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt("%.2f", px(x_lo) - 8) << "\" y=\"" << fmt("%.2f", py(e) + 4)
       << "\" text-anchor=\"end\">10<tspan dy=\"-5\" font-size=\"9\">" << static_cast<long>(e) << "</tspan></text>\n";
  }
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt("%.2f", kLeft + pw / 2) << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">n</text>\n";
  os << "<text x=\"20\" y=\"" << fmt("%.2f", kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << fmt("%.2f", kTop + ph / 2) << ")\">absolute error</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const PlotCurve& c = curves[ci];
    const char* color = kPalette[ci % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < c.errors.size(); ++i) {
      if (!(c.errors[i] > 0) || c.n_values[i] == 0) continue;
      const double lx = std::log10(static_cast<double>(c.n_values[i])), ly = std::log10(c.errors[i]);
      pts += (pts.empty() ? "" : " ") + fmt("%.2f", px(lx)) + "," + fmt("%.2f", py(ly));
      os << "<circle cx=\"" << fmt("%.2f", px(lx)) << "\" cy=\"" << fmt("%.2f", py(ly)) << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
    }
    if (!pts.empty()) {
      os << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }

    std::string annotation = "slope n/a";
    std::string slope_attr;
    try {
      const stats::RateFit fit = stats::rate_fit(c.n_values, c.errors, c.floor);
      annotation = "slope " + fmt("%.4f", -fit.kappa);
      slope_attr = " data-slope=\"" + format_number(-fit.kappa) + "\"";
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientData) throw;
    }
    const double ly = kTop + 14 + 34.0 * static_cast<double>(ci);
    const double lx = kWidth - kRight + 16;
    os << "<g class=\"legend\"" << slope_attr << ">\n";
    os << "<line x1=\"" << lx << "\" y1=\"" << fmt("%.2f", ly - 4) << "\" x2=\"" << lx + 20 << "\" y2=\""
       << fmt("%.2f", ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 26 << "\" y=\"" << fmt("%.2f", ly) << "\">" << xml_escape(c.label) << "</text>\n";
    os << "<text x=\"" << lx + 26 << "\" y=\"" << fmt("%.2f", ly + 14) << "\" fill=\"#555555\">" << annotation
       << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::filesystem::path emit_plot(const std::vector<std::filesystem::path>& reports, const std::filesystem::path& out) {
  if (reports.empty()) throw Error(Errc::NoData, "no reports to plot");
  const std::string svg = render_plot(load_curves(reports));
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot write " + out.string());
  file << svg;
  return out;
}

}  // namespace horoeq::harness
