#include "drsm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drsm {

namespace {

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#ff7f0e", "#9467bd", "#8c564b"};
const char* kDashes[6] = {"", "6,3", "2,2", "8,3,2,3", "4,4", "1,3"};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

// Round tick labels to a compact form.
std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

}  // namespace

TrajectorySeries read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || trim(header) != "iter,t_cum,f,gap,step,elapsed_ms")
    throw std::runtime_error(path + ": not a trajectory CSV (bad header)");
  TrajectorySeries s;
  s.label = std::filesystem::path(path).stem().string();
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    double cols[6];
    char comma;
    for (int c = 0; c < 6; ++c) {
      if (!(ss >> cols[c])) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
      if (c < 5 && !(ss >> comma && comma == ','))
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
    }
    s.iter.push_back(cols[0]);
    s.value.push_back(cols[2]);
  }
  if (s.iter.empty()) throw std::runtime_error(path + ": empty trajectory");
  return s;
}

std::string render_svg(const std::vector<TrajectorySeries>& series) {
  if (series.empty()) throw std::invalid_argument("render_svg: no series");
  const double w = 800, h = 600;
  const double ml = 70, mr = 20, mt = 20, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (double v : s.iter) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.value) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  double ypad = 0.04 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = xmin + (xmax - xmin) * t / ticks;
    double fy = ymin + (ymax - ymin) * t / ticks;
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << h - mb << "\" x2=\"" << sx(fx)
        << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(fx) << "\" y=\"" << h - mb + 20
        << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\">iteration</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + h - mb) / 2 << ")\">f</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"1.8\"";
    if (*kDashes[k % 6]) out << " stroke-dasharray=\"" << kDashes[k % 6] << "\"";
    out << " points=\"";
    for (size_t i = 0; i < s.iter.size(); ++i)
      out << sx(s.iter[i]) << ',' << sy(s.value[i]) << ' ';
    out << "\"/>\n";
  }
  // legend, top-right
  double lx = w - mr - 240, ly = mt + 10;
  for (size_t k = 0; k < series.size(); ++k) {
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\""
        << ly << "\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"1.8\"";
    if (*kDashes[k % 6]) out << " stroke-dasharray=\"" << kDashes[k % 6] << "\"";
    out << "/>\n";
    out << "<text x=\"" << lx + 36 << "\" y=\"" << ly + 4 << "\">" << series[k].label
        << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::string& out_path, const std::vector<TrajectorySeries>& series) {
  std::string svg = render_svg(series);  // render fully before touching the file
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << svg;
}

}  // namespace drsm
