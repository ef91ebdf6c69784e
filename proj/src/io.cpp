#include "ringbumps/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ringbumps {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path), cols_(header.size()) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 < header.size() ? "," : "");
  out_ << '\n';
}

namespace {

// compact blue-white-red map on [0, 1]
void colormap(double t, int& r, int& g, int& b) {
  t = std::clamp(t, 0.0, 1.0);
  if (t < 0.5) {
    double u = t / 0.5;
    r = static_cast<int>(30 + 225 * u);
    g = static_cast<int>(60 + 195 * u);
    b = 255;
  } else {
    double u = (t - 0.5) / 0.5;
    r = 255;
    g = static_cast<int>(255 - 195 * u);
    b = static_cast<int>(255 - 225 * u);
  }
}

}  // namespace

void svg_heatmap(const std::string& path, const std::vector<double>& times,
                 const Eigen::ArrayXd& positions,
                 const std::vector<Eigen::ArrayXd>& columns,
                 const std::string& title) {
  if (times.size() != columns.size() || columns.empty())
    throw IoError("heatmap needs one column per time");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");

  const int width = 960, height = 520, ml = 60, mb = 40, mt = 30, mr = 20;
  const double pw = width - ml - mr, ph = height - mt - mb;
  // coarsen large grids so the file stays a plot, not a data dump
  const int st_t = static_cast<int>((times.size() + 479) / 480);
  const int st_x = static_cast<int>((positions.size() + 199) / 200);
  const int nt = static_cast<int>((times.size() + st_t - 1) / st_t);
  const int nx = static_cast<int>((positions.size() + st_x - 1) / st_x);

  double lo = columns[0].minCoeff(), hi = columns[0].maxCoeff();
  for (const auto& c : columns) {
    lo = std::min(lo, c.minCoeff());
    hi = std::max(hi, c.maxCoeff());
  }
  if (hi <= lo) hi = lo + 1.0;

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<text x='" << width / 2 << "' y='18' text-anchor='middle' "
      << "font-family='sans-serif' font-size='14'>" << title << "</text>\n";

  double cw = pw / nt, ch = ph / nx;
  for (int k = 0; k < nt; ++k) {
    const Eigen::ArrayXd& col = columns[static_cast<std::size_t>(k) * st_t];
    for (int i = 0; i < nx; ++i) {
      int r, g, b;
      colormap((col[static_cast<long>(i) * st_x] - lo) / (hi - lo), r, g, b);
      // y axis: position from -pi (bottom) to pi (top)
      double y = mt + ph - (i + 1) * ch;
      out << "<rect x='" << ml + k * cw << "' y='" << y << "' width='"
          << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='rgb(" << r << ","
          << g << "," << b << ")'/>\n";
    }
  }
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='black'/>\n";
  out << "<text x='" << ml + pw / 2 << "' y='" << height - 10
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>t"
      << "</text>\n";
  out << "<text x='15' y='" << mt + ph / 2
      << "' font-family='sans-serif' font-size='12' transform='rotate(-90 15 "
      << mt + ph / 2 << ")'>x</text>\n";
  out << "<text x='" << ml << "' y='" << height - 10
      << "' font-family='sans-serif' font-size='11'>" << format_number(times.front())
      << "</text>\n";
  out << "<text x='" << ml + pw << "' y='" << height - 10
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << format_number(times.back()) << "</text>\n";
  out << "</svg>\n";
}

void svg_lineplot(const std::string& path, const std::vector<LineSeries>& series,
                  const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int width = 960, height = 520, ml = 60, mb = 40, mt = 30, mr = 20;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, s.x[i]); xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]); yhi = std::max(yhi, s.y[i]);
    }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;

  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#8c564b", "#e377c2"};
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<text x='" << width / 2 << "' y='18' text-anchor='middle' "
      << "font-family='sans-serif' font-size='14'>" << title << "</text>\n";
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='black'/>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out << "<polyline fill='none' stroke='" << palette[si % 6]
        << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double px = ml + (s.x[i] - xlo) / (xhi - xlo) * pw;
      double py = mt + ph - (s.y[i] - ylo) / (yhi - ylo) * ph;
      out << px << ',' << py << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << ml + 10 << "' y='" << mt + 18 + 16 * si
        << "' font-family='sans-serif' font-size='12' fill='" << palette[si % 6]
        << "'>" << s.name << "</text>\n";
  }
  out << "<text x='" << ml << "' y='" << height - 10
      << "' font-family='sans-serif' font-size='11'>" << format_number(xlo)
      << "</text>\n";
  out << "<text x='" << ml + pw << "' y='" << height - 10
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << format_number(xhi) << "</text>\n";
  out << "<text x='5' y='" << mt + ph << "' font-family='sans-serif' "
      << "font-size='11'>" << format_number(ylo) << "</text>\n";
  out << "<text x='5' y='" << mt + 12 << "' font-family='sans-serif' "
      << "font-size='11'>" << format_number(yhi) << "</text>\n";
  out << "</svg>\n";
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& [k, v] : kv) out << k << ": " << v << '\n';
}

}  // namespace ringbumps
