#include "sgnav/plots.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "sgnav/error.hpp"

namespace sgnav {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 56.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
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

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const std::size_t end = s.find(';', i);
    const std::string ent = s.substr(i, end - i + 1);
    if (ent == "&amp;") out += '&';
    else if (ent == "&lt;") out += '<';
    else if (ent == "&gt;") out += '>';
    else if (ent == "&quot;") out += '"';
    else out += ent;
    i = end;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Value of attribute `name` inside `tag`, or nullopt.
std::optional<std::string> attribute(const std::string& tag, const std::string& name) {
  const std::string key = " " + name + "=\"";
  const std::size_t p = tag.find(key);
  if (p == std::string::npos) return std::nullopt;
  const std::size_t start = p + key.size();
  const std::size_t end = tag.find('"', start);
  if (end == std::string::npos) return std::nullopt;
  return unescape(tag.substr(start, end - start));
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::Io, "bad number '" + s + "' in " + path.string());
  }
  return v;
}

}  // namespace

void write_svg(const LinePlot& plot, const std::filesystem::path& path) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0;
  if (!(y0 <= y1)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto sx = [&](double v) { return kMargin + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return kHeight - kMargin - (v - y0) / (y1 - y0) * ph; };

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\">\n",
                kWidth, kHeight, kWidth, kHeight);
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(plot.title) << "</text>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(plot.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 14 " << kHeight / 2
      << ")\" text-anchor=\"middle\" font-size=\"12\">" << escape(plot.y_label) << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"10\">%.3g</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"10\">%.3g</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
                kMargin, kHeight - kMargin + 14, x0, kWidth - kMargin, kHeight - kMargin + 14, x1,
                kMargin - 4, kHeight - kMargin, y0, kMargin - 4, kMargin + 4, y1);
  out << buf;

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<g class=\"series\" data-name=\"" << escape(s.name) << "\" stroke=\"" << color
        << "\" fill=\"" << color << "\">\n";
    out << "<polyline fill=\"none\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", sx(s.x[i]), sy(s.y[i]));
      out << buf;
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" ", sx(s.x[i]),
                    sy(s.y[i]));
      out << buf << "data-x=\"" << fmt(s.x[i]) << "\" data-y=\"" << fmt(s.y[i]) << "\"/>\n";
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" stroke=\"none\">", kWidth - kMargin - 90,
                  kMargin + 14.0 * static_cast<double>(k));
    out << buf << escape(s.name) << "</text>\n</g>\n";
  }
  out << "</svg>\n";
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<PlotSeries> read_svg_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::vector<PlotSeries> out;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) break;
    const std::string tag = text.substr(pos, end - pos + 1);
    pos = end;
    if (tag.rfind("<g ", 0) == 0) {
      if (auto name = attribute(tag, "data-name")) out.push_back({*name, {}, {}});
    } else if (tag.rfind("<circle ", 0) == 0) {
      auto x = attribute(tag, "data-x");
      auto y = attribute(tag, "data-y");
      if (!x || !y) continue;
      if (out.empty()) throw Error(ErrorCode::Io, "data point outside a series in " + path.string());
      out.back().x.push_back(parse_double(*x, path));
      out.back().y.push_back(parse_double(*y, path));
    }
  }
  return out;
}

std::vector<CurriculumRecord> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<CurriculumRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurriculumRecord r{};
    if (std::sscanf(line.c_str(), "%ld,%d,%lf,%lf", &r.episode, &r.level.index, &r.level.R,
                    &r.level.phi) != 4) {
      throw Error(ErrorCode::Io, "malformed difficulty row in " + path.string() + ": " + line);
    }
    out.push_back(r);
  }
  return out;
}

LinePlot difficulty_plot(const std::vector<CurriculumRecord>& history) {
  LinePlot p{"Curriculum difficulty", "episode", "level", {{"R [m]", {}, {}}, {"phi [rad]", {}, {}}}};
  for (const auto& r : history) {
    const double e = static_cast<double>(r.episode);
    p.series[0].x.push_back(e);
    p.series[0].y.push_back(r.level.R);
    p.series[1].x.push_back(e);
    p.series[1].y.push_back(r.level.phi);
  }
  return p;
}

LinePlot success_plot(const EvalReport& report) {
  LinePlot p{"Success rate vs initial distance", "initial distance error [m]", "success rate",
             {{"success", {}, {}}}};
  for (const auto& b : report.buckets) {
    p.series[0].x.push_back(b.distance);
    p.series[0].y.push_back(b.success_rate());
  }
  return p;
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& metrics_dir,
                                              const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const fs::path difficulty = metrics_dir / "difficulty.csv";
  const fs::path eval = metrics_dir / "eval.csv";
  const bool have_difficulty = fs::exists(difficulty);
  const bool have_eval = fs::exists(eval);
  if (!have_difficulty && !have_eval) {
    throw Error(ErrorCode::Io, "no difficulty.csv or eval.csv in " + metrics_dir.string());
  }
  fs::create_directories(out_dir);
  const bool copy = !fs::equivalent(metrics_dir, out_dir);
  std::vector<fs::path> written;
  if (have_difficulty) {
    write_svg(difficulty_plot(read_history_csv(difficulty)), out_dir / "difficulty.svg");
    written.push_back(out_dir / "difficulty.svg");
    if (copy) {
      fs::copy_file(difficulty, out_dir / "difficulty.csv", fs::copy_options::overwrite_existing);
      written.push_back(out_dir / "difficulty.csv");
    }
  }
  if (have_eval) {
    write_svg(success_plot(read_eval_csv(eval)), out_dir / "success.svg");
    written.push_back(out_dir / "success.svg");
    if (copy) {
      fs::copy_file(eval, out_dir / "eval.csv", fs::copy_options::overwrite_existing);
      written.push_back(out_dir / "eval.csv");
    }
  }
  return written;
}

}  // namespace sgnav
