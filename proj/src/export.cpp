#include "kronload/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "kronload/error.hpp"

namespace kronload {

double round_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_to(x, decimals));
  std::string s = buf;
  if (s.starts_with("-") && std::all_of(s.begin() + 1, s.end(), [](char c) { return c == '0' || c == '.'; })) {
    s.erase(0, 1);
  }
  return s;
}

std::string loadings_csv(const LoadingTable& t) {
  std::string out = "partition,r_loading,b_loading\n";
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    out += '"' + format((*t.order)[i]) + "\"," + fixed(t.r[i], 4) + ',' + fixed(t.b[i], 4) + '\n';
  }
  return out;
}

std::string loadings_json(const LoadingTable& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    rows.push_back({{"partition", format((*t.order)[i])}, {"r_loading", round_to(t.r[i], 4)}, {"b_loading", round_to(t.b[i], 4)}});
  }
  nlohmann::ordered_json j;
  j["n"] = t.n;
  j["iterations"] = {t.iterations.first, t.iterations.second};
  j["loadings"] = rows;
  return j.dump(2) + "\n";
}

ScanFits fit_scan(const ScanResult& result) {
  const auto& r = result.r_moments.all;
  const auto& b = result.b_moments.all;
  const auto& bn = result.b_moments.nonzero;
  ScanFits f;
  f.r = fit_normal(r.mean(), r.variance());
  f.b = fit_gamma(b.mean(), b.variance());
  f.b_nonzero = bn.empty() ? FitParams{} : fit_gamma(bn.mean(), bn.variance());
  return f;
}

namespace {

nlohmann::ordered_json triple_json(const std::optional<Threshold>& t) {
  if (!t) return nullptr;
  return {format(t->attained_by.lambda), format(t->attained_by.mu), format(t->attained_by.nu)};
}

nlohmann::ordered_json fit_json(const FitParams& f) {
  nlohmann::ordered_json j;
  j["family"] = f.family_name();
  if (f.family == FitParams::Family::normal) {
    j["mean"] = round_to(f.p1, 6);
    j["stddev"] = round_to(f.p2, 6);
  } else {
    j["shape"] = round_to(f.p1, 6);
    j["scale"] = round_to(f.p2, 6);
  }
  j["sample_mean"] = round_to(f.sample_mean, 6);
  j["sample_variance"] = round_to(f.sample_variance, 6);
  return j;
}

}  // namespace

std::string scan_json(const ScanResult& result) {
  const auto& th = result.thresholds;
  nlohmann::ordered_json j;
  j["n"] = th.n;
  j["r_star"] = th.r_star ? nlohmann::ordered_json(round_to(th.r_star->value, 4)) : nullptr;
  j["b_star"] = th.b_star ? nlohmann::ordered_json(round_to(th.b_star->value, 4)) : nullptr;
  j["argmin_r"] = triple_json(th.r_star);
  j["argmin_b"] = triple_json(th.b_star);
  j["provenance"] = to_string(th.provenance);
  j["total_triples"] = result.total_triples;
  j["nonzero_count"] = result.nonzero_count;
  j["zero_count"] = result.zero_count;
  j["r_below_count"] = result.r_below_count;
  j["b_below_count"] = result.b_below_count;
  j["depth_violating_count"] = result.depth_violating_count;
  j["min_r_depth_violating"] =
      std::isfinite(result.min_r_depth_violating) ? nlohmann::ordered_json(round_to(result.min_r_depth_violating, 4)) : nullptr;
  const ScanFits fits = fit_scan(result);
  j["fits"] = {{"r", fit_json(fits.r)}, {"b", fit_json(fits.b)}};
  if (!result.b_moments.nonzero.empty()) j["fits"]["b_nonzero"] = fit_json(fits.b_nonzero);
  return j.dump(2) + "\n";
}

std::string histogram_csv(const ClassHistograms& h) {
  std::string out = "bin_left,bin_right,count_nonzero,count_zero,count_depth_violating\n";
  for (std::size_t i = 0; i < h.nonzero.bins(); ++i) {
    out += fixed(h.nonzero.edges[i], 4) + ',' + fixed(h.nonzero.edges[i + 1], 4) + ',' +
           std::to_string(h.nonzero.counts[i]) + ',' + std::to_string(h.zero.counts[i]) + ',' +
           std::to_string(h.depth_violating.counts[i]) + '\n';
  }
  return out;
}

std::string render_histogram_svg(const std::vector<HistogramSeries>& series, const std::optional<FitParams>& overlay,
                                 const std::string& title) {
  constexpr double width = 800, height = 480, left = 60, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  std::string svg;
  auto add = [&](const std::string& s) { svg += s; };
  add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n");
  add("<rect width=\"800\" height=\"480\" fill=\"white\"/>\n");
  add("<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n");
  if (series.empty() || series.front().histogram->bins() == 0) {
    add("</svg>\n");
    return svg;
  }
  const Histogram& base = *series.front().histogram;
  const double lo = base.edges.front();
  const double hi = base.edges.back();
  std::uint64_t peak = 1;
  for (const auto& s : series) {
    for (auto c : s.histogram->counts) peak = std::max(peak, c);
  }
  double curve_scale = 0.0;
  if (overlay) curve_scale = static_cast<double>(base.total());
  auto x_of = [&](double x) { return left + (x - lo) / (hi - lo) * plot_w; };
  auto y_of = [&](double c) { return top + plot_h - c / static_cast<double>(peak) * plot_h; };

  add("<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top + plot_h, 1) + "\" x2=\"" + fixed(left + plot_w, 1) +
      "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n");
  add("<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top, 1) + "\" x2=\"" + fixed(left, 1) + "\" y2=\"" +
      fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n");
  for (int t = 0; t <= 5; ++t) {
    const double x = lo + (hi - lo) * t / 5.0;
    add("<text x=\"" + fixed(x_of(x), 1) + "\" y=\"" + fixed(top + plot_h + 18, 1) +
        "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fixed(x, 1) + "</text>\n");
  }
  add("<text x=\"" + fixed(left - 6, 1) + "\" y=\"" + fixed(top + 4, 1) +
      "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + std::to_string(peak) + "</text>\n");

  const double k = static_cast<double>(series.size());
  for (std::size_t s = 0; s < series.size(); ++s) {
    const Histogram& h = *series[s].histogram;
    add("<g fill=\"" + series[s].color + "\" class=\"series\" data-label=\"" + series[s].label + "\">\n");
    for (std::size_t i = 0; i < h.bins(); ++i) {
      const double x0 = x_of(h.edges[i]);
      const double bw = (x_of(h.edges[i + 1]) - x0) / k;
      const double y = y_of(static_cast<double>(h.counts[i]));
      add("<rect x=\"" + fixed(x0 + bw * static_cast<double>(s), 2) + "\" y=\"" + fixed(y, 2) + "\" width=\"" +
          fixed(bw, 2) + "\" height=\"" + fixed(top + plot_h - y, 2) + "\"/>\n");
    }
    add("</g>\n");
    add("<rect x=\"" + fixed(left + plot_w - 170, 1) + "\" y=\"" + fixed(top + 8 + 18 * static_cast<double>(s), 1) +
        "\" width=\"12\" height=\"12\" fill=\"" + series[s].color + "\"/>\n");
    add("<text x=\"" + fixed(left + plot_w - 152, 1) + "\" y=\"" + fixed(top + 18 + 18 * static_cast<double>(s), 1) +
        "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].label + "</text>\n");
  }
  if (overlay) {
    std::string points;
    constexpr int samples = 200;
    for (int t = 0; t <= samples; ++t) {
      const double x = lo + (hi - lo) * t / samples;
      // density times sample count times mean bin width gives expected bin counts
      const double expected = overlay->density(x) * curve_scale * (hi - lo) / static_cast<double>(base.bins());
      points += fixed(x_of(x), 2) + "," + fixed(std::max(top, y_of(expected)), 2) + " ";
    }
    add("<polyline class=\"fit\" fill=\"none\" stroke=\"" + std::string(color_nonzero) + "\" stroke-width=\"2\" points=\"" +
        points + "\"/>\n");
  }
  add("</svg>\n");
  return svg;
}

std::string render_histogram_svg(const ClassHistograms& h, const std::optional<FitParams>& overlay,
                                 const std::string& title) {
  return render_histogram_svg({{"g != 0", color_nonzero, &h.nonzero},
                               {"g = 0", color_zero, &h.zero},
                               {"depth condition violated", color_depth_violating, &h.depth_violating}},
                              overlay, title);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw UsageError("cannot create " + path.parent_path().string() + ": " + ec.message());
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw UsageError("cannot write " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw UsageError("cannot write " + path.string() + ": " + ec.message());
}

void export_scan(const ScanResult& result, const std::filesystem::path& dir) {
  const int n = result.thresholds.n;
  write_text_file(dir / "scan.json", scan_json(result));
  write_text_file(dir / "hist_r.csv", histogram_csv(result.r_hist));
  write_text_file(dir / "hist_b.csv", histogram_csv(result.b_hist));
  const ScanFits fits = fit_scan(result);
  write_text_file(dir / "hist_r.svg",
                  render_histogram_svg(result.r_hist, std::nullopt, "r-loadings of triples, n=" + std::to_string(n)));
  std::optional<FitParams> overlay;
  if (!result.b_moments.nonzero.empty()) overlay = fits.b_nonzero;
  write_text_file(dir / "hist_b.svg",
                  render_histogram_svg(result.b_hist, overlay, "b-loadings of triples, n=" + std::to_string(n)));
}

}  // namespace kronload
