#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kronload/loadings.hpp"
#include "kronload/stats.hpp"
#include "kronload/thresholds.hpp"

namespace kronload {

// Round half away from zero to `decimals` places, for output only.
double round_to(double x, int decimals);
// Fixed-point text with exactly `decimals` places.
std::string fixed(double x, int decimals);

// partition,r_loading,b_loading with 4 decimals.
std::string loadings_csv(const LoadingTable& t);
std::string loadings_json(const LoadingTable& t);

struct ScanFits {
  FitParams r;          // normal fit to all triple r-loadings
  FitParams b;          // gamma fit to all triple b-loadings
  FitParams b_nonzero;  // gamma fit to b-loadings of triples with g != 0
};

ScanFits fit_scan(const ScanResult& result);

// Stable key order and fixed 4-decimal thresholds.
std::string scan_json(const ScanResult& result);

// bin_left,bin_right,count_nonzero,count_zero,count_depth_violating
std::string histogram_csv(const ClassHistograms& h);

struct HistogramSeries {
  std::string label;
  std::string color;
  const Histogram* histogram;
};

inline constexpr const char* color_nonzero = "#d62728";
inline constexpr const char* color_zero = "#1f4fd6";
inline constexpr const char* color_depth_violating = "#5c3a1e";

// Self-contained SVG; series share the bin edges of the first one and are
// drawn as side-by-side bars. The overlay is scaled to the total count of
// the first series.
std::string render_histogram_svg(const std::vector<HistogramSeries>& series, const std::optional<FitParams>& overlay,
                                 const std::string& title);
std::string render_histogram_svg(const ClassHistograms& h, const std::optional<FitParams>& overlay,
                                 const std::string& title);

// Writes scan.json, hist_r.csv, hist_b.csv, hist_r.svg and hist_b.svg.
void export_scan(const ScanResult& result, const std::filesystem::path& dir);

// Atomic text write; throws Error(usage) on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace kronload
