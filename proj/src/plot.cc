// Copyright 2026 The bvi Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bvi/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <limits>
#include <sstream>
#include <tuple>

#include "bvi/errors.h"
#include "bvi/harness.h"
#include "bvi/trace_csv.h"

namespace bvi {
namespace {

constexpr double kPanelWidth = 420;
constexpr double kPanelHeight = 300;
constexpr double kMarginLeft = 60;
constexpr double kMarginRight = 20;
constexpr double kMarginTop = 30;
constexpr double kMarginBottom = 70;
constexpr double kGapFloor = 1e-16;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (calls, gap)
};

// Median curves grouped by configuration; records with mismatched checkpoints
// are drawn one by one.
std::map<int, std::vector<Curve>> BuildPanels(
    const std::vector<RunRecord>& records) {
  std::map<int, std::vector<RunRecord>> by_batch;
  for (const RunRecord& r : records) {
    if (!r.trace.empty()) by_batch[r.batch_size].push_back(r);
  }
  std::map<int, std::vector<Curve>> panels;
  for (auto& [b, group] : by_batch) {
    std::vector<Curve>& curves = panels[b];
    std::vector<SummaryRow> rows;
    try {
      rows = Aggregate(group);
    } catch (const DomainError&) {
      for (const RunRecord& r : group) {
        Curve c{r.method + " seed " + std::to_string(r.seed), {}};
        for (const TracePoint& p : r.trace) {
          c.points.emplace_back(double(p.oracle_calls), p.gap);
        }
        curves.push_back(std::move(c));
      }
      continue;
    }
    std::set<std::string> methods;
    for (const SummaryRow& row : rows) methods.insert(row.method);
    std::tuple<std::string, std::string, Index, double, double> current;
    for (const SummaryRow& row : rows) {
      auto key = std::make_tuple(row.method, row.matrix, row.n, row.eta, row.gamma);
      if (curves.empty() || key != current) {
        current = key;
        std::string label = row.method;
        // Several configurations of one method: tell them apart by step.
        if (std::count_if(rows.begin(), rows.end(), [&](const SummaryRow& o) {
              return o.method == row.method && (o.eta != row.eta ||
                                                o.gamma != row.gamma);
            }) > 0) {
          label += " eta=" + FormatDouble(row.eta);
        }
        curves.push_back({label, {}});
      }
      curves.back().points.emplace_back(double(row.oracle_calls), row.median);
    }
  }
  return panels;
}

double NiceStep(double range) {
  if (range <= 0) return 1;
  const double raw = range / 5;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * magnitude >= raw) return m * magnitude;
  }
  return 10 * magnitude;
}

}  // namespace

std::string DecadeLabel(int exponent) {
  if (exponent == 0) return "1";
  return "1e" + std::to_string(exponent);
}

std::string RenderGapPlotSvg(const std::vector<RunRecord>& records) {
  const std::map<int, std::vector<Curve>> panels = BuildPanels(records);
  if (panels.empty()) throw DomainError("no data");

  double max_calls = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_gap = 0;
  for (const auto& [b, curves] : panels) {
    for (const Curve& c : curves) {
      for (const auto& [calls, gap] : c.points) {
        const double g = std::max(gap, kGapFloor);
        max_calls = std::max(max_calls, calls);
        min_gap = std::min(min_gap, g);
        max_gap = std::max(max_gap, g);
      }
    }
  }
  // Small tolerance keeps exact decades (1e-3 stored as 0.00099999...) on
  // their own tick instead of adding an empty decade.
  int lo = int(std::floor(std::log10(min_gap) + 1e-9));
  int hi = int(std::ceil(std::log10(max_gap) - 1e-9));
  if (hi <= lo) hi = lo + 1;
  if (max_calls <= 0) max_calls = 1;
  const double x_step = NiceStep(max_calls);
  const double x_max = std::ceil(max_calls / x_step) * x_step;

  const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
  const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
  const double width = kPanelWidth * double(panels.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(width)
      << "\" height=\"" << Fixed(kPanelHeight) << "\" viewBox=\"0 0 "
      << Fixed(width) << ' ' << Fixed(kPanelHeight) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int panel_index = 0;
  for (const auto& [b, curves] : panels) {
    const double ox = kPanelWidth * panel_index + kMarginLeft;
    const double oy = kMarginTop;
    auto sx = [&](double calls) { return ox + plot_w * calls / x_max; };
    auto sy = [&](double gap) {
      const double t = (std::log10(std::max(gap, kGapFloor)) - lo) / double(hi - lo);
      return oy + plot_h * (1 - t);
    };
    svg << "<g id=\"panel-b" << b << "\">\n";
    svg << "<text x=\"" << Fixed(ox + plot_w / 2) << "\" y=\"" << Fixed(oy - 10)
        << "\" text-anchor=\"middle\">b = " << b << "</text>\n";
    svg << "<rect x=\"" << Fixed(ox) << "\" y=\"" << Fixed(oy) << "\" width=\""
        << Fixed(plot_w) << "\" height=\"" << Fixed(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = lo; e <= hi; ++e) {
      const double y = sy(std::pow(10.0, e));
      svg << "<line x1=\"" << Fixed(ox - 4) << "\" y1=\"" << Fixed(y) << "\" x2=\""
          << Fixed(ox + plot_w) << "\" y2=\"" << Fixed(y)
          << "\" stroke=\"#dddddd\"/>\n";
      svg << "<text x=\"" << Fixed(ox - 6) << "\" y=\"" << Fixed(y + 4)
          << "\" text-anchor=\"end\">" << DecadeLabel(e) << "</text>\n";
    }
    for (double xv = 0; xv <= x_max + x_step / 2; xv += x_step) {
      const double x = sx(xv);
      svg << "<line x1=\"" << Fixed(x) << "\" y1=\"" << Fixed(oy + plot_h)
          << "\" x2=\"" << Fixed(x) << "\" y2=\"" << Fixed(oy + plot_h + 4)
          << "\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << Fixed(x) << "\" y=\"" << Fixed(oy + plot_h + 16)
          << "\" text-anchor=\"middle\">" << FormatDouble(xv) << "</text>\n";
    }
    svg << "<text x=\"" << Fixed(ox + plot_w / 2) << "\" y=\""
        << Fixed(oy + plot_h + 32)
        << "\" text-anchor=\"middle\">oracle calls</text>\n";
    int curve_index = 0;
    for (const Curve& c : curves) {
      const char* color = kPalette[curve_index % std::size(kPalette)];
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (i) svg << ' ';
        svg << Fixed(sx(c.points[i].first)) << ',' << Fixed(sy(c.points[i].second));
      }
      svg << "\"/>\n";
      const double ly = oy + plot_h + 46 + 12 * (curve_index / 2);
      const double lx = ox + (curve_index % 2) * plot_w / 2;
      svg << "<text x=\"" << Fixed(lx) << "\" y=\"" << Fixed(ly) << "\" fill=\""
          << color << "\">" << c.label << "</text>\n";
      ++curve_index;
    }
    svg << "</g>\n";
    ++panel_index;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bvi
