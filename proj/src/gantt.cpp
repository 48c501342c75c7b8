#include "tps/gantt.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace tps {

namespace {

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                          "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
                          "#1b9e77", "#d95f02"};
constexpr int kPaletteSize = 12;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string clock_label(int seconds) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", seconds / 3600, (seconds % 3600) / 60);
  return buf;
}

struct Block {
  int row;
  int from_p, to_p;  // micro periods, half open
  int train;
  int style;  // 0 solid (dwell/switch group), 1 light (inbound lock), 2 outline (clearing)
};

}  // namespace

void emit_gantt(std::ostream& os, const SpaceTimeNetwork& net, const Solution& sol) {
  const Instance& in = net.instance();
  const Station& st = in.station;
  const ResourceSpace& res = net.resources();
  const int micro = in.grid.micro_s;

  // rows: switch groups first, then sidings
  std::vector<std::string> row_labels;
  for (const auto& g : st.switch_groups) row_labels.push_back(g.id);
  for (int32_t node : res.sidings) row_labels.push_back(st.nodes[node].id);
  const int n_rows = static_cast<int>(row_labels.size());

  // collect merged occupation blocks per train
  std::vector<Block> blocks;
  for (const TrainPlan& plan : sol.plans) {
    if (plan.cancelled) continue;
    Occupation occ = occupied_resources(net, plan);
    occ.dedup_within_types();
    auto add = [&](const std::vector<int32_t>& list, int style) {
      size_t i = 0;
      while (i < list.size()) {
        int space = list[i] / res.micro_periods;
        int p0 = list[i] % res.micro_periods;
        int p1 = p0 + 1;
        size_t j = i + 1;
        while (j < list.size() && list[j] == list[j - 1] + 1 &&
               list[j] / res.micro_periods == space) {
          ++p1;
          ++j;
        }
        blocks.push_back({space, p0, p1, plan.train, style});
        i = j;
      }
    };
    add(occ.sg, 0);
    add(occ.siding_dwell, 0);
    add(occ.siding_lock, 1);
    add(occ.siding_clear, 2);
  }

  const int label_w = 120, plot_w = 1500, row_h = 18, row_gap = 4, top = 30, bottom = 34;
  const int height = top + n_rows * (row_h + row_gap) + bottom;
  const double scale = static_cast<double>(plot_w) / in.grid.horizon_s;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << label_w + plot_w + 20
     << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int r = 0; r < n_rows; ++r) {
    int y = top + r * (row_h + row_gap);
    os << "<text x=\"" << label_w - 8 << "\" y=\"" << y + row_h - 5
       << "\" text-anchor=\"end\">" << row_labels[r] << "</text>\n";
    os << "<rect x=\"" << label_w << "\" y=\"" << y << "\" width=\"" << plot_w
       << "\" height=\"" << row_h << "\" fill=\"#f4f4f4\"/>\n";
  }

  int tick_step = in.grid.horizon_s > 14400 ? 3600 : 300;
  for (int ts = 0; ts <= in.grid.horizon_s; ts += tick_step) {
    double x = label_w + ts * scale;
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << top - 6 << "\" x2=\"" << fmt(x)
       << "\" y2=\"" << height - bottom + 6 << "\" stroke=\"#cccccc\"/>\n";
    os << "<text x=\"" << fmt(x) << "\" y=\"" << height - bottom + 20
       << "\" text-anchor=\"middle\">" << clock_label(ts) << "</text>\n";
  }

  for (const Block& b : blocks) {
    const char* color = kPalette[b.train % kPaletteSize];
    int y = top + b.row * (row_h + row_gap);
    double x = label_w + b.from_p * micro * scale;
    double w = (b.to_p - b.from_p) * micro * scale;
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << y + 1 << "\" width=\"" << fmt(w)
       << "\" height=\"" << row_h - 2 << "\"";
    if (b.style == 0)
      os << " fill=\"" << color << "\"";
    else if (b.style == 1)
      os << " fill=\"" << color << "\" fill-opacity=\"0.35\"";
    else
      os << " fill=\"none\" stroke=\"" << color << "\" stroke-dasharray=\"3,2\"";
    os << "><title>" << in.trains[b.train].id << "</title></rect>\n";
  }

  os << "</svg>\n";
}

}  // namespace tps
