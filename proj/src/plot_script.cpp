#include <fstream>
#include <stdexcept>

#include "lqtx/experiments.hpp"

namespace lqtx {

namespace fs = std::filesystem;

namespace {

std::string quoted_path(const fs::path& csv, const fs::path& script) {
  const fs::path base = fs::absolute(script).parent_path();
  fs::path rel = fs::absolute(csv).lexically_relative(base);
  if (rel.empty()) rel = fs::absolute(csv);
  return "'" + rel.generic_string() + "'";
}

}  // namespace

void emit_plot_script(const std::vector<fs::path>& csvs, PlotKind kind, const fs::path& script,
                      const PlotOptions& options) {
  if (csvs.empty()) throw std::invalid_argument("no CSV files to plot");
  for (const fs::path& csv : csvs)
    if (!fs::exists(csv)) throw std::runtime_error("missing CSV " + csv.string());

  if (script.has_parent_path()) fs::create_directories(script.parent_path());
  std::ofstream out(script, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + script.string());

  out << "# gnuplot script; run from this directory: gnuplot -p " << script.filename().string()
      << "\n";
  out << "set datafile separator ','\n";
  out << "set key outside right top\n";
  out << "set grid\n";
  if (!options.title.empty()) out << "set title '" << options.title << "'\n";
  if (options.log_y) out << "set logscale y\n";

  switch (kind) {
    case PlotKind::stem: {
      out << "# columns: t (1), p_t (2)\n";
      out << "set xlabel 't'\nset ylabel 'p_t'\n";
      out << "set offsets 0.5, 0.5, 0, 0\n";
      out << "plot \\\n";
      for (std::size_t i = 0; i < csvs.size(); ++i) {
        const std::string file = quoted_path(csvs[i], script);
        const std::string label = csvs[i].stem().string();
        out << "  " << file << " using 1:2 every ::1 with impulses lw 2 title '" << label
            << "', \\\n";
        out << "  " << file << " using 1:2 every ::1 with points pt 7 notitle"
            << (i + 1 < csvs.size() ? ", \\\n" : "\n");
      }
      break;
    }
    case PlotKind::comparison: {
      out << "# columns: T (1), cost_proposed (2), cost_full (4), cost_open (6)\n";
      out << "set xlabel 'T'\nset ylabel 'mean combined cost'\n";
      out << "plot \\\n";
      for (std::size_t i = 0; i < csvs.size(); ++i) {
        const std::string file = quoted_path(csvs[i], script);
        out << "  " << file << " using 1:2 every ::1 with linespoints title 'proposed', \\\n";
        out << "  " << file << " using 1:4 every ::1 with linespoints title 'full power', \\\n";
        out << "  " << file << " using 1:6 every ::1 with linespoints title 'open loop'"
            << (i + 1 < csvs.size() ? ", \\\n" : "\n");
      }
      break;
    }
  }
  if (!out) throw std::runtime_error("failed writing " + script.string());
}

}  // namespace lqtx
