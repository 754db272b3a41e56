#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "riskbound/cli.hpp"

namespace riskbound::cli {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

// Column expression that maps inf and anything above the ceiling to the ceiling.
std::string clipped(std::size_t col, double ceiling) {
  const std::string c = format_number(ceiling);
  const std::string i = std::to_string(col);
  return "(strcol(" + i + ") eq \"inf\" ? " + c + " : ($" + i + " > " + c + " ? " + c + " : $" +
         i + "))";
}

std::string preamble(const std::string& csv_path) {
  return "set datafile separator ','\n"
         "set datafile commentschars '#'\n"
         "set key top left\n"
         "set grid\n"
         "file = '" + csv_path + "'\n";
}

}  // namespace

std::string plot_script(const std::string& csv_path, double ceiling) {
  std::ifstream f(csv_path);
  if (!f) throw std::invalid_argument("cannot open " + csv_path);
  std::string line;
  while (std::getline(f, line) && (line.empty() || line.front() == '#')) {
  }
  const auto header = split_csv(line);
  std::ostringstream s;
  s << preamble(csv_path);

  if (header == std::vector<std::string>{"alpha", "snr", "bound", "beta", "status"}) {
    std::set<double> snrs;
    while (std::getline(f, line)) {
      const auto cells = split_csv(line);
      if (cells.size() >= 2 && line.front() != '#') snrs.insert(std::stod(cells[1]));
    }
    static const char* colors[] = {"red", "blue", "green"};
    s << "set xlabel 'alpha'\nset ylabel 'lower bound'\nset yrange [*:"
      << format_number(ceiling) << "]\nplot ";
    std::size_t k = 0;
    for (double v : snrs) {
      const std::string sv = format_number(v);
      s << (k ? ", \\\n     " : "") << "file skip 1 using 1:($2 == " << sv << " ? "
        << clipped(3, ceiling) << " : 1/0) with lines lw 2 lc rgb '" << colors[k % 3]
        << "' title 'E_x/N_0 = " << sv << "'";
      ++k;
    }
    s << '\n';
    return s.str();
  }
  if (header == std::vector<std::string>{"a", "E"}) {
    s << "set xlabel 'a'\nset ylabel 'E(a)'\n"
      << "plot file skip 1 using 1:" << clipped(2, ceiling) << " with lines lw 2 title 'E(a)'\n";
    return s.str();
  }
  if (header == std::vector<std::string>{"q", "theta_hat"}) {
    s << "set xlabel 'q'\nset ylabel 'theta hat'\nset xrange [0:1]\nset yrange [0:1]\n"
      << "plot file skip 1 using 1:2 with lines lw 2 title 'estimator', "
         "x with lines dt 2 lc rgb 'gray' title 'q'\n";
    return s.str();
  }
  if (header == std::vector<std::string>{"mu", "a", "label", "dominant_m"}) {
    s << "set xlabel 'mu'\nset ylabel 'a'\nunset key\n"
      << "plot file skip 1 using 1:2:3 with labels font ',7'\n";
    return s.str();
  }
  const auto bound = std::find(header.begin(), header.end(), "bound");
  if (!header.empty() && bound != header.end() && bound != header.begin()) {
    const auto col = static_cast<std::size_t>(bound - header.begin()) + 1;
    s << "set xlabel '" << header.front() << "'\nset ylabel 'lower bound'\n"
      << "plot file skip 1 using 1:" << clipped(col, ceiling) << " with lines lw 2 title 'bound'\n";
    return s.str();
  }
  throw std::invalid_argument("unknown CSV schema in " + csv_path + ": '" + line + "'");
}

}  // namespace riskbound::cli
