// stablerank: command-line front end. Exit codes: 1 parse error, 2 violated precondition,
// 3 enumeration budget exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "stablerank/stablerank.hpp"

namespace sr = stablerank;

namespace {

struct Common {
  std::uint64_t budget = sr::kDefaultBudget;
  unsigned jobs = 1;
  std::uint32_t p = 2;  // field for barcode inputs
};

// A module file is either a frame or a barcode; barcode lines have two tokens, a frame header 2 + r.
sr::TameModule load_module(const std::string& path, const Common& common) {
  std::string text = sr::read_text_file(path);
  auto lines = sr::detail::tokenized_lines(text);
  if (!lines.empty() && lines[0].size() == 2) {
    if (!sr::is_prime(common.p)) throw sr::ParseError("--p must be prime");
    return sr::module_from_barcode(sr::parse_barcode(text), sr::PrimeField(common.p));
  }
  return sr::parse_module(text);
}

sr::SearchOptions options(const Common& common) { return {common.budget, std::max(1u, common.jobs), nullptr}; }

std::string point_string(const sr::RationalPoint& v) { return sr::to_string(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Betti diagrams, contour shifts and stable ranks of multi-parameter persistence modules"};
  app.require_subcommand(1);
  Common common;
  if (const char* env = std::getenv("STABLERANK_BUDGET")) {
    try {
      common.budget = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: STABLERANK_BUDGET must be a non-negative integer\n";
      return 1;
    }
  }
  app.add_option("--budget", common.budget, "maximum number of candidates a search may examine");
  app.add_option("--jobs", common.jobs, "worker threads for the searches (output does not depend on it)");
  app.add_option("--p", common.p, "field characteristic for barcode inputs");

  std::string file;
  std::string contour_text = "standard 1";
  std::string tau_text;

  auto* betti = app.add_subcommand("betti", "Betti diagram beta_n");
  int betti_n = -1;
  betti->add_option("--n", betti_n, "homological degree (default: all)");
  betti->add_option("file", file)->required();

  auto* euler = app.add_subcommand("euler", "Euler characteristic of the Betti diagrams");
  euler->add_option("file", file)->required();

  auto* barcode = app.add_subcommand("barcode", "bar decomposition (one parameter)");
  barcode->add_option("file", file)->required();

  auto* shift = app.add_subcommand("shift", "the shift G[tau] as a frame");
  shift->add_option("--contour", contour_text);
  shift->add_option("--tau", tau_text)->required();
  bool shift_domain = false;
  shift->add_flag("--domain", shift_domain, "keep the generators at their own coordinates");
  shift->add_option("file", file)->required();

  auto* noise = app.add_subcommand("noise-test", "is G in the noise at eps?");
  std::string eps_text;
  noise->add_option("--contour", contour_text);
  noise->add_option("--eps", eps_text)->required();
  noise->add_option("file", file)->required();

  auto* stable = app.add_subcommand("stable-rank", "stable rank at tau, or the whole function with --sweep");
  bool sweep = false;
  std::string taus_text;
  stable->add_option("--contour", contour_text);
  stable->add_option("--tau", tau_text);
  stable->add_flag("--sweep", sweep);
  stable->add_option("--taus", taus_text, "comma-separated sample points for --sweep when r >= 2");
  stable->add_option("file", file)->required();

  auto* finger = app.add_subcommand("fingerprint", "(tau,u) table for truncated standard contours (one parameter)");
  std::string w_text = "1", grid_text;
  finger->add_option("--w", w_text);
  finger->add_option("--grid", grid_text, "tau:u pairs separated by ';' (default: critical values)");
  finger->add_option("file", file)->required();

  auto* minrank = app.add_subcommand("minrank", "min-rank of a graph's input");
  minrank->add_option("file", file)->required();

  auto* band = app.add_subcommand("band", "band functor of a graph, as a frame");
  band->add_option("file", file)->required();

  auto* bench = app.add_subcommand("bench", "stable rank vs min-rank over a directory of graphs");
  std::string graphs_dir;
  bench->add_option("--graphs", graphs_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (betti->parsed()) {
      auto g = load_module(file, common);
      std::size_t lo = betti_n < 0 ? 0 : static_cast<std::size_t>(betti_n);
      std::size_t hi = betti_n < 0 ? g.parameters() : lo;
      for (std::size_t n = lo; n <= hi; ++n)
        for (const auto& [v, k] : sr::tame_betti_diagram(g, n)) std::cout << n << ": " << k << " @ " << point_string(v) << "\n";
    } else if (euler->parsed()) {
      std::cout << sr::euler_characteristic(load_module(file, common).frame) << "\n";
    } else if (barcode->parsed()) {
      std::cout << sr::print_barcode(sr::tame_bar_decomposition(load_module(file, common)));
    } else if (shift->parsed()) {
      auto g = load_module(file, common);
      auto c = sr::parse_contour(contour_text);
      auto tau = sr::parse_rational(tau_text);
      auto result = shift_domain ? sr::domain_shift(g, c, tau) : sr::shift(g, c, tau);
      std::cout << sr::print_module(result.module());
    } else if (noise->parsed()) {
      auto g = load_module(file, common);
      std::cout << (sr::noise_contains(g, sr::parse_contour(contour_text), sr::parse_rational(eps_text)) ? "true" : "false")
                << "\n";
    } else if (stable->parsed()) {
      auto g = load_module(file, common);
      auto c = sr::parse_contour(contour_text);
      if (sweep) {
        if (g.parameters() == 1) {
          std::cout << sr::stable_rank_r1(g, c).step.to_csv();
        } else {
          if (taus_text.empty()) throw sr::PreconditionError("--sweep with r >= 2 needs --taus");
          std::cout << sr::stable_rank_sweep(g, c, sr::parse_rational_list(taus_text), options(common)).step.to_csv();
        }
      } else {
        if (tau_text.empty()) throw sr::PreconditionError("stable-rank needs --tau or --sweep");
        auto tau = sr::parse_rational(tau_text);
        if (tau < 0) throw sr::PreconditionError("stable rank needs tau >= 0");
        std::cout << (g.parameters() == 1 ? sr::stable_rank_r1(g, c)(tau) : sr::stable_rank_bruteforce(g, c, tau, options(common)))
                  << "\n";
      }
    } else if (finger->parsed()) {
      auto g = load_module(file, common);
      auto w = sr::parse_rational(w_text);
      std::vector<std::pair<sr::Rational, sr::Rational>> grid;
      if (grid_text.empty()) {
        grid = sr::fingerprint_critical_grid({sr::tame_bar_decomposition(g)}, w);
      } else {
        std::stringstream ss(grid_text);
        for (std::string item; std::getline(ss, item, ';');) {
          auto colon = item.find(':');
          if (colon == std::string::npos) throw sr::ParseError("grid entries must be 'tau:u'");
          grid.emplace_back(sr::parse_rational(item.substr(0, colon)), sr::parse_rational(item.substr(colon + 1)));
        }
      }
      std::cout << sr::fingerprint_csv(sr::fingerprint_r1(g, w, grid));
    } else if (minrank->parsed()) {
      auto in = sr::parse_graph(sr::read_text_file(file));
      std::cout << sr::minrank_solve(sr::graph_to_minrank(in.graph, in.field), options(common)) << "\n";
    } else if (band->parsed()) {
      auto in = sr::parse_graph(sr::read_text_file(file));
      std::cout << sr::print_module(sr::band_functor(sr::band_spec_from_graph(in.graph, in.field)));
    } else if (bench->parsed()) {
      std::vector<std::filesystem::path> files;
      if (!std::filesystem::is_directory(graphs_dir)) throw sr::ParseError("'" + graphs_dir + "' is not a directory");
      for (const auto& e : std::filesystem::directory_iterator(graphs_dir))
        if (e.is_regular_file()) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      std::cout << sr::bench_csv_header();
      for (const auto& path : files) {
        auto in = sr::parse_graph(sr::read_text_file(path.string()));
        auto result = sr::hardness_pipeline(in.graph, in.field, options(common));
        std::cout << sr::bench_csv_row(path.filename().string(), in.graph.vertex_count(), result) << std::flush;
      }
    }
  } catch (const sr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const sr::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const sr::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
