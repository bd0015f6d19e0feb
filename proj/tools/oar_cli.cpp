// oar: obstacle-avoiding Steiner trees and global routing from the command line.
//
//   oar solve <instance> [--kl N] [--km N] [--seed S] [--bbox-only] [--svg F] [--json F]
//   oar gen --pins P --obstacles N --density D [--bounds x0,y0,x1,y1] [--seed S] [--count C] [--out DIR]
//   oar route <design.json> [--iters N] [--alpha-ow W] [--alpha-ov W] [--via-cost W] [--stride K]
//             [--guided-width W] [--no-guided] [--no-obstacle-aware] [--metrics-out F] [--svg F]
//   oar bench <dir> [--oracle-max-pins N] [--out F]
//   oar oracle <instance>
//   oar gen-design [--seed S] [--count C] [--out DIR]
//
// Exit codes: 0 success, 2 input error, 3 infeasible or illegal result.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oar/bench_io.hpp"
#include "oar/groute/route.hpp"
#include "oar/oarsmt.hpp"
#include "oar/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;

struct SolveOutcome {
  oar::RectTree tree;
  double runtime_ms = 0.0;
  bool legal = false;
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

SolveOutcome solve(const oar::Instance& inst, const oar::OarsmtParams& params, bool bbox_only) {
  std::vector<oar::Rect> used = inst.obstacles;
  if (bbox_only) {
    oar::Rect box{inst.pins.front(), inst.pins.front()};
    for (const oar::Point& p : inst.pins) box = box.united(p);
    std::erase_if(used, [&](const oar::Rect& r) { return !oar::touches_interior(r, box); });
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.tree = oar::oarsmt_generate(inst.pins, used, params).tree;
  out.runtime_ms = elapsed_ms(t0);
  out.legal = oar::check_legality(out.tree, inst.pins, inst.obstacles).legal();
  return out;
}

std::string fmt_double(double v, int digits) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

std::vector<oar::SvgLayer> route_layers(const oar::groute::Design& d, const oar::groute::RouteSolution& sol) {
  static const char* kColors[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::vector<oar::SvgLayer> layers;
  for (int l = 1; l < d.grid.layers(); ++l) layers.push_back({kColors[l % 7], {}, 1.5});
  for (const auto& net : sol.nets)
    for (oar::groute::EdgeId e : net.edges) {
      if (d.grid.is_via(e)) continue;
      const auto a = d.grid.tail(e), b = d.grid.head(e);
      layers[std::size_t(a.layer - 1)].segments.push_back({{a.x, a.y}, {b.x, b.y}});
    }
  return layers;
}

oar::Instance design_view(const oar::groute::Design& d) {
  oar::Instance v;
  v.name = d.name;
  v.bounds = {{0, 0}, {d.grid.nx() - 1, d.grid.ny() - 1}};
  // GCell ranges [lo, hi) drawn over cell centres.
  for (const oar::Rect& r : d.obstacles) v.obstacles.push_back({r.lo, {r.hi.x - 1, r.hi.y - 1}});
  for (const auto& n : d.nets) v.pins.insert(v.pins.end(), n.pins.begin(), n.pins.end());
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstacle-avoiding rectilinear Steiner trees and global routing"};
  app.require_subcommand(1);

  // solve
  std::string solve_input, solve_svg, solve_json;
  oar::OarsmtParams solve_params;
  bool bbox_only = false;
  auto* solve_cmd = app.add_subcommand("solve", "Build an obstacle-avoiding Steiner tree for one instance");
  solve_cmd->add_option("input", solve_input, "Instance file")->required();
  solve_cmd->add_option("--kl", solve_params.k_l, "Hook nodes per ray segment")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--km", solve_params.k_m, "Merge granularity")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", solve_params.seed, "Seed for L-shape orientation");
  auto* all_flag = solve_cmd->add_flag("--all-obstacles", "Consider every obstacle (default)");
  solve_cmd->add_flag("--bbox-only", bbox_only, "Consider only obstacles touching the pin bounding box")
      ->excludes(all_flag);
  solve_cmd->add_option("--svg", solve_svg, "Write an SVG drawing");
  solve_cmd->add_option("--json", solve_json, "Write the tree as JSON");

  // gen
  oar::GenSpec gen_spec;
  std::vector<oar::Coord> gen_bounds;
  int gen_count = 1;
  std::string gen_out = ".";
  auto* gen_cmd = app.add_subcommand("gen", "Write random instances");
  gen_cmd->add_option("--pins", gen_spec.pin_count)->required();
  gen_cmd->add_option("--obstacles", gen_spec.obstacle_count)->required();
  gen_cmd->add_option("--density", gen_spec.density)->required();
  gen_cmd->add_option("--bounds", gen_bounds, "x_lo,y_lo,x_hi,y_hi")->delimiter(',')->expected(4);
  gen_cmd->add_option("--seed", gen_spec.seed);
  gen_cmd->add_option("--count", gen_count)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen_out, "Output directory");

  // route
  std::string route_input, metrics_out, route_svg;
  oar::groute::RouteParams route_params;
  bool no_guided = false, no_aware = false, no_timing = false;
  auto* route_cmd = app.add_subcommand("route", "Run the global routing flow on a design");
  route_cmd->add_option("design", route_input, "Design JSON")->required();
  route_cmd->add_option("--iters", route_params.iterations)->check(CLI::NonNegativeNumber);
  route_cmd->add_option("--alpha-ow", route_params.weights.alpha_ow)->check(CLI::NonNegativeNumber);
  route_cmd->add_option("--alpha-ov", route_params.weights.alpha_ov)->check(CLI::NonNegativeNumber);
  route_cmd->add_option("--via-cost", route_params.weights.via_cost)->check(CLI::NonNegativeNumber);
  route_cmd->add_option("--slope", route_params.weights.overflow_slope)->check(CLI::PositiveNumber);
  route_cmd->add_option("--stride", route_params.stride)->check(CLI::PositiveNumber);
  route_cmd->add_option("--guided-width", route_params.guided_width)->check(CLI::NonNegativeNumber);
  route_cmd->add_option("--seed", route_params.seed);
  route_cmd->add_flag("--no-guided", no_guided, "Reroute on ordinary sparse graphs");
  route_cmd->add_flag("--no-obstacle-aware", no_aware, "Skip the obstacle-aware pass");
  route_cmd->add_flag("--no-timing", no_timing, "Leave runtimes out of the metrics");
  route_cmd->add_option("--metrics-out", metrics_out, "Write metrics JSON");
  route_cmd->add_option("--svg", route_svg, "Write an SVG of the final routes");

  // bench
  std::string bench_dir, bench_out;
  std::size_t oracle_max_pins = 5;
  auto* bench_cmd = app.add_subcommand("bench", "Solve every instance in a directory, CSV report");
  bench_cmd->add_option("dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--oracle-max-pins", oracle_max_pins)->check(CLI::Range(0, int(oar::kOracleMaxPins)));
  bench_cmd->add_option("--out", bench_out, "Write the CSV here instead of stdout");

  // oracle
  std::string oracle_input;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum for a small instance");
  oracle_cmd->add_option("input", oracle_input)->required();

  // gen-design
  oar::groute::DesignSpec design_spec;
  int design_count = 1;
  std::string design_out = ".";
  auto* gd_cmd = app.add_subcommand("gen-design", "Write synthetic routing designs");
  gd_cmd->add_option("--seed", design_spec.seed);
  gd_cmd->add_option("--count", design_count)->check(CLI::NonNegativeNumber);
  gd_cmd->add_option("--nx", design_spec.nx)->check(CLI::Range(2, 4096));
  gd_cmd->add_option("--ny", design_spec.ny)->check(CLI::Range(2, 4096));
  gd_cmd->add_option("--layers", design_spec.layers)->check(CLI::Range(3, 16));
  gd_cmd->add_option("--out", design_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) {
      oar::Instance inst;
      try {
        inst = oar::read_bench_file(solve_input);
      } catch (const std::exception& e) {
        std::cerr << solve_input << ": " << e.what() << '\n';
        return kInputError;
      }
      SolveOutcome r;
      try {
        r = solve(inst, solve_params, bbox_only);
      } catch (const oar::InfeasibleEdge& e) {
        std::cerr << e.what() << '\n';
        return kInfeasible;
      }
      json out{{"case", inst.name},
               {"pins", inst.pins.size()},
               {"obstacles", inst.obstacles.size()},
               {"wirelength", r.tree.wirelength()},
               {"runtime_ms", r.runtime_ms},
               {"legal", r.legal}};
      std::cout << out.dump() << '\n';
      if (!solve_svg.empty()) oar::write_text_file(solve_svg, oar::render_svg(inst, r.tree));
      if (!solve_json.empty()) {
        json tree = out;
        tree["segments"] = json::array();
        for (const oar::Segment& s : r.tree.segments()) tree["segments"].push_back({s.a.x, s.a.y, s.b.x, s.b.y});
        oar::write_text_file(solve_json, tree.dump(2) + "\n");
      }
      return r.legal ? kOk : kInfeasible;
    }

    if (*gen_cmd) {
      if (!gen_bounds.empty()) gen_spec.bounds = {{gen_bounds[0], gen_bounds[1]}, {gen_bounds[2], gen_bounds[3]}};
      if (gen_count > 0) fs::create_directories(gen_out);
      const std::uint64_t first = gen_spec.seed;
      for (int i = 0; i < gen_count; ++i) {
        gen_spec.seed = first + std::uint64_t(i);
        const oar::Instance inst = oar::gen_random(gen_spec);
        oar::write_bench_file(fs::path(gen_out) / (inst.name + ".txt"), inst);
      }
      return kOk;
    }

    if (*route_cmd) {
      oar::groute::Design design;
      try {
        design = oar::groute::read_design_file(route_input);
      } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
      }
      route_params.guided = !no_guided;
      route_params.obstacle_aware = !no_aware;
      const oar::groute::FlowResult r = oar::groute::run_flow(design, route_params);
      const json metrics = oar::groute::flow_json(design, r, !no_timing);
      std::cout << metrics.dump(2) << '\n';
      if (!metrics_out.empty()) oar::write_text_file(metrics_out, metrics.dump(2) + "\n");
      if (!route_svg.empty()) {
        const auto layers = route_layers(design, r.solution);
        oar::write_text_file(route_svg, oar::render_svg(design_view(design), layers));
      }
      return r.final.violation == 0 ? kOk : kInfeasible;
    }

    if (*bench_cmd) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(bench_dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      std::ostringstream csv;
      csv << "case,pins,obstacles,wirelength,runtime_ms,legal,oracle_ratio\n";
      bool all_legal = true;
      for (const fs::path& f : files) {
        oar::Instance inst;
        try {
          inst = oar::read_bench_file(f);
        } catch (const std::exception& e) {
          std::cerr << f.string() << ": " << e.what() << '\n';
          csv << f.stem().string() << ",,,,,false,\n";
          all_legal = false;
          continue;
        }
        csv << inst.name << ',' << inst.pins.size() << ',' << inst.obstacles.size() << ',';
        try {
          const SolveOutcome r = solve(inst, oar::OarsmtParams{}, false);
          all_legal = all_legal && r.legal;
          csv << r.tree.wirelength() << ',' << fmt_double(r.runtime_ms, 3) << ',' << (r.legal ? "true" : "false")
              << ',';
          if (inst.pins.size() <= oracle_max_pins) {
            try {
              const oar::OptimalTree opt = oar::optimal_oarsmt(inst.pins, inst.obstacles, inst.bounds);
              if (opt.wirelength > 0) csv << fmt_double(double(r.tree.wirelength()) / double(opt.wirelength), 6);
            } catch (const oar::TooLarge&) {
            }
          }
          csv << '\n';
        } catch (const std::exception& e) {
          std::cerr << inst.name << ": " << e.what() << '\n';
          csv << ",,false,\n";
          all_legal = false;
        }
      }
      if (bench_out.empty())
        std::cout << csv.str();
      else
        oar::write_text_file(bench_out, csv.str());
      return all_legal ? kOk : kInfeasible;
    }

    if (*oracle_cmd) {
      oar::Instance inst;
      try {
        inst = oar::read_bench_file(oracle_input);
      } catch (const std::exception& e) {
        std::cerr << oracle_input << ": " << e.what() << '\n';
        return kInputError;
      }
      try {
        const oar::OptimalTree opt = oar::optimal_oarsmt(inst.pins, inst.obstacles, inst.bounds);
        std::cout << json{{"case", inst.name}, {"optimal_wirelength", opt.wirelength}}.dump() << '\n';
      } catch (const oar::TooLarge& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
      } catch (const std::runtime_error& e) {
        std::cerr << e.what() << '\n';
        return kInfeasible;
      }
      return kOk;
    }

    if (*gd_cmd) {
      if (design_count > 0) fs::create_directories(design_out);
      const std::uint64_t first = design_spec.seed;
      for (int i = 0; i < design_count; ++i) {
        design_spec.seed = first + std::uint64_t(i);
        const oar::groute::Design d = oar::groute::gen_design(design_spec);
        oar::write_text_file(fs::path(design_out) / (d.name + ".json"), oar::groute::to_json(d).dump(1) + "\n");
      }
      return kOk;
    }
  } catch (const oar::Unsatisfiable& e) {
    std::cerr << "unsatisfiable: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
