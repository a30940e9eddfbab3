// barrier-inverse: forward scattering data (classical periods, barrier
// times, Gamow transmission) and the Abel-type inversions that reconstruct
// potentials from them, plus the reflectionless Marchenko pipeline.
//
// Exit codes: 0 ok, 2 config/input error, 3 numerical or data error,
// 4 verification/round-trip failure.  Every error path prints a single
// "ERROR <code>: ..." line to stderr.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "barrierinv/acceptance.hpp"
#include "barrierinv/constants.hpp"
#include "barrierinv/csv.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/forward.hpp"
#include "barrierinv/inversion.hpp"
#include "barrierinv/json_io.hpp"
#include "barrierinv/marchenko.hpp"
#include "barrierinv/potentials.hpp"
#include "barrierinv/tabulated.hpp"

namespace {

using namespace barrierinv;

struct grid_spec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

grid_spec parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    raise(errc::config_error, "--grid expects min:max:count, got '" + text + "'");
  grid_spec g;
  g.lo = parse_double(text.substr(0, c1), "--grid");
  g.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "--grid");
  const std::string count_str = text.substr(c2 + 1);
  if (count_str.empty() || count_str.size() > 9 ||
      count_str.find_first_not_of("0123456789") != std::string::npos)
    raise(errc::config_error, "--grid count '" + count_str + "' is not a positive integer");
  g.count = static_cast<std::size_t>(std::stoul(count_str));
  if (g.count < 2) raise(errc::config_error, "grid.count must be ≥ 2");
  if (!(g.lo < g.hi)) raise(errc::config_error, "grid.min must be < grid.max");
  return g;
}

void check_readable(const std::filesystem::path& p, const char* what) {
  if (!std::filesystem::exists(p))
    raise(errc::config_error, std::string(what) + " '" + p.string() + "' does not exist");
}

void check_writable_dir(const std::filesystem::path& p) {
  const auto parent = p.parent_path();
  if (!parent.empty() && !std::filesystem::exists(parent))
    raise(errc::config_error, "output directory '" + parent.string() + "' does not exist");
}

int exit_code_for(errc c) {
  switch (c) {
    case errc::config_error:
    case errc::io_error:
      return 2;
    default:
      return 3;
  }
}

struct options {
  std::string potential_path;
  std::string in_path;
  std::string out_path;
  std::string grid_text;
  std::string kind_text;
  std::vector<std::string> splits;
  double hbar = 1.0;
  double mass = 1.0;
  double tol = 1e-6;
  bool hbar_set = false;
  bool mass_set = false;
};

physical_constants constants_from(const options& opt) {
  physical_constants c{opt.hbar, opt.mass};
  c.validate();
  return c;
}

int cmd_forward(const options& opt) {
  check_readable(opt.potential_path, "potential file");
  check_writable_dir(opt.out_path);
  const grid_spec g = parse_grid(opt.grid_text);
  const auto consts = constants_from(opt);
  const auto p = load_potential(opt.potential_path);
  const auto kind = curve_kind_from_name(opt.kind_text);
  const auto curve = sample_curve(p, kind, linspace(g.lo, g.hi, g.count), consts);
  nlohmann::json extra{{"source", "forward"}, {"input_hash", input_hash(opt.potential_path)}};
  write_curve_csv(opt.out_path, curve, extra);
  std::cout << "wrote " << curve.data.size() << " rows to " << opt.out_path << "\n";
  return 0;
}

std::vector<double> default_invert_grid(const scattering_curve& curve) {
  const double lo = curve.data.x_min();
  double hi = curve.data.x_max();
  if (curve.kind == curve_kind::gamow_transmission && curve.u0 && hi >= *curve.u0)
    hi = *curve.u0 - 1e-3 * (*curve.u0 - lo);
  return linspace(lo, hi, 200);
}

int cmd_invert(const options& opt) {
  check_readable(opt.in_path, "input CSV");
  check_writable_dir(opt.out_path);
  auto curve = read_curve_csv(opt.in_path);
  if (opt.hbar_set) curve.consts.hbar = opt.hbar;
  if (opt.mass_set) curve.consts.mass = opt.mass;
  curve.consts.validate();
  const std::vector<double> u_grid = opt.grid_text.empty()
                                         ? default_invert_grid(curve)
                                         : [&] {
                                             const grid_spec g = parse_grid(opt.grid_text);
                                             return linspace(g.lo, g.hi, g.count);
                                           }();
  const std::string hash = input_hash(opt.in_path);

  switch (curve.kind) {
    case curve_kind::gamow_transmission: {
      const auto wf = invert_gamow(curve, u_grid);
      write_width_csv(opt.out_path, wf, *curve.u0, curve.consts,
                      {{"formula", "gamow_width"}, {"input_hash", hash}});
      std::cout << "wrote width function (" << wf.u_grid.size() << " rows) to " << opt.out_path
                << "\n";
      return 0;
    }
    case curve_kind::classical_period: {
      const auto wf = invert_well_period(curve, u_grid);
      write_width_csv(opt.out_path, wf, curve.data.x_max(), curve.consts,
                      {{"formula", "period_width"}, {"input_hash", hash}});
      std::cout << "wrote width function (" << wf.u_grid.size() << " rows) to " << opt.out_path
                << "\n";
      return 0;
    }
    case curve_kind::backward_time: {
      const auto x_of_u = invert_barrier_backward(curve, u_grid);
      nlohmann::json meta{{"type", "potential_table"},
                          {"formula", "backward_canonical"},
                          {"input_hash", hash},
                          {"hbar", curve.consts.hbar},
                          {"mass", curve.consts.mass}};
      write_xu_csv(opt.out_path, x_of_u.values, x_of_u.abscissa, meta);
      std::cout << "wrote canonical potential (" << x_of_u.size() << " rows) to " << opt.out_path
                << "\n";
      return 0;
    }
    case curve_kind::traversal_time:
      raise(errc::config_error, "traversal-time curves are not invertible by this tool");
  }
  return 0;
}

int cmd_roundtrip(const options& opt) {
  check_readable(opt.potential_path, "potential file");
  if (!opt.out_path.empty()) check_writable_dir(opt.out_path);
  const auto consts = constants_from(opt);
  const auto p = load_potential(opt.potential_path);

  std::vector<double> u_grid;
  width_function recovered;
  if (p.is_barrier()) {
    const double u0 = p.barrier_max(consts).second;
    const grid_spec g = opt.grid_text.empty() ? grid_spec{0.05 * u0, 0.95 * u0, 100}
                                              : parse_grid(opt.grid_text);
    u_grid = linspace(g.lo, g.hi, g.count);
    const auto curve = sample_curve(p, curve_kind::gamow_transmission, u_grid, consts);
    recovered = invert_gamow(curve, u_grid);
  } else {
    if (opt.grid_text.empty())
      raise(errc::config_error, "roundtrip on a well needs an explicit --grid for the energies");
    const grid_spec g = parse_grid(opt.grid_text);
    const auto e_grid = linspace(std::max(g.lo, 1e-9), g.hi, std::max<std::size_t>(g.count, 64));
    const auto curve = sample_curve(p, curve_kind::classical_period, e_grid, consts);
    const double span = g.hi - g.lo;
    u_grid = linspace(g.lo + 0.02 * span, g.hi - 0.03 * span, 100);
    recovered = invert_well_period(curve, u_grid);
  }

  double max_rel = 0.0;
  double worst_u = u_grid.front();
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const auto [x1, x2] = p.turning_points(u_grid[i], consts);
    const double truth = x2 - x1;
    const double rel = std::abs(recovered.width[i] - truth) / std::max(truth, 1e-300);
    if (rel > max_rel) {
      max_rel = rel;
      worst_u = u_grid[i];
    }
  }

  if (!opt.out_path.empty()) {
    const double u0 = p.is_barrier() ? p.barrier_max(consts).second : u_grid.back();
    write_width_csv(opt.out_path, recovered, u0, consts,
                    {{"formula", "roundtrip_width"},
                     {"input_hash", input_hash(opt.potential_path)}});
  }

  const bool pass = max_rel <= opt.tol;
  std::cout << "roundtrip: max relative width error = " << format_double(max_rel) << " at U="
            << format_double(worst_u) << " (threshold " << format_double(opt.tol) << ") -> "
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 4;
}

int cmd_family(const options& opt) {
  check_readable(opt.in_path, "width CSV");
  check_writable_dir(opt.out_path);
  auto wfile = read_width_csv(opt.in_path);
  if (opt.hbar_set) wfile.consts.hbar = opt.hbar;
  if (opt.mass_set) wfile.consts.mass = opt.mass;
  wfile.consts.validate();
  const double u0 = wfile.u0;

  // interpolant over the width, extended with the exact apex width(U0) = 0
  std::vector<double> wu = wfile.wf.u_grid;
  std::vector<double> ww = wfile.wf.width;
  if (wu.back() < u0 * (1 - 1e-12)) {
    wu.push_back(u0);
    ww.push_back(0.0);
  }
  const monotone_cubic width_interp(wu, ww);

  std::vector<std::string> names = opt.splits;
  if (names.empty()) names = {"zero", "centered"};
  if (std::find(names.begin(), names.end(), "zero") == names.end())
    names.insert(names.begin(), "zero");

  struct member {
    std::string label;
    potential_spec pot;
  };
  std::vector<member> members;
  for (const auto& name : names) {
    std::function<double(double)> split;
    std::string label = name;
    if (name == "zero") {
      split = [](double) { return 0.0; };
    } else if (name == "centered") {
      split = [&width_interp](double u) { return -0.5 * width_interp.value(u); };
    } else if (name.rfind("file:", 0) == 0) {
      const std::filesystem::path path = name.substr(5);
      check_readable(path, "split file");
      const auto doc = read_csv(path);  // rows: U, x1
      std::vector<double> us, xs;
      for (const auto& r : doc.rows) {
        us.push_back(r[0]);
        xs.push_back(r[1]);
      }
      auto interp = std::make_shared<monotone_cubic>(std::move(us), std::move(xs));
      split = [interp](double u) { return interp->value(u); };
      label = path.stem().string();
      if (label.empty() || label == "zero" || label == "centered") label = "custom";
    } else {
      raise(errc::config_error,
            "--split must be zero, centered or file:PATH, got '" + name + "'");
    }
    members.push_back({label, family_member(wfile.wf, split, u0)});
  }

  const double base_u = wfile.wf.u_grid.front();
  const grid_spec g = opt.grid_text.empty()
                          ? grid_spec{std::max(0.05 * u0, base_u * 1.05 + 1e-12), 0.95 * u0, 100}
                          : parse_grid(opt.grid_text);
  const auto e_grid = linspace(g.lo, g.hi, g.count);

  const std::filesystem::path out(opt.out_path);
  const auto stem = (out.parent_path() / out.stem()).string();
  const std::string ext = out.extension().empty() ? ".csv" : out.extension().string();

  std::vector<std::vector<double>> t_curves;
  for (const auto& mem : members) {
    const auto& table = std::get<tabulated_potential>(mem.pot.kind()).table;
    nlohmann::json meta{{"type", "potential_table"},
                        {"split", mem.label},
                        {"u0", u0},
                        {"input_hash", input_hash(opt.in_path)}};
    write_xu_csv(stem + "_" + mem.label + ext, table.abscissa, table.values, meta);
    const auto curve = sample_curve(mem.pot, curve_kind::gamow_transmission, e_grid, wfile.consts);
    write_curve_csv(stem + "_" + mem.label + "_T" + ext, curve, {{"split", mem.label}});
    t_curves.push_back(curve.data.values);
    std::cout << "member '" << mem.label << "': potential + transmission written\n";
  }

  double max_gap = 0.0;
  for (std::size_t a = 0; a < t_curves.size(); ++a)
    for (std::size_t b = a + 1; b < t_curves.size(); ++b)
      for (std::size_t i = 0; i < e_grid.size(); ++i)
        max_gap = std::max(max_gap, std::abs(t_curves[a][i] - t_curves[b][i]));
  std::cout << "max pairwise transmission discrepancy = " << format_double(max_gap) << "\n";
  return 0;
}

int cmd_marchenko(const options& opt) {
  check_readable(opt.potential_path, "spectrum file");
  check_writable_dir(opt.out_path);
  const grid_spec g = parse_grid(opt.grid_text);
  const auto consts = constants_from(opt);
  const auto spec = load_spectrum(opt.potential_path);
  const auto rec = reconstruct_potential(spec, linspace(g.lo, g.hi, g.count));
  nlohmann::json meta{{"type", "reconstruction"},
                      {"hbar", consts.hbar},
                      {"mass", consts.mass},
                      {"levels", spec.levels.size()},
                      {"input_hash", input_hash(opt.potential_path)}};
  write_xu_csv(opt.out_path, rec.x_grid, rec.u_values, meta);
  std::cout << "wrote reconstruction (" << rec.x_grid.size() << " rows) to " << opt.out_path
            << "\n";
  return 0;
}

int cmd_verify() {
  const int failures = print_acceptance_report(std::cout);
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 4;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "barrier-inverse: forward tunnelling/classical scattering data and the "
      "Abel-type inversions that reconstruct potentials from them"};
  app.require_subcommand(1);

  options opt;

  auto add_constants = [&](CLI::App* cmd) {
    cmd->add_option("--hbar", opt.hbar, "reduced Planck constant (default 1)")
        ->each([&](const std::string&) { opt.hbar_set = true; });
    cmd->add_option("--mass", opt.mass, "particle mass (default 1)")
        ->each([&](const std::string&) { opt.mass_set = true; });
  };

  CLI::App* forward = app.add_subcommand("forward", "sample a scattering curve from a potential");
  forward->add_option("--potential", opt.potential_path, "potential JSON")->required();
  forward->add_option("--kind", opt.kind_text,
                      "curve kind: transmission|period|backward|traversal")
      ->required();
  forward->add_option("--grid", opt.grid_text, "energy grid min:max:count")->required();
  forward->add_option("--out", opt.out_path, "output CSV")->required();
  add_constants(forward);

  CLI::App* invert = app.add_subcommand("invert", "invert a scattering curve CSV");
  invert->add_option("--in", opt.in_path, "input scattering-curve CSV")->required();
  invert->add_option("--out", opt.out_path, "output CSV")->required();
  invert->add_option("--grid", opt.grid_text, "U grid min:max:count (default: data range)");
  add_constants(invert);

  CLI::App* roundtrip =
      app.add_subcommand("roundtrip", "forward -> invert -> compare against turning points");
  roundtrip->add_option("--potential", opt.potential_path, "potential JSON")->required();
  roundtrip->add_option("--grid", opt.grid_text, "energy grid min:max:count");
  roundtrip->add_option("--out", opt.out_path, "optional CSV of the recovered width");
  roundtrip->add_option("--tol", opt.tol, "pass threshold on the relative width error");
  add_constants(roundtrip);

  CLI::App* family =
      app.add_subcommand("family", "emit barrier family members sharing one width function");
  family->add_option("--in", opt.in_path, "width-function CSV")->required();
  family->add_option("--out", opt.out_path, "output CSV prefix")->required();
  family->add_option("--split", opt.splits, "zero | centered | file:PATH (repeatable)");
  family->add_option("--grid", opt.grid_text, "energy grid for the recomputed transmissions");
  add_constants(family);

  CLI::App* marchenko =
      app.add_subcommand("marchenko", "reconstruct a reflectionless potential from a spectrum");
  marchenko->add_option("--potential", opt.potential_path, "discrete-spectrum JSON")->required();
  marchenko->add_option("--grid", opt.grid_text, "x grid min:max:count")->required();
  marchenko->add_option("--out", opt.out_path, "output CSV")->required();
  add_constants(marchenko);

  app.add_subcommand("verify", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR 2: " << e.what() << std::endl;
    return 2;
  }

  try {
    if (app.got_subcommand("forward")) return cmd_forward(opt);
    if (app.got_subcommand("invert")) return cmd_invert(opt);
    if (app.got_subcommand("roundtrip")) return cmd_roundtrip(opt);
    if (app.got_subcommand("family")) return cmd_family(opt);
    if (app.got_subcommand("marchenko")) return cmd_marchenko(opt);
    if (app.got_subcommand("verify")) return cmd_verify();
  } catch (const barrierinv::error& e) {
    const int code = exit_code_for(e.code());
    std::cerr << "ERROR " << code << ": " << e.what() << std::endl;
    return code;
  } catch (const std::exception& e) {
    std::cerr << "ERROR 3: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
