// equiorbit command-line tool. Talks to the library through the C API only.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <equiorbit/equiorbit.h>

namespace {

// A failed library call or unreadable input; reported as JSON on stderr.
struct Failure {
  std::string error;
  int code;
  std::string message;
};

void check(eo_status s) {
  if (s != EO_OK) throw Failure{eo_status_name(s), static_cast<int>(s), eo_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  eo_string_free(s);
  return out;
}

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Failure{"io", EO_IO, "cannot open " + path};
    ss << in.rdbuf();
  }
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure{"io", EO_IO, "cannot write " + path};
  out << text;
  if (!out) throw Failure{"io", EO_IO, "cannot write " + path};
}

using GroupPtr = std::unique_ptr<eo_group, decltype(&eo_group_free)>;
using LoopPtr = std::unique_ptr<eo_loop, decltype(&eo_loop_free)>;

GroupPtr load_group(const std::string& path) {
  eo_group* g = nullptr;
  check(eo_group_from_json(read_input(path).c_str(), &g));
  return GroupPtr(g, eo_group_free);
}

LoopPtr load_loop(const std::string& path) {
  eo_loop* l = nullptr;
  check(eo_loop_from_json(read_input(path).c_str(), &l));
  return LoopPtr(l, eo_loop_free);
}

// "x,y,z" options
CLI::Option* add_vec3(CLI::App* app, const std::string& name, std::vector<double>& v, const std::string& desc) {
  return app->add_option(name, v, desc)->delimiter(',')->expected(3)->allow_extra_args(false);
}

const double* vec_or_null(const std::vector<double>& v) { return v.size() == 3 ? v.data() : nullptr; }

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry groups and equivariant periodic orbits of the n-body problem"};
  app.set_version_flag("--version", std::string(eo_version()));
  app.require_subcommand(1);

  // catalog
  auto* cat = app.add_subcommand("catalog", "List point groups with orders, generators and normalizers");
  std::string family;
  int cat_p = 0, pmax = 12;
  bool cores = false, eliminated = false;
  std::string extensions_of;
  cat->add_option("--family", family, "Family symbol (C, D, T, O, Y, IxC, ..., Pprime, Cph)");
  cat->add_option("--p", cat_p, "Parameter of the family")->check(CLI::NonNegativeNumber);
  cat->add_option("--pmax", pmax, "Largest parameter listed")->check(CLI::PositiveNumber);
  cat->add_flag("--cores", cores, "List admissible cores instead of catalog rows");
  cat->add_flag("--eliminated", eliminated, "With --cores: also drop cores containing plane reflections");
  cat->add_option("--extensions-of", extensions_of, "List index-2 extensions of this core (use --p for its parameter)");

  // group
  auto* grp = app.add_subcommand("group", "Build, check, decompose or sum symmetry groups");
  grp->require_subcommand(1);
  std::string group_file;
  auto* build = grp->add_subcommand("build", "Canonical generator form of a group file");
  build->add_option("file", group_file, "Group file ('-' for stdin)")->required();
  auto* chk = grp->add_subcommand("check", "Collision-avoidance report");
  chk->add_option("file", group_file, "Group file ('-' for stdin)")->required();
  std::vector<double> check_omega;
  add_vec3(chk, "--omega", check_omega, "Angular velocity of the rotating frame, x,y,z");
  auto* dec = grp->add_subcommand("decompose", "Krh data and per-component Krh-hat data");
  dec->add_option("file", group_file, "Group file ('-' for stdin)")->required();
  std::vector<std::string> sum_files;
  auto* sum = grp->add_subcommand("sum", "Disjoint sum of groups with the same time action");
  sum->add_option("files", sum_files, "Group files")->required()->expected(2, -1);

  // svar
  auto* sv = app.add_subcommand("svar", "Evaluate the local variation integral S(s, delta)");
  std::vector<double> s_vec, d_vec;
  double sv_alpha = 1.0;
  add_vec3(sv, "--s", s_vec, "Separation s, x,y,z")->required();
  add_vec3(sv, "--delta", d_vec, "Variation delta, x,y,z")->required();
  sv->add_option("--alpha", sv_alpha, "Potential exponent, 0 < alpha < 2");

  // minimize
  auto* mn = app.add_subcommand("minimize", "Minimize the action over equivariant loops");
  eo_minimize_options mo;
  eo_minimize_options_default(&mo);
  std::string mn_group, out_file, report_file;
  double mn_alpha = 1.0;
  std::vector<double> mn_omega;
  std::uint64_t seed = 1;
  bool no_verify = false;
  int traj_samples = 0;
  mn->add_option("--group", mn_group, "Group file ('-' for stdin)")->required();
  mn->add_option("--alpha", mn_alpha, "Potential exponent, 0 < alpha < 2");
  add_vec3(mn, "--omega", mn_omega, "Angular velocity of the rotating frame, x,y,z");
  mn->add_option("--modes", mo.modes, "Fourier modes N")->check(CLI::PositiveNumber);
  mn->add_option("--seed", seed, "Random seed");
  mn->add_option("--max-iter", mo.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  mn->add_option("--grad-tol", mo.grad_tol, "Gradient norm stopping tolerance")->check(CLI::PositiveNumber);
  mn->add_option("--restarts", mo.max_restarts, "Restarts with fresh seeds after collisions")
      ->check(CLI::NonNegativeNumber);
  mn->add_option("--samples", mo.samples, "Quadrature samples M (0 = max(1024, 8 N))")->check(CLI::NonNegativeNumber);
  mn->add_option("--polish", mo.polish_modes, "Refine at this many modes after converging (0 = off)")
      ->check(CLI::NonNegativeNumber);
  mn->add_flag("--no-verify", no_verify, "Skip the ODE check");
  mn->add_option("--out", out_file, "Write the trajectory file here");
  mn->add_option("--traj-samples", traj_samples, "Embed this many sampled positions in the trajectory file")
      ->check(CLI::NonNegativeNumber);
  mn->add_option("--report", report_file, "Also write the report here");

  // verify
  auto* vf = app.add_subcommand("verify", "ODE residual and collision summary of a trajectory file");
  std::string traj_file;
  vf->add_option("file", traj_file, "Trajectory file ('-' for stdin)")->required();

  // plot
  auto* pl = app.add_subcommand("plot", "Render a trajectory file as SVG or CSV samples");
  std::string format = "svg", plot_out;
  std::vector<double> view;
  int plot_samples = 512;
  pl->add_option("file", traj_file, "Trajectory file ('-' for stdin)")->required();
  pl->add_option("--format", format, "Output format")->check(CLI::IsMember({"svg", "csv"}));
  add_vec3(pl, "--view", view, "Viewing axis, x,y,z (default: the stored rotation axis, else z)");
  pl->add_option("--samples", plot_samples, "Samples per period")->check(CLI::PositiveNumber);
  pl->add_option("--out", plot_out, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json j{{"error", "usage"}, {"code", 1}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  }

  try {
    char* out = nullptr;
    if (*cat) {
      if (!extensions_of.empty()) {
        nlohmann::json label{{"name", extensions_of}};
        if (cat_p > 0) label["p"] = cat_p;
        check(eo_admissible_extensions_json(label.dump().c_str(), &out));
      } else if (cores) {
        check(eo_admissible_cores_json(pmax, eliminated ? 1 : 0, &out));
      } else {
        check(eo_catalog_json(family.empty() ? nullptr : family.c_str(), cat_p, pmax, &out));
      }
      std::cout << take(out);
      return 0;
    }

    if (*grp) {
      if (*sum) {
        GroupPtr acc = load_group(sum_files[0]);
        for (std::size_t i = 1; i < sum_files.size(); ++i) {
          GroupPtr next = load_group(sum_files[i]);
          eo_group* s = nullptr;
          check(eo_group_sum(acc.get(), next.get(), &s));
          acc = GroupPtr(s, eo_group_free);
        }
        check(eo_group_to_json(acc.get(), &out));
      } else {
        GroupPtr g = load_group(group_file);
        if (*build) check(eo_group_to_json(g.get(), &out));
        if (*chk) check(eo_group_check_json(g.get(), vec_or_null(check_omega), &out));
        if (*dec) check(eo_group_decompose_json(g.get(), &out));
      }
      std::cout << take(out);
      return 0;
    }

    if (*sv) {
      double v = 0;
      check(eo_s_integral(s_vec.data(), d_vec.data(), sv_alpha, &v));
      std::cout << format_number(v) << "\n";
      return 0;
    }

    if (*mn) {
      GroupPtr g = load_group(mn_group);
      mo.verify = no_verify ? 0 : 1;
      eo_loop* l = nullptr;
      const double zero[3] = {0, 0, 0};
      check(eo_minimize(g.get(), mn_omega.size() == 3 ? mn_omega.data() : zero, mn_alpha, seed, &mo, nullptr, &l,
                        &out));
      LoopPtr loop(l, eo_loop_free);
      const std::string report = take(out);
      if (!out_file.empty()) {
        check(eo_loop_to_json(loop.get(), traj_samples, &out));
        write_output(out_file, take(out));
      }
      if (!report_file.empty()) write_output(report_file, report);
      std::cout << report;
      const auto r = nlohmann::json::parse(report);
      // 2: the minimizer collided or stopped before the gradient tolerance
      return r.value("collisionless", false) && r.value("converged", false) ? 0 : 2;
    }

    if (*vf) {
      LoopPtr loop = load_loop(traj_file);
      check(eo_loop_verify_json(loop.get(), &out));
      std::cout << take(out);
      return 0;
    }

    if (*pl) {
      LoopPtr loop = load_loop(traj_file);
      check(eo_loop_plot(loop.get(), format.c_str(), vec_or_null(view), plot_samples, &out));
      const std::string text = take(out);
      if (plot_out.empty())
        std::cout << text;
      else
        write_output(plot_out, text);
      return 0;
    }
  } catch (const Failure& f) {
    nlohmann::ordered_json j{{"error", f.error}, {"code", f.code}, {"message", f.message}};
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j{{"error", "internal"}, {"code", static_cast<int>(EO_INTERNAL)}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return 1;
}
