#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "conflat/kernels.hpp"
#include "conflat/rng.hpp"
#include "conflat/suite.hpp"

namespace {

using conflat::KernelSpec;
using conflat::Vec;

nlohmann::json load_json_arg(const std::string& arg) {
  // inline JSON or a path to a JSON file
  std::string text = arg;
  if (arg.empty() || arg[0] != '{') {
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return nlohmann::json::parse(text);
}

Vec parse_csv_vector(const std::string& s) {
  Vec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::runtime_error("empty vector argument");
  return out;
}

std::vector<int> parse_csv_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void print_multivector_csv(const conflat::Multivector& m, std::ostream& os) {
  std::vector<std::uint32_t> blades;
  for (std::uint32_t b = 0; b < m.size(); ++b)
    if (m[b] != 0.0) blades.push_back(b);
  if (blades.empty()) blades.push_back(0);
  for (std::size_t i = 0; i < blades.size(); ++i)
    os << (i ? "," : "") << conflat::blade_name(blades[i]);
  os << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < blades.size(); ++i)
    os << (i ? "," : "") << m[blades[i]];
  os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conflat: kernel evaluation and verification suites for "
               "Clifford analysis on conformally flat manifolds"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite_name = "default", config_path, out_path;
  verify->add_option("--suite", suite_name, "suite name");
  verify->add_option("--config", config_path, "JSON config (path or inline)");
  verify->add_option("--out", out_path, "report output path (default stdout)");

  auto* eval = app.add_subcommand("eval", "evaluate a kernel at (x, y)");
  std::string spec_arg, x_arg, y_arg;
  eval->add_option("--spec", spec_arg, "KernelSpec JSON (path or inline)")
      ->required();
  eval->add_option("--x", x_arg, "x as comma-separated reals")->required();
  eval->add_option("--y", y_arg, "y as comma-separated reals")->required();

  auto* converge = app.add_subcommand("converge", "truncation convergence study");
  std::string radii_arg, conv_out;
  converge->add_option("--spec", spec_arg, "KernelSpec JSON (path or inline)")
      ->required();
  converge->add_option("--x", x_arg, "x as comma-separated reals")->required();
  converge->add_option("--y", y_arg, "y as comma-separated reals")->required();
  converge->add_option("--radii", radii_arg, "comma-separated radii")->required();
  converge->add_option("--out", conv_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      nlohmann::json config;
      if (!config_path.empty())
        config = load_json_arg(config_path);
      else
        config = nlohmann::json::object();
      if (!config.contains("suite")) config["suite"] = suite_name;
      conflat::VerificationReport report = conflat::run_suite(config);
      const std::string text = report.dump();
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
      } else {
        std::cout << text;
      }
      for (const auto& c : report.checks)
        std::cerr << (c.passed() ? "PASS " : "FAIL ") << c.id << " ("
                  << c.runtime_sec << " s)"
                  << (c.error.empty() ? "" : ": " + c.error) << "\n";
      return report.all_pass() ? 0 : 1;
    }

    const KernelSpec spec = conflat::kernel_spec_from_json(
        load_json_arg(spec_arg), "/spec");
    const Vec x = parse_csv_vector(x_arg);
    const Vec y = parse_csv_vector(y_arg);

    if (*eval) {
      print_multivector_csv(conflat::kernel_value(spec, x, y), std::cout);
      if (spec.trunc.tail_report) {
        try {
          conflat::TailBounds t = conflat::tail_bounds(spec);
          std::cerr << "tail_estimate_paired=" << t.paired
                    << " unpaired=" << t.unpaired << "\n";
        } catch (const std::exception& e) {
          std::cerr << "tail_estimate: " << e.what() << "\n";
        }
      }
      return 0;
    }
    if (*converge) {
      conflat::ConvergenceStudy study =
          conflat::convergence_study(spec, x, y, parse_csv_ints(radii_arg));
      if (!conv_out.empty()) {
        std::ofstream out(conv_out, std::ios::binary);
        conflat::write_csv(study, out);
      } else {
        conflat::write_csv(study, std::cout);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
