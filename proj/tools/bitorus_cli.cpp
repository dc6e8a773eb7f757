// Command-line front end for the bitorus shared library. Talks to the
// library exclusively through the C interface in bitorus/bitorus.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bitorus/bitorus.h"

namespace {

using nlohmann::json;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& msg) { throw CliError{code, msg}; }

// Library failures map to exit 1 (domain) or 2 (I/O), with a machine-readable
// record on stderr.
void check(bt_status st, const std::string& what) {
  if (st == BT_OK) return;
  die(st == BT_EIO ? 2 : 1, what + ": " + bt_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) die(2, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) die(2, "cannot write " + tmp);
    out << content;
    if (!out.good()) die(2, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) die(2, "rename failed for " + path);
}

struct MeasureHandle {
  bt_measure2* m = nullptr;
  ~MeasureHandle() { bt_measure2_free(m); }
};

struct LawHandle {
  bt_law* l = nullptr;
  ~LawHandle() { bt_law_free(l); }
};

struct TableHandle {
  bt_table* t = nullptr;
  ~TableHandle() { bt_table_free(t); }
};

void load_measure(const std::string& path, MeasureHandle& out) {
  check(bt_measure2_from_json(read_file(path).c_str(), &out.m), path);
}

std::pair<double, double> parse_point(const std::string& text) {
  std::size_t comma = text.find(',');
  if (comma == std::string::npos) die(1, "point \"" + text + "\" must be re,im");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    die(1, "point \"" + text + "\" must be re,im");
  }
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  bt_string_free(s);
  return out;
}

std::string table_csv(bt_table* t) {
  char* csv = nullptr;
  check(bt_table_to_csv(t, &csv), "table");
  return take_string(csv);
}

struct CommonOpts {
  int order = 6;
  int grid = 256;
  double radius = 0.4;
  std::string format = "csv";
  unsigned long seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--order", opts.order, "moment table order")->check(CLI::PositiveNumber);
  cmd->add_option("--grid", opts.grid, "evaluation grid size (power of two)");
  cmd->add_option("--radius", opts.radius, "requested grid radius");
  cmd->add_option("--format", opts.format, "output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts.seed, "seed for randomized point sampling");
  cmd->add_option("--out,-o", opts.out, "output path (default stdout)");
}

std::string table_output(bt_table* t, const CommonOpts& opts) {
  if (opts.format == "csv") return table_csv(t);
  int order = 0;
  check(bt_table_order(t, &order), "table");
  json rows = json::array();
  for (long p = -order; p <= order; ++p)
    for (long q = -order; q <= order; ++q) {
      double re = 0, im = 0;
      check(bt_table_get(t, p, q, &re, &im), "table");
      rows.push_back({{"p", p}, {"q", q}, {"re", re}, {"im", im}});
    }
  return rows.dump(2) + "\n";
}

void emit_moments(bt_law* law, const CommonOpts& opts) {
  TableHandle table;
  char* diag = nullptr;
  check(bt_law_moments(law, opts.order, opts.grid, opts.radius, &table.t, &diag), "extraction");
  write_output(opts.out, table_output(table.t, opts));
  std::cerr << take_string(diag) << "\n";
}

int cmd_transform(const std::string& measure_path, const std::string& which,
                  std::vector<std::string> at, const std::string& series_out,
                  const CommonOpts& opts) {
  MeasureHandle m;
  load_measure(measure_path, m);

  if (!series_out.empty()) {
    std::vector<double> coeffs(2 * std::size_t(opts.order + 1) * std::size_t(opts.order + 1));
    check(bt_measure2_sigma_series(m.m, opts.order, coeffs.data()), "sigma series");
    std::string csv = "p,q,re,im\n";
    std::size_t k = 0;
    for (int p = 0; p <= opts.order; ++p)
      for (int q = 0; q <= opts.order; ++q) {
        char line[96];
        std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g\n", p, q, coeffs[k], coeffs[k + 1]);
        csv += line;
        k += 2;
      }
    write_output(series_out, csv);
    if (at.empty()) return 0;
  }

  bool one_variable =
      which == "psi1" || which == "psi2" || which == "eta1" || which == "eta2" ||
      which == "eta_inv1" || which == "eta_inv2";

  // "random:N" draws N off-torus sample points from the seed
  if (at.size() == 1 && at[0].rfind("random:", 0) == 0) {
    int n = std::stoi(at[0].substr(7));
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> radius(0.1, 0.4), angle(-3.14159, 3.14159);
    at.clear();
    int per_point = one_variable ? 1 : 2;
    for (int i = 0; i < n * per_point; ++i) {
      double r = radius(rng), a = angle(rng);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g,%.12g", r * std::cos(a), r * std::sin(a));
      at.push_back(buf);
    }
  }

  std::size_t stride = one_variable ? 1 : 2;
  if (at.empty() || at.size() % stride != 0)
    die(1,
        one_variable ? "--at needs points re,im" : "--at needs point pairs: z_re,z_im w_re,w_im");

  json records = json::array();
  for (std::size_t i = 0; i < at.size(); i += stride) {
    auto [zre, zim] = parse_point(at[i]);
    double wre = 0.0, wim = 0.0;
    if (!one_variable) {
      auto [a, b] = parse_point(at[i + 1]);
      wre = a;
      wim = b;
    }
    double value[2] = {0, 0};
    char component[3] = {0, 0, 0};
    check(bt_measure2_eval(m.m, which.c_str(), zre, zim, wre, wim, value, component),
          "transform " + which);
    json rec{{"z", {zre, zim}},
             {"transform", which},
             {"value", {value[0], value[1]}},
             {"component", std::string(component, 2)}};
    if (!one_variable) rec["w"] = {wre, wim};
    records.push_back(rec);
  }
  write_output(opts.out, records.dump(2) + "\n");
  return 0;
}

int cmd_convolve(const std::string& a_path, const std::string& b_path, const CommonOpts& opts) {
  MeasureHandle a, b;
  load_measure(a_path, a);
  load_measure(b_path, b);
  LawHandle la, lb, conv;
  check(bt_law_from_measure(a.m, &la.l), a_path);
  check(bt_law_from_measure(b.m, &lb.l), b_path);
  check(bt_law_convolve(la.l, lb.l, &conv.l), "convolve");
  emit_moments(conv.l, opts);
  return 0;
}

int cmd_power(const std::string& path, long n, const CommonOpts& opts) {
  MeasureHandle m;
  load_measure(path, m);
  LawHandle law, pow;
  check(bt_law_from_measure(m.m, &law.l), path);
  check(bt_law_power(law.l, n, &pow.l), "power");
  emit_moments(pow.l, opts);
  return 0;
}

int cmd_idlaw(const std::string& path, const CommonOpts& opts) {
  LawHandle law;
  check(bt_law_from_levy_json(read_file(path).c_str(), &law.l), path);
  emit_moments(law.l, opts);
  return 0;
}

int cmd_limit_demo(const std::string& example, double rate, const std::string& levels_text,
                   const CommonOpts& opts) {
  std::vector<long> levels;
  std::stringstream ss(levels_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) levels.push_back(std::stol(tok));
  if (levels.empty()) die(1, "--levels needs a comma-separated list");
  std::vector<double> errors(levels.size());
  check(bt_limit_demo(example.c_str(), rate, levels.data(), levels.size(), opts.order, opts.grid,
                      errors.data()),
        "limit demo");
  std::string csv = "level,max_moment_error\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    char line[64];
    std::snprintf(line, sizeof line, "%ld,%.17g\n", levels[i], errors[i]);
    csv += line;
  }
  write_output(opts.out, csv);
  return 0;
}

int cmd_haar_check(const std::string& spec_path, const CommonOpts& opts) {
  json spec = json::parse(read_file(spec_path), nullptr, false);
  if (spec.is_discarded() || !spec.contains("measure") || !spec.contains("levels"))
    die(2, spec_path + ": expected {\"measure\": {...}, \"levels\": [...]}");
  MeasureHandle m;
  check(bt_measure2_from_json(spec["measure"].dump().c_str(), &m.m), spec_path);
  std::vector<long> levels;
  for (const json& v : spec["levels"]) levels.push_back(v.get<long>());
  if (levels.empty()) die(1, "levels list is empty");
  std::vector<double> rows(5 * levels.size());
  check(bt_haar_check(m.m, levels.data(), levels.size(), opts.order, opts.grid, rows.data()),
        "haar check");
  std::string csv = "level,m11_pow,m1_pow,m2_pow,envelope,max_offcenter_moment,haar_trend\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double* r = &rows[5 * i];
    char line[160];
    std::snprintf(line, sizeof line, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", levels[i], r[0],
                  r[1], r[2], r[3], r[4], r[3] < 0.05 ? 1 : 0);
    csv += line;
  }
  write_output(opts.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic analysis for multiplicative convolution on the torus"};
  app.require_subcommand(1);

  CommonOpts opts;

  std::string measure_path, which = "sigma", series_out;
  std::vector<std::string> at_points;
  CLI::App* transform = app.add_subcommand("transform", "evaluate a transform of a measure");
  transform->add_option("--measure", measure_path, "measure JSON file")->required();
  transform->add_option("--which", which,
                        "psi|h|sigma|sigma_op|s|psi1|psi2|eta1|eta2|eta_inv1|eta_inv2");
  transform->add_option("--at", at_points, "evaluation points re,im (pairs z w), or random:N");
  transform->add_option("--series-out", series_out, "dump sigma series coefficients CSV");
  add_common(transform, opts);

  std::string conv_a, conv_b;
  CLI::App* convolve = app.add_subcommand("convolve", "bi-free convolution moment table");
  convolve->add_option("a", conv_a, "first measure JSON")->required();
  convolve->add_option("b", conv_b, "second measure JSON")->required();
  add_common(convolve, opts);

  std::string pow_path;
  long pow_n = 2;
  CLI::App* power = app.add_subcommand("power", "n-fold convolution power moment table");
  power->add_option("measure", pow_path, "measure JSON")->required();
  power->add_option("--n", pow_n, "exponent")->required();
  add_common(power, opts);

  std::string levy_path;
  CLI::App* idlaw = app.add_subcommand("idlaw", "infinitely divisible law from parameter JSON");
  idlaw->add_option("levy", levy_path, "parameter JSON file")->required();
  add_common(idlaw, opts);

  std::string example = "3.5", levels_text = "8,16,32,64";
  double rate = 1.0;
  CLI::App* demo = app.add_subcommand("limit-demo", "convolution powers against the limit law");
  demo->add_option("--example", example, "3.5|normal or 3.6|poisson");
  demo->add_option("--r", rate, "rate parameter");
  demo->add_option("--levels", levels_text, "comma-separated levels");
  add_common(demo, opts);

  std::string haar_spec;
  CLI::App* haar = app.add_subcommand("haar-check", "uniform-law convergence report");
  haar->add_option("spec", haar_spec, "JSON {\"measure\": {...}, \"levels\": [...]}")->required();
  add_common(haar, opts);

  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(selftest, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (transform->parsed())
      return cmd_transform(measure_path, which, at_points, series_out, opts);
    if (convolve->parsed()) return cmd_convolve(conv_a, conv_b, opts);
    if (power->parsed()) return cmd_power(pow_path, pow_n, opts);
    if (idlaw->parsed()) return cmd_idlaw(levy_path, opts);
    if (demo->parsed()) return cmd_limit_demo(example, rate, levels_text, opts);
    if (haar->parsed()) return cmd_haar_check(haar_spec, opts);
    if (selftest->parsed()) {
      int failures = 0;
      check(bt_selftest(&failures), "selftest");
      return failures == 0 ? 0 : 1;
    }
  } catch (const CliError& e) {
    json err{{"error", e.exit_code == 2 ? "io" : "domain"}, {"message", e.message}};
    std::cerr << err.dump() << "\n";
    return e.exit_code;
  }
  return 0;
}
