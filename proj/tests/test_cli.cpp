#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& stdout_path) {
  std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " > " + stdout_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("cli transform and convolve round trip") {
  const char* delta = "{\"atoms\":[{\"s_angle\":0.5,\"t_angle\":-0.25,\"weight\":1.0}]}";
  std::string mpath = "/tmp/bitorus_cli_measure.json";
  {
    std::ofstream out(mpath);
    out << delta;
  }

  std::string outpath = "/tmp/bitorus_cli_out.txt";
  CHECK(run_cli("transform --measure " + mpath + " --which sigma --at 0.1,0 0.2,0", outpath) == 0);
  std::string text = slurp(outpath);
  CHECK(text.find("\"transform\"") != std::string::npos);
  CHECK(text.find("\"component\"") != std::string::npos);
  CHECK(text.find("\"DD\"") != std::string::npos);

  // convolve the point mass with itself: 13x13 grid of rows for order 6
  std::string csvpath = "/tmp/bitorus_cli_table.csv";
  CHECK(run_cli("convolve " + mpath + " " + mpath + " --order 6 --grid 128 --out " + csvpath,
                outpath) == 0);
  std::string csv = slurp(csvpath);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 170);  // header + 169 entries
  CHECK(csv.substr(0, 10) == "p,q,re,im\n");

  // unknown input file: exit 2 (I/O)
  CHECK(run_cli("convolve /nonexistent.json " + mpath, outpath) == 2);
  // centered measure: exit 1 (domain)
  const char* centered =
      "{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.5},"
      "{\"s_angle\":3.14159265358979,\"t_angle\":0,\"weight\":0.5}]}";
  std::string cpath = "/tmp/bitorus_cli_centered.json";
  {
    std::ofstream out(cpath);
    out << centered;
  }
  CHECK(run_cli("convolve " + cpath + " " + mpath, outpath) == 1);

  std::remove(mpath.c_str());
  std::remove(cpath.c_str());
  std::remove(outpath.c_str());
  std::remove(csvpath.c_str());
}

TEST_CASE("cli idlaw and haar-check") {
  const char* levy =
      "{\"rho1\":{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.5}]},"
      "\"rho2\":{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.5}]},"
      "\"a\":1.0,\"gamma1_angle\":0,\"gamma2_angle\":0}";
  std::string lpath = "/tmp/bitorus_cli_levy.json";
  {
    std::ofstream out(lpath);
    out << levy;
  }
  std::string outpath = "/tmp/bitorus_cli_idlaw.csv";
  CHECK(run_cli("idlaw " + lpath + " --order 2 --grid 128 --out " + outpath,
                "/tmp/bitorus_cli_null.txt") == 0);
  std::string csv = slurp(outpath);
  CHECK(csv.substr(0, 10) == "p,q,re,im\n");
  // mean of the drift marginal sits in the (1,0) row
  CHECK(csv.find("1,0,0.6065306") != std::string::npos);

  const char* haar =
      "{\"measure\":{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.9},"
      "{\"s_angle\":1.5707963267948966,\"t_angle\":1.5707963267948966,\"weight\":0.025},"
      "{\"s_angle\":1.5707963267948966,\"t_angle\":-1.5707963267948966,\"weight\":0.025},"
      "{\"s_angle\":-1.5707963267948966,\"t_angle\":1.5707963267948966,\"weight\":0.025},"
      "{\"s_angle\":-1.5707963267948966,\"t_angle\":-1.5707963267948966,\"weight\":0.025}]},"
      "\"levels\":[4,8]}";
  std::string hpath = "/tmp/bitorus_cli_haar.json";
  {
    std::ofstream out(hpath);
    out << haar;
  }
  CHECK(run_cli("haar-check " + hpath + " --order 2 --grid 64 --out " + outpath,
                "/tmp/bitorus_cli_null.txt") == 0);
  std::string report = slurp(outpath);
  CHECK(report.find("level,m11_pow") == 0);
  CHECK(report.find("\n4,") != std::string::npos);

  std::remove(lpath.c_str());
  std::remove(hpath.c_str());
  std::remove(outpath.c_str());
  std::remove("/tmp/bitorus_cli_null.txt");
}

TEST_CASE("cli limit demo emits a decreasing error column") {
  std::string outpath = "/tmp/bitorus_cli_demo.csv";
  CHECK(run_cli("limit-demo --example 3.5 --r 1 --levels 8,16 --order 2 --grid 64 --out " + outpath,
                "/tmp/bitorus_cli_demo_stdout.txt") == 0);
  std::string csv = slurp(outpath);
  CHECK(csv.find("level,max_moment_error") == 0);
  double e8 = 0, e16 = 0;
  std::sscanf(csv.c_str(), "level,max_moment_error\n8,%lf\n16,%lf", &e8, &e16);
  CHECK(e16 < e8);
  std::remove(outpath.c_str());
  std::remove("/tmp/bitorus_cli_demo_stdout.txt");
}
