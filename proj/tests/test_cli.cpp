#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "nckob/geodesic.hpp"
#include "nckob/io.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string err_file = testing::TempDir() + "nckob_cli_stderr.txt";
  const std::string cmd = env + " " NCKOB_CLI_PATH " " + args + " 2>" + err_file;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST(CliEval, ExactValues) {
  auto r = run("eval --m 0.25 --b 0.5 --X 0 --Y 1");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kappa"].get<double>(), 4.0 / 3.0);
  EXPECT_EQ(j["branch"], "X-zero");

  r = run("eval --m 0.25 --b 0 --X 1 --Y 0");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["kappa"].get<double>(), 1.0);
}

TEST(CliEval, MiddleRegionReportsSwitchPoint) {
  const auto r = run("eval --m 0.25 --b 0.5 --X 0.55 --Y 1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["branch"], "kappa1");
  EXPECT_NEAR(j["v0"].get<double>(), 1.2954089487405992707, 1e-9);
  EXPECT_TRUE(j["t"].is_number());
  EXPECT_TRUE(j["x"].is_number());
}

TEST(CliEval, GeneralPointAndCsv) {
  const auto r = run("eval --m 0.25 --z1 0.3,0.2 --z2 0.4,-0.1 --X 0.7,0.1 --Y -0.2,0.5 --format csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "m,b,v,kappa,branch,t,x,v0");
  EXPECT_NEAR(std::stod(split(ls[1])[3]), 1.6688967302731332585, 1e-10);
}

TEST(CliEval, UsageAndDomainErrors) {
  auto r = run("eval --m 0.25 --z1 0.9 --z2 0.5 --X 1 --Y 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gauge"), std::string::npos) << r.err;
  EXPECT_EQ(run("eval --m 0.5 --b 0.5 --X 1 --Y 1").code, 2);
  EXPECT_EQ(run("eval --m 0.25 --b 0.5 --z1 0 --X 1").code, 2);
  EXPECT_EQ(run("eval --m 0.25 --X 1").code, 2);
  EXPECT_EQ(run("eval --m 0.25 --b 0.5 --X abc").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("eval --m 0.25 --b 0.5 --X 1 --Y 1", "NCKOB_ROOT_TOL=0.5").code, 2);
  EXPECT_EQ(run("eval --m 0.25 --b 0.5 --X 1 --Y 1", "NCKOB_ROOT_TOL=1e-10").code, 0);
}

TEST(CliScan, HeaderEndpointsAndMonotonicity) {
  const auto r = run("scan --m 0.25 --b 0.5 --v-lo 0.1 --v-hi 3 --n 60 --log");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 61u);
  EXPECT_EQ(ls[0], "v,kappa,branch,t,x");
  double prev = 0.0;
  std::string prev_branch;
  int switches = 0;
  for (size_t i = 1; i < ls.size(); ++i) {
    const auto f = split(ls[i]);
    ASSERT_EQ(f.size(), 5u);
    const double k = std::stod(f[1]);
    EXPECT_GT(k, prev);
    prev = k;
    if (!prev_branch.empty() && f[2] != prev_branch) ++switches;
    prev_branch = f[2];
  }
  EXPECT_EQ(switches, 1);
  EXPECT_EQ(split(ls[1])[2], "kappa1");
  EXPECT_EQ(prev_branch, "kappa2");

  // Endpoints agree with eval.
  const auto two = lines(run("scan --m 0.25 --b 0.5 --v-lo 0.25 --v-hi 4 --n 2").out);
  ASSERT_EQ(two.size(), 3u);
  const auto e1 = nlohmann::json::parse(run("eval --m 0.25 --b 0.5 --X 0.25 --Y 1").out);
  const auto e2 = nlohmann::json::parse(run("eval --m 0.25 --b 0.5 --X 1 --Y 1").out);
  EXPECT_EQ(std::stod(split(two[1])[1]), e1["kappa"].get<double>());
  EXPECT_EQ(std::stod(split(two[2])[1]), e2["kappa"].get<double>());
}

TEST(CliScan, InvalidRange) {
  EXPECT_EQ(run("scan --m 0.25 --b 0.5 --v-lo 2 --v-hi 1 --n 5").code, 2);
  EXPECT_EQ(run("scan --m 0.25 --b 0.5 --v-lo 0 --v-hi 1 --n 5").code, 2);
  EXPECT_EQ(run("scan --m 0.25 --b 0.5 --v-lo 1 --v-hi 2 --n 1").code, 2);
  EXPECT_EQ(run("scan --m 0.25 --b 0 --v-lo 1 --v-hi 2 --n 3").code, 2);
}

TEST(CliGeodesic, BothFormsAtSwitchPoint) {
  const auto r = run("geodesic --m 0.25 --b 0.5 --v 1.2954089487405992707 --both");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  const auto a = nlohmann::json::parse(ls[0]), b = nlohmann::json::parse(ls[1]);
  EXPECT_EQ(a["form"], "blaschke");
  EXPECT_EQ(b["form"], "power");
  EXPECT_NEAR(a["tau"].get<double>(), b["tau"].get<double>(), 1e-8 * b["tau"].get<double>());
}

TEST(CliGeodesic, RecordReparsesToSameTau) {
  const auto r = run("geodesic --m 0.3 --b 0.4 --v 0.7");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = nckob::io::disc_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(d.form, nckob::DiscForm::blaschke);
  EXPECT_NEAR(1.0 / nckob::disc_derivative_at_zero(d).z2.real(), d.tau, 1e-15 * d.tau);
  EXPECT_EQ(nlohmann::json::parse(run("geodesic --m 0.3 --b 0.4 --v 8").out)["form"], "power");
}

TEST(CliGeodesic, FlatDiscTrace) {
  const std::string file = testing::TempDir() + "nckob_trace.csv";
  const auto r = run("geodesic --m 0.25 --b 0.5 --X 1 --Y 0 --trace 32 --trace-file " + file);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 1u);
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "theta,re1,im1,re2,im2,defect");
  int rows = 0;
  for (std::string l; std::getline(in, l); ++rows) {
    const auto f = split(l);
    ASSERT_EQ(f.size(), 6u);
    EXPECT_EQ(std::stod(f[3]), 0.5);
    EXPECT_LE(std::abs(std::stod(f[5])), 4.5e-16);
  }
  EXPECT_EQ(rows, 32);
}

TEST(CliGeodesic, ComplexTangentRotatesFirstComponent) {
  const auto r = run("geodesic --m 0.25 --b 0.5 --X 0,0.3 --Y 1 --trace 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  const auto d = nckob::io::disc_from_json(nlohmann::json::parse(ls[0]));
  const auto dz = nckob::disc_derivative_at_zero(d);
  // Proportional to (0.3 i, 1).
  EXPECT_NEAR(std::abs(dz.z1 / dz.z2 - nckob::cplx(0.0, 0.3)), 0.0, 1e-12);
  EXPECT_EQ(ls[1], "theta,re1,im1,re2,im2,defect");
  EXPECT_EQ(ls.size(), 6u);
}

TEST(CliGeodesic, InfeasibleFormCitesRule) {
  auto r = run("geodesic --m 0.25 --b 0.5 --v 0.5 --form power");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("exists only for v >= 1"), std::string::npos) << r.err;
  r = run("geodesic --m 0.25 --b 0.5 --v 3 --form blaschke");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("v <= vmax"), std::string::npos) << r.err;
  EXPECT_EQ(run("geodesic --m 0.25 --b 0.5 --v 0.5 --both").code, 2);
  EXPECT_EQ(run("geodesic --m 0.25 --b 0.5").code, 2);
}

TEST(CliVerify, QuickPassesDeterministicallyAndPerturbFails) {
  const auto a = run("verify --quick --budget 300");
  ASSERT_EQ(a.code, 0) << a.err;
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 10u);
  EXPECT_EQ(j["kinks"].size(), 9u);
  EXPECT_EQ(j["searches"].size(), 5u);
  EXPECT_NE(a.err.find("PASS  1."), std::string::npos);

  const auto b = run("verify --quick --budget 300 --threads 3");
  EXPECT_EQ(a.out, b.out);

  const auto c = run("verify --quick --budget 300 --perturb");
  EXPECT_EQ(c.code, 1);
  const auto jc = nlohmann::json::parse(c.out);
  EXPECT_FALSE(jc["passed"].get<bool>());
  EXPECT_FALSE(jc["checks"][3]["passed"].get<bool>());
  EXPECT_FALSE(jc["checks"][9]["passed"].get<bool>());
  EXPECT_NE(c.err.find("FAIL"), std::string::npos);
}
