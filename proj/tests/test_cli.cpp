#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = curv4::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(CURV4_DATA_DIR) + "/" + name; }

void expect_error(const Run& r, int code, const std::string& kind) {
  EXPECT_EQ(r.code, code) << r.out;
  const auto j = r.doc();
  EXPECT_EQ(j["error"], kind) << r.out;
  EXPECT_TRUE(j["detail"].is_string());
  EXPECT_FALSE(j["detail"].get<std::string>().empty());
  EXPECT_FALSE(r.err.empty());
}

}  // namespace

TEST(Cli, CatalogCylinder) {
  const auto r = run({"catalog", "s3xr"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.doc();
  EXPECT_EQ(j["format"], "curv4.catalog.v1");
  ASSERT_EQ(j["entries"].size(), 1u);
  const auto& rep = j["entries"][0]["report"];
  EXPECT_EQ(rep["format"], "curv4.report.v1");
  EXPECT_NEAR(rep["wpic_ratio"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(rep["E"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(rep["P"].get<double>(), 0.0, 1e-12);
}

TEST(Cli, CatalogListsAllModels) {
  const auto r = run({"catalog"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.doc()["entries"].size(), 5u);
}

TEST(Cli, EveryVerbEmitsAFormat) {
  const std::vector<std::vector<std::string>> cmds = {
      {"decompose", "--model", "s4"},
      {"invariants", "--in", data("pinched_blocks.json")},
      {"pinch", "--in", data("unit_s3xr_riemann.json")},
      {"flow", "--model", "s3xr", "--t-max", "0.05"},
      {"extremal", "--grid", "200"},
      {"catalog", "cp2"},
      {"sweep", "--samples", "500", "--refine-top", "4"},
      {"sweep", "--cone", "pic", "--samples", "200"},
      {"sweep", "--cone", "nonneg", "--samples", "200"},
      {"identities", "--samples", "20"}};
  for (const auto& c : cmds) {
    const auto r = run(c);
    ASSERT_EQ(r.code, 0) << c[0] << ": " << r.out;
    const auto j = r.doc();
    ASSERT_TRUE(j.contains("format")) << c[0];
    EXPECT_EQ(j["format"].get<std::string>().rfind("curv4.", 0), 0u);
  }
}

TEST(Cli, RiemannInputDecomposes) {
  const auto j = run({"decompose", "--in", data("unit_s3xr_riemann.json")}).doc();
  const auto& A = j["blocks"]["A"];
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(A[i][i].get<double>(), 0.5, 1e-15);
  std::vector<double> lam = j["spectral"]["lambda"];
  std::sort(lam.begin(), lam.end());
  EXPECT_NEAR(lam[0], -1.5, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(lam[k], 0.5, 1e-14);
}

TEST(Cli, InvariantsRoutesAgree) {
  const auto j = run({"invariants", "--in", data("pinched_blocks.json")}).doc();
  const double a = j["P_direct"], b = j["P_expansion"];
  EXPECT_NEAR(a, b, 1e-9 * (1.0 + std::abs(a)));
}

TEST(Cli, PinchOutputParsesAsReport) {
  const auto r = run({"pinch", "--model", "s2xs2"});
  ASSERT_EQ(r.code, 0);
  const auto rep = curv4::io::report_from_json(r.doc());
  EXPECT_FALSE(rep.pic);
  EXPECT_FALSE(rep.E);
}

TEST(Cli, FlowCsvFollowsSphereRay) {
  const auto path = (std::filesystem::temp_directory_path() / "curv4_cli_flow.csv").string();
  const auto r = run({"flow", "--model", "s4", "--t-max", "0.3", "--dt", "1e-4", "--csv", path});
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "t,S,A1,A2,A3,C1,C2,C3,B1,B2,B3,wpic_ratio,E,P,rA,rC,rB");
  std::size_t rows = 0;
  double last_t = -1.0;
  while (std::getline(f, line)) {
    ++rows;
    const auto c = line.find(',');
    const double t = std::stod(line.substr(0, c)), S = std::stod(line.substr(c + 1));
    EXPECT_NEAR(S, 12.0 / (1.0 - 3.0 * t), 1e-5 * S) << line;
    EXPECT_GT(t, last_t);
    last_t = t;
  }
  EXPECT_EQ(rows, r.doc()["samples"].get<std::size_t>());
  EXPECT_DOUBLE_EQ(last_t, 0.3);
  std::filesystem::remove(path);
}

TEST(Cli, FlowBlowUpReported) {
  const auto j = run({"flow", "--model", "s4", "--t-max", "1", "--blowup", "1000"}).doc();
  ASSERT_TRUE(j["blowup_time"].is_number());
  EXPECT_NEAR(j["blowup_time"].get<double>(), 1.0 / 3.0, 1e-3);
}

TEST(Cli, ExtremalValues) {
  const auto j = run({"extremal"}).doc();
  EXPECT_NEAR(j["cubic_max"]["value"].get<double>(), 1.0 / std::sqrt(6.0), 1e-6);
  EXPECT_EQ(j["square_max"]["value"].get<double>(), 6.0);
}

TEST(Cli, MalformedInputIsInvalid) { expect_error(run({"pinch", "--in", data("malformed.json")}), 2, "invalid-input"); }

TEST(Cli, TraceMismatchIsInvalid) {
  expect_error(run({"invariants", "--in", data("trace_mismatch.json")}), 2, "invalid-input");
}

TEST(Cli, MissingFileIsInvalid) { expect_error(run({"pinch", "--in", data("nope.json")}), 2, "invalid-input"); }

TEST(Cli, UnknownModelIsNotFound) { expect_error(run({"pinch", "--model", "rp4"}), 2, "not-found"); }

TEST(Cli, SourceMustBeUnique) {
  expect_error(run({"pinch", "--model", "s4", "--in", data("s3xr_blocks.json")}), 2, "invalid-input");
  expect_error(run({"pinch"}), 2, "invalid-input");
}

TEST(Cli, ParseErrorsAreInvalid) {
  expect_error(run({"pinch", "--model", "s4", "--bogus"}), 2, "invalid-input");
  expect_error(run({}), 2, "invalid-input");
  expect_error(run({"frobnicate"}), 2, "invalid-input");
  expect_error(run({"sweep", "--samples", "many"}), 2, "invalid-input");
  expect_error(run({"sweep", "--cone", "round"}), 2, "invalid-input");
}

TEST(Cli, DomainErrorExitsThree) { expect_error(run({"extremal", "--S", "-1"}), 3, "domain-error"); }

TEST(Cli, ExtremalRejectsCoarseGrid) { expect_error(run({"extremal", "--grid", "10"}), 2, "invalid-input"); }

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, SweepIsWorkerIndependent) {
  for (const char* cone : {"prop22", "pic", "nonneg"}) {
    const auto one = run({"sweep", "--cone", cone, "--samples", "3000", "--seed", "17", "--workers", "1"});
    const auto four = run({"sweep", "--cone", cone, "--samples", "3000", "--seed", "17", "--workers", "4"});
    ASSERT_EQ(one.code, 0) << one.out;
    EXPECT_EQ(one.out, four.out) << cone;
  }
}

TEST(Cli, SweepSeedMatters) {
  const auto a = run({"sweep", "--samples", "500", "--seed", "1"});
  const auto b = run({"sweep", "--samples", "500", "--seed", "2"});
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, IdentitiesIsWorkerIndependent) {
  const auto one = run({"identities", "--samples", "500", "--seed", "5", "--workers", "1"});
  const auto four = run({"identities", "--samples", "500", "--seed", "5", "--workers", "4"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, IdentitiesSingleSample) {
  const auto j = run({"identities", "--samples", "1"}).doc();
  EXPECT_EQ(j["samples"], 1);
  for (const char* k : {"sigma_tilde", "lambda_cubed", "route_equivalence", "gradient"}) {
    ASSERT_TRUE(j["worst"][k].is_number()) << k;
    EXPECT_LE(j["worst"][k].get<double>(), 1e-9) << k;
  }
}

TEST(Cli, IdentitiesRejectsZeroSamples) {
  expect_error(run({"identities", "--samples", "0"}), 2, "invalid-input");
}
