#include "dsrig/cli/commands.hpp"
#include "dsrig/cli/config.hpp"
#include "dsrig/cli/report.hpp"
#include "dsrig/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dsrig;
using namespace dsrig::cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dsrig");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(DSRIG_CONFIG_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dsrig_test_" + name);
}

}  // namespace

TEST(ParseMatrix, Forms) {
  EXPECT_EQ(parse_matrix("identity 3").matrix(), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(parse_matrix("zero 2").matrix(), Eigen::MatrixXd::Zero(2, 2));
  EXPECT_EQ(parse_matrix("diag 1 -2").matrix()(1, 1), -2.0);
  const SymOperator m = parse_matrix("1 0.5; 0.5 2");
  EXPECT_EQ(m(0, 1), 0.5);
  EXPECT_EQ(m(1, 1), 2.0);
  EXPECT_THROW(parse_matrix("1 2; 3"), ParseError);
  EXPECT_THROW(parse_matrix("banana"), ParseError);
  EXPECT_THROW(parse_matrix("1 2; 3 4"), InvalidOperator);
}

TEST(Config, ParsesSectionsAndDefaults) {
  const ExperimentConfig c = parse_config(
      "[surface]\nkind = harmonic_sum\nrho0 = 0.7\nterms = 0.03 2 1; -0.02 3 -2\n"
      "[quadrature]\nn_theta = 32\nn_phi = 64\n[tolerances]\nnewton = 1e-5\n[suite]\nchecks = normal, frame\nseed = 7\n");
  ASSERT_TRUE(c.surface.has_value());
  EXPECT_EQ(c.surface->descriptor.terms.size(), 2u);
  EXPECT_EQ(c.surface->descriptor.terms[1].m, -2);
  EXPECT_EQ(c.n_theta, 32);
  EXPECT_EQ(c.tolerances.get("newton"), 1e-5);
  EXPECT_EQ(c.tolerances.get("identity"), 1e-6);
  EXPECT_TRUE(c.selected("frame"));
  EXPECT_FALSE(c.selected("newton"));
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, RejectsUnknownsAndBadValues) {
  EXPECT_THROW(parse_config("[surfce]\nkind = slice\n"), ConfigError);
  EXPECT_THROW(parse_config("[surface]\nkind = slice\nrho = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[tolerances]\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[isometry]\nkind = boost\nrapidity = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[surface]\nkind = slice\nrho0 = 0.5\n[quadrature]\nn_theta = 4\n").require_single_surface(),
               ConfigError);
  EXPECT_THROW(parse_grid("12by4"), ParseError);
  EXPECT_EQ(parse_grid("128x256"), std::make_pair(128, 256));
  EXPECT_THROW(load_config("/nonexistent/dsrig.ini"), ConfigError);
}

TEST(Config, EchoIsStable) {
  const ExperimentConfig a = load_config(config("boosted_perturbed.ini"));
  const ExperimentConfig b = load_config(config("boosted_perturbed.ini"));
  EXPECT_EQ(a.echo(), b.echo());
  EXPECT_FALSE(a.echo().empty());
}

TEST(Report, RecordFormat) {
  RunReport r("geometry");
  r.env("surface", "slice");
  r.check("normal", "unit normal", 1e-12, 1e-10);
  r.info("stated", "stated sign", 0.25);
  r.check("frame", "frame", 1.0, 1e-9, "too big");
  EXPECT_FALSE(r.passed());
  std::ostringstream os;
  r.write_records(os);
  const std::string s = os.str();
  EXPECT_NE(s.find("env command=geometry"), std::string::npos);
  EXPECT_NE(s.find("check name=normal anchor=\"unit normal\" status=pass"), std::string::npos);
  EXPECT_NE(s.find("status=info"), std::string::npos);
  EXPECT_NE(s.find("verdict fail"), std::string::npos);
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Commands, ExitCodes) {
  EXPECT_EQ(invoke({"geometry", "--config", config("slice.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"geometry", "--config", config("perturbed_slice.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"geometry", "--config", config("harmonic_sum.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"geometry", "--config", config("sampled.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"geometry", "--config", config("equator.ini")}).code, kExitInvalid);
  EXPECT_EQ(invoke({"geometry", "--config", config("nonspacelike.ini")}).code, kExitInvalid);
  EXPECT_EQ(invoke({"verify-identities", "--config", config("boosted_perturbed.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"verify-identities", "--config", config("identity_pair.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"rigidity", "--config", config("boosted_slice.ini")}).code, kExitPass);
  EXPECT_EQ(invoke({"rigidity", "--config", config("mismatched_pair.ini")}).code, kExitFail);
  EXPECT_EQ(invoke({"rigidity", "--config", config("negative_slice.ini")}).code, kExitInvalid);
  EXPECT_EQ(invoke({"check-cone", "identity 2", "diag 1 2"}).code, kExitPass);
  EXPECT_EQ(invoke({"check-cone", "--random", "200"}).code, kExitPass);
  EXPECT_EQ(invoke({"check-cone", "1 2; 3 4"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"nonsense"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"geometry", "--config", "/nonexistent.ini"}).code, kExitInvalid);
}

TEST(Commands, OverridesApply) {
  // A zero tolerance cannot be met by a finite-difference curvature.
  const Outcome o = invoke({"geometry", "--config", config("perturbed_slice.ini"), "--tol", "sigma2_curvature=1e-300"});
  EXPECT_EQ(o.code, kExitFail);
  EXPECT_EQ(invoke({"geometry", "--config", config("slice.ini"), "--tol", "nope=1"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"geometry", "--config", config("slice.ini"), "--tol", "normal=0"}).code, kExitInvalid);
  EXPECT_EQ(invoke({"verify-identities", "--config", config("boosted_slice.ini"), "--quad", "16x32"}).code, kExitPass);
  EXPECT_EQ(invoke({"verify-identities", "--config", config("boosted_slice.ini"), "--quad", "4x8"}).code, kExitInvalid);
}

TEST(Commands, ErrorsAreNamed) {
  const Outcome o = invoke({"geometry", "--config", config("nonspacelike.ini")});
  EXPECT_NE(o.err.find("error: NonSpacelike"), std::string::npos) << o.err;
}

TEST(Commands, ReportsAreByteIdentical) {
  for (const std::string cmd : {"geometry", "rigidity"}) {
    const std::string cfg = cmd == "geometry" ? "perturbed_slice.ini" : "boosted_perturbed.ini";
    const auto p1 = temp_path(cmd + "_1.txt"), p2 = temp_path(cmd + "_2.txt");
    ASSERT_EQ(invoke({cmd, "--config", config(cfg), "--report", p1.string()}).code, kExitPass);
    ASSERT_EQ(invoke({cmd, "--config", config(cfg), "--report", p2.string()}).code, kExitPass);
    const std::string a = slurp(p1);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(p2));
    EXPECT_NE(a.find("verdict pass"), std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
  }
}

TEST(Commands, ErrorRunsStillWriteAReport) {
  const auto p = temp_path("error.txt");
  EXPECT_EQ(invoke({"geometry", "--config", config("equator.ini"), "--report", p.string()}).code, kExitInvalid);
  const std::string s = slurp(p);
  EXPECT_NE(s.find("verdict fail"), std::string::npos) << s;
  std::filesystem::remove(p);
}
