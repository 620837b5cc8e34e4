#include "ktangle/cli.hpp"

#include "ktangle/classify.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ktangle;
using namespace ktangle::cli;

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("no column " + name);
  }

  double value(std::size_t row, const std::string& name) const {
    return std::stod(rows[row][column(name)]);
  }
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (first) {
      table.header = fields;
      first = false;
    } else if (!fields.empty()) {
      table.rows.push_back(fields);
    }
  }
  return table;
}

std::string sweep_to_string(const SweepConfig& cfg) {
  std::ostringstream out;
  run_sweep(cfg, out);
  return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == std::complex<double>(1.0, 0.0));
  CHECK(parse_complex("-0.5") == std::complex<double>(-0.5, 0.0));
  CHECK(parse_complex("0.5-0.5j") == std::complex<double>(0.5, -0.5));
  CHECK(parse_complex("2+3j") == std::complex<double>(2.0, 3.0));
  CHECK(parse_complex("1j") == std::complex<double>(0.0, 1.0));
  CHECK(parse_complex("-j") == std::complex<double>(0.0, -1.0));
  CHECK(parse_complex(" 1e-3 + 2e-4j ") == std::complex<double>(1e-3, 2e-4));
  CHECK(parse_complex("1E2j") == std::complex<double>(0.0, 100.0));
  CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("1+2"), std::invalid_argument);
}

TEST_CASE("grid parsing") {
  const Grid fixed = parse_grid("0.4");
  CHECK(fixed.count == 1);
  CHECK(fixed.at(0) == 0.4);
  const Grid swept = parse_grid("0:1:5");
  CHECK(swept.count == 5);
  CHECK(swept.at(0) == 0.0);
  CHECK(swept.at(4) == 1.0);
  CHECK(swept.at(2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:1:0"), std::invalid_argument);
}

TEST_CASE("channel construction") {
  CHECK(channel_from_name("ad") == ChannelKind::AmplitudeDamping);
  CHECK(channel_from_name("phase-flip") == ChannelKind::PhaseFlip);
  CHECK_THROWS_AS(channel_from_name("bogus"), std::invalid_argument);

  ChannelSpec custom;
  custom.kind = ChannelKind::Custom;
  custom.k0 = parse_mat2("1,0,0,0.70710678118654752");
  custom.k1 = parse_mat2("0,0,0,0.70710678118654752");
  const auto kp = make_channel(custom, 0.0);
  CHECK(std::abs(kraus_v(kp) - std::complex<double>(0.5)) < 1e-12);

  ChannelSpec broken;
  broken.kind = ChannelKind::Custom;
  broken.k0 = parse_mat2("1,0,0,1");
  broken.k1 = parse_mat2("0,1,0,0");
  CHECK_THROWS_WITH_AS(make_channel(broken, 0.0),
                       doctest::Contains("completeness"),
                       std::invalid_argument);
}

TEST_CASE("classification report for the published points") {
  ClassifyConfig cfg;
  cfg.channel.kind = ChannelKind::AmplitudeDamping;
  cfg.p = 0.5;
  cfg.rho_ee = 0.5;
  cfg.e0sq = 0.4;
  std::ostringstream out;
  CHECK(cmd_classify(cfg, out) == 0);
  const std::string text = out.str();
  CHECK(text.find("family: W_GENUINE") != std::string::npos);
  CHECK(text.find("tau      = 0") != std::string::npos);
  CHECK(text.find("c2_sps   = 0.2") != std::string::npos);

  // dephasing at p = 1 with zero coherence: everything becomes 3-tangle
  ClassifyConfig ghz_cfg;
  ghz_cfg.channel.kind = ChannelKind::Dephasing;
  ghz_cfg.p = 1.0;
  ghz_cfg.e0sq = 0.4;
  ghz_cfg.rho_ee = (1.0 - std::sqrt(0.6)) / 2.0;
  std::ostringstream ghz_out;
  CHECK(cmd_classify(ghz_cfg, ghz_out) == 0);
  const std::string ghz_text = ghz_out.str();
  CHECK(ghz_text.find("family: GHZ") != std::string::npos);
  CHECK(ghz_text.find("tau      = 0.4") != std::string::npos);
  CHECK(ghz_text.find("c2_sps   = 0") != std::string::npos);

  ClassifyConfig bad = cfg;
  bad.rho_ee = 0.01;  // infeasible for e0sq = 0.4
  std::ostringstream sink;
  CHECK_THROWS_WITH_AS(cmd_classify(bad, sink),
                       doctest::Contains("rho_ee must lie in"),
                       std::domain_error);
}

TEST_CASE("sweep emits the documented grid in deterministic order") {
  SweepConfig cfg;
  cfg.channel.kind = ChannelKind::AmplitudeDamping;
  cfg.p = {0.0, 1.0, 3};
  cfg.rho_ee = {0.3, 0.7, 2};
  cfg.e0sq = fixed_grid(0.4);
  const std::string text = sweep_to_string(cfg);
  const CsvTable table = parse_csv(text);
  CHECK(table.header.size() == 16);
  CHECK(table.header[0] == "p");
  CHECK(table.header[15] == "tier");
  REQUIRE(table.rows.size() == 6);
  CHECK(table.value(0, "p") == 0.0);
  CHECK(table.value(1, "p") == 0.0);
  CHECK(table.value(2, "p") == 0.5);
  CHECK(table.value(0, "rho_ee") == 0.3);
  CHECK(table.value(1, "rho_ee") == 0.7);
  // the closed forms behind the columns
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double p = table.value(r, "p");
    const double rho = table.value(r, "rho_ee");
    CHECK(table.value(r, "c2_sps") == doctest::Approx(0.4 * (1 - p)).epsilon(1e-12));
    CHECK(table.value(r, "c2_se") ==
          doctest::Approx(4 * rho * rho * p * (1 - p)).epsilon(1e-12));
  }
  CHECK(table.rows[0][table.column("family")] == "BISEP_E");
  CHECK(table.rows[2][table.column("family")] == "W_GENUINE");
}

TEST_CASE("empty grids are usage errors") {
  SweepConfig cfg;
  cfg.p.count = 0;
  std::ostringstream sink;
  CHECK_THROWS_AS(run_sweep(cfg, sink), std::invalid_argument);
}

TEST_CASE("sweep skips infeasible combinations and reports them") {
  SweepConfig cfg;
  cfg.channel.kind = ChannelKind::Dephasing;
  cfg.p = fixed_grid(0.5);
  cfg.rho_ee = {0.05, 0.5, 2};  // 0.05 cannot carry e0sq = 0.4
  cfg.e0sq = fixed_grid(0.4);
  std::ostringstream out;
  const SweepStats stats = run_sweep(cfg, out);
  CHECK(stats.rows == 1);
  CHECK(stats.skipped == 1);
}

TEST_CASE("figure presets reproduce the published surfaces") {
  // 1-3 amplitude damping, 4-6 dephasing, 7-9 phase flip
  for (int figure = 1; figure <= 9; ++figure) {
    const SweepConfig cfg = figure_preset(figure, 6);
    const CsvTable table = parse_csv(sweep_to_string(cfg));
    REQUIRE(table.rows.size() == 36);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double p = table.value(r, "p");
      const double rho = table.value(r, "rho_ee");
      const double e0 = table.value(r, "e0sq");
      const double tau = table.value(r, "tau");
      if (figure % 3 != 0) {
        CHECK(e0 == 0.4);
      } else {
        CHECK(rho == 0.5);
      }
      switch ((figure - 1) / 3) {
        case 0: {  // amplitude damping
          CHECK(tau == 0.0);
          const double g = 4 * rho * rho * p * (1 - p);
          CHECK(table.value(r, "c2_e_ssp") ==
                doctest::Approx(e0 * p + g).epsilon(1e-12));
          CHECK(table.value(r, "c2_s_spe") ==
                doctest::Approx(e0 * (1 - p) + g).epsilon(1e-12));
          break;
        }
        case 1: {  // dephasing
          CHECK(tau == doctest::Approx(e0 * p).epsilon(1e-12));
          CHECK(table.value(r, "c2_e_ssp") ==
                doctest::Approx(4 * rho * (1 - rho) * p).epsilon(1e-12));
          CHECK(std::abs(table.value(r, "c2_spe")) < 1e-12);
          break;
        }
        case 2: {  // phase flip
          CHECK(tau == doctest::Approx(e0 * p * (2 - p)).epsilon(1e-12));
          CHECK(table.value(r, "c2_sps") ==
                doctest::Approx(e0 * (1 - p) * (1 - p)).epsilon(1e-12));
          break;
        }
      }
    }
  }
  CHECK_THROWS_AS(figure_preset(10), std::invalid_argument);
}

TEST_CASE("sweep output is byte-identical across runs") {
  const SweepConfig cfg = figure_preset(1, 10);
  CHECK(sweep_to_string(cfg) == sweep_to_string(cfg));
}

TEST_CASE("verify passes at default thresholds and is deterministic") {
  VerifyConfig cfg;
  cfg.n = 40;
  cfg.seed = 7;
  std::ostringstream a, b;
  CHECK(cmd_verify(cfg, a) == 0);
  CHECK(cmd_verify(cfg, b) == 0);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("result: PASS") != std::string::npos);
}

TEST_CASE("verify fails under an impossible tolerance") {
  VerifyConfig cfg;
  cfg.n = 10;
  cfg.seed = 0;
  cfg.tol = 1e-15;
  std::ostringstream out;
  CHECK(cmd_verify(cfg, out) == 1);
  CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("json config round trip with override semantics") {
  const std::string path = "ktangle_test_config.json";
  {
    std::ofstream file(path);
    file << R"({"channel": "phase-flip", "p": "0:1:7", "rho_ee": 0.5,
                "e0sq": {"start": 0.1, "stop": 0.9, "count": 3},
                "phi": 0.25, "out": "from_file.csv"})";
  }
  SweepConfig cfg;
  apply_json(path, cfg);
  CHECK(cfg.channel.kind == ChannelKind::PhaseFlip);
  CHECK(cfg.p.count == 7);
  CHECK(cfg.e0sq.count == 3);
  CHECK(cfg.phi == 0.25);
  CHECK(cfg.out == "from_file.csv");
  // flags override by being applied after the file
  cfg.p = parse_grid("0.5");
  CHECK(cfg.p.count == 1);

  {
    std::ofstream file(path);
    file << R"({"figure": 4, "grid": 5})";
  }
  SweepConfig preset_cfg;
  apply_json(path, preset_cfg);
  CHECK(preset_cfg.channel.kind == ChannelKind::Dephasing);
  CHECK(preset_cfg.p.count == 5);

  {
    std::ofstream file(path);
    file << R"({"n": 17, "seed": 99, "tol": 1e-7})";
  }
  VerifyConfig vf;
  apply_json(path, vf);
  CHECK(vf.n == 17);
  CHECK(vf.seed == 99);
  CHECK(vf.tol == 1e-7);

  std::remove(path.c_str());
  CHECK_THROWS_AS(apply_json("does_not_exist.json", vf),
                  std::invalid_argument);
}

}  // TEST_SUITE
