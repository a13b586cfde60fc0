#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgoforge/config.hpp"
#include "cgoforge/report.hpp"
#include "doctest.h"

using namespace cgoforge;

namespace {

const std::string kMinimal = "[grid]\npoints = 16\n\n[frame]\ntau = 8, 16\n";

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Key named by the diagnostic for `text`, or "" when it loads.
std::string rejected_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal config loads with defaults applied") {
    const ExperimentConfig c = parse_config(kMinimal);
    CHECK(c.grid.points == 16);
    CHECK(c.grid.period == 4.0);
    CHECK(c.frame.tau == std::vector<double>{8, 16});
    CHECK(c.frame.l == RVec::Unit(3, 2));
    CHECK(c.potential.family == PotentialFamily::GaussianYangMills);
    CHECK(c.expansion.p == std::vector<std::vector<double>>{{1.0}, {0.5}});
    CHECK(c.gauge.phase.text() == "1.5*gaussian(2, 2, 2, 0.25)");
    CHECK(c.elastic.tau.size() == 7);
    CHECK(c.output_dir == "out");
    ExperimentConfig d;
    d.grid.points = 16;
    d.frame.tau = {8, 16};
    CHECK(dump_config(c) == dump_config(d));
    CHECK(config_hash(c) == config_hash(d));
  }

  TEST_CASE("tau at or below |l|/2 is rejected naming frame.tau") {
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\nl = 0, 0, 20\ntau = 8, 10\n") == "frame.tau");
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\nl = 0, 0, 16\ntau = 8\n") == "frame.tau");
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\nl = 0, 0, 15.9\ntau = 8\n") == "");
    try {
      parse_config("[grid]\npoints = 16\n[frame]\nl = 0, 0, 20\ntau = 8\n");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("frame.tau") != std::string::npos);
    }
  }

  TEST_CASE("every diagnostic names the offending key") {
    CHECK(rejected_key("[frame]\ntau = 8\n") == "grid.points");  // missing required key
    CHECK(rejected_key("[grid]\npoints = 16\n") == "frame.tau");
    CHECK(rejected_key(kMinimal + "[grid2]\n") == "[grid2]");
    CHECK(rejected_key(kMinimal + "[output]\ndirr = x\n") == "output.dirr");
    CHECK(rejected_key("[grid]\npoints = 16\npoints = 16\n[frame]\ntau = 8\n") == "grid.points");
    CHECK(rejected_key("[grid]\npoints = sixteen\n[frame]\ntau = 8\n") == "grid.points");
    CHECK(rejected_key("[grid]\npoints = 16.5\n[frame]\ntau = 8\n") == "grid.points");
    CHECK(rejected_key(kMinimal + "[expansion]\ncorrector = yes\n") == "expansion.corrector");
    CHECK(rejected_key(kMinimal + "[domain]\nlo = 1, 2\n") == "domain.lo");
    CHECK(rejected_key(kMinimal + "[lame]\nmu1 = 1 + \n") == "lame.mu1");
    CHECK(rejected_key(kMinimal + "[lame]\nmu1 = -1\n") == "lame.mu1");
    CHECK(rejected_key(kMinimal + "[frame]\n") == "[frame]");  // duplicate section
    CHECK(rejected_key(kMinimal + "[expansion]\norder = 7\n") == "expansion.order");
    CHECK(rejected_key(kMinimal + "[elastic]\ntau = 8, 16, 32, 64\n") == "elastic.tau");
    CHECK(rejected_key(kMinimal + "[identity]\ntheta_samples = 4\n") == "identity.theta_samples");
    CHECK(rejected_key(kMinimal + "[frame]\nnu = 1, 0, 0\n") == "[frame]");
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\ntau = 8\nnu = 1, 0, 0\n") == "frame.nu");
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\ntau = 8\nl = 1, 0, 0\n") == "frame.l");
    CHECK(rejected_key("[grid]\npoints = 16\n[frame]\ntau = 16, 8\n") == "frame.tau");
    CHECK(rejected_key(kMinimal + "[potential]\nfamily = cubic\n") == "potential.family");
    CHECK(rejected_key(kMinimal + "[potential]\nm = 3\n") == "potential.m");
    CHECK(rejected_key(kMinimal + "[gauge]\nhermitian = 1, 2; 3, 4\n") == "gauge.hermitian");
    CHECK(rejected_key(kMinimal + "[gauge]\ncells = 24, 16\n") == "gauge.cells");
    CHECK(rejected_key("points = 16\n") == "points");

    try {
      parse_config(kMinimal + "\n[expansion]\norder = two\n");
      FAIL("accepted");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 8);
      CHECK(std::string(e.what()).find("line 8: expansion.order") == 0);
    }
  }

  TEST_CASE("syntax: comments, whitespace, CRLF and canonical values") {
    const ExperimentConfig c = parse_config(
        "# leading comment\r\n[grid]\r\n  points=16   \r\n\t# indented comment\n[frame]\ntau = +8,16.0\n"
        "[lame]\nfamily = expression\nmu2 = 1+0.2*gaussian(2,2,2,0.5)\n[expansion]\np = 1, 2 ;0.5\n");
    CHECK(c.frame.tau == std::vector<double>{8, 16});
    CHECK(c.lame.mu2.text() == "1 + 0.2*gaussian(2, 2, 2, 0.5)");
    const std::string dump = dump_config(c);
    CHECK(dump.find("tau = 8, 16\n") != std::string::npos);
    CHECK(dump.find("p = 1, 2; 0.5\n") != std::string::npos);
    CHECK(dump.find("mu2 = 1 + 0.2*gaussian(2, 2, 2, 0.5)\n") != std::string::npos);
    CHECK(dump.find('\r') == std::string::npos);
    CHECK(dump.find("\n\n\n") == std::string::npos);
    CHECK(dump.back() == '\n');
  }

  TEST_CASE("golden configs round-trip to an identical normal form") {
    const std::filesystem::path src(CGOFORGE_SOURCE_DIR);
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(src / "configs")) {
      if (entry.path().extension() != ".cfg") continue;
      ++seen;
      CAPTURE(entry.path().string());
      const ExperimentConfig a = load_config(entry.path().string());
      const std::string n1 = dump_config(a);
      const ExperimentConfig b = parse_config(n1);
      CHECK(dump_config(b) == n1);
      CHECK(config_hash(a) == config_hash(b));
      // Normal forms are pinned so silent schema or formatting changes are caught.
      const auto golden = src / "tests" / "golden" / (entry.path().stem().string() + ".normal.cfg");
      REQUIRE(std::filesystem::exists(golden));
      CHECK(read(golden) == n1);
    }
    CHECK(seen >= 5);
  }

  TEST_CASE("the annotated example lists exactly the defaults") {
    const auto path = std::filesystem::path(CGOFORGE_SOURCE_DIR) / "docs" / "example.cfg";
    ExperimentConfig d;
    d.grid.points = 32;
    d.frame.tau = {8, 16, 32, 64};
    CHECK(dump_config(load_config(path.string())) == dump_config(d));
  }

  TEST_CASE("hash: FNV-1a reference values and sensitivity") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    ExperimentConfig a = parse_config(kMinimal), b = a;
    b.frame.tau[1] = 16.000000000000004;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
  }

  TEST_CASE("load_config: missing file is an I/O error") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/missing.cfg"), IoError);
  }

  TEST_CASE("report tables: CSV dialect and JSON") {
    Table t("demo", {"name", "n", "value", "z", "ok"});
    t.add({std::string("a,b"), 3LL, 0.1, std::complex<double>(1.5, -2.0), true});
    t.add({std::string("plain"), -1LL, 1e-300, std::complex<double>(0.0, 0.0), false});
    CHECK_THROWS_AS(t.add({1.0}), InputError);
    CHECK(t.csv() == "name,n,value,z_re,z_im,ok\n\"a,b\",3,0.1,1.5,-2,true\nplain,-1,1e-300,0,0,false\n");
    const auto j = t.json();
    CHECK(j["rows"][0]["z"]["im"] == -2.0);
    CHECK(j["rows"][1]["value"] == 1e-300);

    RunReport r;
    r.subcommand = "demo";
    r.check("a", true, 1.0, "<=", 2.0);
    r.check("b", false, 3.0, "<=", 2.0, false);
    CHECK(r.passed());
    r.check("c", false, NAN, "<=", 2.0);
    CHECK(!r.passed());
    CHECK(r.json()["checks"][2]["value"] == "nan");
    CHECK(r.json()["version"] == artifact_version());
  }
}
