#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cgoforge_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" CGOFORGE_CLI "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// {subcommand}.json plus tables, excluding the wall-time sidecar.
std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string n = e.path().filename().string();
    if (n.find(".timing.") == std::string::npos) out[n] = read(e.path());
  }
  return out;
}

const std::string kSmall = "[grid]\npoints = 16\n\n[frame]\ntau = 8, 16, 32\n";

fs::path config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  write(p, text);
  return p;
}

nlohmann::json report(const fs::path& p) { return nlohmann::json::parse(read(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("missing config file exits with the I/O code") {
    const fs::path d = scratch("missing");
    CHECK(run("transport --config " + (d / "nope.cfg").string() + " --out " + d.string()) == 4);
  }

  TEST_CASE("usage and config errors exit 2") {
    const fs::path d = scratch("usage");
    CHECK(run("transport") == 2);
    CHECK(run("frobnicate --config x") == 2);
    CHECK(run("cgo --config " + config(d, kSmall + "[expansion]\norder = 3\nmax_order = 2\n").string()) == 2);
    CHECK(run("elastic-h --config " + config(d, kSmall + "[elastic]\ntau = 8, 16, 32\n").string()) == 2);
    CHECK(run("identity --config " + config(d, kSmall + "[identity]\ntheta_samples = 4\n").string()) == 2);
    CHECK(run("transport --config " + config(d, "[grid]\npoints = 16\n[frame]\ntau = 8\nbogus = 1\n").string()) == 2);
    CHECK(fs::is_empty(d) == false);
    CHECK(!fs::exists(d / "out"));  // nothing computed or written
  }

  TEST_CASE("zero potential: transport residual rows are exactly 0") {
    const fs::path d = scratch("zero");
    const fs::path cfg = config(d, kSmall + "[potential]\nfamily = zero\n");
    REQUIRE(run("transport --config " + cfg.string() + " --out " + (d / "out").string()) == 0);
    const auto j = report(d / "out" / "transport.json");
    CHECK(j["passed"] == true);
    const auto& rows = j["tables"][0]["rows"];
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
      CHECK(r["residual_norm"] == 0.0);
      CHECK(r["residual_rel"] == 0.0);
    }
    const std::string csv = read(d / "out" / "transport_cases.csv");
    CHECK(csv.rfind("case,method,iterations,residual_norm,residual_rel,residual_fd,min_abs_det,phase_deviation\n", 0) ==
          0);
    CHECK(csv.find('\r') == std::string::npos);
  }

  TEST_CASE("cgo: free l = 0 sweep is exact and the bump sweep passes its slopes") {
    const fs::path d = scratch("cgo");
    const fs::path cfg = config(d, kSmall + "[expansion]\norder = 1\n");
    CHECK(run("cgo --config " + cfg.string() + " --out " + (d / "out").string()) == 0);
    const auto j = report(d / "out" / "cgo.json");
    bool free_seen = false;
    for (const auto& c : j["checks"])
      if (c["name"] == "cgo.free_case_exact") {
        free_seen = true;
        CHECK(c["value"].get<double>() <= 1e-10);
        CHECK(c["pass"] == true);
      }
    CHECK(free_seen);
    for (const auto& r : j["tables"][0]["rows"])
      if (r["case"] == "free") CHECK(r["residual"].get<double>() <= 1e-10);
  }

  TEST_CASE("dtn-gauge: the identity gauge gives distance 0") {
    const fs::path d = scratch("gauge");
    const fs::path cfg =
        config(d, kSmall + "[gauge]\nphase = 0\ncontrol_phase = 1.5*gaussian(1, 2, 2, 0.35)\ncells = 4, 6\nfine_points = 24\n");
    run("dtn-gauge --config " + cfg.string() + " --out " + (d / "out").string());
    const auto j = report(d / "out" / "dtn-gauge.json");
    bool seen = false;
    for (const auto& c : j["checks"])
      if (c["name"] == "gauge.identity_distance") {
        seen = true;
        CHECK(c["value"].get<double>() <= 1e-14);  // round-off of the B <-> V conversion
      }
    CHECK(seen);
  }

  TEST_CASE("identity: equal pairs have zero gap") {
    const fs::path d = scratch("identity_equal");
    const fs::path cfg = config(d, kSmall + "[lame]\nbump_lambda = 0\nbump_mu = 0\n");
    CHECK(run("identity --config " + cfg.string() + " --out " + (d / "out").string()) == 0);
    const auto j = report(d / "out" / "identity.json");
    CHECK(j["checks"][0]["name"] == "identity.equal_pairs_gap");
    CHECK(j["checks"][0]["value"].get<double>() <= 1e-10);
  }

  TEST_CASE("report: empty directory and mixed pass/fail") {
    const fs::path empty = scratch("report_empty");
    CHECK(run("report " + empty.string()) == 0);
    const auto s = report(empty / "summary.json");
    CHECK(s["reports"].empty());
    CHECK(s["passed"] == true);
    CHECK(read(empty / "summary.csv") == "file,subcommand,config_hash,check,pass,value,relation,threshold,blocking\n");

    const fs::path mixed = scratch("report_mixed");
    write(mixed / "a.json",
          R"({"subcommand":"a","config_hash":"1","checks":[{"name":"x","pass":true,"value":1,"relation":"<=","threshold":2,"blocking":true}]})");
    write(mixed / "b.json",
          R"({"subcommand":"b","config_hash":"2","checks":[{"name":"y","pass":false,"value":3,"relation":"<=","threshold":2,"blocking":true}]})");
    write(mixed / "b.timing.json", R"({"wall_seconds": 1})");
    CHECK(run("report " + mixed.string()) == 1);
    const auto m = report(mixed / "summary.json");
    CHECK(m["passed"] == false);
    CHECK(m["reports"].size() == 2);
    CHECK(m["reports"][0]["passed"] == true);
    CHECK(m["reports"][1]["failed"] == 1);

    // A failing non-blocking check does not fail the summary.
    const fs::path soft = scratch("report_soft");
    write(soft / "a.json",
          R"({"subcommand":"a","checks":[{"name":"x","pass":false,"value":1,"relation":"<=","threshold":0,"blocking":false}]})");
    CHECK(run("report " + soft.string()) == 0);
    CHECK(run("report " + (soft / "missing").string()) == 4);
    write(soft / "c.json", "{not json");
    CHECK(run("report " + soft.string()) == 4);
  }

  TEST_CASE("reports are byte-identical for a fixed config and seed") {
    const fs::path d = scratch("determinism");
    const fs::path cfg = config(d, kSmall + "[identity]\ntheta_samples = 7\ncheck_samples = 3\n");
    for (const char* sub : {"identity", "transport", "cgo"}) {
      CAPTURE(sub);
      REQUIRE(run(std::string(sub) + " --config " + cfg.string() + " --out " + (d / "a").string()) == 0);
      REQUIRE(run(std::string(sub) + " --config " + cfg.string() + " --out " + (d / "b").string() + " --jobs 3") == 0);
    }
    REQUIRE(run("report " + (d / "a").string()) == 0);
    REQUIRE(run("report " + (d / "b").string()) == 0);
    const auto a = outputs(d / "a"), b = outputs(d / "b");
    CHECK(a.size() >= 8);
    CHECK(a == b);
    CHECK(fs::exists(d / "a" / "identity.timing.json"));

    // The seed changes the random theta samples but not the config hash.
    REQUIRE(run("identity --config " + cfg.string() + " --out " + (d / "c").string() + " --seed 7") == 0);
    const auto ja = report(d / "a" / "identity.json"), jc = report(d / "c" / "identity.json");
    CHECK(ja["config_hash"] == jc["config_hash"]);
    CHECK(jc["seed"] == 7);
    CHECK(read(d / "a" / "identity_thetas.csv") != read(d / "c" / "identity_thetas.csv"));
  }

  TEST_CASE("CGO_FORGE_OUT overrides --out") {
    const fs::path d = scratch("env");
    const fs::path cfg = config(d, kSmall);
    REQUIRE(run("identity --config " + cfg.string() + " --out " + (d / "flag").string(),
                "CGO_FORGE_OUT=" + (d / "env").string()) == 0);
    CHECK(fs::exists(d / "env" / "identity.json"));
    CHECK(!fs::exists(d / "flag"));
  }
}
