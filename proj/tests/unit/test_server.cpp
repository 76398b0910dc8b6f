#include "doctest.h"

#include "fseval/cli.hpp"
#include "fseval/csv.hpp"
#include "support/bundle.hpp"
#include "support/check.hpp"
#include "support/http.hpp"
#include "support/tempdir.hpp"

#include <map>
#include <sstream>

using namespace fseval;
using nlohmann::json;
using testsupport::contains;

namespace {

std::map<std::string, std::string> snapshot_files(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) out[e.path().filename()] = csv::read_file(e.path());
  return out;
}

std::string cli_out(std::vector<std::string> args) {
  CliContext ctx;
  std::ostringstream out, err;
  REQUIRE(run_cli(args, ctx, out, err) == 0);
  return out.str();
}

}  // namespace

TEST_CASE("api endpoints") {
  testsupport::TempDir dir("srv");
  const auto res = testsupport::small_bundle();
  write_results(res, dir.path());
  write_timings({{"Random", TimerAxis::features, 500, 100, 0.01, false},
                 {"Random", TimerAxis::instances, 500, 100, 0.02, false}},
                dir.path());
  const auto files_before = snapshot_files(dir.path());

  testsupport::LiveServer live(load_results(dir.path()));
  auto http = live.client();

  auto r = http.Get("/api/manifest");
  REQUIRE(r);
  CHECK(r->status == 200);
  const auto m = json::parse(r->body);
  std::vector<std::string> expected_methods;
  for (const auto& x : res.manifest["methods"]) expected_methods.push_back(x["name"]);
  std::sort(expected_methods.begin(), expected_methods.end());
  CHECK(m["methods"].get<std::vector<std::string>>() == expected_methods);
  CHECK(m["datasets"].size() == 3);
  CHECK(m["experiments"].get<std::vector<std::string>>() == std::vector<std::string>{"100Percent", "10Percent"});
  CHECK(m["metrics"].size() == 5);

  // /api/ranks is byte-identical to `ranks --format json`.
  for (const auto* stat : {"standard", "mars"}) {
    r = http.Get(std::string("/api/ranks?metric=AUC&experiment=10Percent&stat=") + stat + "&exclude=Random");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body == cli_out({"ranks", "--results", dir.path().string(), "--metric", "AUC", "--experiment",
                              "10Percent", "--stat", stat, "--exclude", "Random", "--format", "json"}));
    const auto j = json::parse(r->body);
    CHECK(j["methods"].size() == 2);
    CHECK(j.contains("avg_ranks"));
    CHECK(j.contains("friedman_stat"));
    CHECK(j.contains("cd_value"));
    CHECK(j.contains("cliques"));
  }

  r = http.Get("/api/export/latex?kind=ranks&metric=ACC&experiment=100Percent&stat=mars");
  REQUIRE(r);
  CHECK(r->body == cli_out({"ranks", "--results", dir.path().string(), "--metric", "ACC", "--experiment",
                            "100Percent", "--stat", "mars", "--format", "latex"}));
  r = http.Get("/api/export/latex?kind=fsdem&metric=ACC&experiment=100Percent");
  REQUIRE(r);
  CHECK(r->body == cli_out({"export", "--kind", "fsdem", "--results", dir.path().string(), "--metric", "ACC",
                            "--experiment", "100Percent"}));

  r = http.Get("/api/curves?metric=ACC&experiment=10Percent&dataset=syn0&exclude=Random,Reverse_Variance");
  REQUIRE(r);
  const auto curves = json::parse(r->body);
  REQUIRE(curves["series"].size() == 1);
  CHECK(curves["series"][0]["method"] == "Variance_Baseline");

  r = http.Get("/api/fsdem?experiment=10Percent");
  REQUIRE(r);
  CHECK(json::parse(r->body)["rows"].size() == 45);

  r = http.Get("/api/timings?axis=features");
  REQUIRE(r);
  CHECK(json::parse(r->body)["rows"].size() == 1);

  r = http.Get("/api/download/results");
  REQUIRE(r);
  CHECK(r->body == csv::read_file(dir / "results.csv"));
  r = http.Get("/api/download/timings");
  REQUIRE(r);
  CHECK(r->body == csv::read_file(dir / "timings.csv"));

  r = http.Get("/api/ranks?metric=AUC");
  REQUIRE(r);
  CHECK(r->status == 400);
  r = http.Get("/");
  REQUIRE(r);
  CHECK(r->status == 200);

  // Session imports.
  r = http.Post("/api/import", "garbage,header\n1,2\n", "text/csv");
  REQUIRE(r);
  CHECK(r->status == 400);
  CHECK(json::parse(http.Get("/api/manifest")->body) == m);

  std::string body = std::string(kResultsHeader) + "\n";
  for (int d = 0; d < 3; ++d)
    body += "syn" + std::to_string(d) + ",Newcomer,10Percent,AUC,0.0050,1,0.99,0,1\n";
  body += "syn0,Newcomer,10Percent,AUC,0.0100\n";
  r = http.Post("/api/import", body, "text/csv");
  REQUIRE(r);
  CHECK(r->status == 200);
  const auto imp = json::parse(r->body);
  CHECK(imp["accepted_rows"] == 3);
  CHECK(imp["rejected_rows"].size() == 1);
  CHECK(imp["rejected_rows"][0]["line"] == 5);

  r = http.Get("/api/curves?metric=AUC&experiment=10Percent");
  bool found = false;
  const auto after = json::parse(r->body);
  for (const auto& s : after["series"]) found |= s["method"] == "Newcomer";
  CHECK(found);
  r = http.Get("/api/ranks?metric=AUC&experiment=10Percent&stat=standard");
  const auto ranked = json::parse(r->body)["methods"].get<std::vector<std::string>>();
  CHECK(std::find(ranked.begin(), ranked.end(), "Newcomer") != ranked.end());

  CHECK(snapshot_files(dir.path()) == files_before);
}

TEST_CASE("port in use") {
  testsupport::LiveServer live(store_from_records({}));
  ResultsServer second(store_from_records({}));
  CHECK(!testsupport::error_of([&] { second.bind("127.0.0.1", live.port()); }).empty());
}
