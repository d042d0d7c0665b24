#include <tvk/checks.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>

using namespace tvk;
namespace fs = std::filesystem;

TEST_CASE("unknown check id") {
  CheckContext ctx{PrecisionPolicy{}, nullptr, nullptr, false};
  CHECK_THROWS_AS(run_check("no-such-check", json::object(), ctx), std::invalid_argument);
  CHECK(find_check("duality-example") != nullptr);
  CHECK(find_check("bogus") == nullptr);
}

TEST_CASE("single check run") {
  CheckContext ctx{PrecisionPolicy{}, nullptr, nullptr, false};
  CheckReport rep = run_check("duality-example", json::object(), ctx);
  CHECK(rep.status == CheckStatus::pass);
  CHECK(rep.abs_err < 1e-20);
  CHECK(rep.digits == 30);
  CHECK(rep.seconds >= 0.0);
  const json j = rep.to_json();
  CHECK(j["check_id"] == "duality-example");
  CHECK(j["status"] == "pass");
}

TEST_CASE("numeric failure becomes status=error, not a crash") {
  PrecisionPolicy strangled;
  strangled.max_outer_terms = 8;
  ValueCache fresh;  // keep the starved lookup away from the shared cache
  CheckContext ctx{strangled, &fresh, nullptr, false};
  CheckReport rep = run_check("constants", {{"k", 2}}, ctx);
  CHECK(rep.status == CheckStatus::error);
  CHECK(rep.detail.find("non-convergence") != std::string::npos);
}

TEST_CASE("tag filter selects symbolic checks only") {
  SuiteFilter filter;
  filter.tag = "symbolic";
  auto res = run_suite(filter, PrecisionPolicy{}, 2);
  CHECK(res.reports.size() > 0);
  for (const auto& r : res.reports) {
    const CheckDef* def = find_check(r.check_id);
    REQUIRE(def != nullptr);
    CHECK(std::find(def->tags.begin(), def->tags.end(), "symbolic") != def->tags.end());
  }
  CHECK(res.exit_code() == 0);
}

TEST_CASE("weight filtering is monotone") {
  SuiteFilter f3;
  f3.weight_max = 3;
  f3.tag = "numeric";
  SuiteFilter f5;
  f5.weight_max = 5;
  f5.tag = "numeric";
  auto r3 = run_suite(f3, PrecisionPolicy{}, 2);
  auto r5 = run_suite(f5, PrecisionPolicy{}, 2);
  std::set<std::string> keys3, keys5;
  for (const auto& r : r3.reports) keys3.insert(r.check_id + r.params.dump());
  for (const auto& r : r5.reports) keys5.insert(r.check_id + r.params.dump());
  CHECK(keys3.size() < keys5.size());
  for (const auto& k : keys3) CHECK(keys5.count(k) == 1);
}

TEST_CASE("exit code contract") {
  SuiteResult r;
  r.reports.resize(3);
  r.reports[0].status = CheckStatus::pass;
  r.reports[1].status = CheckStatus::ambiguous;
  r.reports[2].status = CheckStatus::pass;
  r.tally();
  CHECK(r.exit_code() == 0);  // ambiguous with a winner counts as pass
  r.reports[1].status = CheckStatus::error;
  r.tally();
  CHECK(r.exit_code() == 3);
  r.reports[0].status = CheckStatus::fail;
  r.tally();
  CHECK(r.exit_code() == 1);  // fail dominates
}

TEST_CASE("report determinism") {
  SuiteFilter filter;
  filter.check_id = "route-agreement";
  auto a = run_suite(filter, PrecisionPolicy{}, 3);
  auto b = run_suite(filter, PrecisionPolicy{}, 1);
  REQUIRE(a.reports.size() == b.reports.size());
  for (size_t i = 0; i < a.reports.size(); ++i) {
    json ja = a.reports[i].to_json();
    json jb = b.reports[i].to_json();
    ja.erase("seconds");
    jb.erase("seconds");
    CHECK(ja.dump() == jb.dump());
  }
}

TEST_CASE("cache soundness: disk cache never changes a status") {
  const fs::path dir = fs::temp_directory_path() / "tvk_checks_cache_test";
  fs::remove_all(dir);
  SuiteFilter filter;
  filter.check_id = "duality-example";
  auto plain = run_suite(filter, PrecisionPolicy{}, 1, nullptr);
  {
    DiskCache disk(dir);
    auto warm = run_suite(filter, PrecisionPolicy{}, 1, &disk);
    auto cached = run_suite(filter, PrecisionPolicy{}, 1, &disk);
    REQUIRE(plain.reports.size() == 1);
    REQUIRE(warm.reports.size() == 1);
    REQUIRE(cached.reports.size() == 1);
    CHECK(plain.reports[0].status == warm.reports[0].status);
    CHECK(plain.reports[0].status == cached.reports[0].status);
    CHECK(disk.stats().records > 0);
  }
  fs::remove_all(dir);
}
