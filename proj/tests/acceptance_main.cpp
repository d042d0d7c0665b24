// Acceptance suite: every verification criterion at its stated tolerance,
// one pass/fail line per criterion.  Exits nonzero if any criterion fails.

#include <tvk/cache.hpp>
#include <tvk/checks.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace tvk;

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

bool all_pass(const SuiteResult& res, std::string& detail) {
  if (res.n_fail == 0 && res.n_error == 0) return true;
  for (const auto& r : res.reports)
    if (r.status == CheckStatus::fail || r.status == CheckStatus::error) {
      detail = r.check_id + " " + r.params.dump() + ": " + to_string(r.status) +
               " abs_err=" + std::to_string(r.abs_err) + " " + r.detail;
      return false;
    }
  return false;
}

SuiteResult run_checks(std::initializer_list<const char*> ids, int jobs = 4) {
  SuiteResult total;
  PrecisionPolicy policy;  // 30 digits
  for (const char* id : ids) {
    SuiteFilter f;
    f.check_id = id;
    SuiteResult r = run_suite(f, policy, jobs);
    total.reports.insert(total.reports.end(), r.reports.begin(), r.reports.end());
  }
  total.tally();
  return total;
}

double max_seconds(const SuiteResult& res) {
  double m = 0;
  for (const auto& r : res.reports) m = std::max(m, r.seconds);
  return m;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  // 1. symbolic goldens, < 1 s
  criteria.push_back({"criterion-1 symbolic golden expansions", 1.0, [](std::string& d) {
                        auto res = run_checks({"expansion-golden"});
                        return all_pass(res, d);
                      }});

  // 2. constants to 30 digits, each < 5 s
  criteria.push_back({"criterion-2 depth-one constants at 30 digits", 15.0, [](std::string& d) {
                        auto res = run_checks({"constants"});
                        if (max_seconds(res) > 5.0) {
                          d = "a constant took longer than 5 s";
                          return false;
                        }
                        return all_pass(res, d);
                      }});

  // 3. shuffle identities at 1e-20, each < 60 s
  criteria.push_back({"criterion-3 shuffle product identities", 120.0, [](std::string& d) {
                        auto res = run_checks({"shuffle-examples"});
                        if (max_seconds(res) > 60.0) {
                          d = "an identity took longer than 60 s";
                          return false;
                        }
                        return all_pass(res, d);
                      }});

  // 4. route agreement, < 5 min
  criteria.push_back({"criterion-4 closed form route agreement", 300.0, [](std::string& d) {
                        auto res = run_checks({"route-agreement"});
                        return all_pass(res, d);
                      }});

  // 5. sum relations, < 5 min
  criteria.push_back({"criterion-5 sum relations", 300.0, [](std::string& d) {
                        auto res = run_checks({"sum-relations"});
                        return all_pass(res, d);
                      }});

  // 6. duality: worked example at 1e-20 plus the grid at 1e-18, < 10 min
  criteria.push_back({"criterion-6 duality identity", 600.0, [](std::string& d) {
                        auto res = run_checks({"duality-example", "duality-theorem"});
                        return all_pass(res, d);
                      }});

  // 7. oracle agreement, < 10 min
  criteria.push_back({"criterion-7 integral oracle agreement", 600.0, [](std::string& d) {
                        auto res = run_checks({"oracle-duality", "lambda-quadrature",
                                               "path-independence"});
                        return all_pass(res, d);
                      }});

  // 8. property suites + cache round trip + exit codes, < 1 min
  criteria.push_back({"criterion-8 property suites and contracts", 60.0, [](std::string& d) {
                        auto res = run_checks({"prop-duality-involution", "prop-shuffle-mass",
                                               "prop-insertion-mass", "prop-word-roundtrip",
                                               "prop-ipower"});
                        if (!all_pass(res, d)) return false;
                        // cache round trip
                        namespace fs = std::filesystem;
                        const fs::path dir = fs::temp_directory_path() / "tvk_acceptance_cache";
                        fs::remove_all(dir);
                        DiskCache cache(dir);
                        CacheRecord rec;
                        rec.kind = "ttilde";
                        rec.index = Index{1, 3};
                        rec.digits = 30;
                        rec.re = "0.436464644760177259478970995514";
                        rec.im = "0";
                        rec.err = 1e-30;
                        rec.method = "euler-series";
                        rec.created = iso8601_now();
                        cache.put(rec);
                        auto got = cache.get("ttilde", Index{1, 3}, std::nullopt, 30);
                        if (!got || got->re != rec.re) {
                          d = "cache round trip failed";
                          return false;
                        }
                        if (cache.get("ttilde", Index{1, 3}, std::nullopt, 40)) {
                          d = "cache returned fewer digits than requested";
                          return false;
                        }
                        fs::remove_all(dir);
                        // exit-code contract
                        SuiteResult sr;
                        sr.reports.resize(2);
                        sr.reports[0].status = CheckStatus::pass;
                        sr.reports[1].status = CheckStatus::ambiguous;
                        sr.tally();
                        bool codes = sr.exit_code() == 0;
                        sr.reports[1].status = CheckStatus::error;
                        sr.tally();
                        codes = codes && sr.exit_code() == 3;
                        sr.reports[0].status = CheckStatus::fail;
                        sr.tally();
                        codes = codes && sr.exit_code() == 1;
                        if (!codes) {
                          d = "exit-code contract violated";
                          return false;
                        }
                        return true;
                      }});

  // 9. variant adjudication: exactly one winner each, grid-consistent
  criteria.push_back({"criterion-9 variant adjudication", 300.0, [](std::string& d) {
                        auto res = run_checks({"variant-star", "variant-binomial"});
                        if (res.n_fail || res.n_error) return all_pass(res, d);
                        if (res.n_ambiguous != 2) {
                          d = "expected two adjudicated checks";
                          return false;
                        }
                        bool star_ok = false, binom_ok = false;
                        for (const auto& r : res.reports) {
                          if (r.check_id == "variant-star")
                            star_ok = r.detail.find("winner=insertion") != std::string::npos;
                          if (r.check_id == "variant-binomial")
                            binom_ok = r.detail.find("winner=corrected") != std::string::npos;
                        }
                        if (!star_ok) d = "star semantics winner is not the insertion product";
                        if (!binom_ok) d += std::string(d.empty() ? "" : "; ") +
                                            "binomial winner is not the corrected variant";
                        return star_ok && binom_ok;
                      }});

  int failures = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > c.budget_seconds) {
      ok = false;
      detail = "exceeded time budget of " + std::to_string(c.budget_seconds) + " s";
    }
    std::printf("[%s] %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs);
    if (!ok) {
      if (!detail.empty()) std::printf("       %s\n", detail.c_str());
      ++failures;
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
