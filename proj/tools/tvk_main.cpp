// Command-line front end: value evaluation, symbolic expansion, and the
// verification suite with machine-readable reports.
//
// Option precedence: flags > environment (TVK_*) > config file (JSON)
// > built-in defaults.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage error, 3 numeric non-convergence.

#include <tvk/cache.hpp>
#include <tvk/checks.hpp>
#include <tvk/eval.hpp>
#include <tvk/expansion.hpp>
#include <tvk/path_ode.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

using tvk::json;

json load_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") path = argv[i + 1];
  if (path.empty())
    if (const char* env = std::getenv("TVK_CONFIG")) path = env;
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file " << path << "\n";
    std::exit(2);
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    std::cerr << "error: bad config file " << path << ": " << e.what() << "\n";
    std::exit(2);
  }
}

struct Options {
  int digits = 30;
  std::string cache_dir;
  int jobs = 4;
  bool verbose = false;
  std::string config_path;
};

std::unique_ptr<tvk::DiskCache> open_cache(const Options& opt, bool required) {
  if (opt.cache_dir.empty()) {
    if (required) {
      std::cerr << "error: no cache directory configured (--cache-dir, TVK_CACHE_DIR, or config)\n";
      std::exit(2);
    }
    return nullptr;
  }
  return std::make_unique<tvk::DiskCache>(opt.cache_dir);
}

tvk::PrecisionPolicy make_policy(const Options& opt) {
  tvk::PrecisionPolicy policy;
  policy.target_digits = opt.digits;
  policy.trace = opt.verbose;
  return policy;
}

int cmd_ttilde(const Options& opt, const std::string& index_text) {
  const tvk::Index k = tvk::parse_index(index_text);
  auto policy = make_policy(opt);
  auto disk = open_cache(opt, false);
  tvk::CachingEvaluator source(&tvk::global_value_cache(), disk.get());
  tvk::TtildeResult r = source.get(k, policy);
  if (r.conditionally_convergent)
    std::cerr << "warning: trailing entry 1, conditionally convergent alternating sum\n";
  std::cout << "T~(" << k.str() << ") = " << tvk::render(r.val, opt.digits) << "\n";
  if (opt.verbose) std::cerr << "error estimate " << r.val.error << "\n";
  return 0;
}

int cmd_dual(const std::string& index_text) {
  const tvk::Index k = tvk::parse_index(index_text);
  std::cout << tvk::dual_index(k).str() << "\n";
  return 0;
}

int cmd_shuffle(const std::string& a, const std::string& b) {
  const tvk::Index u = tvk::parse_index(a);
  const tvk::Index v = tvk::parse_index(b);
  std::cout << tvk::shuffle_product(u, v).str() << "\n";
  return 0;
}

int cmd_expand(const Options& opt, const std::string& index_text, bool as_json) {
  const tvk::Index k = tvk::parse_index(index_text);
  const tvk::FormalCombination f = tvk::lambda_expansion(k);
  if (as_json)
    std::cout << f.to_json().dump(2) << "\n";
  else
    std::cout << "lambda(" << k.str() << ";s) = " << f.str() << "\n";
  (void)opt;
  return 0;
}

/// detect ({1}_{j-1}, 2, {1}_{r-j}) and route to the matching closed form
std::optional<tvk::FormalCombination> closed_form_for(const tvk::Index& k) {
  const auto& e = k.entries();
  int twos = 0;
  int pos = -1;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 2) {
      ++twos;
      pos = static_cast<int>(i);
    } else if (e[i] != 1) {
      return std::nullopt;
    }
  }
  if (twos != 1) return std::nullopt;
  const int r = k.depth();
  const int j = pos + 1;
  if (j == r) return tvk::closed_form_ones_two(r, tvk::BinomVariant::corrected);
  return tvk::closed_form_one_two(r, j);
}

int cmd_lambda(const Options& opt, const std::string& index_text, int s,
               const std::string& method) {
  const tvk::Index k = tvk::parse_index(index_text);
  auto policy = make_policy(opt);
  auto disk = open_cache(opt, false);
  tvk::CachingEvaluator source(&tvk::global_value_cache(), disk.get());

  tvk::ComplexValue v;
  if (method == "expansion") {
    v = tvk::eval_combination(tvk::lambda_expansion(k), s, policy, &source);
  } else if (method == "closed") {
    auto f = closed_form_for(k);
    if (!f) {
      std::cerr << "error: no closed form for (" << k.str()
                << "); closed forms cover ({1}_{j-1},2,{1}_{r-j}) indices only\n";
      return 2;
    }
    v = tvk::eval_combination(*f, s, policy, &source);
  } else if (method == "quadrature") {
    v = tvk::lambda_quadrature(k, s, policy);
  } else {
    std::cerr << "error: unknown method '" << method << "'\n";
    return 2;
  }
  std::cout << "lambda(" << k.str() << ";" << s << ") = " << tvk::render(v, opt.digits) << "\n";
  if (opt.verbose) std::cerr << "error estimate " << v.error << "\n";
  return 0;
}

int cmd_verify(const Options& opt, std::optional<std::string> check,
               std::optional<std::string> tag, std::optional<int> weight_max, bool as_json) {
  tvk::SuiteFilter filter;
  filter.check_id = std::move(check);
  filter.tag = std::move(tag);
  filter.weight_max = weight_max;
  if (filter.check_id && !tvk::find_check(*filter.check_id)) {
    std::cerr << "error: unknown check '" << *filter.check_id << "'; available:\n";
    for (const auto& def : tvk::check_registry()) std::cerr << "  " << def.id << "\n";
    return 2;
  }
  auto policy = make_policy(opt);
  auto disk = open_cache(opt, false);
  tvk::SuiteResult res = tvk::run_suite(filter, policy, opt.jobs, disk.get(), opt.verbose);

  if (as_json) {
    json out;
    out["reports"] = json::array();
    for (const auto& r : res.reports) out["reports"].push_back(r.to_json());
    out["summary"] = {{"pass", res.n_pass},
                      {"fail", res.n_fail},
                      {"error", res.n_error},
                      {"ambiguous", res.n_ambiguous}};
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : res.reports) {
      std::cout << "[" << to_string(r.status) << "] " << r.check_id;
      if (!r.params.empty()) std::cout << " " << r.params.dump();
      char buf[64];
      std::snprintf(buf, sizeof buf, "  abs_err=%.3e tol=%.1e (%.2fs)", r.abs_err, r.tol,
                    r.seconds);
      std::cout << buf;
      if (r.status != tvk::CheckStatus::pass && !r.detail.empty())
        std::cout << "\n    " << r.detail;
      std::cout << "\n";
    }
    std::cout << "summary: " << res.n_pass << " pass, " << res.n_fail << " fail, "
              << res.n_error << " error, " << res.n_ambiguous << " ambiguous\n";
  }
  return res.exit_code();
}

int cmd_cache(const Options& opt, const std::string& action) {
  auto disk = open_cache(opt, true);
  if (action == "stats") {
    auto st = disk->stats();
    std::cout << "cache file: " << disk->file().string() << "\n";
    std::cout << "records: " << st.records << "\n";
    for (const auto& [kind, n] : st.by_kind) std::cout << "  " << kind << ": " << n << "\n";
    std::cout << "max digits: " << st.max_digits << "\n";
    if (st.skipped) std::cout << "unreadable lines skipped: " << st.skipped << "\n";
    return 0;
  }
  if (action == "clear") {
    disk->clear();
    std::cout << "cache cleared\n";
    return 0;
  }
  std::cerr << "error: unknown cache action '" << action << "' (stats|clear)\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  const json cfg = load_config(argc, argv);

  CLI::App app{"multiple T~-value calculator and identity verifier"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  opt.digits = cfg.value("digits", 30);
  opt.cache_dir = cfg.value("cache_dir", std::string{});
  opt.jobs = cfg.value("jobs", 4);
  app.add_option("--digits", opt.digits, "target significant digits")
      ->envname("TVK_DIGITS")
      ->capture_default_str();
  app.add_option("--cache-dir", opt.cache_dir, "persistent value cache directory")
      ->envname("TVK_CACHE_DIR");
  app.add_option("--jobs", opt.jobs, "parallel checks in verify")
      ->envname("TVK_JOBS")
      ->capture_default_str();
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_flag("-v,--verbose", opt.verbose, "diagnostic output");

  auto* c_tt = app.add_subcommand("ttilde", "evaluate a multiple T~-value");
  std::string tt_index;
  c_tt->add_option("index", tt_index, "index, e.g. 1,3")->required();

  auto* c_lam = app.add_subcommand("lambda", "evaluate lambda(k;s) at integer s >= 2");
  std::string lam_index, lam_method = "expansion";
  int lam_s = 2;
  c_lam->add_option("index", lam_index)->required();
  c_lam->add_option("--s", lam_s, "integer argument s >= 2")->required();
  c_lam->add_option("--method", lam_method, "expansion|closed|quadrature")
      ->capture_default_str();

  auto* c_exp = app.add_subcommand("expand", "symbolic lambda expansion into T~-values");
  std::string exp_index;
  bool exp_json = false;
  c_exp->add_option("index", exp_index)->required();
  c_exp->add_flag("--json", exp_json, "machine-readable output");

  auto* c_dual = app.add_subcommand("dual", "dual index (reverse-and-swap on words)");
  std::string dual_index_text;
  c_dual->add_option("index", dual_index_text)->required();

  auto* c_shuf = app.add_subcommand("shuffle", "shuffle product of two indices");
  std::string shuf_a, shuf_b;
  c_shuf->add_option("u", shuf_a)->required();
  c_shuf->add_option("v", shuf_b)->required();

  auto* c_ver = app.add_subcommand("verify", "run verification checks");
  std::string ver_check, ver_tag;
  int ver_weight = -1;
  bool ver_json = false;
  c_ver->add_option("--check", ver_check, "run a single check by id");
  c_ver->add_option("--tag", ver_tag, "filter by tag (symbolic|numeric|oracle|variant|property)");
  c_ver->add_option("--weight-max", ver_weight, "skip instances above this weight");
  c_ver->add_flag("--json", ver_json, "machine-readable report");

  auto* c_cache = app.add_subcommand("cache", "persistent cache maintenance");
  std::string cache_action;
  c_cache->add_option("action", cache_action, "stats|clear")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_tt) return cmd_ttilde(opt, tt_index);
    if (*c_lam) return cmd_lambda(opt, lam_index, lam_s, lam_method);
    if (*c_exp) return cmd_expand(opt, exp_index, exp_json);
    if (*c_dual) return cmd_dual(dual_index_text);
    if (*c_shuf) return cmd_shuffle(shuf_a, shuf_b);
    if (*c_ver)
      return cmd_verify(opt, ver_check.empty() ? std::nullopt : std::optional(ver_check),
                        ver_tag.empty() ? std::nullopt : std::optional(ver_tag),
                        ver_weight < 0 ? std::nullopt : std::optional(ver_weight), ver_json);
    if (*c_cache) return cmd_cache(opt, cache_action);
  } catch (const tvk::convergence_error& e) {
    std::cerr << "error: " << e.what() << " (best estimate "
              << e.best_estimate.str(12) << ", error " << e.error << ")\n";
    return 3;
  } catch (const tvk::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
