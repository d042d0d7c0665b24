#include <tvk/cache.hpp>
#include <tvk/checks.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <thread>

using namespace tvk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tvk_cache_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

CacheRecord make_record(const Index& k, int digits, const std::string& re) {
  CacheRecord r;
  r.kind = "ttilde";
  r.index = k;
  r.digits = digits;
  r.re = re;
  r.im = "0";
  r.err = 1e-30;
  r.method = "euler-series";
  r.created = iso8601_now();
  return r;
}

}  // namespace

TEST_CASE("cache round trip") {
  TempDir tmp;
  DiskCache cache(tmp.path);
  const std::string digits = "0.436464644760177259478970995514";
  cache.put(make_record(Index{1, 3}, 30, digits));
  auto got = cache.get("ttilde", Index{1, 3}, std::nullopt, 30);
  REQUIRE(got.has_value());
  CHECK(got->re == digits);
  CHECK(got->digits == 30);
}

TEST_CASE("digit policy and max-digits rule") {
  TempDir tmp;
  DiskCache cache(tmp.path);
  cache.put(make_record(Index{1, 3}, 30, "0.30digits"));
  CHECK_FALSE(cache.get("ttilde", Index{1, 3}, std::nullopt, 40).has_value());
  cache.put(make_record(Index{1, 3}, 50, "0.50digits"));
  auto got = cache.get("ttilde", Index{1, 3}, std::nullopt, 40);
  REQUIRE(got.has_value());
  CHECK(got->digits == 50);
  CHECK(got->re == "0.50digits");
  // the 50-digit record also answers 30-digit requests
  auto low = cache.get("ttilde", Index{1, 3}, std::nullopt, 30);
  REQUIRE(low.has_value());
  CHECK(low->digits == 50);
}

TEST_CASE("keys separate kind and s") {
  TempDir tmp;
  DiskCache cache(tmp.path);
  cache.put(make_record(Index{2}, 30, "0.x"));
  CacheRecord lam = make_record(Index{2}, 30, "0.y");
  lam.kind = "lambda";
  lam.s = 3;
  cache.put(lam);
  CHECK(cache.get("ttilde", Index{2}, std::nullopt, 30).has_value());
  CHECK_FALSE(cache.get("lambda", Index{2}, std::nullopt, 30).has_value());
  CHECK(cache.get("lambda", Index{2}, 3, 30).has_value());
}

TEST_CASE("unreadable lines are skipped, never fatal") {
  TempDir tmp;
  DiskCache cache(tmp.path);
  cache.put(make_record(Index{2}, 30, "0.z"));
  {
    std::ofstream out(cache.file(), std::ios::app);
    out << "{this is not json\n";
  }
  cache.put(make_record(Index{3}, 30, "0.w"));
  auto st = cache.stats();
  CHECK(st.records == 2);
  CHECK(st.skipped == 1);
  CHECK(cache.get("ttilde", Index{3}, std::nullopt, 30).has_value());
}

TEST_CASE("concurrent writers do not corrupt the file") {
  TempDir tmp;
  const int writers = 6;
  const int puts = 8;
  std::vector<std::thread> pool;
  for (int w = 0; w < writers; ++w)
    pool.emplace_back([&, w] {
      DiskCache cache(tmp.path);
      for (int i = 0; i < puts; ++i)
        cache.put(make_record(Index{w + 1, 2}, 30 + i, "0." + std::to_string(w * 100 + i)));
    });
  for (auto& t : pool) t.join();
  DiskCache cache(tmp.path);
  auto st = cache.stats();
  CHECK(st.skipped == 0);
  CHECK(st.records == static_cast<size_t>(writers * puts));
  for (int w = 0; w < writers; ++w) {
    auto got = cache.get("ttilde", Index{w + 1, 2}, std::nullopt, 30);
    REQUIRE(got.has_value());
    CHECK(got->digits == 30 + puts - 1);  // max digits wins
  }
}

TEST_CASE("clear and stats") {
  TempDir tmp;
  DiskCache cache(tmp.path);
  cache.put(make_record(Index{2}, 30, "0.a"));
  CHECK(cache.stats().records == 1);
  cache.clear();
  CHECK(cache.stats().records == 0);
}

TEST_CASE("caching evaluator round-trips through disk") {
  TempDir tmp;
  PrecisionPolicy policy;
  std::string first_render;
  {
    DiskCache disk(tmp.path);
    ValueCache mem;
    CachingEvaluator ev(&mem, &disk);
    auto r = ev.get(Index{1, 3}, policy);
    first_render = r.val.value.str(30);
    CHECK(disk.stats().records == 1);
  }
  {
    DiskCache disk(tmp.path);
    ValueCache mem;  // cold memory: must hit disk, not recompute
    CachingEvaluator ev(&mem, &disk);
    auto r = ev.get(Index{1, 3}, policy);
    CHECK(r.val.value.str(30) == first_render);
    CHECK(disk.stats().records == 1);  // no duplicate write
  }
}
