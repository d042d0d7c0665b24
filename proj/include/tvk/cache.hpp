#ifndef TVK_CACHE_HPP
#define TVK_CACHE_HPP

// Append-only JSON-lines cache of computed values.  Writes go through a
// lock + write-temp-then-rename sequence so concurrent writers never
// corrupt the file; unreadable lines are skipped with a warning.  On read,
// the record with the most digits per key wins.

#include <tvk/index.hpp>

#include <nlohmann/json.hpp>

#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <ctime>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace tvk {

struct CacheRecord {
  std::string kind;            // "ttilde" | "apoly1" | "lambda"
  Index index;
  std::optional<int> s;
  int digits = 0;
  std::string re;
  std::string im;
  double err = 0.0;
  std::string method;
  std::string created;         // ISO-8601

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["index"] = index.entries();
    if (s) j["s"] = *s;
    j["digits"] = digits;
    j["re"] = re;
    j["im"] = im;
    j["err"] = err;
    j["method"] = method;
    j["created"] = created;
    return j;
  }

  static CacheRecord from_json(const nlohmann::json& j) {
    CacheRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.index = Index(j.at("index").get<std::vector<int>>());
    if (j.contains("s") && !j["s"].is_null()) r.s = j["s"].get<int>();
    r.digits = j.at("digits").get<int>();
    r.re = j.at("re").get<std::string>();
    r.im = j.value("im", "0");
    r.err = j.value("err", 0.0);
    r.method = j.value("method", "");
    r.created = j.value("created", "");
    return r;
  }
};

inline std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

class DiskCache {
 public:
  explicit DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    file_ = dir_ / "values.jsonl";
  }

  const std::filesystem::path& file() const { return file_; }

  /// best record for (kind, index, s) with digits >= min_digits, if any
  std::optional<CacheRecord> get(const std::string& kind, const Index& index,
                                 std::optional<int> s, int min_digits) const {
    std::optional<CacheRecord> best;
    for_each_record([&](CacheRecord&& r) {
      if (r.kind != kind || !(r.index == index) || r.s != s) return;
      if (!best || r.digits > best->digits) best = std::move(r);
    });
    if (best && best->digits >= min_digits) return best;
    return std::nullopt;
  }

  void put(const CacheRecord& rec) {
    FileLock lock(lock_path());
    std::string content;
    {
      std::ifstream in(file_, std::ios::binary);
      if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        content = ss.str();
      }
    }
    content += rec.to_json().dump();
    content += '\n';
    const std::filesystem::path tmp = file_.string() + ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.flush();
    }
    std::filesystem::rename(tmp, file_);
  }

  struct Stats {
    size_t records = 0;
    size_t skipped = 0;
    std::map<std::string, size_t> by_kind;
    int max_digits = 0;
  };

  Stats stats() const {
    Stats st;
    st.skipped = for_each_record([&](CacheRecord&& r) {
      ++st.records;
      ++st.by_kind[r.kind];
      st.max_digits = std::max(st.max_digits, r.digits);
    });
    return st;
  }

  void clear() {
    FileLock lock(lock_path());
    std::error_code ec;
    std::filesystem::remove(file_, ec);
  }

 private:
  struct FileLock {
    int fd = -1;
    explicit FileLock(const std::filesystem::path& p) {
      fd = ::open(p.c_str(), O_CREAT | O_RDWR, 0644);
      if (fd >= 0) ::flock(fd, LOCK_EX);
    }
    ~FileLock() {
      if (fd >= 0) {
        ::flock(fd, LOCK_UN);
        ::close(fd);
      }
    }
  };

  std::filesystem::path lock_path() const { return file_.string() + ".lock"; }

  /// returns the number of unreadable lines skipped
  template <class Fn>
  size_t for_each_record(Fn&& fn) const {
    std::ifstream in(file_);
    if (!in) return 0;
    size_t skipped = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        fn(CacheRecord::from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        ++skipped;
        std::cerr << "warning: skipping unreadable cache line: " << e.what() << "\n";
      }
    }
    return skipped;
  }

  std::filesystem::path dir_;
  std::filesystem::path file_;
};

}  // namespace tvk

#endif  // TVK_CACHE_HPP
