#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "xmr/miner.hpp"
#include "xmr/transactions.hpp"

namespace xmr::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("xmr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline Transaction tx(Itemset items, Origin origin = Origin::cross_modal) {
  return Transaction{std::move(items), origin, {}};
}

inline std::vector<Transaction> txs(const std::vector<Itemset>& rows) {
  std::vector<Transaction> out;
  for (const auto& r : rows) out.push_back(tx(r));
  return out;
}

using SupportMap = std::map<Itemset, Count>;

inline SupportMap to_map(const FrequentItemsetTable& table) {
  SupportMap out;
  for (const auto& f : table) out[f.items] = f.support;
  return out;
}

// Recursive enumeration over the observed items with std::includes for
// containment. Shares no code with the library miners.
inline SupportMap naive_frequent(const std::vector<Transaction>& db, Count supp_min, std::size_t max_len) {
  std::vector<Item> universe;
  for (const auto& t : db) universe.insert(universe.end(), t.items.begin(), t.items.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  SupportMap out;
  Itemset current;
  auto count = [&](const Itemset& s) {
    Count c = 0;
    for (const auto& t : db) c += std::includes(t.items.begin(), t.items.end(), s.begin(), s.end()) ? 1 : 0;
    return c;
  };
  auto walk = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i < universe.size(); ++i) {
      current.push_back(universe[i]);
      const Count c = count(current);
      if (c >= supp_min) {
        out[current] = c;
        if (current.size() < max_len) self(self, i + 1);
      }
      current.pop_back();
    }
  };
  walk(walk, 0);
  return out;
}

}  // namespace xmr::testing
