#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fickit/criteria/complexity.hpp"
#include "fickit/error.hpp"
#include "fickit/format.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

namespace fickit::criteria {

/// Generator parameters rounded to 12 significant digits (tags included),
/// hashed to 16 hex digits.
inline std::string params_digest(const ParameterVector& params) {
  std::string text;
  char buf[64];
  for (double v : params.coordinates()) {
    std::snprintf(buf, sizeof(buf), "%.11e;", v == 0.0 ? 0.0 : v);
    text += buf;
  }
  text += "|";
  for (int t : params.tags()) text += std::to_string(t) + ";";
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ComplexityKey {
  std::string family_id;
  std::string params_digest;
  std::size_t sample_size = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  auto tie() const { return std::tie(family_id, params_digest, sample_size, replicates, seed); }
  friend bool operator<(const ComplexityKey& a, const ComplexityKey& b) { return a.tie() < b.tie(); }
  friend bool operator==(const ComplexityKey& a, const ComplexityKey& b) { return a.tie() == b.tie(); }
};

/// Persisted complexity cache, one CSV record per estimate. Appends are
/// serialized by a mutex; the file is only ever appended to.
class ComplexityTable {
 public:
  static constexpr const char* kHeader = "family_id,params_digest,N,replicates,seed,value,std_error";

  explicit ComplexityTable(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line)) return;
    if (line != kHeader) throw InvalidArgument("'" + path_.string() + "' is not a complexity table");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
      if (f.size() != 7)
        throw InvalidArgument("malformed complexity table record at " + path_.string() + ":" + std::to_string(line_no));
      ComplexityKey key{f[0], f[1], parse_u64(f[2]), parse_u64(f[3]), parse_u64(f[4])};
      entries_[key] = MonteCarloEstimate{parse_double(f[5]), parse_double(f[6]), key.replicates, key.seed};
    }
  }

  std::optional<MonteCarloEstimate> find(const ComplexityKey& key) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void append(const ComplexityKey& key, const MonteCarloEstimate& value) {
    if (key.family_id.find(',') != std::string::npos) throw InvalidArgument("family id must not contain commas");
    std::lock_guard lock(mutex_);
    if (entries_.count(key)) return;
    const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot append to complexity table '" + path_.string() + "'");
    if (fresh) out << kHeader << '\n';
    out << key.family_id << ',' << key.params_digest << ',' << key.sample_size << ',' << key.replicates << ','
        << key.seed << ',' << format_double(value.value) << ',' << format_double(value.std_error) << '\n';
    entries_[key] = value;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<ComplexityKey, MonteCarloEstimate> entries_;
};

/// fic_complexity, served from `table` when the same key was computed before.
inline MonteCarloEstimate cached_fic_complexity(ComplexityTable& table, const ModelFamily& family,
                                                const FittedModel& generator, std::size_t sample_size,
                                                std::size_t replicates, std::uint64_t seed) {
  const ComplexityKey key{family.id(), params_digest(generator.params()), sample_size, replicates, seed};
  if (auto hit = table.find(key)) return *hit;
  const MonteCarloEstimate k = fic_complexity(family, generator, sample_size, replicates, seed);
  table.append(key, k);
  return k;
}

}  // namespace fickit::criteria
