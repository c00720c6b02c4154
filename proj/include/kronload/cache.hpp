#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <optional>
#include <string>
#include <string_view>

#include "kronload/characters.hpp"
#include "kronload/loadings.hpp"
#include "kronload/thresholds.hpp"

namespace kronload {

// $KRONLOAD_CACHE, else $XDG_CACHE_HOME/kronload, else ~/.cache/kronload.
std::filesystem::path default_cache_dir();

std::uint64_t fnv1a64(std::string_view bytes);

// Files live at <root>/<kind>/n=<n>.v1[.<tag>].<ext>. The first line is
// "# checksum fnv1a64=<hex>" over the rest of the file.
class Cache {
 public:
  static constexpr int format_version = 1;

  enum class Status { hit, missing, corrupt };
  struct Lookup {
    Status status = Status::missing;
    std::string payload;  // valid on hit
    std::string detail;   // reason on corrupt
  };

  explicit Cache(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path path_for(std::string_view kind, int n, std::string_view ext, std::string_view tag = {}) const;

  Lookup read(std::string_view kind, int n, std::string_view ext, std::string_view tag = {}) const;
  // Atomic: writes a sibling temp file and renames it into place.
  void write(std::string_view kind, int n, std::string_view ext, std::string_view payload,
             std::string_view tag = {}) const;

 private:
  std::filesystem::path root_;
};

// Row-major CSV after the header "# chartable n=<n> order=lex-desc version=1".
std::string serialize_table(const CharacterTable& table);
// Throws DomainError on a malformed payload or header mismatch.
CharacterTable parse_table(std::string_view payload, int n);

// Full-precision loadings; round-trips bit-for-bit.
std::string serialize_loadings(const LoadingTable& table, const IterationMode& mode);
LoadingTable parse_loadings(std::string_view payload, int n);
// Cache tag for a non-default iteration mode ("" for the default).
std::string mode_tag(const IterationMode& mode);

std::string serialize_thresholds(const Thresholds& th);
Thresholds parse_thresholds(std::string_view payload, int n);

// Cached computations. A corrupt entry is reported through `warn` and
// recomputed; a missing one is computed and stored.
class ComputeContext {
 public:
  ComputeContext(std::optional<Cache> cache, unsigned threads, IterationMode mode, bool allow_long);

  void set_warning_sink(std::ostream* sink) { warn_ = sink; }

  std::shared_ptr<const CharacterTable> table(int n);
  std::shared_ptr<const LoadingTable> loadings(int n);
  // Exhaustive thresholds: from the cache or a fresh scan (which obeys the
  // --long gate).
  Thresholds thresholds(int n);
  // Runs a scan and stores its thresholds.
  ScanResult scan(int n, ScanOptions options);

  unsigned threads() const noexcept { return threads_; }
  const IterationMode& mode() const noexcept { return mode_; }
  bool allow_long() const noexcept { return allow_long_; }
  const std::optional<Cache>& cache() const noexcept { return cache_; }

 private:
  void warn(const std::string& message) const;

  std::optional<Cache> cache_;
  unsigned threads_;
  IterationMode mode_;
  bool allow_long_;
  std::ostream* warn_ = nullptr;
  std::map<int, std::shared_ptr<const CharacterTable>> tables_;
  std::map<int, std::shared_ptr<const LoadingTable>> loadings_;
};

}  // namespace kronload
