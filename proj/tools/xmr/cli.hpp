#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmr/eval.hpp"
#include "xmr/rational.hpp"
#include "xmr/text_filter.hpp"
#include "xmr/types.hpp"

namespace xmr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Everything a subcommand needs. Defaults reproduce the reference
/// configuration: k = 10, supp_min = 3, conf_min = 60%, D = 2048,
/// min_count = 3.
struct RunConfig {
  std::string command;

  std::filesystem::path features;
  std::filesystem::path annotations;
  std::filesystem::path transactions;
  std::filesystem::path vocab;
  std::filesystem::path rules;
  std::filesystem::path eval_features;
  std::filesystem::path eval_annotations;
  std::vector<std::filesystem::path> inputs;

  std::filesystem::path out;
  std::filesystem::path vocab_out;
  std::filesystem::path dump_itemsets;

  std::size_t feature_dim = 2048;
  std::size_t top_k = 10;
  std::size_t min_count = 3;
  std::optional<std::size_t> max_len;
  Count supp_min = 3;
  Rational conf_min{3, 5};
  bool strict = false;
  TextMode text_mode = TextMode::passthrough;
  std::vector<SweepPoint> grid;
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string tag;

  bool provenance = false;
  bool per_image = false;
  bool table = false;

  /// Throws xmr::Error naming the offending path or value. Runs before any
  /// output is written.
  void validate() const;
};

/// Parses "3:0.6,5:60%,10:3/5" into sweep points.
std::vector<SweepPoint> parse_grid(std::string_view text);

/// Thread count from --threads, else XMR_THREADS, else 0 (all cores).
unsigned resolve_thread_flag(std::optional<unsigned> flag);

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on a pipeline error and 2 on a usage error.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace xmr::cli
