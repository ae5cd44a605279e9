#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modinv/verify.hpp"

namespace modinv::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "modinv.config/1";
inline constexpr const char* kSeriesSchema = "modinv.series/1";
inline constexpr const char* kReportSchema = "modinv.report/1";
inline constexpr const char* kCacheMagic = "MODINV-CACHE";
inline constexpr int kCacheVersion = 1;

enum class Format { Text, Json, Csv };
std::optional<Format> parse_format(const std::string& s);

struct ModuleSpec {
  enum class Kind { Matrices, Class, Builtin };
  Kind kind = Kind::Builtin;
  std::string label;
  std::vector<Matrix> generators;  ///< Kind::Matrices
  std::string name;                ///< class label or builtin name (trivial | forms | regular)
};

struct ParameterSpec {
  enum class Kind { Linear, Norm, Terms };
  Kind kind = Kind::Norm;
  std::string name;
  std::vector<long long> form;  ///< Linear and Norm: coefficients of a linear form
  std::vector<std::pair<long long, std::vector<std::size_t>>> terms;  ///< Terms: (coefficient, exponents)
};

struct JobConfig {
  Scalar p = 2;
  std::vector<Matrix> generators;
  std::size_t max_degree = 8;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::vector<ModuleSpec> modules;
  std::optional<std::string> subgroup_class;  ///< trivial | non-sylow | all-p; unset runs all three
  std::string parameter_mode = "default";  ///< default | dickson | user
  std::vector<ParameterSpec> parameters;
  bool fit = false;
  std::vector<std::size_t> fit_denominator;  ///< empty: parameter degrees
  Format format = Format::Text;
  std::string cache_dir;
};

/// Parses a config document. Errors are InvalidInput with "line L, column C".
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::filesystem::path& path);

GroupPtr build_group(const JobConfig& c);
/// Modules named in the config; class references need the engine's registry.
std::vector<GModule> build_modules(const JobConfig& c, GradedEngine& e);
ParameterSystem build_parameters(const JobConfig& c, const GroupPtr& g);
SubgroupClass build_class(const JobConfig& c);

/// The group part of a config, the input of cache keys.
Json group_fragment(const JobConfig& c);
/// Hex SHA-256 of the canonical dump of the fragment and the degree.
std::string content_key(const Json& fragment, std::size_t degree);

struct SeriesTable {
  Scalar p = 2;
  std::size_t max_degree = 0;
  std::vector<std::string> labels;
  std::vector<std::size_t> class_dims;
  std::vector<std::vector<std::size_t>> rows;  ///< rows[d][i] = multiplicity of labels[i]
  std::vector<std::size_t> component_dims;
  std::vector<std::size_t> fit_denominator;
  std::vector<FitResult> fits;  ///< one per label, empty when no fit was requested
  std::vector<std::string> warnings;  ///< not serialized
};

SeriesTable series_table(const GreenSeries& gs, Scalar p);
/// Fits every label's multiplicity sequence over the denominator.
void fit_series(SeriesTable& t, const std::vector<std::size_t>& denominator);

Json to_json(const SeriesTable& t);
SeriesTable series_from_json(const Json& j);
Json to_json(const Report& r);

std::string emit_series(const SeriesTable& t, Format f);
/// CSV is defined for series only and is rejected here.
std::string emit_report(const Report& r, Format f);

/// Content-addressed store of per-degree multiplicity rows.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  /// Creates the directory and probes it; IoFailure when that is impossible.
  void ensure_writable() const;

  struct Entry {
    std::size_t degree = 0;
    std::size_t component_dim = 0;
    std::vector<std::string> labels;      ///< classes known after this degree
    std::vector<std::size_t> class_dims;
    std::vector<std::vector<Matrix>> class_generators;
    std::vector<std::size_t> row;         ///< multiplicities, aligned with labels
  };

  /// nullopt when absent, version-mismatched or corrupt (the last adds a warning).
  std::optional<Entry> load(const std::string& key);
  void store(const std::string& key, const Entry& e) const;

  struct FileStat {
    std::string key;
    std::uintmax_t bytes = 0;
    std::size_t hits = 0;
    bool valid = true;
  };
  std::vector<FileStat> stats() const;
  /// Removes corrupt or stale entries and orphaned hit counters; returns the count.
  std::size_t gc() const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> warnings_;
  std::optional<Entry> read(const std::filesystem::path& file, bool& corrupt) const;
};

/// Result of a subcommand: exit status and the two output streams.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

struct Overrides {
  std::optional<std::size_t> max_degree;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<Format> format;
  std::optional<std::string> cache_dir;
  bool require_fit = false;
};

CommandResult cmd_series(const std::string& config_text, const Overrides& o);
CommandResult cmd_verify(const std::string& config_text, const std::string& suite, const Overrides& o);
CommandResult cmd_cache(const std::string& action, const std::string& cache_dir, Format f);

}  // namespace modinv::io
