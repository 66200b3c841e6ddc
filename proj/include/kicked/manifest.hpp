#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kicked::cli {

// flat key=value config: '#' comments, UTF-8, no nesting
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

// RFC-4180 CSV with a fixed header row; doubles are written with %.17g so a
// canonical rerun is byte-identical
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  const std::string& text() const { return text_; }
  static std::string format_double(double v);
  static std::string quote(const std::string& field);

 private:
  std::size_t columns_;
  std::string text_;
};

std::string sha256_hex(const std::string& bytes);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct EmittedFile {
  std::string name;    // relative to the out dir
  std::string digest;  // sha256 of the emitted bytes
};

class RunManifest {
 public:
  RunManifest(std::string subcommand, std::map<std::string, std::string> config);

  // writes bytes to out_dir/name and records the digest
  void emit(const std::filesystem::path& out_dir, const std::string& name,
            const std::string& bytes);
  void check(const std::string& name, bool pass, const std::string& detail = {});
  void warn(const std::string& message);

  bool all_checks_pass() const;
  int warning_count() const { return static_cast<int>(warnings_.size()); }

  // manifest.json (sorted keys) + config.resolved next to the data files
  void finalize(const std::filesystem::path& out_dir, double wall_seconds);

 private:
  std::string subcommand_;
  std::map<std::string, std::string> config_;
  std::vector<CheckResult> checks_;
  std::vector<EmittedFile> files_;
  std::vector<std::string> warnings_;
};

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace kicked::cli
