#include "kicked/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace kicked::cli {

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t");
      auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config: empty key on line " + std::to_string(lineno));
    kv[key] = value;
  }
  return kv;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  row(header);
}

std::string CsvWriter::quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvWriter::format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::invalid_argument("csv: wrong field count");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += quote(fields[i]);
  }
  text_ += "\r\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

RunManifest::RunManifest(std::string subcommand, std::map<std::string, std::string> config)
    : subcommand_(std::move(subcommand)), config_(std::move(config)) {}

void RunManifest::emit(const std::filesystem::path& out_dir, const std::string& name,
                       const std::string& bytes) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  files_.push_back({name, sha256_hex(bytes)});
}

void RunManifest::check(const std::string& name, bool pass, const std::string& detail) {
  checks_.push_back({name, pass, detail});
}

void RunManifest::warn(const std::string& message) { warnings_.push_back(message); }

bool RunManifest::all_checks_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

void RunManifest::finalize(const std::filesystem::path& out_dir, double wall_seconds) {
  nlohmann::json j;  // std::map-backed: keys come out sorted
  j["subcommand"] = subcommand_;
  j["version"] = kToolVersion;
  j["wall_seconds"] = wall_seconds;
  j["config"] = config_;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) files.push_back({{"name", f.name}, {"sha256", f.digest}});
  j["files"] = files;
  j["warnings"] = warnings_;

  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  out << j.dump(2) << "\n";

  std::string cfg;
  for (const auto& [k, v] : config_) cfg += k + "=" + v + "\n";
  std::ofstream cfg_out(out_dir / "config.resolved", std::ios::binary);
  cfg_out << cfg;
}

}  // namespace kicked::cli
