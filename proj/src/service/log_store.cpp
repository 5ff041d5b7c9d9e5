#include "cpm/service/log_store.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>

#include "cpm/error.hpp"
#include "cpm/service/errors.hpp"
#include "cpm/xes.hpp"

namespace cpm::service {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kIdLength = 16;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string sanitize_file_name(std::string_view name) {
  const auto slash = name.find_last_of("/\\");
  if (slash != std::string_view::npos) name.remove_prefix(slash + 1);
  std::string out;
  for (const char c : name) {
    const auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) || c == '.' || c == '-' || c == '_') ? c : '_';
  }
  while (!out.empty() && out.front() == '.') out.erase(out.begin());
  return out.empty() ? "log" : out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path sidecar_path(const fs::path& file) { return file.string() + ".mapping.json"; }

EventLog parse_content(const std::string& content, LogFormat format, const CsvMapping& mapping,
                       const std::string& fallback_name) {
  if (format == LogFormat::Xes) {
    EventLog log = parse_xes(std::string_view(content));
    if (!log.name().empty()) return log;
    return EventLog(fallback_name, log.traces());
  }
  return parse_csv(std::string_view(content), mapping, fallback_name);
}

// Uploaded files are stored as "<log id>-<name>"; the prefix is not part of
// the display name.
std::string display_name(const fs::path& file) {
  std::string stem = file.stem().string();
  if (stem.size() > kIdLength + 1 && stem[kIdLength] == '-' &&
      std::all_of(stem.begin(), stem.begin() + kIdLength, [](unsigned char c) { return std::isxdigit(c); }))
    stem.erase(0, kIdLength + 1);
  return stem;
}

Timestamp now() { return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now()); }

}  // namespace

std::string_view to_string(LogFormat format) { return format == LogFormat::Xes ? "xes" : "csv"; }

std::optional<LogFormat> detect_format(std::string_view explicit_format, std::string_view file_name) {
  const std::string f = lower(explicit_format);
  if (f == "xes") return LogFormat::Xes;
  if (f == "csv") return LogFormat::Csv;
  if (!f.empty()) return std::nullopt;
  const std::string ext = lower(fs::path(std::string(file_name)).extension().string());
  if (ext == ".xes") return LogFormat::Xes;
  if (ext == ".csv") return LogFormat::Csv;
  return std::nullopt;
}

Json entry_to_json(const LogStoreEntry& e) {
  Json out = {{"log_id", e.log_id},
              {"name", e.name},
              {"file_name", e.file_name},
              {"format", to_string(e.format)},
              {"size_bytes", e.size_bytes},
              {"ingested_at", format_iso8601(e.ingested_at)},
              {"statistics", statistics_to_json(e.statistics)}};
  if (e.csv_mapping) out["csv_mapping"] = csv_mapping_to_json(*e.csv_mapping);
  return out;
}

LogStore::LogStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

std::string LogStore::content_id(const std::string& content, LogFormat format, const CsvMapping& mapping) {
  std::string material = content;
  if (format == LogFormat::Csv) material += "\n#mapping:" + csv_mapping_to_json(mapping).dump();
  return sha256_hex(material).substr(0, kIdLength);
}

std::size_t LogStore::scan() {
  std::vector<fs::path> files;
  for (const auto& item : fs::directory_iterator(root_)) {
    if (!item.is_regular_file()) continue;
    const std::string ext = lower(item.path().extension().string());
    if (ext == ".xes" || ext == ".csv") files.push_back(item.path());
  }
  std::sort(files.begin(), files.end());

  std::size_t added = 0;
  for (const auto& path : files) {
    const auto format = *detect_format("", path.filename().string());
    try {
      CsvMapping mapping;
      if (format == LogFormat::Csv && fs::exists(sidecar_path(path)))
        mapping = csv_mapping_from_json(Json::parse(read_file(sidecar_path(path))));
      const std::string content = read_file(path);
      const std::string id = content_id(content, format, mapping);
      if (find_existing(id)) continue;

      auto log = std::make_shared<const EventLog>(parse_content(content, format, mapping, display_name(path)));
      Record rec;
      rec.entry = LogStoreEntry{id,      log->name(), path.filename().string(), format, content.size(), now(),
                                log_statistics(*log), std::nullopt};
      if (format == LogFormat::Csv) rec.entry.csv_mapping = mapping;
      rec.log = std::move(log);
      if (insert(std::move(rec)).created) ++added;
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", path.string(), e.what());
    }
  }
  return added;
}

std::optional<LogStore::AddResult> LogStore::find_existing(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return AddResult{it->second.entry, false};
}

LogStore::AddResult LogStore::insert(Record record) {
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = records_.try_emplace(record.entry.log_id, std::move(record));
  if (inserted) order_.push_back(it->first);
  return AddResult{it->second.entry, inserted};
}

LogStore::AddResult LogStore::add(const std::string& file_name, const std::string& content, LogFormat format,
                                  const CsvMapping& mapping) {
  const std::string id = content_id(content, format, mapping);
  if (auto existing = find_existing(id)) return *existing;

  const std::string stored_name = id + "-" + sanitize_file_name(file_name);
  const std::string display = display_name(fs::path(sanitize_file_name(file_name)));
  auto log = std::make_shared<const EventLog>(parse_content(content, format, mapping, display));

  const fs::path path = root_ / stored_name;
  write_file_atomically(path, content);
  if (format == LogFormat::Csv) write_file_atomically(sidecar_path(path), csv_mapping_to_json(mapping).dump(2));

  Record rec;
  rec.entry = LogStoreEntry{id, log->name(), stored_name, format, content.size(), now(), log_statistics(*log),
                            std::nullopt};
  if (format == LogFormat::Csv) rec.entry.csv_mapping = mapping;
  rec.log = std::move(log);
  return insert(std::move(rec));
}

LogStore::AddResult LogStore::add_log(const std::string& file_name, const EventLog& log) {
  return add(file_name, write_xes(log), LogFormat::Xes);
}

std::vector<LogStoreEntry> LogStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<LogStoreEntry> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(records_.at(id).entry);
  return out;
}

std::optional<LogStoreEntry> LogStore::entry(const std::string& log_id) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(log_id);
  if (it == records_.end()) return std::nullopt;
  return it->second.entry;
}

std::shared_ptr<const EventLog> LogStore::log(const std::string& log_id) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(log_id);
  if (it == records_.end()) throw NotFoundError("unknown log '" + log_id + "'");
  return it->second.log;
}

}  // namespace cpm::service
