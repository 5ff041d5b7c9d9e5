#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cpm/csv.hpp"
#include "cpm/event_log.hpp"
#include "cpm/json_forms.hpp"

namespace cpm::service {

enum class LogFormat { Xes, Csv };

std::string_view to_string(LogFormat format);
/// From an explicit "xes"/"csv" or, failing that, the file extension.
std::optional<LogFormat> detect_format(std::string_view explicit_format, std::string_view file_name);

struct LogStoreEntry {
  std::string log_id;
  std::string name;
  std::string file_name;
  LogFormat format = LogFormat::Xes;
  std::uintmax_t size_bytes = 0;
  Timestamp ingested_at;
  LogStatistics statistics;
  std::optional<CsvMapping> csv_mapping;
};

Json entry_to_json(const LogStoreEntry& entry);

/// Event logs backed by files in one root directory. A log's id is a
/// prefix of the SHA-256 of its bytes (plus the column mapping for CSV), so
/// uploading the same content twice yields the same entry. CSV files keep
/// their mapping in a `<file>.mapping.json` sidecar.
class LogStore {
public:
  explicit LogStore(std::filesystem::path root);

  /// Ingests every .xes/.csv file under the root. Files that fail to parse
  /// are logged and skipped. Returns the number of logs registered.
  std::size_t scan();

  struct AddResult {
    LogStoreEntry entry;
    bool created = false;
  };

  /// Parses `content`, writes it under the root and registers it. Parse and
  /// ingestion errors propagate unchanged and leave the store untouched.
  AddResult add(const std::string& file_name, const std::string& content, LogFormat format,
                const CsvMapping& mapping = {});

  /// Registers an in-memory log by writing it out as XES.
  AddResult add_log(const std::string& file_name, const EventLog& log);

  std::vector<LogStoreEntry> list() const;
  std::optional<LogStoreEntry> entry(const std::string& log_id) const;
  /// Throws NotFoundError for unknown ids.
  std::shared_ptr<const EventLog> log(const std::string& log_id) const;

  const std::filesystem::path& root() const noexcept { return root_; }

  static std::string content_id(const std::string& content, LogFormat format, const CsvMapping& mapping);

private:
  struct Record {
    LogStoreEntry entry;
    std::shared_ptr<const EventLog> log;
  };

  std::optional<AddResult> find_existing(const std::string& id) const;
  AddResult insert(Record record);

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Record> records_;
  std::vector<std::string> order_;
};

}  // namespace cpm::service
