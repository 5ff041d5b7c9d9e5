#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpm/comparison.hpp"
#include "cpm/json_forms.hpp"
#include "cpm/service/log_store.hpp"

namespace cpm::service {

struct SessionSlice {
  ModelSlice slice;
  std::shared_ptr<const EventLog> filtered_log;
};

/// Immutable snapshot of a comparison session. Any number of slices may be
/// stored; `active_pair` selects the two that are compared.
struct ComparisonSession {
  std::string session_id;
  std::string log_id;
  std::vector<SessionSlice> slices;
  std::optional<std::pair<std::size_t, std::size_t>> active_pair;
  std::optional<ComparisonResult> result;
};

Json session_to_json(const ComparisonSession& session);

/// Sessions over logs in a LogStore, persisted as one JSON metadata file
/// (filters, labels and the active pair; models are recomputed on load).
///
/// Mutations of one session are serialized by a per-session lock and
/// publish a fresh snapshot; readers never block on analytics.
class SessionStore {
public:
  SessionStore(const LogStore& logs, std::filesystem::path metadata_file);

  /// Restores sessions from the metadata file, if it exists. Sessions whose
  /// log is no longer available are dropped with a warning.
  std::size_t load();

  /// NotFoundError for an unknown log.
  std::shared_ptr<const ComparisonSession> create(const std::string& log_id);

  std::shared_ptr<const ComparisonSession> get(const std::string& session_id) const;
  std::vector<std::shared_ptr<const ComparisonSession>> list() const;

  /// Filters the session log, discovers its model and appends the slice.
  /// ValidationError for invalid filters. Returns the new slice index.
  std::pair<std::shared_ptr<const ComparisonSession>, std::size_t> add_slice(const std::string& session_id,
                                                                             std::string label, FilterSpec filter);

  /// ConflictError when the indices are equal or out of range.
  std::shared_ptr<const ComparisonSession> set_active_pair(const std::string& session_id, std::size_t left,
                                                           std::size_t right);

private:
  struct Slot {
    std::mutex write_mutex;
    mutable std::mutex snapshot_mutex;
    std::shared_ptr<const ComparisonSession> snapshot;

    std::shared_ptr<const ComparisonSession> current() const {
      std::lock_guard lock(snapshot_mutex);
      return snapshot;
    }
  };

  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  void publish(Slot& slot, std::shared_ptr<const ComparisonSession> next);
  void persist();
  static std::string new_id();

  const LogStore& logs_;
  std::filesystem::path metadata_file_;

  mutable std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::vector<std::string> order_;

  std::mutex persist_mutex_;
};

}  // namespace cpm::service
