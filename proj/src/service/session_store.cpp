#include "cpm/service/session_store.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cpm/service/errors.hpp"

namespace cpm::service {
namespace fs = std::filesystem;

namespace {

SessionSlice compute_slice(const EventLog& log, std::string label, FilterSpec filter) {
  auto filtered = std::make_shared<const EventLog>(apply_filter(log, filter));
  ModelSlice slice{std::move(label), std::move(filter), discover_dfg(*filtered), log_statistics(*filtered)};
  return SessionSlice{std::move(slice), std::move(filtered)};
}

void check_pair(const ComparisonSession& s, std::size_t left, std::size_t right) {
  if (left == right)
    throw ConflictError("active pair needs two different slices, got " + std::to_string(left) + " twice");
  if (left >= s.slices.size() || right >= s.slices.size())
    throw ConflictError("slice index out of range: session has " + std::to_string(s.slices.size()) + " slice(s)");
}

}  // namespace

Json session_to_json(const ComparisonSession& s) {
  Json slices = Json::array();
  for (std::size_t i = 0; i < s.slices.size(); ++i) {
    Json j = slice_to_json(s.slices[i].slice);
    j["index"] = i;
    slices.push_back(std::move(j));
  }
  Json pair = nullptr;
  if (s.active_pair) pair = {{"left_index", s.active_pair->first}, {"right_index", s.active_pair->second}};
  return {{"session_id", s.session_id},
          {"log_id", s.log_id},
          {"slices", std::move(slices)},
          {"active_pair", std::move(pair)},
          {"has_comparison", s.result.has_value()}};
}

SessionStore::SessionStore(const LogStore& logs, fs::path metadata_file)
    : logs_(logs), metadata_file_(std::move(metadata_file)) {}

std::string SessionStore::new_id() {
  static std::mutex m;
  static std::mt19937_64 engine{std::random_device{}()};
  std::lock_guard lock(m);
  static constexpr char hex[] = "0123456789abcdef";
  std::uint64_t v = engine();
  std::string out;
  for (int i = 0; i < 16; ++i, v >>= 4) out += hex[v & 0xF];
  return out;
}

std::size_t SessionStore::load() {
  if (!fs::exists(metadata_file_)) return 0;
  std::ifstream in(metadata_file_);
  const Json doc = Json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.contains("sessions")) {
    spdlog::warn("ignoring unreadable session file {}", metadata_file_.string());
    return 0;
  }

  std::size_t restored = 0;
  for (const auto& j : doc["sessions"]) {
    try {
      auto s = std::make_shared<ComparisonSession>();
      s->session_id = j.at("session_id").get<std::string>();
      s->log_id = j.at("log_id").get<std::string>();
      const auto log = logs_.log(s->log_id);
      for (const auto& sj : j.at("slices"))
        s->slices.push_back(compute_slice(*log, sj.at("label").get<std::string>(), filter_from_json(sj.at("filter"))));
      if (const auto it = j.find("active_pair"); it != j.end() && !it->is_null()) {
        const auto l = it->at(0).get<std::size_t>();
        const auto r = it->at(1).get<std::size_t>();
        check_pair(*s, l, r);
        s->active_pair.emplace(l, r);
        Timestamp created = std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
        if (j.contains("result_created_at"))
          created = parse_iso8601(j["result_created_at"].get<std::string>()).value_or(created);
        s->result = compare(s->slices[l].slice, s->slices[r].slice, created);
      }
      auto slot_ptr = std::make_shared<Slot>();
      slot_ptr->snapshot = std::move(s);
      std::lock_guard lock(map_mutex_);
      const std::string id = slot_ptr->snapshot->session_id;
      if (slots_.emplace(id, std::move(slot_ptr)).second) {
        order_.push_back(id);
        ++restored;
      }
    } catch (const std::exception& e) {
      spdlog::warn("dropping stored session: {}", e.what());
    }
  }
  return restored;
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& session_id) const {
  std::lock_guard lock(map_mutex_);
  const auto it = slots_.find(session_id);
  if (it == slots_.end()) throw NotFoundError("unknown session '" + session_id + "'");
  return it->second;
}

void SessionStore::publish(Slot& s, std::shared_ptr<const ComparisonSession> next) {
  {
    std::lock_guard lock(s.snapshot_mutex);
    s.snapshot = std::move(next);
  }
  persist();
}

void SessionStore::persist() {
  std::lock_guard persist_lock(persist_mutex_);
  Json sessions = Json::array();
  for (const auto& s : list()) {
    Json slices = Json::array();
    for (const auto& sl : s->slices)
      slices.push_back({{"label", sl.slice.label}, {"filter", filter_to_json(sl.slice.filter)}});
    Json j = {{"session_id", s->session_id}, {"log_id", s->log_id}, {"slices", std::move(slices)}};
    j["active_pair"] = s->active_pair ? Json::array({s->active_pair->first, s->active_pair->second}) : Json(nullptr);
    if (s->result) j["result_created_at"] = format_iso8601(s->result->created_at);
    sessions.push_back(std::move(j));
  }
  const Json doc = {{"version", 1}, {"sessions", std::move(sessions)}};
  const fs::path tmp = metadata_file_.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) {
      spdlog::error("cannot write session file {}", tmp.string());
      return;
    }
  }
  fs::rename(tmp, metadata_file_);
}

std::shared_ptr<const ComparisonSession> SessionStore::create(const std::string& log_id) {
  logs_.log(log_id);  // existence check
  auto s = std::make_shared<ComparisonSession>();
  s->log_id = log_id;
  auto slot_ptr = std::make_shared<Slot>();
  {
    std::lock_guard lock(map_mutex_);
    do {
      s->session_id = new_id();
    } while (slots_.count(s->session_id));
    slot_ptr->snapshot = s;
    slots_.emplace(s->session_id, slot_ptr);
    order_.push_back(s->session_id);
  }
  persist();
  return s;
}

std::shared_ptr<const ComparisonSession> SessionStore::get(const std::string& session_id) const {
  return slot(session_id)->current();
}

std::vector<std::shared_ptr<const ComparisonSession>> SessionStore::list() const {
  std::lock_guard lock(map_mutex_);
  std::vector<std::shared_ptr<const ComparisonSession>> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(slots_.at(id)->current());
  return out;
}

std::pair<std::shared_ptr<const ComparisonSession>, std::size_t> SessionStore::add_slice(const std::string& session_id,
                                                                                         std::string label,
                                                                                         FilterSpec filter) {
  const auto s = slot(session_id);
  std::lock_guard write(s->write_mutex);
  const auto current = s->current();
  const auto log = logs_.log(current->log_id);
  auto next = std::make_shared<ComparisonSession>(*current);
  next->slices.push_back(compute_slice(*log, std::move(label), std::move(filter)));
  const std::size_t index = next->slices.size() - 1;
  publish(*s, next);
  return {next, index};
}

std::shared_ptr<const ComparisonSession> SessionStore::set_active_pair(const std::string& session_id,
                                                                       std::size_t left, std::size_t right) {
  const auto s = slot(session_id);
  std::lock_guard write(s->write_mutex);
  const auto current = s->current();
  check_pair(*current, left, right);
  auto next = std::make_shared<ComparisonSession>(*current);
  next->active_pair.emplace(left, right);
  next->result = compare(next->slices[left].slice, next->slices[right].slice);
  publish(*s, next);
  return next;
}

}  // namespace cpm::service
