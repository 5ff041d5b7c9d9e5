#pragma once

#include <cstddef>
#include <string>

#include "cpm/service/log_store.hpp"
#include "cpm/service/session_store.hpp"

namespace httplib {
class Server;
}

namespace cpm::service {

inline constexpr std::size_t kDefaultMaxUploadBytes = 256u * 1024u * 1024u;

/// REST surface over a log store and a session store. Every 4xx response
/// body is `{"error": {"code": ..., "message": ...}}`.
class HttpApi {
public:
  HttpApi(LogStore& logs, SessionStore& sessions) : logs_(logs), sessions_(sessions) {}

  /// Registers all /api routes and error handlers, and caps request
  /// bodies at `max_upload_bytes`.
  void install(httplib::Server& server, std::size_t max_upload_bytes = kDefaultMaxUploadBytes);

private:
  LogStore& logs_;
  SessionStore& sessions_;
};

}  // namespace cpm::service
