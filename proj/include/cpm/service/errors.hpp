#pragma once

#include "cpm/error.hpp"

namespace cpm::service {

class NotFoundError : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "not_found"; }
};

class ConflictError : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "conflict"; }
};

}  // namespace cpm::service
