#ifndef MASSART_ERRORS_HPP
#define MASSART_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace massart {

// Mirrors the status codes of the C API (massart.h).
enum class Status {
  Ok = 0,
  DomainError = 1,
  DataError = 2,
  Validation = 3,
  StreamExhausted = 4,
  ParseError = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, std::string msg)
      : std::runtime_error(std::move(msg)), status_(status) {}

  Status status() const noexcept { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void throw_domain(const std::string& msg) {
  throw Error(Status::DomainError, msg);
}

[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(Status::DataError, msg);
}

[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw Error(Status::ParseError, msg);
}

}  // namespace massart

#endif
