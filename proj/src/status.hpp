#ifndef RW_STATUS_HPP
#define RW_STATUS_HPP

#include <stdexcept>
#include <string>

#include "randwalk/randwalk.h"

namespace rw {

// Exception carrying a C-interface status code; the C wrapper turns it
// back into the code plus a thread-local message.
class Error : public std::runtime_error {
public:
  Error(rw_status code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  rw_status code() const { return code_; }

private:
  rw_status code_;
};

[[noreturn]] inline void fail(rw_status code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace rw

#endif
