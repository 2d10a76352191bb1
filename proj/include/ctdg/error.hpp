#pragma once

#include <stdexcept>
#include <string>

namespace ctdg {

/// Raised for precondition violations, singular solves and aborted steps.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message)
{
  if (!condition) throw Error(message);
}

} // namespace ctdg
