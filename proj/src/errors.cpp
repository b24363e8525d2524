#include "revpref/errors.hpp"

#include <cstdlib>
#include <string>

namespace revpref {

Limits Limits::from_environment() {
  Limits limits;
  if (const char* value = std::getenv("REVPREF_MAX_ENUM"); value != nullptr && *value != '\0') {
    std::size_t consumed = 0;
    unsigned long long parsed = 0;
    try {
      parsed = std::stoull(value, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed == 0 || value[consumed] != '\0' || parsed == 0) {
      throw std::invalid_argument("REVPREF_MAX_ENUM must be a positive integer");
    }
    limits.max_enum = static_cast<std::size_t>(parsed);
  }
  return limits;
}

}  // namespace revpref
