// Copyright (c) 2026 rawnet3-cpp project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWNET3_COMMON_HPP_
#define RAWNET3_COMMON_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace rawnet3 {

// Error taxonomy, mapped to CLI exit codes by tools/:
//   ConfigError -> 2, DataError -> 3, NumericalError -> 4.
// ContractViolation signals a broken API precondition (a bug in the caller).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

namespace detail {
inline void format_into(std::ostringstream&) {}
template <typename A, typename... Rest>
void format_into(std::ostringstream& os, const A& a, const Rest&... rest) {
  os << a;
  format_into(os, rest...);
}
}  // namespace detail

template <typename... Args>
std::string strcat_msg(const Args&... args) {
  std::ostringstream os;
  detail::format_into(os, args...);
  return os.str();
}

#define RAWNET3_CHECK(cond, ...)                                            \
  do {                                                                      \
    if (!(cond)) {                                                          \
      throw ::rawnet3::ContractViolation(                                   \
          ::rawnet3::strcat_msg("check failed: " #cond " | ", __VA_ARGS__)); \
    }                                                                       \
  } while (0)

}  // namespace rawnet3

#endif  // RAWNET3_COMMON_HPP_
