#pragma once

// Deterministic, locale-independent text round-trips for doubles and
// integers. All file formats in this library go through these helpers so
// that identical values always serialize to identical bytes (shortest
// representation that parses back to the same double).

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "vrig/errors.hpp"

namespace vrig {

inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw std::invalid_argument("format_double: value does not fit buffer");
  return std::string(buf, ptr);
}

inline std::string format_int(int64_t value) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw std::invalid_argument("format_int: value does not fit buffer");
  return std::string(buf, ptr);
}

inline std::string format_uint(uint64_t value) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw std::invalid_argument("format_uint: value does not fit buffer");
  return std::string(buf, ptr);
}

// Parses an entire token as a double; partial consumption is an error.
inline double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(context + ": expected a number, got '" + std::string(token) + "'");
  return value;
}

inline int64_t parse_int(std::string_view token, const std::string& context) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(context + ": expected an integer, got '" + std::string(token) + "'");
  return value;
}

inline uint64_t parse_uint(std::string_view token, const std::string& context) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(context + ": expected an unsigned integer, got '" + std::string(token) + "'");
  return value;
}

}  // namespace vrig
