#pragma once

// Strict-schema helpers for reading nlohmann::json documents with readable
// error paths ("customers[3].demand: expected a number").

#include <initializer_list>
#include <string>
#include <string_view>

#include "biloc/error.hpp"
#include "json.hpp"

namespace biloc::detail {

using Json = nlohmann::json;

// Parses text and converts nlohmann's byte offset into a line/column.
Json parse_json_text(const std::string& text, std::string_view what);

class Node {
 public:
  Node(const Json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const Json& json() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const;

  // Rejects any key outside `allowed`.
  void expect_object(std::initializer_list<std::string_view> allowed) const;
  Node field(std::string_view key) const;
  bool has(std::string_view key) const { return value_.contains(std::string(key)); }

  std::size_t array_size() const;
  Node at(std::size_t index) const;

  double number() const;
  int integer() const;
  std::uint64_t uint64() const;
  bool boolean() const;
  std::string string() const;

 private:
  const Json& value_;
  std::string path_;
};

}  // namespace biloc::detail
