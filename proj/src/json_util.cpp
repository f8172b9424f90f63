#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace biloc::detail {

Json parse_json_text(const std::string& text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(std::string(what) + ": malformed JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
}

void Node::fail(const std::string& message) const {
  throw ParseError((path_.empty() ? std::string("<root>") : path_) + ": " + message);
}

void Node::expect_object(std::initializer_list<std::string_view> allowed) const {
  if (!value_.is_object()) fail("expected an object");
  for (const auto& item : value_.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](std::string_view k) { return k == item.key(); });
    if (!known) fail("unknown field '" + item.key() + "'");
  }
}

Node Node::field(std::string_view key) const {
  const std::string k(key);
  if (!value_.is_object()) fail("expected an object");
  auto it = value_.find(k);
  if (it == value_.end()) fail("missing field '" + k + "'");
  return Node(*it, path_.empty() ? k : path_ + "." + k);
}

std::size_t Node::array_size() const {
  if (!value_.is_array()) fail("expected an array");
  return value_.size();
}

Node Node::at(std::size_t index) const {
  if (!value_.is_array()) fail("expected an array");
  if (index >= value_.size()) fail("index " + std::to_string(index) + " out of range");
  return Node(value_[index], path_ + "[" + std::to_string(index) + "]");
}

double Node::number() const {
  if (!value_.is_number()) fail("expected a number");
  return value_.get<double>();
}

int Node::integer() const {
  if (!value_.is_number_integer()) fail("expected an integer");
  const auto v = value_.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
  return static_cast<int>(v);
}

std::uint64_t Node::uint64() const {
  if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<std::int64_t>() >= 0)) {
    fail("expected a non-negative integer");
  }
  return value_.get<std::uint64_t>();
}

bool Node::boolean() const {
  if (!value_.is_boolean()) fail("expected true or false");
  return value_.get<bool>();
}

std::string Node::string() const {
  if (!value_.is_string()) fail("expected a string");
  return value_.get<std::string>();
}

}  // namespace biloc::detail
