#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ruelle {

/// 17 significant digits, the format used for every floating-point output.
std::string format_double(double x);

/// Minimal ordered JSON document for reports. Keys keep insertion order and
/// doubles print with 17 significant digits, so output is byte-stable.
class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  using Object = std::vector<std::pair<std::string, JsonValue>>;

  JsonValue() = default;  // null
  JsonValue(std::nullptr_t) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  JsonValue(std::int64_t i) : v_(i) {}
  JsonValue(std::uint64_t i) : v_(static_cast<std::int64_t>(i)) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(Array a) : v_(std::move(a)) {}
  JsonValue(Object o) : v_(std::move(o)) {}

  static JsonValue object() { return JsonValue(Object{}); }
  static JsonValue array() { return JsonValue(Array{}); }
  static JsonValue numbers(const std::vector<double>& xs);

  /// Appends key (objects) or element (arrays).
  JsonValue& set(std::string key, JsonValue value);
  JsonValue& push(JsonValue value);

  /// Pretty-printed with the given indent; a negative indent gives one line.
  std::string dump(int indent = 2) const;
  bool is_container() const {
    return std::holds_alternative<Array>(v_) || std::holds_alternative<Object>(v_);
  }

 private:
  void dump_to(std::string& out, int indent, int depth) const;

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_{nullptr};
};

}  // namespace ruelle
