#include "ruelle/output.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ruelle {

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

JsonValue JsonValue::numbers(const std::vector<double>& xs) {
  Array a;
  a.reserve(xs.size());
  for (double x : xs) a.emplace_back(x);
  return JsonValue(std::move(a));
}

JsonValue& JsonValue::set(std::string key, JsonValue value) {
  std::get<Object>(v_).emplace_back(std::move(key), std::move(value));
  return *this;
}

JsonValue& JsonValue::push(JsonValue value) {
  std::get<Array>(v_).push_back(std::move(value));
  return *this;
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

namespace {

void escape(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(c));
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

bool scalar_only(const JsonValue::Array& a) {
  for (const auto& v : a) {
    if (v.is_container()) return false;
  }
  return true;
}

}  // namespace

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (auto b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (auto i = std::get_if<std::int64_t>(&v_)) {
    out += fmt::format("{}", *i);
  } else if (auto d = std::get_if<double>(&v_)) {
    out += std::isfinite(*d) ? format_double(*d) : "null";
  } else if (auto s = std::get_if<std::string>(&v_)) {
    escape(out, *s);
  } else if (auto a = std::get_if<Array>(&v_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    // Arrays of scalars stay on one line to keep numeric tables compact.
    bool inline_array = scalar_only(*a);
    out += '[';
    for (std::size_t k = 0; k < a->size(); ++k) {
      if (k > 0) out += inline_array ? ", " : ",";
      if (!inline_array) newline(depth + 1);
      (*a)[k].dump_to(out, indent, depth + 1);
    }
    if (!inline_array) newline(depth);
    out += ']';
  } else if (auto o = std::get_if<Object>(&v_)) {
    if (o->empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t k = 0; k < o->size(); ++k) {
      if (k > 0) out += ',';
      newline(depth + 1);
      escape(out, (*o)[k].first);
      out += ": ";
      (*o)[k].second.dump_to(out, indent, depth + 1);
    }
    newline(depth);
    out += '}';
  }
}


}  // namespace ruelle
