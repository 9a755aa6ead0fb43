// Copyright 2026 The CBL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBL_JSON_HPP_
#define CBL_JSON_HPP_

// Order-preserving JSON document model. Maps are vectors of members so that
// iteration order is the source order, and numbers keep their lexical text.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cbl/error.hpp"

namespace cbl {

struct JsonNull {
  friend bool operator==(JsonNull, JsonNull) { return true; }
};

struct JsonNumber {
  std::string lexical;
  friend bool operator==(const JsonNumber&, const JsonNumber&) = default;
};

class JsonValue;
struct JsonMember;

using JsonArray = std::vector<JsonValue>;
using JsonMap = std::vector<JsonMember>;

class JsonValue {
 public:
  using Storage =
      std::variant<JsonNull, bool, JsonNumber, std::string, JsonArray, JsonMap>;

  JsonValue() = default;
  JsonValue(JsonNull) {}
  JsonValue(bool b) : data_(b) {}
  JsonValue(JsonNumber n) : data_(std::move(n)) {}
  JsonValue(std::string s) : data_(std::move(s)) {}
  JsonValue(const char* s) : data_(std::string(s)) {}
  JsonValue(JsonArray a) : data_(std::move(a)) {}
  JsonValue(JsonMap m) : data_(std::move(m)) {}

  static JsonValue number(std::string lexical) {
    return JsonValue(JsonNumber{std::move(lexical)});
  }

  bool is_null() const { return std::holds_alternative<JsonNull>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_number() const { return std::holds_alternative<JsonNumber>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_array() const { return std::holds_alternative<JsonArray>(data_); }
  bool is_map() const { return std::holds_alternative<JsonMap>(data_); }
  bool is_container() const { return is_array() || is_map(); }

  bool as_bool() const { return std::get<bool>(data_); }
  const JsonNumber& as_number() const { return std::get<JsonNumber>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const JsonArray& as_array() const { return std::get<JsonArray>(data_); }
  const JsonMap& as_map() const { return std::get<JsonMap>(data_); }

  const Storage& storage() const { return data_; }

  friend bool operator==(const JsonValue& a, const JsonValue& b);

 private:
  Storage data_;
};

struct JsonMember {
  std::string key;
  JsonValue value;
  friend bool operator==(const JsonMember&, const JsonMember&) = default;
};

inline bool operator==(const JsonValue& a, const JsonValue& b) {
  return a.data_ == b.data_;
}

/// True iff both trees are identical, map order and number text included.
inline bool structural_equal(const JsonValue& a, const JsonValue& b) {
  return a == b;
}

/// A non-empty array whose elements are all numbers. The codec stores such
/// arrays as a single literal value rather than walking their elements.
inline bool is_data_array(const JsonValue& v) {
  if (!v.is_array() || v.as_array().empty()) return false;
  for (const auto& e : v.as_array()) {
    if (!e.is_number()) return false;
  }
  return true;
}

/// Scalars and data arrays occupy one value slot in the codec.
inline bool is_leaf(const JsonValue& v) {
  return !v.is_container() || is_data_array(v);
}

namespace detail {

inline constexpr int kMaxJsonDepth = 512;

class JsonParser {
 public:
  explicit JsonParser(std::string_view text) : text_(text) {}

  JsonValue parse_document() {
    skip_ws();
    JsonValue v = parse_value(0);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(pos_, what);
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      ++pos_;
    }
  }

  char peek() const {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_literal(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) fail("invalid literal");
    pos_ += lit.size();
  }

  JsonValue parse_value(int depth) {
    if (depth > kMaxJsonDepth) fail("nesting too deep");
    switch (peek()) {
      case '{': return parse_map(depth);
      case '[': return parse_array(depth);
      case '"': return JsonValue(parse_string());
      case 't': expect_literal("true"); return JsonValue(true);
      case 'f': expect_literal("false"); return JsonValue(false);
      case 'n': expect_literal("null"); return JsonValue(JsonNull{});
      default: return parse_number();
    }
  }

  JsonValue parse_map(int depth) {
    expect('{');
    JsonMap members;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return JsonValue(std::move(members));
    }
    for (;;) {
      skip_ws();
      std::size_t key_pos = pos_;
      if (peek() != '"') fail("expected string key");
      std::string key = parse_string();
      for (const auto& m : members) {
        if (m.key == key) {
          throw Error(Errc::kDuplicateKey, "duplicate key \"" + key +
                                               "\" at byte " +
                                               std::to_string(key_pos));
        }
      }
      skip_ws();
      expect(':');
      skip_ws();
      JsonValue value = parse_value(depth + 1);
      members.push_back(JsonMember{std::move(key), std::move(value)});
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return JsonValue(std::move(members));
    }
  }

  JsonValue parse_array(int depth) {
    expect('[');
    JsonArray items;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return JsonValue(std::move(items));
    }
    for (;;) {
      skip_ws();
      items.push_back(parse_value(depth + 1));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return JsonValue(std::move(items));
    }
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  JsonValue parse_number() {
    std::size_t start = pos_;
    auto at = [&](std::size_t i) {
      return i < text_.size() ? text_[i] : '\0';
    };
    if (at(pos_) == '-') ++pos_;
    if (at(pos_) == '0') {
      ++pos_;
    } else if (is_digit(at(pos_))) {
      while (is_digit(at(pos_))) ++pos_;
    } else {
      fail("invalid value");
    }
    if (at(pos_) == '.') {
      ++pos_;
      if (!is_digit(at(pos_))) fail("digit expected after '.'");
      while (is_digit(at(pos_))) ++pos_;
    }
    if (at(pos_) == 'e' || at(pos_) == 'E') {
      ++pos_;
      if (at(pos_) == '+' || at(pos_) == '-') ++pos_;
      if (!is_digit(at(pos_))) fail("digit expected in exponent");
      while (is_digit(at(pos_))) ++pos_;
    }
    return JsonValue::number(std::string(text_.substr(start, pos_ - start)));
  }

  unsigned parse_hex4() {
    if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
    unsigned v = 0;
    for (int i = 0; i < 4; ++i) {
      char c = text_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= unsigned(c - '0');
      else if (c >= 'a' && c <= 'f') v |= unsigned(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= unsigned(c - 'A' + 10);
      else fail("invalid hex digit");
    }
    return v;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += char(cp);
    } else if (cp < 0x800) {
      out += char(0xC0 | (cp >> 6));
      out += char(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += char(0xE0 | (cp >> 12));
      out += char(0x80 | ((cp >> 6) & 0x3F));
      out += char(0x80 | (cp & 0x3F));
    } else {
      out += char(0xF0 | (cp >> 18));
      out += char(0x80 | ((cp >> 12) & 0x3F));
      out += char(0x80 | ((cp >> 6) & 0x3F));
      out += char(0x80 | (cp & 0x3F));
    }
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    for (;;) {
      char c = peek();
      ++pos_;
      if (c == '"') return out;
      if (static_cast<unsigned char>(c) < 0x20) {
        --pos_;
        fail("control character in string");
      }
      if (c != '\\') {
        out += c;
        continue;
      }
      char e = peek();
      ++pos_;
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          std::uint32_t cp = parse_hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (text_.substr(pos_, 2) != "\\u") fail("unpaired surrogate");
            pos_ += 2;
            std::uint32_t lo = parse_hex4();
            if (lo < 0xDC00 || lo > 0xDFFF) fail("invalid low surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          --pos_;
          fail("invalid escape");
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline void write_json_string(std::string& out, std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += "\\u00";
          out += kHex[(c >> 4) & 0xF];
          out += kHex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void write_json(std::string& out, const JsonValue& v, int indent,
                       int level) {
  auto newline = [&](int lvl) {
    if (indent <= 0) return;
    out += '\n';
    out.append(std::size_t(indent * lvl), ' ');
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, JsonNull>) {
          out += "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, JsonNumber>) {
          out += x.lexical;
        } else if constexpr (std::is_same_v<T, std::string>) {
          write_json_string(out, x);
        } else if constexpr (std::is_same_v<T, JsonArray>) {
          out += '[';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ',';
            newline(level + 1);
            write_json(out, x[i], indent, level + 1);
          }
          if (!x.empty()) newline(level);
          out += ']';
        } else {
          out += '{';
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ',';
            newline(level + 1);
            write_json_string(out, x[i].key);
            out += indent > 0 ? ": " : ":";
            write_json(out, x[i].value, indent, level + 1);
          }
          if (!x.empty()) newline(level);
          out += '}';
        }
      },
      v.storage());
}

}  // namespace detail

/// Parses UTF-8 JSON text. Throws SyntaxError (with byte offset) on malformed
/// input and Error(kDuplicateKey) when a map repeats a key.
inline JsonValue parse_json(std::string_view text) {
  return detail::JsonParser(text).parse_document();
}

/// Compact serialization when indent is 0, otherwise pretty-printed.
inline std::string serialize_json(const JsonValue& v, int indent = 0) {
  std::string out;
  detail::write_json(out, v, indent, 0);
  return out;
}

}  // namespace cbl

#endif  // CBL_JSON_HPP_
