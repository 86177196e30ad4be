// Copyright 2026 The expertgame Authors
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
//
// Internal: a minimal JSON emitter for the byte-stable outputs.  Parsing
// uses a full library; emission does not, because the stability contract
// pins the exact float format (%.17g) and key order.  Not installed.

#ifndef EXPERTGAME_SRC_JSON_WRITER_H_
#define EXPERTGAME_SRC_JSON_WRITER_H_

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "expertgame/numeric.hpp"

namespace expertgame {
namespace internal {

class JsonWriter {
 public:
  void BeginObject() {
    Separate();
    out_ += '{';
    fresh_.push_back(true);
  }
  void EndObject() {
    out_ += '}';
    fresh_.pop_back();
  }
  void BeginArray() {
    Separate();
    out_ += '[';
    fresh_.push_back(true);
  }
  void EndArray() {
    out_ += ']';
    fresh_.pop_back();
  }
  void Key(std::string_view name) {
    Separate();
    Quote(name);
    out_ += ':';
    pending_value_ = true;
  }
  void String(std::string_view value) {
    Separate();
    Quote(value);
  }
  void Number(double value) {
    Separate();
    out_ += FormatG17(value);
  }
  void Int(int64_t value) {
    Separate();
    out_ += std::to_string(value);
  }
  void UInt(uint64_t value) {
    Separate();
    out_ += std::to_string(value);
  }
  void Bool(bool value) {
    Separate();
    out_ += value ? "true" : "false";
  }
  // Embeds pre-serialized JSON verbatim (used for the config echo).
  void Raw(std::string_view json) {
    Separate();
    out_ += json;
  }

  const std::string& str() const { return out_; }

 private:
  // Inserts the comma between container elements.  A value right after a key
  // never takes one; everything else does unless it opens the container.
  void Separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (fresh_.empty()) return;
    if (fresh_.back()) {
      fresh_.back() = false;
    } else {
      out_ += ',';
    }
  }

  void Quote(std::string_view text) {
    out_ += '"';
    for (char c : text) {
      switch (c) {
        case '"':
          out_ += "\\\"";
          break;
        case '\\':
          out_ += "\\\\";
          break;
        case '\n':
          out_ += "\\n";
          break;
        case '\r':
          out_ += "\\r";
          break;
        case '\t':
          out_ += "\\t";
          break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> fresh_;
  bool pending_value_ = false;
};

}  // namespace internal
}  // namespace expertgame

#endif  // EXPERTGAME_SRC_JSON_WRITER_H_
