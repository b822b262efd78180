#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lrlprep {

// Streaming, pretty-printed JSON emitter with fixed number formatting.
// Callers emit object keys in sorted order themselves.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(double d);
  JsonWriter& value(std::int64_t i);
  JsonWriter& value(std::uint64_t u);
  JsonWriter& value(int i) { return value(static_cast<std::int64_t>(i)); }
  JsonWriter& value(bool b);
  JsonWriter& null();

  // Output so far plus a trailing newline once the root is closed.
  std::string str() const;

 private:
  void before_value();
  void newline();

  struct Frame {
    bool object;
    std::size_t items = 0;
  };
  std::string out_;
  std::vector<Frame> stack_;
  bool after_key_ = false;
};

// "%.12g"; negative zero prints as 0, non-finite values as null.
std::string format_number(double d);

std::string json_quote(std::string_view s);

}  // namespace lrlprep
