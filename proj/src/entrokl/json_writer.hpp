#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace entrokl {

// Doubles rendered with 17 significant digits so equal values produce equal
// bytes; non-finite values degrade to null.
std::string format_double(double v);

std::string json_escape(std::string_view s);

// Minimal deterministic JSON emitter. Keys are written in call order; no
// whitespace. Reports must be byte-reproducible, which rules out leaving
// number formatting to a general-purpose serializer.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view s);
  JsonWriter& raw(std::string_view pre_rendered);

  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  bool need_comma_ = false;
};

}  // namespace entrokl
