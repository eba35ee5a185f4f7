#include "ggt/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace ggt {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

Json make_report(std::string_view command, Json params, const std::vector<ReportInput>& inputs, std::uint64_t seed,
                 Json body) {
  Json r;
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["params"] = params.is_null() ? Json::object() : std::move(params);
  Json in = Json::array();
  for (const auto& i : inputs) in.push_back({{"role", i.role}, {"path", i.path}, {"sha256", i.sha256}});
  r["inputs"] = std::move(in);
  r["seed"] = seed;
  for (auto& [k, v] : body.items()) r[k] = v;
  return r;
}

namespace {

bool inline_value(const Json& v) {
  if (v.is_object()) return false;
  if (v.is_array())
    for (const auto& x : v)
      if (!inline_value(x)) return false;
  return true;
}

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out = "[";
    bool first = true;
    for (const auto& x : v) {
      out += (first ? "" : " ") + scalar(x);
      first = false;
    }
    return out + "]";
  }
  return v.dump();
}

void render(const Json& obj, const std::string& indent, std::string& out) {
  for (const auto& [key, v] : obj.items()) {
    if (inline_value(v)) {
      out += indent + key + ": " + scalar(v) + "\n";
    } else if (v.is_object()) {
      out += indent + key + ":\n";
      render(v, indent + "  ", out);
    } else {
      out += indent + key + ":\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          out += indent + "  -\n";
          render(item, indent + "    ", out);
        } else {
          out += indent + "  - " + scalar(item) + "\n";
        }
      }
    }
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  render(report, "", out);
  return out;
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace ggt
