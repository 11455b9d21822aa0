#include "theta_extremal/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#ifndef THETA_EXTREMAL_VERSION
#define THETA_EXTREMAL_VERSION "0.0.0"
#endif

namespace theta_extremal {

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void dump_string(std::string &out, const std::string &s) {
  // Reuse nlohmann's escaping for strings.
  out += Json(s).dump();
}

void dump(std::string &out, const Json &v, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char *nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
  case Json::value_t::object: {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    out += nl;
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) {
        out += ",";
        out += nl;
      }
      first = false;
      out += pad;
      dump_string(out, it.key());
      out += indent > 0 ? ": " : ":";
      dump(out, it.value(), indent, level + 1);
    }
    out += nl;
    out += close_pad;
    out += "}";
    return;
  }
  case Json::value_t::array: {
    if (v.empty()) {
      out += "[]";
      return;
    }
    // Arrays of scalars stay on one line.
    bool scalar = true;
    for (const auto &e : v) {
      scalar = scalar && !e.is_structured();
    }
    out += "[";
    bool first = true;
    for (const auto &e : v) {
      if (!first) {
        out += scalar ? ", " : ",";
      }
      if (!scalar) {
        out += nl;
        out += pad;
      }
      first = false;
      dump(out, e, indent, level + 1);
    }
    if (!scalar) {
      out += nl;
      out += close_pad;
    }
    out += "]";
    return;
  }
  case Json::value_t::number_float: {
    const double d = v.get<double>();
    out += std::isfinite(d) ? format_double(d) : "null";
    return;
  }
  default:
    out += v.dump();
    return;
  }
}

} // namespace

std::string dump_json(const Json &value, int indent) {
  std::string out;
  dump(out, value, indent, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() +
                             ": " + ec.message());
  }
}

std::string library_version() { return THETA_EXTREMAL_VERSION; }

} // namespace theta_extremal
