// io.cpp — number formatting and config echo blocks.
#include "qbhop/io.hpp"

#include <charconv>
#include <cstdio>

namespace qbhop {

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::string config_block(const ConfigEcho& echo) {
  std::string out;
  for (const auto& [key, value] : echo) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string config_comment_block(const ConfigEcho& echo) {
  std::string out;
  for (const auto& [key, value] : echo) {
    out += "# ";
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace qbhop
