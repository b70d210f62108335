#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hqmap/code/record.hpp"
#include "hqmap/diagnostics.hpp"

namespace hqmap {

// Fully expanded machine code: a flat list of timed records plus metadata.
// Serialized as '#hqmap-syscode v1', one record per line:
//   start duration OPCODE x y tag            (one cell)
//   start duration OPCODE x1 y1 x2 y2 tag    (two cells)
struct syscode {
  std::vector<std::pair<std::string, std::string>> meta;
  tag_table tags;
  std::vector<record> records;

  std::string_view meta_get(std::string_view key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return {};
  }

  void meta_set(std::string_view key, std::string_view value) {
    for (auto& [k, v] : meta)
      if (k == key) {
        v = value;
        return;
      }
    meta.emplace_back(key, value);
  }
};

namespace detail {

inline void append_u64(std::string& out, uint64_t v) {
  char buf[20];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

inline void append_i32(std::string& out, int32_t v) {
  char buf[12];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

// splits on single spaces, no escaping anywhere in the format
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (pos < line.size()) {
    size_t sp = line.find(' ', pos);
    if (sp == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return out;
}

template <typename T>
T parse_num(std::string_view f, uint32_t line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw parse_error({line, 1}, std::string("bad ") + what + " '" + std::string(f) + "'");
  return v;
}

} // namespace detail

inline void write_syscode(const syscode& code, std::string& out) {
  out += "#hqmap-syscode v1\n";
  for (const auto& [k, v] : code.meta) {
    out += "#meta ";
    out += k;
    out += ' ';
    out += v;
    out += '\n';
  }
  for (const record& r : code.records) {
    detail::append_u64(out, r.start);
    out += ' ';
    detail::append_u64(out, r.duration);
    out += ' ';
    out += opcode_name(r.op);
    out += ' ';
    detail::append_i32(out, r.a.x);
    out += ' ';
    detail::append_i32(out, r.a.y);
    if (!r.one_cell()) {
      out += ' ';
      detail::append_i32(out, r.b.x);
      out += ' ';
      detail::append_i32(out, r.b.y);
    }
    out += ' ';
    out += code.tags.name(r.tag);
    out += '\n';
  }
}

inline std::string write_syscode(const syscode& code) {
  std::string out;
  out.reserve(64 + code.records.size() * 40);
  write_syscode(code, out);
  return out;
}

inline syscode read_syscode(std::string_view text) {
  syscode code;
  uint32_t line_no = 0;
  size_t pos = 0;
  bool saw_header = false;

  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;

    if (line[0] == '#') {
      if (line == "#hqmap-syscode v1") {
        saw_header = true;
        continue;
      }
      if (line.substr(0, 6) == "#meta ") {
        std::string_view rest = line.substr(6);
        size_t sp = rest.find(' ');
        if (sp == std::string_view::npos)
          throw parse_error({line_no, 1}, "meta line needs a key and a value");
        code.meta.emplace_back(std::string(rest.substr(0, sp)),
                               std::string(rest.substr(sp + 1)));
        continue;
      }
      throw parse_error({line_no, 1}, "unknown directive '" + std::string(line) + "'");
    }

    if (!saw_header)
      throw parse_error({line_no, 1}, "missing '#hqmap-syscode v1' header");

    auto f = detail::split_fields(line);
    if (f.size() != 6 && f.size() != 8)
      throw parse_error({line_no, 1}, "record needs 6 or 8 fields, got " +
                                          std::to_string(f.size()));
    record r;
    r.start = detail::parse_num<uint64_t>(f[0], line_no, "start");
    r.duration = detail::parse_num<uint64_t>(f[1], line_no, "duration");
    auto op = lookup_opcode(f[2]);
    if (!op) throw parse_error({line_no, 1}, "unknown opcode '" + std::string(f[2]) + "'");
    r.op = *op;
    r.a.x = detail::parse_num<int32_t>(f[3], line_no, "x");
    r.a.y = detail::parse_num<int32_t>(f[4], line_no, "y");
    if (f.size() == 8) {
      r.b.x = detail::parse_num<int32_t>(f[5], line_no, "x");
      r.b.y = detail::parse_num<int32_t>(f[6], line_no, "y");
      if (r.b == r.a)
        throw parse_error({line_no, 1}, "two-cell record names the same cell twice");
    } else {
      r.b = r.a;
    }
    r.tag = code.tags.intern(f.back());
    code.records.push_back(r);
  }

  if (!saw_header) throw parse_error({line_no, 1}, "missing '#hqmap-syscode v1' header");
  return code;
}

} // namespace hqmap
