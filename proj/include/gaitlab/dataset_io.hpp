#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gaitlab/rng.hpp"
#include "gaitlab/sample.hpp"

namespace gaitlab {

enum class DatasetFormat { canonical };

namespace detail {

// Shortest round-trip decimal form; parse(write(x)) is bit-exact.
inline void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline bool parse_double(std::string_view tok, double& out) {
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

inline std::string fmt_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

}  // namespace detail

/// Canonical record format:
///   sample <label> <F>
///   F lines of 93 numbers (31 joints x xyz, joint order per the skeleton)
inline void write_dataset(const Dataset& d, std::ostream& os) {
  std::string buf;
  for (const GaitSample& s : d.samples) {
    buf.clear();
    buf += "sample ";
    buf += s.label;
    buf += ' ';
    buf += std::to_string(s.frames.size());
    buf += '\n';
    for (const Pose& p : s.frames) {
      for (int j = 0; j < kJointCount; ++j)
        for (int a = 0; a < 3; ++a) {
          if (j != 0 || a != 0) buf += ' ';
          detail::append_double(buf, p(j, a));
        }
      buf += '\n';
    }
    os << buf;
  }
}

inline void write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);  // binary keeps LF endings everywhere
  require(os.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  write_dataset(d, os);
  os.flush();
  require(os.good(), Errc::io, "write to '" + path.string() + "' failed");
}

inline std::string dataset_to_string(const Dataset& d) {
  std::ostringstream os;
  write_dataset(d, os);
  return os.str();
}

inline Dataset parse_dataset(std::istream& is, DatasetFormat = DatasetFormat::canonical) {
  Dataset d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream hdr(line);
    std::string kw, label;
    long frames = 0;
    hdr >> kw >> label >> frames;
    require(kw == "sample" && !label.empty() && frames > 0 && !hdr.fail(), Errc::parse,
            "line " + std::to_string(lineno) + ": expected 'sample <label> <F>' header");
    require(frames >= 2, Errc::schema,
            "line " + std::to_string(lineno) + ": sample must have at least 2 frames");
    GaitSample s;
    s.label = label;
    s.frames.reserve(static_cast<std::size_t>(frames));
    for (long f = 0; f < frames; ++f) {
      require(static_cast<bool>(std::getline(is, line)), Errc::parse,
              "line " + std::to_string(lineno + 1) + ": unexpected end of file inside record");
      ++lineno;
      Pose p;
      const char* cur = line.c_str();
      const char* end = cur + line.size();
      int got = 0;
      while (cur < end) {
        while (cur < end && (*cur == ' ' || *cur == '\t' || *cur == '\r')) ++cur;
        if (cur >= end) break;
        const char* tok = cur;
        while (cur < end && *cur != ' ' && *cur != '\t' && *cur != '\r') ++cur;
        require(got < 3 * kJointCount, Errc::schema,
                "line " + std::to_string(lineno) + ": frame has more than 93 values");
        double v;
        require(detail::parse_double(std::string_view(tok, static_cast<std::size_t>(cur - tok)), v),
                Errc::parse, "line " + std::to_string(lineno) + ": bad number '" +
                                 std::string(tok, static_cast<std::size_t>(cur - tok)) + "'");
        p(got / 3, got % 3) = v;
        ++got;
      }
      require(got == 3 * kJointCount, Errc::schema,
              "line " + std::to_string(lineno) + ": frame has " + std::to_string(got) +
                  " values, expected 93 (31 joints)");
      s.frames.push_back(p);
    }
    validate_sample(s);
    d.samples.push_back(std::move(s));
  }
  require(!d.samples.empty(), Errc::empty_dataset, "no samples in input");
  return d;
}

inline Dataset parse_dataset(const std::filesystem::path& path,
                             DatasetFormat fmt = DatasetFormat::canonical) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), Errc::io, "cannot open '" + path.string() + "'");
  return parse_dataset(is, fmt);
}

/// Content hash of the canonical serialization; stable across runs and
/// platforms, used as the dataset id in report metadata.
inline std::uint64_t dataset_fingerprint(const Dataset& d) {
  return fnv1a64(dataset_to_string(d));
}

}  // namespace gaitlab
