#pragma once

#include <stdexcept>
#include <string>

namespace gaitlab {

enum class Errc {
  parse,
  schema,
  empty_dataset,
  degenerate_walk,
  parameter,
  configuration,
  degenerate_geometry,
  insufficient_classes,
  degenerate_model,
  shape,
  undefined_metric,
  divide_by_zero,
  undefined_score,
  io,
  empty_gallery,
};

inline const char* errc_name(Errc k) {
  switch (k) {
    case Errc::parse: return "parse";
    case Errc::schema: return "schema";
    case Errc::empty_dataset: return "empty-dataset";
    case Errc::degenerate_walk: return "degenerate-walk";
    case Errc::parameter: return "parameter";
    case Errc::configuration: return "configuration";
    case Errc::degenerate_geometry: return "degenerate-geometry";
    case Errc::insufficient_classes: return "insufficient-classes";
    case Errc::degenerate_model: return "degenerate-model";
    case Errc::shape: return "shape";
    case Errc::undefined_metric: return "undefined-metric";
    case Errc::divide_by_zero: return "division-by-zero";
    case Errc::undefined_score: return "undefined-score";
    case Errc::io: return "io";
    case Errc::empty_gallery: return "empty-gallery";
  }
  return "unknown";
}

/// Single exception type for the whole library; kind() tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(Errc kind, const std::string& msg)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}

  Errc kind() const { return kind_; }

 private:
  Errc kind_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, Errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace gaitlab
