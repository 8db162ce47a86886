#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace funrate {

inline constexpr const char* kVersion = "0.1.0";

/// A named scalar function of game time, sampled on the per-second grid
/// 0..T inclusive (length T+1).
struct CurveSeries {
    std::string name;
    Eigen::VectorXd values;
    std::string units;

    int grid_len() const { return static_cast<int>(values.size()); }
};

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data; carries file/line/field so reports can point at
/// the offending token.
class ParseError : public Error {
  public:
    ParseError(std::string file, int line, std::string field, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + what),
          file(std::move(file)),
          line(line),
          field(std::move(field)) {}

    std::string file;
    int line;
    std::string field;
};

/// The team graph is not connected (or a model parameter cannot be
/// estimated) and the caller did not opt into a per-component fit.
class IdentifiabilityError : public Error {
  public:
    using Error::Error;
};

/// Shapes, grids or model kinds do not agree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

}  // namespace funrate
