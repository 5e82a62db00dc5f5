#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clusterscope {

/// Base of every error thrown by the library. The CLI maps subclasses to
/// exit codes: DataError family -> 3, everything else -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors caused by the input data or parameters rather than by a bug.
class DataError : public Error {
public:
    using Error::Error;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(std::string source, std::size_t row, std::size_t column, const std::string& what)
        : DataError(source + ":" + std::to_string(row) +
                    (column ? ":" + std::to_string(column) : std::string{}) + ": " + what),
          source_(std::move(source)),
          row_(row),
          column_(column) {}

    const std::string& source() const noexcept { return source_; }
    /// 1-based line number in the source file.
    std::size_t row() const noexcept { return row_; }
    /// 1-based field index, 0 when the error is not tied to one field.
    std::size_t column() const noexcept { return column_; }

private:
    std::string source_;
    std::size_t row_;
    std::size_t column_;
};

class EmptyInput : public DataError {
public:
    using DataError::DataError;
};

class EmptyClusterError : public DataError {
public:
    using DataError::DataError;
};

class InvalidSpec : public DataError {
public:
    using DataError::DataError;
};

class EmptyAfterFilter : public DataError {
public:
    using DataError::DataError;
};

class DegenerateLadder : public DataError {
public:
    using DataError::DataError;
};

class CoincidentCenters : public DataError {
public:
    CoincidentCenters(std::size_t i, std::size_t j)
        : DataError("cluster centers " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide"),
          i_(i),
          j_(j) {}

    std::size_t first() const noexcept { return i_; }
    std::size_t second() const noexcept { return j_; }

private:
    std::size_t i_;
    std::size_t j_;
};

class DuplicateK : public DataError {
public:
    using DataError::DataError;
};

class SingleCluster : public DataError {
public:
    using DataError::DataError;
};

class TooFewPoints : public DataError {
public:
    using DataError::DataError;
};

class NoNeighbors : public Error {
public:
    using Error::Error;
};

}  // namespace clusterscope
