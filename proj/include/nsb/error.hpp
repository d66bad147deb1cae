#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or field violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two fields (or a field and a filter bank) live on different grids.
class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A binary field file or config file could not be decoded.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error("format error at byte offset " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace nsb
