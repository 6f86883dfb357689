// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mcrand {

enum class ErrorKind {
    InvalidArgument,
    InvalidDesign,
    InvalidData,
    Numeric,
    Config,
    Capacity,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

//! Library-wide exception. Each kind maps onto a C API status code.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

}  // namespace mcrand
