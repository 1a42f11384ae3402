// SPDX-License-Identifier: Apache-2.0
//
// risloc: RIS configuration based localization toolkit
// Copyright (C) 2026 The risloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISLOC_ERROR_HPP
#define RISLOC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace risloc
{
    // Bad argument value or shape passed by the caller.
    class InvalidArgument : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Malformed scenario or model file. line() is 1-based, 0 when the error is not tied to a line.
    class ParseError : public std::runtime_error
    {
    public:
        explicit ParseError(const std::string &message, std::size_t line = 0)
            : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    // Singular geometry, coincident points, degenerate bearings.
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A UE position that the RIS cannot see, neither directly nor through the mirror.
    class UnreachablePosition : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    class TrainingError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}

#endif
