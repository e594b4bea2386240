// Copyright 2026 The ghzkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ghz {

/// Raised for malformed user input: bad signs, out-of-range parameters,
/// unsatisfiable preconditions. The CLI maps it to exit code 1.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency check fails. The CLI maps it to exit code 2.
class InternalError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// A ±1 value: a measurement outcome, a player's answer, or a parity target.
enum class Sign : int { Minus = -1, Plus = 1 };

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }

constexpr Sign operator*(Sign a, Sign b) noexcept { return a == b ? Sign::Plus : Sign::Minus; }

constexpr Sign operator-(Sign s) noexcept { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

constexpr Sign& operator*=(Sign& a, Sign b) noexcept { return a = a * b; }

/// GF(2) image of a sign: +1 -> 0, -1 -> 1.
constexpr unsigned bit(Sign s) noexcept { return s == Sign::Plus ? 0u : 1u; }

constexpr Sign sign_from_bit(unsigned b) noexcept { return (b & 1u) ? Sign::Minus : Sign::Plus; }

inline Sign sign_from_int(long long v) {
    if (v == 1) return Sign::Plus;
    if (v == -1) return Sign::Minus;
    throw InvalidInput("expected +1 or -1, got " + std::to_string(v));
}

/// Accepts "1", "+1", "-1", "+" and "-".
inline Sign parse_sign(const std::string& text) {
    if (text == "1" || text == "+1" || text == "+") return Sign::Plus;
    if (text == "-1" || text == "-") return Sign::Minus;
    throw InvalidInput("expected a sign (+1 or -1), got '" + text + "'");
}

inline std::string to_string(Sign s) { return s == Sign::Plus ? "+1" : "-1"; }

}  // namespace ghz
