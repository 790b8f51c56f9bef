// Copyright 2026 The weakval Authors

// Licensed under the Apache License, Version 2.0 (the License);
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an AS IS BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weakval {

enum class ErrorCode {
    InvalidInput,
    NotHermitian,
    NotPSD,
    NotNormalized,
    NoConvergence,
    ZeroOverlap,
    ZeroProbability,
    DegenerateEnsemble,
    NonRealLoss,
    ZeroPostselection,
    GridOverflow,
    UnderResolved,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroOverlap: return "ZeroOverlap";
    case ErrorCode::ZeroProbability: return "ZeroProbability";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::NonRealLoss: return "NonRealLoss";
    case ErrorCode::ZeroPostselection: return "ZeroPostselection";
    case ErrorCode::GridOverflow: return "GridOverflow";
    case ErrorCode::UnderResolved: return "UnderResolved";
    }
    return "Unknown";
}

/// All failures raised by the library carry a machine-readable code so that
/// front ends can map them onto exit statuses.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace weakval
