#include "attain/errors.hpp"

namespace attain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::PredictionMismatch: return "PredictionMismatch";
    case ErrorCode::WitnessOutOfRange: return "WitnessOutOfRange";
  }
  return "Unknown";
}

}  // namespace attain
