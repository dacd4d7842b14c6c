#include "kppca/errors.hpp"

namespace kppca {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NegativeEigenvalue: return "NegativeEigenvalue";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LatentTooLarge: return "LatentTooLarge";
    case Errc::LatentExceedsRank: return "LatentExceedsRank";
    case Errc::SigmaTooLarge: return "SigmaTooLarge";
    case Errc::SigmaZero: return "SigmaZero";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NotCentered: return "NotCentered";
    case Errc::ZeroSpectrum: return "ZeroSpectrum";
    case Errc::DegenerateNormalizer: return "DegenerateNormalizer";
    case Errc::Io: return "Io";
    case Errc::ParseError: return "ParseError";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::BadMagic: return "BadMagic";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::Truncated: return "Truncated";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::CorruptFile: return "CorruptFile";
  }
  return "Unknown";
}

ErrorClass classify(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::LatentTooLarge:
    case Errc::LatentExceedsRank:
    case Errc::SigmaTooLarge:
      return ErrorClass::Usage;
    case Errc::Io:
    case Errc::ParseError:
    case Errc::RaggedRows:
    case Errc::BadMagic:
    case Errc::CountMismatch:
    case Errc::Truncated:
    case Errc::VersionMismatch:
    case Errc::CorruptFile:
    case Errc::DimensionMismatch:
      return ErrorClass::Data;
    default:
      return ErrorClass::Numeric;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace kppca
