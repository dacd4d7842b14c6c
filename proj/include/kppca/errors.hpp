#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kppca {

enum class Errc {
  InvalidArgument,
  NonFinite,
  NoConvergence,
  NegativeEigenvalue,
  DimensionMismatch,
  LatentTooLarge,
  LatentExceedsRank,
  SigmaTooLarge,
  SigmaZero,
  RankDeficient,
  NotCentered,
  ZeroSpectrum,
  DegenerateNormalizer,
  Io,
  ParseError,
  RaggedRows,
  BadMagic,
  CountMismatch,
  Truncated,
  VersionMismatch,
  CorruptFile,
};

std::string_view to_string(Errc code);

/// Failures are grouped so the CLI can map them to exit codes.
enum class ErrorClass { Usage, Data, Numeric };

ErrorClass classify(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kppca
