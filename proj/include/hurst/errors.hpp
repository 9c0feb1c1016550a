#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hurst {

enum class Errc {
  NonPositivePrice,
  TooShort,
  DegenerateSeries,
  SingularDesign,
  OrderTooLarge,
  NonFinite,
  BadD,
  BadAlpha,
  BadBeta,
  BadSigma,
  BadDF,
  ExplosiveModel,
  ZeroDispersion,
  AllZeroIncrements,
  ZeroPartition,
  BadOrdinateCount,
  ZeroOrdinate,
  NonPositiveTail,
  AllReplicationsFailed,
  TooFewValues,
  MissingCutoff,
  IncompleteReport,
  BadArgument,
  Parse,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the Monte Carlo engine, the CLI) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hurst
