#include "hurst/errors.hpp"

namespace hurst {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::TooShort: return "TooShort";
    case Errc::DegenerateSeries: return "DegenerateSeries";
    case Errc::SingularDesign: return "SingularDesign";
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::NonFinite: return "NonFinite";
    case Errc::BadD: return "BadD";
    case Errc::BadAlpha: return "BadAlpha";
    case Errc::BadBeta: return "BadBeta";
    case Errc::BadSigma: return "BadSigma";
    case Errc::BadDF: return "BadDF";
    case Errc::ExplosiveModel: return "ExplosiveModel";
    case Errc::ZeroDispersion: return "ZeroDispersion";
    case Errc::AllZeroIncrements: return "AllZeroIncrements";
    case Errc::ZeroPartition: return "ZeroPartition";
    case Errc::BadOrdinateCount: return "BadOrdinateCount";
    case Errc::ZeroOrdinate: return "ZeroOrdinate";
    case Errc::NonPositiveTail: return "NonPositiveTail";
    case Errc::AllReplicationsFailed: return "AllReplicationsFailed";
    case Errc::TooFewValues: return "TooFewValues";
    case Errc::MissingCutoff: return "MissingCutoff";
    case Errc::IncompleteReport: return "IncompleteReport";
    case Errc::BadArgument: return "BadArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace hurst
