#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace om {

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define OM_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

OM_DEFINE_ERROR(NonRefining);
OM_DEFINE_ERROR(ZeroProbability);
OM_DEFINE_ERROR(BadTotalMass);
OM_DEFINE_ERROR(NontrivialRoot);
OM_DEFINE_ERROR(NonSingletonLeaf);
OM_DEFINE_ERROR(LevelOutOfRange);
OM_DEFINE_ERROR(DepthTooLarge);
OM_DEFINE_ERROR(NegativeInput);
OM_DEFINE_ERROR(IndexUnbounded);
OM_DEFINE_ERROR(NonCenteredTerminal);
OM_DEFINE_ERROR(FiltrationMismatch);
OM_DEFINE_ERROR(NotPredictable);
OM_DEFINE_ERROR(LambdaTooSmall);
OM_DEFINE_ERROR(TooManyStoppingTimes);
OM_DEFINE_ERROR(BudgetGridOverflow);
OM_DEFINE_ERROR(InadmissibleControl);
OM_DEFINE_ERROR(HypothesisViolated);
OM_DEFINE_ERROR(BudgetViolation);
OM_DEFINE_ERROR(ZeroGap);
OM_DEFINE_ERROR(DegenerateDenominator);
OM_DEFINE_ERROR(NonconvergentTail);
OM_DEFINE_ERROR(ConfigParse);
OM_DEFINE_ERROR(BadAntichain);
OM_DEFINE_ERROR(BadValue);

#undef OM_DEFINE_ERROR

}  // namespace om
