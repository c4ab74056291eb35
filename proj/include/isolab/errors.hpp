#pragma once

#include <stdexcept>
#include <string>

namespace isolab {

enum class Errc {
    FactorizationTimeout,
    PointNotOnCurve,
    SupersingularCurve,
    AmbiguousOrder,
    InvalidKernel,
    SubsetCapExceeded,
    UnsupportedLevel,
    DiscriminantMismatch,
    ClassNumberTooLarge,
    NotSymmetric,
    DimensionTooLarge,
    NotRegular,
    SpectralGapZero,
    VertexOutOfRange,
    AtSurface,
    AtFloor,
    NotInSubgroup,
    KernelMeetsSubgroup,
    QueryBudgetExhausted,
    SeedNotFound,
    BadInput,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string &what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string &msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string &msg) {
    if (!ok)
        fail(code, msg);
}

} // namespace isolab
