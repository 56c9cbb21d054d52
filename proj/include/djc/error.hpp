#pragma once

#include <stdexcept>
#include <string>

namespace djc {

// All library failures derive from Error and carry a stable kind tag,
// so callers (and the CLI report writer) can match on it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define DJC_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

DJC_DEFINE_ERROR(DivisionByZeroFunction);
DJC_DEFINE_ERROR(UnknownCoordinate);
DJC_DEFINE_ERROR(DenominatorVanishes);
DJC_DEFINE_ERROR(SingularMatrix);
DJC_DEFINE_ERROR(InconsistentSystem);
DJC_DEFINE_ERROR(ChartMismatch);
DJC_DEFINE_ERROR(CoordinateClash);
DJC_DEFINE_ERROR(NotClosed);
DJC_DEFINE_ERROR(PreconditionNotMaximalIsotropic);
DJC_DEFINE_ERROR(NotInProjection);
DJC_DEFINE_ERROR(RankDeficient);
DJC_DEFINE_ERROR(CleanIntersectionFailed);
DJC_DEFINE_ERROR(NotAlmostComplex);
DJC_DEFINE_ERROR(NotGeneralizedComplex);
DJC_DEFINE_ERROR(UnknownName);
DJC_DEFINE_ERROR(Degenerate);
DJC_DEFINE_ERROR(NotFlat);
DJC_DEFINE_ERROR(NotHoloChart);
DJC_DEFINE_ERROR(PreconditionFailed);
DJC_DEFINE_ERROR(SyntaxError);
DJC_DEFINE_ERROR(UnknownIdentifier);
DJC_DEFINE_ERROR(DegreeMismatch);

#undef DJC_DEFINE_ERROR

} // namespace djc
