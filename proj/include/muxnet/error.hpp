#pragma once

#include <stdexcept>
#include <string>

namespace muxnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MUXNET_DEFINE_ERROR(Name)                 \
    class Name : public Error {                   \
    public:                                       \
        explicit Name(const std::string& what)    \
            : Error(#Name ": " + what) {}         \
    }

MUXNET_DEFINE_ERROR(InvalidField);
MUXNET_DEFINE_ERROR(DivisionByZero);
MUXNET_DEFINE_ERROR(SingularMatrix);
MUXNET_DEFINE_ERROR(ShapeError);
MUXNET_DEFINE_ERROR(EnumerationTooLarge);
MUXNET_DEFINE_ERROR(LayoutError);
MUXNET_DEFINE_ERROR(CycleDetected);
MUXNET_DEFINE_ERROR(MissingCoefficient);
MUXNET_DEFINE_ERROR(NetworkError);
MUXNET_DEFINE_ERROR(WrongSlotCount);
MUXNET_DEFINE_ERROR(DuplicateLink);
MUXNET_DEFINE_ERROR(InfeasibleMu);
MUXNET_DEFINE_ERROR(DomainError);
MUXNET_DEFINE_ERROR(ConfigError);

#undef MUXNET_DEFINE_ERROR

}  // namespace muxnet
