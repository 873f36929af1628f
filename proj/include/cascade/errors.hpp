#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CASCADE_ERROR_TYPE(Name)                                      \
    struct Name : Error {                                             \
        explicit Name(const std::string& msg) : Error(msg) {}         \
    }

// parameter validation
CASCADE_ERROR_TYPE(NonPositiveDetuning);
CASCADE_ERROR_TYPE(NegativeRate);
CASCADE_ERROR_TYPE(NonFinite);

// amplitude evolution
CASCADE_ERROR_TYPE(NegativeTime);
CASCADE_ERROR_TYPE(TimeBeforeSwitchOff);
CASCADE_ERROR_TYPE(EmptyWindow);

// numerical integration
CASCADE_ERROR_TYPE(StepTooLarge);

// entanglement measures
CASCADE_ERROR_TYPE(NotADensityMatrix);

// conditional detection
CASCADE_ERROR_TYPE(ZeroSurvivalProbability);
CASCADE_ERROR_TYPE(ZeroNullClickProbability);

// config files and CLI
CASCADE_ERROR_TYPE(MissingFile);
CASCADE_ERROR_TYPE(UnknownKey);
CASCADE_ERROR_TYPE(ParseError);
CASCADE_ERROR_TYPE(UnknownCommand);

#undef CASCADE_ERROR_TYPE

}  // namespace cascade
