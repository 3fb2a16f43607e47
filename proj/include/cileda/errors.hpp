#pragma once

#include <stdexcept>
#include <string>

namespace cileda {

// Base class for all library errors. `code()` is the stable machine-readable
// name; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define CILEDA_ERROR_TYPE(Name)                                        \
    struct Name : Error {                                              \
        explicit Name(const std::string& detail) : Error(#Name, detail) {} \
    }

CILEDA_ERROR_TYPE(ManifestParse);
CILEDA_ERROR_TYPE(FileMissing);
CILEDA_ERROR_TYPE(NonFiniteSample);
CILEDA_ERROR_TYPE(DegenerateSignal);
CILEDA_ERROR_TYPE(SignalTooShort);
CILEDA_ERROR_TYPE(InsufficientSamples);
CILEDA_ERROR_TYPE(BadLength);
CILEDA_ERROR_TYPE(TooFewSamples);
CILEDA_ERROR_TYPE(MixedDomains);
CILEDA_ERROR_TYPE(ShapeMismatch);
CILEDA_ERROR_TYPE(ZeroCandidate);
CILEDA_ERROR_TYPE(NonFinite);
CILEDA_ERROR_TYPE(DuplicateDomain);
CILEDA_ERROR_TYPE(UnknownParameter);
CILEDA_ERROR_TYPE(InvalidConfig);

#undef CILEDA_ERROR_TYPE

}  // namespace cileda
