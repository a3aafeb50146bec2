#pragma once

#include <stdexcept>
#include <string>

namespace swcrack {

// Base of all domain errors. name() is the stable identifier the CLI prints
// on its diagnostic stream; what() carries the detail message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define SWCRACK_ERROR_TYPE(ClassName)                    \
    class ClassName : public Error {                     \
    public:                                              \
        explicit ClassName(const std::string& message)   \
            : Error(#ClassName, message) {}              \
    }

SWCRACK_ERROR_TYPE(FileNotFound);
SWCRACK_ERROR_TYPE(DecodeError);
SWCRACK_ERROR_TYPE(EmptyImage);
SWCRACK_ERROR_TYPE(IoError);
SWCRACK_ERROR_TYPE(ValueOutOfRange);
SWCRACK_ERROR_TYPE(DimensionMismatch);
SWCRACK_ERROR_TYPE(LengthMismatch);
SWCRACK_ERROR_TYPE(EmptyPrediction);
SWCRACK_ERROR_TYPE(EmptyInput);
SWCRACK_ERROR_TYPE(ManifestError);
SWCRACK_ERROR_TYPE(MissingMask);
SWCRACK_ERROR_TYPE(MissingPrediction);
SWCRACK_ERROR_TYPE(ParseError);
SWCRACK_ERROR_TYPE(NonTrainEntries);

#undef SWCRACK_ERROR_TYPE

}  // namespace swcrack
