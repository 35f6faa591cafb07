#pragma once

#include <stdexcept>
#include <string>

namespace trustgame {

/// A parameter failed its domain check. `field` names the offending parameter.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace trustgame
