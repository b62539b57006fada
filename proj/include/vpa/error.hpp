#pragma once

#include <stdexcept>
#include <string>

namespace vpa {

/// Domain error carrying the name of the pipeline stage that failed.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace vpa
