#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace talpiot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Carries every violated invariant found, not just the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string msg;
        for (const auto& p : problems) {
            if (!msg.empty()) msg += "; ";
            msg += p;
        }
        return msg.empty() ? std::string("validation failed") : msg;
    }

    std::vector<std::string> problems_;
};

}  // namespace talpiot
