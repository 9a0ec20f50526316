#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

// Error taxonomy mirrors the CLI exit codes: precondition -> 2,
// resource -> 3, io -> 4.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fraclab
