#pragma once

#include <stdexcept>
#include <string>

namespace subsql {

// Root finding was asked for a level the curve never crosses on the search band.
class no_root_error : public std::runtime_error {
public:
    explicit no_root_error(const std::string& what) : std::runtime_error(what) {}
};

// The fit problem cannot constrain its parameters (e.g. a single-angle dataset
// leaves squeeze level and injection efficiency degenerate).
class unidentifiable_error : public std::runtime_error {
public:
    explicit unidentifiable_error(const std::string& what) : std::runtime_error(what) {}
};

// A referenced file is missing or unreadable. Kept distinct from data errors
// because the command line maps it to the usage exit code.
class file_error : public std::runtime_error {
public:
    explicit file_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subsql
