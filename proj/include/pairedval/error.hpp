#pragma once

#include <stdexcept>
#include <string>

namespace pairedval {

// Raised for contract violations on well-typed inputs: unpaired arm data,
// empty region lists, undefined endpoints, degenerate comparisons.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised while decoding input files. `path` points at the offending element
// (JSON pointer for datasets, "line:column" for CSV).
class InputError : public std::runtime_error {
public:
    InputError(std::string path, std::string detail)
        : std::runtime_error(path + ": " + detail), path_(std::move(path)), detail_(std::move(detail)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string path_;
    std::string detail_;
};

}  // namespace pairedval
