#pragma once

// Error types shared by all convip modules. Each class maps to one CLI
// exit code family: parse_error -> 3, the constraint errors -> 4.

#include <stdexcept>
#include <string>

namespace convip {

// Base for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operand, coefficient or format does not fit its declared bit width.
class width_error : public error {
public:
    explicit width_error(const std::string& msg) : error(msg) {}
};

// A value left the representable range of its target format and
// saturation was not requested.
class range_error : public error {
public:
    explicit range_error(const std::string& msg) : error(msg) {}
};

// An accumulator or resource sum exceeded its sufficient width. This is
// a design bug in the datapath sizing, not a data problem, so it raises
// instead of wrapping.
class overflow_error : public error {
public:
    explicit overflow_error(const std::string& msg) : error(msg) {}
};

// Image smaller than kernel, mismatched stream shapes, and similar.
class dimension_error : public error {
public:
    explicit dimension_error(const std::string& msg) : error(msg) {}
};

// An engine was driven out of protocol: data before the serial
// coefficient load finished, or a coefficient after the last slot.
class phase_error : public error {
public:
    explicit phase_error(const std::string& msg) : error(msg) {}
};

// Wrong number of parallel windows for the engine variant.
class arity_error : public error {
public:
    explicit arity_error(const std::string& msg) : error(msg) {}
};

// Malformed input file (image, kernel or budget).
class parse_error : public error {
public:
    explicit parse_error(const std::string& msg) : error(msg) {}
};

// Brute-force search space above the supported ceiling.
class search_error : public error {
public:
    explicit search_error(const std::string& msg) : error(msg) {}
};

}  // namespace convip
