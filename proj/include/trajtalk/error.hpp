#pragma once

#include <stdexcept>
#include <string>

namespace trajtalk {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed YAML/JSON input or modification text.
class ParseError : public Error {
public:
    using Error::Error;
};

// Operation invoked in a phase that does not allow it.
class StateError : public Error {
public:
    using Error::Error;
};

// LLM backend failed, timed out, or had nothing to say for a request.
class BackendError : public Error {
public:
    using Error::Error;
};

}  // namespace trajtalk
