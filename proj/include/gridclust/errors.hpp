#pragma once

#include <stdexcept>
#include <string>

namespace gridclust {

// Bad input: malformed files, invalid parameters. CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure while computing on otherwise valid input. CLI maps these to exit code 1.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

class EndpointInsideObstacle : public ComputeError {
public:
    EndpointInsideObstacle() : ComputeError("query endpoint lies strictly inside an obstacle") {}
};

class CenterUndefined : public ComputeError {
public:
    CenterUndefined() : ComputeError("all candidate centers have infinite cost") {}
};

}  // namespace gridclust
