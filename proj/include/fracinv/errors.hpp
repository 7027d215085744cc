#pragma once

#include <stdexcept>
#include <string>

namespace fracinv {

/// Vector/matrix size does not match the operator dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size cap (dense assembly, FFT sampling grid) was exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A diagonal block of the preconditioner or forward operator is singular.
/// `time_index` is the 1-based time level of the offending block;
/// S+1 denotes the regularization block.
class SingularBlockError : public std::runtime_error {
public:
    SingularBlockError(const std::string& what, int time_index)
        : std::runtime_error(what), time_index_(time_index) {}
    int time_index() const noexcept { return time_index_; }

private:
    int time_index_;
};

/// Dense eigensolver failed to converge.
class EigensolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration (bad preset name, empty sweep list, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracinv
