#pragma once

#include <stdexcept>
#include <string>

namespace areaport
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Input data could not be read or violates the returns-matrix contract.
class DataError : public Error
{
public:
    using Error::Error;
};

/// A constrained subproblem has an empty feasible set.
class InfeasibleError : public Error
{
public:
    using Error::Error;
};

/// The market admits no portfolio with a strictly positive rectangle area,
/// or a normalization span collapses to zero.
class DegenerateError : public Error
{
public:
    using Error::Error;
};

/// Numerical routine failed (bracket never closed, eigenvalue iteration broke down).
class NumericalError : public Error
{
public:
    using Error::Error;
};

} // namespace areaport
