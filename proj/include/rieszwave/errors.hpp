// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rw {

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Argument outside the admissible range of an operation
class DomainError : public Error
{
  public:
    using Error::Error;
};

//! Kernel evaluated at its singular point
class SingularityError : public Error
{
  public:
    using Error::Error;
};

//! Adaptive quadrature failed to reach the requested tolerance
class QuadratureError : public Error
{
  public:
    QuadratureError(std::string const& what, double achieved)
        : Error(what + " (achieved error bound " + std::to_string(achieved)
                + ")")
        , achieved_(achieved)
    {
    }
    double achieved_bound() const noexcept { return achieved_; }

  private:
    double achieved_;
};

//! Mollifier truncation radius above the configured hard cap
class TruncationError : public Error
{
  public:
    TruncationError(std::string const& what, double achieved_fraction)
        : Error(what), achieved_(achieved_fraction)
    {
    }
    double achieved_fraction() const noexcept { return achieved_; }

  private:
    double achieved_;
};

//! Non-finite value produced by the solver
class NumericalError : public Error
{
  public:
    NumericalError(std::string const& what, long row, long col)
        : Error(what + " at lattice node (n=" + std::to_string(row)
                + ", j=" + std::to_string(col) + ")")
        , row_(row)
        , col_(col)
    {
    }
    long row() const noexcept { return row_; }
    long col() const noexcept { return col_; }

  private:
    long row_;
    long col_;
};

//! Picard iteration failed to contract
class ConvergenceError : public Error
{
  public:
    ConvergenceError(std::string const& what, std::vector<double> history)
        : Error(what), history_(std::move(history))
    {
    }
    std::vector<double> const& history() const noexcept { return history_; }

  private:
    std::vector<double> history_;
};

//! Invalid experiment configuration
class ConfigError : public Error
{
  public:
    using Error::Error;
};

}  // namespace rw
