#pragma once

#include <stdexcept>
#include <string>

namespace csb {

// Base class for all library errors.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension below 2, shape mismatches, ragged input.
class dimension_error : public error {
  public:
    explicit dimension_error(const std::string& what) : error(what) {}
};

// Parameter outside its domain (cone violations, non-positive shapes, ...).
class domain_error : public error {
  public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// Singular compound-symmetric matrix.
class singular_error : public domain_error {
  public:
    explicit singular_error(const std::string& what) : domain_error(what) {}
};

// Malformed or degenerate input data.
class data_error : public error {
  public:
    explicit data_error(const std::string& what) : error(what) {}
};

// Iteration budgets exhausted, quadrature non-convergence.
class numeric_error : public error {
  public:
    explicit numeric_error(const std::string& what) : error(what) {}
};

} // namespace csb
