#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smtl
{

/*! \brief Base class of all errors raised by the toolchain. */
class smtl_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed `.bench` or JSON input, with the position of the offending token. */
class parse_error : public smtl_error
{
public:
  parse_error( std::string const& message, std::size_t line, std::size_t column )
      : smtl_error( "line " + std::to_string( line ) + ", column " + std::to_string( column ) + ": " + message ),
        line_( line ), column_( column )
  {
  }

  /* schema violations that have no source position; line and column are 0 */
  explicit parse_error( std::string const& message ) : smtl_error( message ), line_( 0 ), column_( 0 ) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/* structural problems: undefined nets, duplicate definitions, cycles, arity */
class netlist_error : public smtl_error
{
public:
  using smtl_error::smtl_error;
};

class capacity_error : public smtl_error
{
public:
  using smtl_error::smtl_error;
};

class timing_error : public smtl_error
{
public:
  using smtl_error::smtl_error;
};

class device_error : public smtl_error
{
public:
  using smtl_error::smtl_error;
};

} // namespace smtl
