#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aigrefac
{

class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/* malformed AIGER input; `offset` is the byte position where decoding failed */
class parse_error : public error
{
public:
  parse_error( std::string const& what, std::size_t offset )
      : error( what + " (at byte " + std::to_string( offset ) + ")" ), offset_( offset )
  {
  }

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class unsupported_error : public error
{
public:
  using error::error;
};

/* broken graph invariant: dangling reference, cycle, strash duplicate, bad ref count */
class integrity_error : public error
{
public:
  using error::error;
};

/* caller passed mismatched or out-of-range arguments */
class interface_error : public error
{
public:
  using error::error;
};

/* an optimized graph is not equivalent to its input */
class verification_error : public error
{
public:
  using error::error;
};

class resource_error : public error
{
public:
  using error::error;
};

} // namespace aigrefac
