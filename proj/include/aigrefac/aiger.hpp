#pragma once

#include <aigrefac/aig.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigrefac
{

enum class aiger_format
{
  ascii,
  binary
};

struct aiger_header
{
  std::uint64_t max_var = 0;
  std::uint64_t inputs = 0;
  std::uint64_t latches = 0;
  std::uint64_t outputs = 0;
  std::uint64_t ands = 0;
};

/* an AIG plus whatever followed the AND section (symbols, comments), kept verbatim */
struct aiger_design
{
  aig graph;
  std::string trailer;
};

/*! \brief Parses combinational AIGER ("aag" or "aig").

  The graph is strashed while loading, so structurally duplicate ANDs in the
  file collapse. Latches raise unsupported_error; any malformed content raises
  parse_error carrying the byte offset.
*/
aiger_design read_aiger( std::span<std::uint8_t const> bytes );
aiger_design read_aiger_file( std::string const& path );

aiger_header read_aiger_header( std::span<std::uint8_t const> bytes );

/* renumbers live nodes in topological order; buffers are forwarded */
std::vector<std::uint8_t> write_aiger( aig const& g, aiger_format format, std::string_view trailer = {} );
void write_aiger_file( aig const& g, std::string const& path, aiger_format format, std::string_view trailer = {} );

/* binary unless the path ends in ".aag" */
aiger_format format_for_path( std::string const& path );

} // namespace aigrefac
