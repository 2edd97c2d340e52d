#include <aigrefac/aiger.hpp>

#include <fstream>
#include <iterator>
#include <limits>

namespace aigrefac
{

namespace
{

class reader
{
public:
  explicit reader( std::span<std::uint8_t const> bytes )
      : bytes_( bytes )
  {
  }

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  [[noreturn]] void fail( std::string const& what ) const { throw parse_error( what, pos_ ); }

  void expect( char c )
  {
    if ( at_end() || bytes_[pos_] != static_cast<std::uint8_t>( c ) )
      fail( std::string( "expected '" ) + ( c == '\n' ? std::string( "\\n" ) : std::string( 1, c ) ) + "'" );
    ++pos_;
  }

  std::string word()
  {
    std::string w;
    while ( !at_end() && bytes_[pos_] != ' ' && bytes_[pos_] != '\n' )
      w.push_back( static_cast<char>( bytes_[pos_++] ) );
    return w;
  }

  std::uint64_t number()
  {
    if ( at_end() || bytes_[pos_] < '0' || bytes_[pos_] > '9' )
      fail( "expected unsigned decimal" );
    std::uint64_t value = 0;
    while ( !at_end() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9' )
    {
      auto const digit = static_cast<std::uint64_t>( bytes_[pos_] - '0' );
      if ( value > ( std::numeric_limits<std::uint64_t>::max() - digit ) / 10 )
        fail( "number overflows 64 bits" );
      value = value * 10 + digit;
      ++pos_;
    }
    return value;
  }

  std::uint64_t varint()
  {
    std::uint64_t value = 0;
    unsigned shift = 0;
    while ( true )
    {
      if ( at_end() )
        fail( "truncated delta encoding" );
      auto const byte = bytes_[pos_++];
      if ( shift > 63 )
        fail( "delta encoding overflows 64 bits" );
      value |= static_cast<std::uint64_t>( byte & 0x7f ) << shift;
      if ( ( byte & 0x80 ) == 0 )
        return value;
      shift += 7;
    }
  }

  std::string rest() const { return std::string( bytes_.begin() + static_cast<std::ptrdiff_t>( std::min( pos_, bytes_.size() ) ), bytes_.end() ); }

private:
  std::span<std::uint8_t const> bytes_;
  std::size_t pos_ = 0;
};

struct header_with_kind
{
  aiger_header header;
  bool binary = false;
};

header_with_kind parse_header( reader& in )
{
  header_with_kind h;
  auto const magic = in.word();
  if ( magic == "aig" )
    h.binary = true;
  else if ( magic != "aag" )
    throw parse_error( "missing 'aag' or 'aig' magic", 0 );
  in.expect( ' ' );
  h.header.max_var = in.number();
  in.expect( ' ' );
  h.header.inputs = in.number();
  in.expect( ' ' );
  h.header.latches = in.number();
  in.expect( ' ' );
  h.header.outputs = in.number();
  in.expect( ' ' );
  h.header.ands = in.number();
  in.expect( '\n' );

  auto const& hd = h.header;
  if ( hd.max_var > ( std::numeric_limits<std::uint32_t>::max() >> 2 ) )
    in.fail( "maximum variable index too large" );
  if ( hd.max_var < hd.inputs + hd.latches + hd.ands )
    in.fail( "header violates M >= I + L + A" );
  if ( h.binary && hd.max_var != hd.inputs + hd.latches + hd.ands )
    in.fail( "binary header requires M = I + L + A" );
  if ( hd.latches != 0 )
    throw unsupported_error( "latches are not supported (L = " + std::to_string( hd.latches ) + ")" );
  return h;
}

struct and_def
{
  std::uint64_t lhs, rhs0, rhs1;
  std::size_t offset;
};

} // namespace

aiger_header read_aiger_header( std::span<std::uint8_t const> bytes )
{
  reader in( bytes );
  return parse_header( in ).header;
}

aiger_design read_aiger( std::span<std::uint8_t const> bytes )
{
  reader in( bytes );
  auto const [hd, binary] = parse_header( in );
  aiger_design design;
  auto& g = design.graph;
  g.reserve( hd.ands + hd.inputs + 1 );

  constexpr std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> var_lit( hd.max_var + 1, unset );
  var_lit[0] = const0.raw();

  auto const check_literal = [&]( std::uint64_t lit ) {
    if ( lit > 2 * hd.max_var + 1 )
      in.fail( "literal " + std::to_string( lit ) + " exceeds maximum variable index" );
  };

  for ( std::uint64_t i = 0; i < hd.inputs; ++i )
  {
    std::uint64_t var = i + 1;
    if ( !binary )
    {
      auto const lit = in.number();
      check_literal( lit );
      if ( lit < 2 || ( lit & 1 ) )
        in.fail( "input literal must be even and non-constant" );
      var = lit >> 1;
      in.expect( '\n' );
    }
    if ( var_lit[var] != unset )
      in.fail( "variable " + std::to_string( var ) + " defined twice" );
    var_lit[var] = g.add_pi().raw();
  }

  std::vector<std::uint64_t> outputs( hd.outputs );
  for ( auto& o : outputs )
  {
    o = in.number();
    check_literal( o );
    in.expect( '\n' );
  }

  std::vector<and_def> ands( hd.ands );
  for ( std::uint64_t i = 0; i < hd.ands; ++i )
  {
    auto& d = ands[i];
    d.offset = in.offset();
    if ( binary )
    {
      d.lhs = 2 * ( hd.inputs + hd.latches + i + 1 );
      auto const delta0 = in.varint();
      auto const delta1 = in.varint();
      if ( delta0 > d.lhs || delta0 == 0 )
        in.fail( "invalid first delta" );
      d.rhs0 = d.lhs - delta0;
      if ( delta1 > d.rhs0 )
        in.fail( "invalid second delta" );
      d.rhs1 = d.rhs0 - delta1;
    }
    else
    {
      d.lhs = in.number();
      in.expect( ' ' );
      d.rhs0 = in.number();
      in.expect( ' ' );
      d.rhs1 = in.number();
      in.expect( '\n' );
      check_literal( d.lhs );
      check_literal( d.rhs0 );
      check_literal( d.rhs1 );
      if ( d.lhs < 2 || ( d.lhs & 1 ) )
        in.fail( "AND literal must be even and non-constant" );
    }
  }
  design.trailer = in.rest();

  /* ASCII files need not be topologically sorted: resolve definitions on demand */
  std::vector<std::uint32_t> def_of( hd.max_var + 1, unset );
  for ( std::size_t i = 0; i < ands.size(); ++i )
  {
    auto const var = ands[i].lhs >> 1;
    if ( var_lit[var] != unset || def_of[var] != unset )
      throw parse_error( "variable " + std::to_string( var ) + " defined twice", ands[i].offset );
    def_of[var] = static_cast<std::uint32_t>( i );
  }

  /* 0 = unvisited, 1 = expanding, 2 = done */
  std::vector<std::uint8_t> state( hd.max_var + 1, 0 );
  std::vector<std::pair<std::uint64_t, bool>> stack;
  auto const resolve = [&]( std::uint64_t root_var, std::size_t offset ) {
    stack.emplace_back( root_var, false );
    while ( !stack.empty() )
    {
      auto const [var, expanded] = stack.back();
      stack.pop_back();
      if ( var_lit[var] != unset )
        continue;
      if ( def_of[var] == unset )
        throw parse_error( "variable " + std::to_string( var ) + " is used but never defined", offset );
      auto const& d = ands[def_of[var]];
      if ( !expanded )
      {
        if ( state[var] == 1 )
          continue;
        state[var] = 1;
        stack.emplace_back( var, true );
        for ( auto const rhs : { d.rhs0, d.rhs1 } )
        {
          auto const v = rhs >> 1;
          if ( var_lit[v] != unset )
            continue;
          if ( state[v] == 1 )
            throw parse_error( "combinational cycle through variable " + std::to_string( v ), d.offset );
          stack.emplace_back( v, false );
        }
        continue;
      }
      auto const a = literal::from_raw( var_lit[d.rhs0 >> 1] ) ^ ( ( d.rhs0 & 1 ) != 0 );
      auto const b = literal::from_raw( var_lit[d.rhs1 >> 1] ) ^ ( ( d.rhs1 & 1 ) != 0 );
      var_lit[var] = g.add_and( a, b ).raw();
      state[var] = 2;
    }
  };

  for ( auto const& d : ands )
    resolve( d.lhs >> 1, d.offset );
  for ( auto const o : outputs )
  {
    resolve( o >> 1, 0 );
    g.add_po( literal::from_raw( var_lit[o >> 1] ) ^ ( ( o & 1 ) != 0 ) );
  }
  return design;
}

aiger_design read_aiger_file( std::string const& path )
{
  std::ifstream file( path, std::ios::binary );
  if ( !file )
    throw error( "cannot open " + path );
  std::vector<std::uint8_t> bytes( ( std::istreambuf_iterator<char>( file ) ), std::istreambuf_iterator<char>() );
  return read_aiger( bytes );
}

std::vector<std::uint8_t> write_aiger( aig const& g, aiger_format format, std::string_view trailer )
{
  auto const order = topological_order( g );
  std::vector<std::uint32_t> lit_of( g.size(), 0 );
  std::uint32_t next_var = 1;
  for ( auto const pi : g.pis() )
    lit_of[pi] = 2 * next_var++;

  struct gate
  {
    std::uint32_t lhs, rhs0, rhs1;
  };
  std::vector<gate> gates;
  gates.reserve( g.num_ands() );
  auto const map = [&]( literal l ) { return lit_of[l.node()] ^ static_cast<std::uint32_t>( l.is_complemented() ); };
  for ( auto const id : order )
  {
    if ( g.kind( id ) == node_kind::buffer )
    {
      lit_of[id] = map( g.fanin0( id ) );
      continue;
    }
    auto const a = map( g.fanin0( id ) );
    auto const b = map( g.fanin1( id ) );
    lit_of[id] = 2 * next_var++;
    gates.push_back( { lit_of[id], std::max( a, b ), std::min( a, b ) } );
  }

  std::string out;
  auto const num_pis = g.pis().size();
  out += format == aiger_format::ascii ? "aag " : "aig ";
  out += std::to_string( num_pis + gates.size() ) + ' ' + std::to_string( num_pis ) + " 0 " + std::to_string( g.pos().size() ) + ' ' + std::to_string( gates.size() ) + '\n';
  if ( format == aiger_format::ascii )
    for ( auto const pi : g.pis() )
      out += std::to_string( lit_of[pi] ) + '\n';
  for ( auto const po : g.pos() )
    out += std::to_string( map( po ) ) + '\n';
  for ( auto const& gt : gates )
  {
    if ( format == aiger_format::ascii )
    {
      out += std::to_string( gt.lhs ) + ' ' + std::to_string( gt.rhs0 ) + ' ' + std::to_string( gt.rhs1 ) + '\n';
      continue;
    }
    for ( auto delta : { gt.lhs - gt.rhs0, gt.rhs0 - gt.rhs1 } )
    {
      while ( delta & ~0x7fu )
      {
        out.push_back( static_cast<char>( ( delta & 0x7f ) | 0x80 ) );
        delta >>= 7;
      }
      out.push_back( static_cast<char>( delta ) );
    }
  }
  out += trailer;
  return std::vector<std::uint8_t>( out.begin(), out.end() );
}

void write_aiger_file( aig const& g, std::string const& path, aiger_format format, std::string_view trailer )
{
  auto const bytes = write_aiger( g, format, trailer );
  std::ofstream file( path, std::ios::binary );
  if ( !file )
    throw error( "cannot write " + path );
  file.write( reinterpret_cast<char const*>( bytes.data() ), static_cast<std::streamsize>( bytes.size() ) );
}

aiger_format format_for_path( std::string const& path )
{
  return path.size() >= 4 && path.compare( path.size() - 4, 4, ".aag" ) == 0 ? aiger_format::ascii : aiger_format::binary;
}

} // namespace aigrefac
