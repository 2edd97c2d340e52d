#include <doctest.h>

#include <aigrefac/aiger.hpp>
#include <aigrefac/refactor.hpp>
#include <aigrefac/verify.hpp>
#include <support/random_aig.hpp>

#include <string>

using namespace aigrefac;

namespace
{

std::vector<std::uint8_t> bytes_of( std::string const& s )
{
  return { s.begin(), s.end() };
}

std::string text_of( std::vector<std::uint8_t> const& b )
{
  return { b.begin(), b.end() };
}

/* test-side encoder: a freshly built graph already has PIs at ids 1..n and
   topologically numbered ANDs, so node ids can be written out verbatim */
std::pair<std::string, std::string> encode_direct( aig const& g )
{
  auto const m = g.size() - 1;
  auto const num_ands = m - g.pis().size();
  auto const header = std::to_string( m ) + " " + std::to_string( g.pis().size() ) + " 0 " + std::to_string( g.pos().size() ) + " " + std::to_string( num_ands ) + "\n";
  std::string ascii = "aag " + header, binary = "aig " + header;
  for ( auto pi : g.pis() )
    ascii += std::to_string( 2 * pi ) + "\n";
  for ( auto po : g.pos() )
  {
    ascii += std::to_string( po.raw() ) + "\n";
    binary += std::to_string( po.raw() ) + "\n";
  }
  for ( node_id id = static_cast<node_id>( g.pis().size() + 1 ); id <= m; ++id )
  {
    auto a = g.fanin0( id ).raw(), b = g.fanin1( id ).raw();
    if ( a < b )
      std::swap( a, b );
    /* a different textual order than the library writer on purpose */
    ascii += std::to_string( 2 * id ) + " " + std::to_string( b ) + " " + std::to_string( a ) + "\n";
    for ( std::uint32_t d : { 2 * id - a, a - b } )
    {
      for ( ; d >= 0x80; d >>= 7 )
        binary.push_back( static_cast<char>( 0x80 | ( d & 0x7f ) ) );
      binary.push_back( static_cast<char>( d ) );
    }
  }
  return { ascii, binary };
}

} // namespace

TEST_CASE( "aiger: single buffer circuit" )
{
  auto const d = read_aiger( bytes_of( "aag 1 1 0 1 0\n2\n2\n" ) );
  CHECK( d.graph.pis().size() == 1 );
  CHECK( d.graph.pos().size() == 1 );
  CHECK( area( d.graph ) == 0 );
}

TEST_CASE( "aiger: single and gate and write fixpoint" )
{
  auto const d = read_aiger( bytes_of( "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n" ) );
  auto const& g = d.graph;
  CHECK( area( g ) == 1 );
  CHECK( depth( g ) == 1 );
  auto const po = g.pos()[0];
  REQUIRE( g.is_and( po.node() ) );
  CHECK( normalized( g.fanin0( po.node() ), g.fanin1( po.node() ) ) == std::pair{ literal( g.pis()[0], false ), literal( g.pis()[1], false ) } );

  for ( auto fmt : { aiger_format::ascii, aiger_format::binary } )
  {
    auto const once = write_aiger( g, fmt );
    auto const twice = write_aiger( read_aiger( once ).graph, fmt );
    CHECK( once == twice );
  }
  CHECK( text_of( write_aiger( g, aiger_format::ascii ) ) == "aag 3 2 0 1 1\n2\n4\n6\n6 4 2\n" );
}

TEST_CASE( "aiger: header counts preserved" )
{
  std::string const src = "aag 7 3 0 2 3\n2\n4\n6\n12\n13\n8 2 4\n10 8 6\n12 10 3\n";
  auto const d = read_aiger( bytes_of( src ) );
  auto const h = read_aiger_header( write_aiger( d.graph, aiger_format::binary ) );
  CHECK( h.inputs == 3 );
  CHECK( h.latches == 0 );
  CHECK( h.outputs == 2 );
  CHECK( h.ands == 3 );
  CHECK( h.max_var == 6 );
}

TEST_CASE( "aiger: duplicate ands collapse on load" )
{
  auto const d = read_aiger( bytes_of( "aag 4 2 0 2 2\n2\n4\n6\n8\n6 2 4\n8 4 2\n" ) );
  CHECK( area( d.graph ) == 1 );
  CHECK( d.graph.pos()[0] == d.graph.pos()[1] );
}

TEST_CASE( "aiger: unsorted ascii definitions" )
{
  auto const d = read_aiger( bytes_of( "aag 4 2 0 1 2\n2\n4\n8\n8 6 2\n6 2 5\n" ) );
  CHECK( area( d.graph ) == 2 );
  CHECK( depth( d.graph ) == 2 );
  CHECK_THROWS_AS( read_aiger( bytes_of( "aag 4 2 0 1 2\n2\n4\n8\n8 6 2\n6 8 5\n" ) ), parse_error );
}

TEST_CASE( "aiger: rejects latches and malformed input" )
{
  CHECK_THROWS_AS( read_aiger( bytes_of( "aag 2 1 1 0 0\n2\n4 2\n" ) ), unsupported_error );
  CHECK_THROWS_AS( read_aiger( bytes_of( "aig 1 0 1 0 0\n2\n" ) ), unsupported_error );
  CHECK_THROWS_AS( read_aiger( bytes_of( "xyz 1 1 0 1 0\n" ) ), parse_error );
  CHECK_THROWS_AS( read_aiger( bytes_of( "aag 1 2 0 0 0\n2\n4\n" ) ), parse_error );
  CHECK_THROWS_AS( read_aiger( bytes_of( "aag 3 2 0 1 1\n2\n4\n6\n6 2 9\n" ) ), parse_error );
  CHECK_THROWS_AS( read_aiger( bytes_of( "aag 3 2 0 1 1\n2\n4\n6\n6 2 7\n" ) ), parse_error ); /* undefined var */

  /* truncated binary delta: continuation bit set on the last byte */
  std::string truncated = "aig 3 2 0 1 1\n6\n";
  truncated.push_back( static_cast<char>( 0x82 ) );
  try
  {
    read_aiger( bytes_of( truncated ) );
    FAIL( "expected parse_error" );
  }
  catch ( parse_error const& e )
  {
    CHECK( e.offset() == truncated.size() );
    CHECK( std::string( e.what() ).find( "at byte" ) != std::string::npos );
  }
}

TEST_CASE( "aiger: trailer is preserved verbatim" )
{
  std::string const trailer = "i0 a\ni1 b\no0 y\nc\nsome comment\n";
  auto const d = read_aiger( bytes_of( "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n" + trailer ) );
  CHECK( d.trailer == trailer );
  auto const out = text_of( write_aiger( d.graph, aiger_format::binary, d.trailer ) );
  CHECK( out.ends_with( trailer ) );
  CHECK( read_aiger( bytes_of( out ) ).trailer == trailer );
}

TEST_CASE( "aiger: binary and ascii encodings agree" )
{
  for ( std::uint64_t seed = 1; seed <= 10; ++seed )
  {
    auto const g = test::random_aig( seed, 7, 50 );
    auto const [ascii, binary] = encode_direct( g );
    auto const a = read_aiger( bytes_of( ascii ) ).graph;
    auto const b = read_aiger( bytes_of( binary ) ).graph;
    CHECK( stats( a ) == stats( g ) );
    CHECK( stats( b ) == stats( g ) );
    CHECK( signatures( a, 4, seed ) == signatures( g, 4, seed ) );
    CHECK( signatures( b, 4, seed ) == signatures( g, 4, seed ) );
    CHECK( write_aiger( a, aiger_format::binary ) == write_aiger( b, aiger_format::binary ) );
  }
}

TEST_CASE( "aiger: random round trip" )
{
  for ( std::uint64_t seed = 11; seed <= 14; ++seed )
  {
    auto const g = test::random_aig( seed, 40, 1000 );
    for ( auto fmt : { aiger_format::ascii, aiger_format::binary } )
    {
      auto const bytes = write_aiger( g, fmt );
      auto const back = read_aiger( bytes ).graph;
      CHECK( stats( back ) == stats( g ) );
      CHECK( signatures( back, 64, seed ) == signatures( g, 64, seed ) ); /* 4096 patterns */
      CHECK( write_aiger( back, fmt ) == bytes );
    }
  }
}

TEST_CASE( "aiger: epfl data files round trip" )
{
  for ( auto const* name : { "ctrl", "router", "int2float", "cavlc", "dec" } )
  {
    auto const path = std::string( AIGREFAC_TEST_DATA ) + "/epfl/" + name + ".aig";
    auto const d = read_aiger_file( path );
    auto const ascii = read_aiger( write_aiger( d.graph, aiger_format::ascii ) ).graph;
    auto const binary = read_aiger( write_aiger( d.graph, aiger_format::binary ) ).graph;
    CHECK( stats( ascii ) == stats( d.graph ) );
    CHECK( stats( binary ) == stats( d.graph ) );
    CHECK( equiv_check( ascii, binary ).status != equiv_status::counterexample );
  }
}

TEST_CASE( "aiger: write is a fixpoint on non-topological ids" )
{
  /* refactoring recycles ids, so fanins may carry larger ids than their
     fanouts; one write/read must already reach the fixpoint */
  struct shape
  {
    std::uint64_t seed;
    unsigned pis, ands, window;
  };
  for ( auto const [seed, pis, ands, window] : { shape{ 1032, 49, 16008, 16 }, shape{ 1129, 62, 11951, 32 } } )
  {
    CAPTURE( seed );
    auto g = test::random_aig( seed, pis, ands, 4, window );
    pass_config cfg;
    cfg.threads = 0;
    sequential_pass( g, cfg );
    auto const first = write_aiger( g, aiger_format::binary );
    auto const again = write_aiger( read_aiger( first ).graph, aiger_format::binary );
    CHECK( first == again );
  }
}
