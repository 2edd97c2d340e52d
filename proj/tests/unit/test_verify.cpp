#include <doctest.h>

#include <aigrefac/verify.hpp>
#include <support/random_aig.hpp>

using namespace aigrefac;

namespace
{

/* interpretive evaluation of one literal under one assignment */
bool eval( aig const& g, literal l, std::vector<bool> const& pi_value, std::vector<int>& memo )
{
  auto const id = l.node();
  if ( memo[id] < 0 )
  {
    bool v = false;
    switch ( g.kind( id ) )
    {
    case node_kind::constant:
      v = false;
      break;
    case node_kind::pi:
      for ( std::size_t i = 0; i < g.pis().size(); ++i )
        if ( g.pis()[i] == id )
          v = pi_value[i];
      break;
    case node_kind::buffer:
      v = eval( g, g.fanin0( id ), pi_value, memo );
      break;
    case node_kind::and_gate:
      v = eval( g, g.fanin0( id ), pi_value, memo ) && eval( g, g.fanin1( id ), pi_value, memo );
      break;
    }
    memo[id] = v;
  }
  return ( memo[id] != 0 ) != l.is_complemented();
}

} // namespace

TEST_CASE( "simulate basic words" )
{
  aig g;
  auto const a = g.add_pi();
  auto const b = g.add_pi();
  g.add_po( g.add_and( a, b ) );
  g.add_po( !const0 );
  std::vector<std::uint64_t> const in{ 0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull };
  auto const out = simulate( g, in );
  CHECK( out[0] == ( in[0] & in[1] ) );
  CHECK( out[1] == ~std::uint64_t{ 0 } );
}

TEST_CASE( "simulate matches interpretation" )
{
  for ( std::uint64_t seed = 1; seed <= 20; ++seed )
  {
    auto const g = test::random_aig( seed, 3, 30 );
    std::vector<std::uint64_t> const in{ 0xAA, 0xCC, 0xF0 };
    auto const out = simulate( g, in );
    for ( unsigned m = 0; m < 8; ++m )
    {
      std::vector<bool> const pv{ ( m & 1 ) != 0, ( m & 2 ) != 0, ( m & 4 ) != 0 };
      std::vector<int> memo( g.size(), -1 );
      for ( std::size_t o = 0; o < g.pos().size(); ++o )
        REQUIRE( ( ( out[o] >> m ) & 1 ) == eval( g, g.pos()[o], pv, memo ) );
    }
  }
}

TEST_CASE( "equiv_check reflexive" )
{
  auto const small = test::random_aig( 3, 10, 200 );
  CHECK( equiv_check( small, small ).status == equiv_status::equivalent_exhaustive );
  auto const big = test::random_aig( 4, 40, 300 );
  auto const v = equiv_check( big, big, 4096, 9 );
  CHECK( v.status == equiv_status::equivalent_sampled );
  CHECK( v.patterns == 4096 );
  aig empty;
  CHECK( stats( empty ) == circuit_stats{} );
  CHECK( equiv_check( empty, empty ).status == equiv_status::equivalent_exhaustive );
}

TEST_CASE( "equiv_check and vs or" )
{
  aig x, y;
  auto const xa = x.add_pi(), xb = x.add_pi();
  x.add_po( x.add_and( xa, xb ) );
  auto const ya = y.add_pi(), yb = y.add_pi();
  y.add_po( y.create_or( ya, yb ) );
  auto const v = equiv_check( x, y );
  REQUIRE( v.status == equiv_status::counterexample );
  CHECK( v.witness == std::vector<bool>{ true, false } );
  CHECK( v.po == 0 );
  CHECK( replay_counterexample( x, y, v ) );
}

TEST_CASE( "equiv_check arity mismatch" )
{
  aig x, y;
  x.add_pi();
  CHECK_THROWS_AS( equiv_check( x, y ), interface_error );
}

TEST_CASE( "counterexamples replay in both modes" )
{
  for ( std::uint64_t seed = 1; seed <= 20; ++seed )
  {
    auto const pis = seed % 2 ? 12u : 30u;
    auto const g = test::random_aig( seed, pis, 150 );
    auto h = g;
    /* flip one PO */
    h.set_po( 0, !h.pos()[0] );
    auto const v = equiv_check( g, h, 1024, seed );
    REQUIRE( v.status == equiv_status::counterexample );
    CHECK( replay_counterexample( g, h, v ) );
  }
}

TEST_CASE( "exhaustive and sampled modes agree" )
{
  /* widen a 12-PI circuit with 6 unused PIs to force sampling on the same function */
  for ( std::uint64_t seed = 1; seed <= 10; ++seed )
  {
    auto const g = test::random_aig( seed, 12, 120 );
    auto h = g;
    h.set_po( 0, h.add_and( h.pos()[0], h.pos()[1] ) );
    auto const exact = equiv_check( g, h ).status;
    auto widen = []( aig const& src ) {
      aig w = src;
      for ( int i = 0; i < 6; ++i )
        w.add_pi();
      return w;
    };
    auto const sampled = equiv_check( widen( g ), widen( h ), 65536, seed ).status;
    CHECK( ( exact == equiv_status::counterexample ) == ( sampled == equiv_status::counterexample ) );
  }
}

TEST_CASE( "signatures independent of call" )
{
  auto const g = test::random_aig( 5, 20, 300 );
  CHECK( signatures( g, 8, 1 ) == signatures( g, 8, 1 ) );
  CHECK( signatures( g, 8, 1 ) != signatures( g, 8, 2 ) );
}
