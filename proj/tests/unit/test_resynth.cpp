#include <doctest.h>

#include <aigrefac/resynth.hpp>
#include <support/random_aig.hpp>

#include <map>
#include <random>
#include <set>

using namespace aigrefac;

namespace
{

/* true iff some PI is reachable from root without passing a leaf */
bool leaks_to_pi( aig const& g, cut const& c )
{
  std::set<node_id> const leaves( c.leaves.begin(), c.leaves.end() );
  std::set<node_id> seen;
  std::vector<node_id> stack{ c.root };
  while ( !stack.empty() )
  {
    auto const id = stack.back();
    stack.pop_back();
    if ( !seen.insert( id ).second )
      continue;
    if ( g.is_pi( id ) )
      return true;
    if ( !g.is_and( id ) )
      continue;
    for ( auto f : { g.fanin0( id ).node(), g.fanin1( id ).node() } )
      if ( !leaves.contains( f ) )
        stack.push_back( f );
  }
  return false;
}

/* And nodes above the leaves, by plain reachability */
std::size_t cone_size( aig const& g, cut const& c )
{
  std::set<node_id> const leaves( c.leaves.begin(), c.leaves.end() );
  std::set<node_id> seen{ c.root };
  std::vector<node_id> queue{ c.root };
  for ( std::size_t i = 0; i < queue.size(); ++i )
    for ( auto f : { g.fanin0( queue[i] ).node(), g.fanin1( queue[i] ).node() } )
      if ( !leaves.contains( f ) && g.is_and( f ) && seen.insert( f ).second )
        queue.push_back( f );
  return seen.size();
}

/* minterm-wise interpretation of the cone */
bool interpret( aig const& g, literal l, std::map<node_id, bool> const& leaf_values )
{
  auto const id = l.node();
  bool v;
  if ( auto it = leaf_values.find( id ); it != leaf_values.end() )
    v = it->second;
  else if ( id == 0 )
    v = false;
  else
    v = interpret( g, g.fanin0( id ), leaf_values ) && interpret( g, g.fanin1( id ), leaf_values );
  return v != l.is_complemented();
}

bool covers( cube const& c, std::size_t m )
{
  return ( ( m & c.pos ) == c.pos ) && ( ( m & c.neg ) == 0 );
}

/* brute force: exact cover and every cube essential */
bool isop_is_valid( truth_table const& tt, sop const& s )
{
  std::vector<unsigned> count( tt.num_bits(), 0 );
  for ( std::size_t m = 0; m < tt.num_bits(); ++m )
    for ( auto const& c : s.cubes )
      count[m] += covers( c, m ) ? 1 : 0;
  for ( std::size_t m = 0; m < tt.num_bits(); ++m )
    if ( ( count[m] > 0 ) != tt.get_bit( m ) )
      return false;
  for ( auto const& c : s.cubes )
  {
    if ( c.pos & c.neg )
      return false;
    bool essential = false;
    for ( std::size_t m = 0; m < tt.num_bits() && !essential; ++m )
      essential = covers( c, m ) && count[m] == 1;
    if ( !essential )
      return false;
  }
  return true;
}

/* f = !(a & b & c) & d with the reconvergent pair through b, g = 0 */
struct fig1
{
  aig g;
  literal a, b, c, d, n1, n2, n3, f, h;
};

fig1 make_fig1()
{
  fig1 x;
  x.a = x.g.add_pi();
  x.b = x.g.add_pi();
  x.c = x.g.add_pi();
  x.d = x.g.add_pi();
  x.n1 = x.g.add_and( x.a, x.b );
  x.n2 = x.g.add_and( x.b, x.c );
  x.n3 = x.g.add_and( x.n1, x.n2 );
  x.f = x.g.add_and( !x.n3, x.d );
  x.h = x.g.add_and( x.n1, x.g.add_and( !x.a, x.c ) );
  x.g.add_po( x.f );
  x.g.add_po( x.h );
  return x;
}

} // namespace

TEST_CASE( "recon_cut on a single gate" )
{
  aig g;
  auto const a = g.add_pi(), b = g.add_pi();
  auto const r = g.add_and( a, b );
  auto const c = recon_cut( g, r.node(), 8 );
  CHECK( c.leaves == std::vector<node_id>{ a.node(), b.node() } );
  CHECK_THROWS_AS( recon_cut( g, a.node(), 8 ), interface_error );
}

TEST_CASE( "recon_cut captures reconvergence" )
{
  auto x = make_fig1();
  auto c = recon_cut( x.g, x.f.node(), 4 );
  CHECK( c.leaves == std::vector<node_id>{ x.a.node(), x.b.node(), x.c.node(), x.d.node() } );
  collect_cone( x.g, c );
  CHECK( c.cone == std::vector<node_id>{ x.n1.node(), x.n2.node(), x.n3.node(), x.f.node() } );

  /* with K = 3 the cut stops short of the PIs */
  auto const small = recon_cut( x.g, x.f.node(), 3 );
  CHECK( small.leaves.size() <= 3 );
  CHECK_FALSE( leaks_to_pi( x.g, small ) );
}

TEST_CASE( "collect_cone examples" )
{
  aig g;
  auto const a = g.add_pi(), b = g.add_pi(), c = g.add_pi();
  auto const inner = g.add_and( a, b );
  auto const root = g.add_and( inner, c );
  cut single{ inner.node(), { a.node(), b.node() }, {} };
  collect_cone( g, single );
  CHECK( single.cone == std::vector<node_id>{ inner.node() } );
  cut two{ root.node(), { a.node(), b.node(), c.node() }, {} };
  collect_cone( g, two );
  CHECK( two.cone == std::vector<node_id>{ inner.node(), root.node() } );
  cut bad{ root.node(), { a.node(), c.node() }, {} };
  CHECK_THROWS_AS( collect_cone( g, bad ), integrity_error );
}

TEST_CASE( "cuts are sound and cones match reachability" )
{
  for ( std::uint64_t seed = 1; seed <= 6; ++seed )
  {
    auto const g = test::random_aig( seed, 16, seed == 6 ? 9000 : 500 );
    resynth_scratch s;
    for ( unsigned k : { 4u, 6u, 10u } )
      for ( node_id id = 1; id < g.size(); ++id )
      {
        if ( !g.is_and( id ) )
          continue;
        auto c = recon_cut( g, id, k, s );
        REQUIRE( c.leaves.size() <= k );
        REQUIRE_FALSE( leaks_to_pi( g, c ) );
        collect_cone( g, c, s );
        REQUIRE( c.cone.back() == id );
        REQUIRE( c.cone.size() == cone_size( g, c ) );
        std::set<node_id> before( c.leaves.begin(), c.leaves.end() );
        for ( auto const n : c.cone )
        {
          for ( auto f : { g.fanin0( n ).node(), g.fanin1( n ).node() } )
            REQUIRE( ( f == 0 || before.contains( f ) ) );
          before.insert( n );
        }
      }
  }
}

TEST_CASE( "compute_tt examples" )
{
  aig g;
  auto const a = g.add_pi(), b = g.add_pi();
  auto const both = g.add_and( a, b );
  auto const neither = g.add_and( !a, !b );
  cut c1{ both.node(), { a.node(), b.node() }, {} };
  collect_cone( g, c1 );
  CHECK( compute_tt( g, c1 ).low_bits() == 0x8 );
  cut c2{ neither.node(), { a.node(), b.node() }, {} };
  collect_cone( g, c2 );
  CHECK( compute_tt( g, c2 ).low_bits() == 0x1 );
  cut wide{ both.node(), std::vector<node_id>( 17, a.node() ), {} };
  CHECK_THROWS_AS( compute_tt( g, wide ), interface_error );
}

TEST_CASE( "compute_tt matches interpretation" )
{
  resynth_scratch s;
  unsigned checked = 0;
  for ( std::uint64_t seed = 1; seed <= 30; ++seed )
  {
    auto const g = test::random_aig( seed, 8, 200 );
    for ( node_id id = 1; id < g.size(); ++id )
    {
      if ( !g.is_and( id ) )
        continue;
      auto c = recon_cut( g, id, 5, s );
      if ( c.leaves.size() != 5 )
        continue;
      collect_cone( g, c, s );
      auto const tt = compute_tt( g, c, s );
      for ( std::size_t m = 0; m < 32; ++m )
      {
        std::map<node_id, bool> values;
        for ( unsigned i = 0; i < 5; ++i )
          values[c.leaves[i]] = ( m >> i ) & 1;
        REQUIRE( tt.get_bit( m ) == interpret( g, literal( id, false ), values ) );
      }
      ++checked;
    }
  }
  CHECK( checked > 100 );
}

TEST_CASE( "truth table cofactors" )
{
  std::mt19937_64 rng( 3 );
  for ( unsigned k = 1; k <= 9; ++k )
  {
    truth_table t( k );
    for ( std::size_t m = 0; m < t.num_bits(); ++m )
      t.set_bit( m, rng() & 1 );
    for ( unsigned v = 0; v < k; ++v )
    {
      auto const c0 = t.cofactor0( v ), c1 = t.cofactor1( v );
      bool depends = false;
      for ( std::size_t m = 0; m < t.num_bits(); ++m )
      {
        REQUIRE( c0.get_bit( m ) == t.get_bit( m & ~( std::size_t{ 1 } << v ) ) );
        REQUIRE( c1.get_bit( m ) == t.get_bit( m | ( std::size_t{ 1 } << v ) ) );
        depends |= c0.get_bit( m ) != c1.get_bit( m );
      }
      REQUIRE( t.depends_on( v ) == depends );
    }
  }
}

TEST_CASE( "isop examples" )
{
  CHECK( isop( truth_table( 3 ) ).cubes.empty() );

  auto const and2 = isop( truth_table::from_word( 2, 0x8 ) );
  REQUIRE( and2.cubes.size() == 1 );
  CHECK( and2.cubes[0] == cube{ 3, 0 } );

  auto const tt_xor = truth_table::from_word( 2, 0x6 );
  auto const x = isop( tt_xor );
  CHECK( x.cubes.size() == 2 );
  CHECK( isop_is_valid( tt_xor, x ) );

  auto const tt_maj = truth_table::from_word( 3, 0xE8 );
  auto const maj = isop( tt_maj );
  CHECK( maj.cubes.size() == 3 );
  CHECK( isop_is_valid( tt_maj, maj ) );
  std::set<std::size_t> on;
  for ( std::size_t m = 0; m < 8; ++m )
    for ( auto const& c : maj.cubes )
      if ( covers( c, m ) )
        on.insert( m );
  CHECK( on == std::set<std::size_t>{ 3, 5, 6, 7 } );

  auto const one = isop( ~truth_table( 4 ) );
  REQUIRE( one.cubes.size() == 1 );
  CHECK( one.cubes[0] == cube{} );
}

TEST_CASE( "isop brute force on random tables" )
{
  std::mt19937_64 rng( 2024 );
  for ( int i = 0; i < 10000; ++i )
  {
    unsigned const k = 1 + rng() % 8;
    truth_table t( k );
    /* mix dense, sparse and structured tables */
    auto const style = rng() % 3;
    for ( std::size_t m = 0; m < t.num_bits(); ++m )
    {
      auto const r = rng();
      t.set_bit( m, style == 0 ? ( r & 1 ) : style == 1 ? ( r % 5 == 0 ) : ( r % 5 != 0 ) );
    }
    auto const s = isop( t );
    REQUIRE( isop_is_valid( t, s ) );
    REQUIRE( sop_cover( s ) == t );
  }
}

TEST_CASE( "isop on wide tables" )
{
  std::mt19937_64 rng( 99 );
  for ( unsigned k : { 10u, 12u, 16u } )
  {
    truth_table t( k );
    for ( std::size_t m = 0; m < t.num_bits(); ++m )
      t.set_bit( m, rng() % 7 == 0 );
    CHECK( sop_cover( isop( t ) ) == t );
  }
}

TEST_CASE( "build_candidate sharing and constants" )
{
  aig g;
  auto const a = g.add_pi(), b = g.add_pi(), c = g.add_pi();
  auto const t = g.add_and( a, b );
  g.add_po( t );
  auto const r = g.add_and( g.add_and( a, c ), g.add_and( b, !c ) );
  g.add_po( r );

  cut cc{ r.node(), { a.node(), b.node() }, {} };
  sop full{ 2, { cube{ 3, 0 } } };
  std::vector<node_id> const members{ r.node() };
  auto const cand = build_candidate( g, cc, full, members );
  CHECK( cand.cost == 0 );
  REQUIRE( cand.steps.size() == 1 );
  CHECK( cand.steps[0].hit == t.node() );
  CHECK( cand.output == 2 * candidate_graph::signal_of_step( 2, 0 ) );
  CHECK( cand.hits == std::vector<node_id>{ t.node() } );

  /* the same hit inside the MFFC costs one */
  std::vector<node_id> const with_t{ r.node(), t.node() };
  CHECK( build_candidate( g, cc, full, with_t ).cost == 1 );

  /* and a hit at or above the level limit is infeasible */
  candidate_options limited;
  limited.level_limit = 1;
  CHECK_FALSE( build_candidate( g, cc, full, members, limited ).feasible );

  auto const zero = build_candidate( g, cc, sop{ 2, {} }, members );
  CHECK( zero.output == 0 );
  CHECK( zero.cost == 0 );
  CHECK( zero.steps.empty() );
}

TEST_CASE( "redundancy instance" )
{
  aig g;
  auto const a = g.add_pi(), b = g.add_pi();
  auto const n1 = g.add_and( a, b );
  auto const n2 = g.add_and( a, !b );
  auto const r = g.add_and( !n1, !n2 );
  g.add_po( r );

  auto c = recon_cut( g, r.node(), default_cut_size );
  CHECK( c.leaves == std::vector<node_id>{ a.node(), b.node() } );
  collect_cone( g, c );
  auto const tt = compute_tt( g, c );
  CHECK( tt.low_bits() == 0x5 ); /* !a */
  auto const m = mffc_collect( g, r.node(), c.leaves );
  CHECK( m.size == 3 );
  auto const cand = build_candidate( g, c, isop( tt ), m.members );
  CHECK( cand.output == 3 ); /* leaf a, complemented */
  CHECK( cand.cost == 0 );
  auto const d = evaluate( m.size, cand, false );
  CHECK( d.accept );
  CHECK( d.gain == 3 );
}

TEST_CASE( "constant cone" )
{
  auto x = make_fig1();
  auto c = recon_cut( x.g, x.h.node(), default_cut_size );
  collect_cone( x.g, c );
  auto const tt = compute_tt( x.g, c );
  CHECK( tt.is_const0() );
  auto const cand = build_candidate( x.g, c, isop( tt ), mffc_collect( x.g, x.h.node(), c.leaves ).members );
  CHECK( cand.output == 0 );
}

TEST_CASE( "evaluate" )
{
  candidate_graph cand;
  CHECK( evaluate( 3, cand, false ).accept );
  CHECK( evaluate( 3, cand, false ).gain == 3 );
  cand.cost = 2;
  CHECK_FALSE( evaluate( 2, cand, false ).accept );
  CHECK( evaluate( 2, cand, true ).accept );
  CHECK( evaluate( 2, cand, true ).gain == 0 );
  cand.feasible = false;
  CHECK_FALSE( evaluate( 9, cand, true ).accept );
}

TEST_CASE( "candidates preserve the cone function" )
{
  resynth_scratch s;
  for ( std::uint64_t seed = 1; seed <= 15; ++seed )
  {
    auto g = test::random_aig( seed, 10, 300 );
    for ( node_id id = 1; id < g.size(); ++id )
    {
      if ( !g.is_and( id ) )
        continue;
      auto c = recon_cut( g, id, 8, s );
      collect_cone( g, c, s );
      auto const tt = compute_tt( g, c, s );
      auto const m = mffc_collect( g, id, c.leaves );
      for ( bool complemented : { false, true } )
      {
        candidate_options opts;
        opts.complemented = complemented;
        auto const cand = build_candidate( g, c, isop( complemented ? ~tt : tt ), m.members, opts, s );
        REQUIRE( cand.feasible );
        REQUIRE( candidate_function( cand ) == tt );
        for ( auto const& st : cand.steps )
          if ( st.hit != 0 )
            REQUIRE( std::find( m.members.begin(), m.members.end(), st.hit ) == m.members.end() );
      }
    }
  }
}
