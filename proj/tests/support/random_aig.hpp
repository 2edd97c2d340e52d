#pragma once

#include <aigrefac/aig.hpp>

#include <random>
#include <vector>

namespace aigrefac::test
{

/* random combinational AIG; every And without fanout drives a PO so nothing dangles */
inline aig random_aig( std::uint64_t seed, unsigned num_pis, unsigned num_ands, unsigned extra_pos = 2, unsigned window = 64 )
{
  std::mt19937_64 rng( seed );
  aig g;
  std::vector<literal> pool;
  for ( unsigned i = 0; i < num_pis; ++i )
    pool.push_back( g.add_pi() );

  unsigned attempts = 0;
  while ( g.num_ands() < num_ands && attempts++ < num_ands * 20 )
  {
    auto const span = std::min<std::size_t>( pool.size(), window );
    std::uniform_int_distribution<std::size_t> pick( pool.size() - span, pool.size() - 1 );
    std::uniform_int_distribution<std::size_t> any( 0, pool.size() - 1 );
    auto const a = pool[pick( rng )] ^ ( rng() & 1 );
    auto const b = pool[( rng() & 3 ) == 0 ? any( rng ) : pick( rng )] ^ ( rng() & 1 );
    auto const before = g.num_ands();
    auto const r = g.add_and( a, b );
    if ( g.num_ands() > before )
      pool.push_back( r );
  }

  std::vector<bool> used( g.size(), false );
  for ( node_id id = 1; id < g.size(); ++id )
    if ( g.is_and( id ) )
    {
      used[g.fanin0( id ).node()] = true;
      used[g.fanin1( id ).node()] = true;
    }
  for ( node_id id = 1; id < g.size(); ++id )
    if ( g.is_and( id ) && !used[id] )
      g.add_po( literal( id, ( rng() & 1 ) != 0 ) );
  std::uniform_int_distribution<std::size_t> any( 0, pool.size() - 1 );
  for ( unsigned i = 0; i < extra_pos; ++i )
    g.add_po( pool[any( rng )] ^ ( rng() & 1 ) );
  return g;
}

} // namespace aigrefac::test
