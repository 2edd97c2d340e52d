#include <aigrefac/verify.hpp>

#include <algorithm>

namespace aigrefac
{

circuit_stats stats( aig const& g )
{
  return { g.pis().size(), g.pos().size(), area( g ), depth( g ) };
}

simulator::simulator( aig const& g )
    : g_( g ), order_( topological_order( g ) )
{
}

std::vector<std::uint64_t> simulator::run( std::span<std::uint64_t const> pi_words, std::size_t words )
{
  auto const pis = g_.pis();
  if ( pi_words.size() != pis.size() * words )
    throw interface_error( "expected " + std::to_string( pis.size() * words ) + " PI words, got " + std::to_string( pi_words.size() ) );

  values_.assign( g_.size() * words, 0 );
  for ( std::size_t i = 0; i < pis.size(); ++i )
    std::copy_n( pi_words.begin() + static_cast<std::ptrdiff_t>( i * words ), words, values_.begin() + static_cast<std::ptrdiff_t>( pis[i] * words ) );

  for ( auto const id : order_ )
  {
    auto const& nd = g_.at( id );
    auto* out = &values_[id * words];
    auto const* a = &values_[nd.fanin0.node() * words];
    std::uint64_t const ca = nd.fanin0.is_complemented() ? ~std::uint64_t{ 0 } : 0;
    if ( nd.kind == node_kind::buffer )
    {
      for ( std::size_t w = 0; w < words; ++w )
        out[w] = a[w] ^ ca;
      continue;
    }
    auto const* b = &values_[nd.fanin1.node() * words];
    std::uint64_t const cb = nd.fanin1.is_complemented() ? ~std::uint64_t{ 0 } : 0;
    for ( std::size_t w = 0; w < words; ++w )
      out[w] = ( a[w] ^ ca ) & ( b[w] ^ cb );
  }

  auto const pos = g_.pos();
  std::vector<std::uint64_t> result( pos.size() * words );
  for ( std::size_t o = 0; o < pos.size(); ++o )
  {
    std::uint64_t const c = pos[o].is_complemented() ? ~std::uint64_t{ 0 } : 0;
    for ( std::size_t w = 0; w < words; ++w )
      result[o * words + w] = values_[pos[o].node() * words + w] ^ c;
  }
  return result;
}

std::vector<std::uint64_t> simulate( aig const& g, std::span<std::uint64_t const> pi_words )
{
  simulator sim( g );
  return sim.run( pi_words, 1 );
}

std::uint64_t splitmix64( std::uint64_t& state )
{
  std::uint64_t z = ( state += 0x9E3779B97F4A7C15ull );
  z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBull;
  return z ^ ( z >> 31 );
}

namespace
{

/* patterns for round `round`: depends only on (seed, round) */
void random_round( std::uint64_t seed, std::uint64_t round, std::span<std::uint64_t> out )
{
  std::uint64_t state = seed ^ ( round * 0xD1B54A32D192ED03ull );
  splitmix64( state );
  for ( auto& w : out )
    w = splitmix64( state );
}

/* PI `i` over the exhaustive pattern space, word `w` */
std::uint64_t exhaustive_word( std::size_t i, std::uint64_t w )
{
  static constexpr std::uint64_t masks[6] = { 0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                              0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };
  if ( i < 6 )
    return masks[i];
  return ( ( w >> ( i - 6 ) ) & 1 ) ? ~std::uint64_t{ 0 } : 0;
}

} // namespace

std::vector<std::uint64_t> signatures( aig const& g, std::size_t rounds, std::uint64_t seed )
{
  simulator sim( g );
  std::vector<std::uint64_t> result;
  std::vector<std::uint64_t> words( g.pis().size() );
  for ( std::size_t r = 0; r < rounds; ++r )
  {
    random_round( seed, r, words );
    auto const out = sim.run( words, 1 );
    result.insert( result.end(), out.begin(), out.end() );
  }
  return result;
}

std::string to_string( equiv_status s )
{
  switch ( s )
  {
  case equiv_status::equivalent_exhaustive:
    return "equivalent_exhaustive";
  case equiv_status::equivalent_sampled:
    return "equivalent_sampled";
  case equiv_status::counterexample:
    return "counterexample";
  }
  return "unknown";
}

equiv_verdict equiv_check( aig const& a, aig const& b, std::uint64_t max_patterns, std::uint64_t seed )
{
  if ( a.pis().size() != b.pis().size() || a.pos().size() != b.pos().size() )
    throw interface_error( "PI/PO arity mismatch: " + std::to_string( a.pis().size() ) + "/" + std::to_string( a.pos().size() ) + " vs " +
                           std::to_string( b.pis().size() ) + "/" + std::to_string( b.pos().size() ) );

  auto const num_pis = a.pis().size();
  bool const exhaustive = num_pis <= exhaustive_pi_limit;
  std::uint64_t const total_words = exhaustive ? std::max<std::uint64_t>( 1, ( std::uint64_t{ 1 } << num_pis ) / 64 )
                                               : ( std::max<std::uint64_t>( max_patterns, 1 ) + 63 ) / 64;
  std::uint64_t const valid_mask = exhaustive && num_pis < 6 ? ( std::uint64_t{ 1 } << ( std::uint64_t{ 1 } << num_pis ) ) - 1 : ~std::uint64_t{ 0 };

  simulator sim_a( a ), sim_b( b );
  equiv_verdict verdict;
  constexpr std::uint64_t block = 16;
  std::vector<std::uint64_t> words;
  for ( std::uint64_t start = 0; start < total_words; start += block )
  {
    auto const count = std::min( block, total_words - start );
    words.assign( num_pis * count, 0 );
    if ( exhaustive )
    {
      for ( std::size_t i = 0; i < num_pis; ++i )
        for ( std::uint64_t w = 0; w < count; ++w )
          words[i * count + w] = exhaustive_word( i, start + w );
    }
    else
    {
      std::vector<std::uint64_t> round( num_pis );
      for ( std::uint64_t w = 0; w < count; ++w )
      {
        random_round( seed, start + w, round );
        for ( std::size_t i = 0; i < num_pis; ++i )
          words[i * count + w] = round[i];
      }
    }

    auto const out_a = sim_a.run( words, count );
    auto const out_b = sim_b.run( words, count );
    for ( std::size_t o = 0; o < a.pos().size(); ++o )
      for ( std::uint64_t w = 0; w < count; ++w )
      {
        auto const diff = ( out_a[o * count + w] ^ out_b[o * count + w] ) & valid_mask;
        if ( diff == 0 )
          continue;
        auto const bit = static_cast<unsigned>( __builtin_ctzll( diff ) );
        verdict.status = equiv_status::counterexample;
        verdict.po = o;
        verdict.witness.resize( num_pis );
        for ( std::size_t i = 0; i < num_pis; ++i )
          verdict.witness[i] = ( ( words[i * count + w] >> bit ) & 1 ) != 0;
        verdict.patterns = ( start + w ) * 64 + bit + 1;
        return verdict;
      }
  }
  verdict.status = exhaustive ? equiv_status::equivalent_exhaustive : equiv_status::equivalent_sampled;
  verdict.patterns = exhaustive ? ( std::uint64_t{ 1 } << num_pis ) : total_words * 64;
  return verdict;
}

bool replay_counterexample( aig const& a, aig const& b, equiv_verdict const& verdict )
{
  if ( verdict.status != equiv_status::counterexample || verdict.witness.size() != a.pis().size() )
    return false;
  std::vector<std::uint64_t> words( verdict.witness.size() );
  for ( std::size_t i = 0; i < words.size(); ++i )
    words[i] = verdict.witness[i] ? 1u : 0u;
  auto const out_a = simulate( a, words );
  auto const out_b = simulate( b, words );
  return ( ( out_a[verdict.po] ^ out_b[verdict.po] ) & 1u ) != 0;
}

} // namespace aigrefac
