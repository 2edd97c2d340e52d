#include <aigrefac/resynth.hpp>

#include <algorithm>
#include <optional>
#include <string>

namespace aigrefac
{

namespace
{

constexpr std::uint64_t var_masks[6] = { 0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                         0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

std::size_t words_for( unsigned num_vars )
{
  return num_vars <= 6 ? 1u : std::size_t{ 1 } << ( num_vars - 6 );
}

} // namespace

/* ---------------------------------------------------------- truth table */

truth_table::truth_table( unsigned num_vars )
    : num_vars_( num_vars ), words_( words_for( num_vars ), 0 )
{
  if ( num_vars > max_cut_size )
    throw interface_error( "truth table with " + std::to_string( num_vars ) + " variables exceeds the limit of " + std::to_string( max_cut_size ) );
}

truth_table truth_table::from_word( unsigned num_vars, std::uint64_t bits )
{
  truth_table t( num_vars );
  if ( num_vars < 6 )
  {
    auto const width = 1u << num_vars;
    bits &= ( std::uint64_t{ 1 } << width ) - 1;
    for ( auto shift = width; shift < 64; shift <<= 1 )
      bits |= bits << shift;
  }
  t.words_[0] = bits;
  return t;
}

truth_table truth_table::nth_var( unsigned num_vars, unsigned var )
{
  truth_table t( num_vars );
  for ( std::size_t w = 0; w < t.words_.size(); ++w )
    t.words_[w] = var < 6 ? var_masks[var] : ( ( w >> ( var - 6 ) ) & 1 ) ? ~std::uint64_t{ 0 } : 0;
  return t;
}

void truth_table::set_bit( std::size_t m, bool v )
{
  /* small tables keep every replica in sync */
  auto const step = num_vars_ < 6 ? std::size_t{ 1 } << num_vars_ : std::size_t{ 64 };
  auto const end = num_vars_ < 6 ? std::size_t{ 64 } : m + 1;
  for ( auto i = m; i < end; i += step )
  {
    auto const bit = std::uint64_t{ 1 } << ( i & 63 );
    words_[i >> 6] = v ? ( words_[i >> 6] | bit ) : ( words_[i >> 6] & ~bit );
  }
}

std::uint64_t truth_table::low_bits() const
{
  if ( num_vars_ >= 6 )
    return words_[0];
  return words_[0] & ( ( std::uint64_t{ 1 } << ( 1u << num_vars_ ) ) - 1 );
}

bool truth_table::is_const0() const
{
  return std::all_of( words_.begin(), words_.end(), []( auto w ) { return w == 0; } );
}

bool truth_table::is_const1() const
{
  return std::all_of( words_.begin(), words_.end(), []( auto w ) { return w == ~std::uint64_t{ 0 }; } );
}

truth_table truth_table::cofactor0( unsigned var ) const
{
  truth_table t = *this;
  if ( var < 6 )
  {
    for ( auto& w : t.words_ )
    {
      auto const lo = w & ~var_masks[var];
      w = lo | ( lo << ( 1u << var ) );
    }
    return t;
  }
  auto const step = std::size_t{ 1 } << ( var - 6 );
  for ( std::size_t base = 0; base < t.words_.size(); base += 2 * step )
    std::copy_n( t.words_.begin() + base, step, t.words_.begin() + base + step );
  return t;
}

truth_table truth_table::cofactor1( unsigned var ) const
{
  truth_table t = *this;
  if ( var < 6 )
  {
    for ( auto& w : t.words_ )
    {
      auto const hi = w & var_masks[var];
      w = hi | ( hi >> ( 1u << var ) );
    }
    return t;
  }
  auto const step = std::size_t{ 1 } << ( var - 6 );
  for ( std::size_t base = 0; base < t.words_.size(); base += 2 * step )
    std::copy_n( t.words_.begin() + base + step, step, t.words_.begin() + base );
  return t;
}

bool truth_table::depends_on( unsigned var ) const
{
  if ( var < 6 )
  {
    auto const shift = 1u << var;
    return std::any_of( words_.begin(), words_.end(), [&]( auto w ) { return ( ( w >> shift ) ^ w ) & ~var_masks[var]; } );
  }
  auto const step = std::size_t{ 1 } << ( var - 6 );
  for ( std::size_t base = 0; base < words_.size(); base += 2 * step )
    if ( !std::equal( words_.begin() + base, words_.begin() + base + step, words_.begin() + base + step ) )
      return true;
  return false;
}

truth_table truth_table::operator~() const
{
  truth_table t = *this;
  for ( auto& w : t.words_ )
    w = ~w;
  return t;
}

truth_table truth_table::operator&( truth_table const& other ) const
{
  truth_table t = *this;
  for ( std::size_t i = 0; i < t.words_.size(); ++i )
    t.words_[i] &= other.words_[i];
  return t;
}

truth_table truth_table::operator|( truth_table const& other ) const
{
  truth_table t = *this;
  for ( std::size_t i = 0; i < t.words_.size(); ++i )
    t.words_[i] |= other.words_[i];
  return t;
}

std::uint32_t resynth_scratch::next_epoch( std::size_t n )
{
  if ( mark.size() < n )
  {
    mark.resize( n + n / 4 + 64, 0 );
    slot.resize( mark.size(), 0 );
  }
  if ( epoch > std::numeric_limits<std::uint32_t>::max() - 8 )
  {
    std::fill( mark.begin(), mark.end(), 0 );
    epoch = 0;
  }
  epoch += 4;
  return epoch;
}

/* ------------------------------------------------------------------ cut */

namespace
{

/* states relative to the epoch base */
constexpr std::uint32_t st_visited = 0, st_leaf = 1, st_open = 2, st_done = 3;

std::pair<node_id, node_id> resolved_fanins( aig const& g, node_id id )
{
  return { g.resolve( g.fanin0( id ) ).node(), g.resolve( g.fanin1( id ) ).node() };
}

} // namespace

cut recon_cut( aig const& g, node_id root, unsigned k, resynth_scratch& s )
{
  if ( !g.is_and( root ) )
    throw interface_error( "cut root " + std::to_string( root ) + " is not a live And node" );
  if ( k < 2 || k > max_cut_size )
    throw interface_error( "cut size must lie in [2, " + std::to_string( max_cut_size ) + "]" );

  auto const e = s.next_epoch( g.size() );
  auto const visited = [&]( node_id id ) { return id < s.mark.size() && s.mark[id] == e + st_visited; };
  cut c;
  c.root = root;
  s.mark[root] = e + st_visited;
  s.mark[0] = e + st_visited; /* the constant is never a leaf */

  auto const add = [&]( node_id id ) {
    if ( !visited( id ) )
    {
      s.mark[id] = e + st_visited;
      c.leaves.push_back( id );
    }
  };
  auto const [f0, f1] = resolved_fanins( g, root );
  add( f0 );
  add( f1 );

  while ( true )
  {
    node_id best = 0;
    unsigned best_cost = 3;
    for ( auto const leaf : c.leaves )
    {
      if ( !g.is_and( leaf ) )
        continue;
      auto const [a, b] = resolved_fanins( g, leaf );
      unsigned const cost = ( visited( a ) ? 0u : 1u ) + ( visited( b ) || a == b ? 0u : 1u );
      if ( cost < best_cost || ( cost == best_cost && leaf < best ) )
      {
        best = leaf;
        best_cost = cost;
      }
    }
    if ( best == 0 || c.leaves.size() - 1 + best_cost > k )
      break;
    c.leaves.erase( std::find( c.leaves.begin(), c.leaves.end(), best ) );
    auto const [a, b] = resolved_fanins( g, best );
    add( a );
    add( b );
  }
  std::sort( c.leaves.begin(), c.leaves.end() );
  return c;
}

cut recon_cut( aig const& g, node_id root, unsigned k )
{
  resynth_scratch s;
  return recon_cut( g, root, k, s );
}

void collect_cone( aig const& g, cut& c, resynth_scratch& s )
{
  auto const e = s.next_epoch( g.size() );
  for ( auto const leaf : c.leaves )
    s.mark[leaf] = e + st_leaf;
  s.mark[0] = e + st_leaf;
  c.cone.clear();

  s.stack.clear();
  s.stack.push_back( c.root );
  while ( !s.stack.empty() )
  {
    auto const id = s.stack.back();
    if ( s.mark[id] == e + st_done || s.mark[id] == e + st_leaf )
    {
      s.stack.pop_back();
      continue;
    }
    if ( !g.is_and( id ) )
      throw integrity_error( "cut of node " + std::to_string( c.root ) + " is not a cut: reached node " + std::to_string( id ) + " outside the leaves" );
    auto const [a, b] = resolved_fanins( g, id );
    if ( s.mark[id] == e + st_open )
    {
      s.mark[id] = e + st_done;
      c.cone.push_back( id );
      s.stack.pop_back();
      continue;
    }
    s.mark[id] = e + st_open;
    for ( auto const f : { b, a } )
      if ( s.mark[f] != e + st_done && s.mark[f] != e + st_leaf )
      {
        if ( s.mark[f] == e + st_open )
          throw integrity_error( "cycle through node " + std::to_string( f ) );
        s.stack.push_back( f );
      }
  }
}

void collect_cone( aig const& g, cut& c )
{
  resynth_scratch s;
  collect_cone( g, c, s );
}

/* ------------------------------------------------------------ function */

truth_table compute_tt( aig const& g, cut const& c, resynth_scratch& s )
{
  auto const k = static_cast<unsigned>( c.leaves.size() );
  if ( k > max_cut_size )
    throw interface_error( "cut with " + std::to_string( k ) + " leaves exceeds the limit of " + std::to_string( max_cut_size ) );
  auto const nw = words_for( k );
  auto const e = s.next_epoch( g.size() );
  s.tt_words.assign( ( 1 + k + c.cone.size() ) * nw, 0 );

  /* slot 0 is the constant */
  s.mark[0] = e + st_done;
  s.slot[0] = 0;
  for ( unsigned i = 0; i < k; ++i )
  {
    auto const var = truth_table::nth_var( k, i );
    std::copy( var.words().begin(), var.words().end(), s.tt_words.begin() + ( 1 + i ) * nw );
    s.mark[c.leaves[i]] = e + st_done;
    s.slot[c.leaves[i]] = 1 + i;
  }

  std::uint32_t next = 1 + k;
  for ( auto const id : c.cone )
  {
    auto const l0 = g.resolve( g.fanin0( id ) );
    auto const l1 = g.resolve( g.fanin1( id ) );
    for ( auto const l : { l0, l1 } )
      if ( s.mark[l.node()] != e + st_done )
        throw integrity_error( "cone of node " + std::to_string( c.root ) + " is not topologically ordered at node " + std::to_string( id ) );
    auto const* a = &s.tt_words[s.slot[l0.node()] * nw];
    auto const* b = &s.tt_words[s.slot[l1.node()] * nw];
    auto const ca = l0.is_complemented() ? ~std::uint64_t{ 0 } : 0;
    auto const cb = l1.is_complemented() ? ~std::uint64_t{ 0 } : 0;
    auto* out = &s.tt_words[next * nw];
    for ( std::size_t w = 0; w < nw; ++w )
      out[w] = ( a[w] ^ ca ) & ( b[w] ^ cb );
    s.mark[id] = e + st_done;
    s.slot[id] = next++;
  }

  truth_table t( k );
  if ( s.mark[c.root] != e + st_done )
    throw integrity_error( "root " + std::to_string( c.root ) + " missing from its cone" );
  std::copy_n( s.tt_words.begin() + s.slot[c.root] * nw, nw, t.words().begin() );
  return t;
}

truth_table compute_tt( aig const& g, cut const& c )
{
  resynth_scratch s;
  return compute_tt( g, c, s );
}

/* ----------------------------------------------------------------- isop */

namespace
{

/* word-level recursion over replicated tables of `nw` words; frames are
   carved from one preallocated arena so nothing allocates per call */
class isop_engine
{
public:
  isop_engine( unsigned num_vars, std::vector<cube>& out )
      : nw_( num_vars <= 6 ? 1 : std::size_t{ 1 } << ( num_vars - 6 ) ), out_( out )
  {
    arena_.resize( ( num_vars + 2 ) * 8 * nw_ );
  }

  /* cover of `on` within `upper`; the covered set goes to `res` */
  void run( std::uint64_t const* on, std::uint64_t const* upper, std::uint64_t* res, cube prefix, std::size_t top )
  {
    if ( all_of( on, 0 ) )
    {
      std::fill_n( res, nw_, 0 );
      return;
    }
    if ( all_of( upper, ~std::uint64_t{ 0 } ) )
    {
      out_.push_back( prefix );
      std::fill_n( res, nw_, ~std::uint64_t{ 0 } );
      return;
    }

    unsigned var = 0;
    while ( !depends( on, var ) && !depends( upper, var ) )
      ++var;

    auto* on0 = &arena_[top];
    auto* on1 = on0 + nw_;
    auto* up0 = on1 + nw_;
    auto* up1 = up0 + nw_;
    auto* tmp = up1 + nw_;
    auto* r0 = tmp + nw_;
    auto* r1 = r0 + nw_;
    auto* rs = r1 + nw_;
    auto const next = top + 8 * nw_;

    cofactor( on, var, false, on0 );
    cofactor( on, var, true, on1 );
    cofactor( upper, var, false, up0 );
    cofactor( upper, var, true, up1 );

    for ( std::size_t i = 0; i < nw_; ++i )
      tmp[i] = on0[i] & ~up1[i];
    run( tmp, up0, r0, { prefix.pos, prefix.neg | ( 1u << var ) }, next );
    for ( std::size_t i = 0; i < nw_; ++i )
      tmp[i] = on1[i] & ~up0[i];
    run( tmp, up1, r1, { prefix.pos | ( 1u << var ), prefix.neg }, next );
    for ( std::size_t i = 0; i < nw_; ++i )
    {
      tmp[i] = ( on0[i] & ~r0[i] ) | ( on1[i] & ~r1[i] );
      up0[i] &= up1[i];
    }
    run( tmp, up0, rs, prefix, next );

    if ( var < 6 )
    {
      auto const m = var_masks[var];
      for ( std::size_t i = 0; i < nw_; ++i )
        res[i] = ( r0[i] & ~m ) | ( r1[i] & m ) | rs[i];
    }
    else
    {
      auto const bit = std::size_t{ 1 } << ( var - 6 );
      for ( std::size_t i = 0; i < nw_; ++i )
        res[i] = ( ( i & bit ) ? r1[i] : r0[i] ) | rs[i];
    }
  }

  std::size_t words() const { return nw_; }

private:
  static constexpr std::uint64_t var_masks[6] = { 0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                                  0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

  bool all_of( std::uint64_t const* t, std::uint64_t v ) const
  {
    for ( std::size_t i = 0; i < nw_; ++i )
      if ( t[i] != v )
        return false;
    return true;
  }

  bool depends( std::uint64_t const* t, unsigned var ) const
  {
    if ( var < 6 )
    {
      auto const m = var_masks[var];
      auto const s = 1u << var;
      for ( std::size_t i = 0; i < nw_; ++i )
        if ( ( ( t[i] & m ) >> s ) != ( t[i] & ~m ) )
          return true;
      return false;
    }
    auto const bit = std::size_t{ 1 } << ( var - 6 );
    for ( std::size_t i = 0; i < nw_; ++i )
      if ( !( i & bit ) && t[i] != t[i | bit] )
        return true;
    return false;
  }

  void cofactor( std::uint64_t const* t, unsigned var, bool positive, std::uint64_t* out ) const
  {
    if ( var < 6 )
    {
      auto const m = var_masks[var];
      auto const s = 1u << var;
      for ( std::size_t i = 0; i < nw_; ++i )
      {
        auto const half = positive ? t[i] & m : t[i] & ~m;
        out[i] = positive ? half | ( half >> s ) : half | ( half << s );
      }
      return;
    }
    auto const bit = std::size_t{ 1 } << ( var - 6 );
    for ( std::size_t i = 0; i < nw_; ++i )
      out[i] = t[positive ? ( i | bit ) : ( i & ~bit )];
  }

  std::size_t nw_;
  std::vector<cube>& out_;
  std::vector<std::uint64_t> arena_;
};

} // namespace

sop isop( truth_table const& tt )
{
  sop result;
  result.num_vars = tt.num_vars();
  isop_engine engine( tt.num_vars(), result.cubes );
  std::vector<std::uint64_t> covered( engine.words() );
  engine.run( tt.words().data(), tt.words().data(), covered.data(), {}, 0 );
  std::sort( result.cubes.begin(), result.cubes.end(), []( cube const& a, cube const& b ) {
    return a.pos != b.pos ? a.pos < b.pos : a.neg < b.neg;
  } );
  return result;
}

truth_table sop_cover( sop const& s )
{
  truth_table cover( s.num_vars );
  for ( auto const& c : s.cubes )
  {
    auto term = ~truth_table( s.num_vars );
    for ( unsigned v = 0; v < s.num_vars; ++v )
    {
      if ( c.pos & ( 1u << v ) )
        term = term & truth_table::nth_var( s.num_vars, v );
      if ( c.neg & ( 1u << v ) )
        term = term & ~truth_table::nth_var( s.num_vars, v );
    }
    cover = cover | term;
  }
  return cover;
}

/* ------------------------------------------------------------ candidate */

namespace
{

class candidate_builder
{
public:
  candidate_builder( aig const& g, cut const& c, std::span<node_id const> members, candidate_options const& opts, resynth_scratch& s )
      : g_( g ), opts_( opts ), s_( s )
  {
    cand_.num_leaves = static_cast<std::uint32_t>( c.leaves.size() );
    real_.push_back( const0 );
    for ( auto const leaf : c.leaves )
      real_.push_back( literal( leaf, false ) );
    epoch_ = s.next_epoch( g.size() );
    for ( auto const m : members )
      s.mark[m] = epoch_ + st_visited;
    s.step_index.clear();
  }

  candidate_graph build( sop const& sp )
  {
    std::vector<std::uint32_t> terms;
    terms.reserve( sp.cubes.size() );
    std::vector<std::uint32_t> lits;
    for ( auto const& cb : sp.cubes )
    {
      lits.clear();
      for ( std::uint32_t v = 0; v < cand_.num_leaves; ++v )
      {
        if ( cb.pos & ( 1u << v ) )
          lits.push_back( 2 * ( 1 + v ) );
        else if ( cb.neg & ( 1u << v ) )
          lits.push_back( 2 * ( 1 + v ) + 1 );
      }
      terms.push_back( lits.empty() ? 1u : and_tree( lits, 0, lits.size() ) );
      if ( !cand_.feasible )
        return std::move( cand_ );
    }
    auto const out = terms.empty() ? 0u : or_tree( terms, 0, terms.size() );
    cand_.output = opts_.complemented ? out ^ 1u : out;
    return std::move( cand_ );
  }

private:
  std::uint32_t and_tree( std::vector<std::uint32_t> const& lits, std::size_t lo, std::size_t hi )
  {
    if ( hi - lo == 1 )
      return lits[lo];
    auto const mid = lo + ( hi - lo ) / 2;
    auto const a = and_tree( lits, lo, mid );
    auto const b = and_tree( lits, mid, hi );
    return make_and( a, b );
  }

  std::uint32_t or_tree( std::vector<std::uint32_t> const& terms, std::size_t lo, std::size_t hi )
  {
    if ( hi - lo == 1 )
      return terms[lo];
    auto const mid = lo + ( hi - lo ) / 2;
    auto const a = or_tree( terms, lo, mid );
    auto const b = or_tree( terms, mid, hi );
    return make_and( a ^ 1u, b ^ 1u ) ^ 1u;
  }

  std::uint32_t make_and( std::uint32_t a, std::uint32_t b )
  {
    if ( !cand_.feasible )
      return 0;
    if ( a > b )
      std::swap( a, b );
    if ( a == b )
      return a;
    if ( a == ( b ^ 1u ) || a == 0 )
      return 0;
    if ( a == 1 )
      return b;

    auto const ra = real( a ), rb = real( b );
    node_id hit = 0;
    std::uint32_t hit_level = 0;
    if ( ra && rb )
    {
      if ( *ra == *rb )
        return a;
      if ( *ra == !*rb )
        return 0;
      hit = g_.strash_find( *ra, *rb, &hit_level );
    }

    auto const key = ( std::uint64_t{ a } << 32 ) | b;
    if ( auto it = s_.step_index.find( key ); it != s_.step_index.end() )
      return 2 * it->second;

    candidate_step step{ a, b, 0 };
    literal real_out = literal::from_raw( invalid );
    bool const in_mffc = hit != 0 && hit < s_.mark.size() && s_.mark[hit] == epoch_ + st_visited;
    if ( hit != 0 && !in_mffc )
    {
      if ( hit_level >= opts_.level_limit )
      {
        cand_.feasible = false;
        return 0;
      }
      step.hit = hit;
      cand_.hits.push_back( hit );
      real_out = literal( hit, false );
    }
    else if ( ++cand_.cost > opts_.max_cost )
    {
      cand_.feasible = false;
      return 0;
    }

    auto const signal = candidate_graph::signal_of_step( cand_.num_leaves, cand_.steps.size() );
    cand_.steps.push_back( step );
    real_.push_back( real_out );
    s_.step_index.emplace( key, signal );
    return 2 * signal;
  }

  std::optional<literal> real( std::uint32_t sig_lit ) const
  {
    auto const l = real_[sig_lit >> 1];
    if ( l.raw() == invalid )
      return std::nullopt;
    return l ^ ( ( sig_lit & 1u ) != 0 );
  }

  static constexpr std::uint32_t invalid = std::numeric_limits<std::uint32_t>::max();

  aig const& g_;
  candidate_options const& opts_;
  resynth_scratch& s_;
  std::uint32_t epoch_ = 0;
  candidate_graph cand_;
  std::vector<literal> real_; /* existing literal per signal, or invalid */
};

} // namespace

candidate_graph build_candidate( aig const& g, cut const& c, sop const& s, std::span<node_id const> mffc_members,
                                 candidate_options const& options, resynth_scratch& scratch )
{
  if ( s.num_vars != c.leaves.size() )
    throw interface_error( "sop arity does not match the cut" );
  candidate_builder builder( g, c, mffc_members, options, scratch );
  return builder.build( s );
}

candidate_graph build_candidate( aig const& g, cut const& c, sop const& s, std::span<node_id const> mffc_members, candidate_options const& options )
{
  resynth_scratch scratch;
  return build_candidate( g, c, s, mffc_members, options, scratch );
}

truth_table candidate_function( candidate_graph const& cand )
{
  auto const k = cand.num_leaves;
  std::vector<truth_table> sig;
  sig.reserve( 1 + k + cand.steps.size() );
  sig.emplace_back( k );
  for ( unsigned i = 0; i < k; ++i )
    sig.push_back( truth_table::nth_var( k, i ) );
  auto const value = [&]( std::uint32_t lit ) { return ( lit & 1u ) ? ~sig[lit >> 1] : sig[lit >> 1]; };
  for ( auto const& st : cand.steps )
    sig.push_back( value( st.a ) & value( st.b ) );
  return value( cand.output );
}

decision evaluate( std::uint32_t mffc_size, candidate_graph const& cand, bool zero_gain )
{
  if ( !cand.feasible )
    return {};
  auto const gain = static_cast<std::int64_t>( mffc_size ) - static_cast<std::int64_t>( cand.cost );
  return { gain > 0 || ( zero_gain && gain == 0 ), gain };
}

} // namespace aigrefac
