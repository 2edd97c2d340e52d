#include <aigrefac/aig.hpp>

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_set>

namespace aigrefac
{

/* ---------------------------------------------------------------- arena */

node_id node_arena::append()
{
  std::lock_guard lock( mutex_ );
  auto const id = size_.load( std::memory_order_relaxed );
  if ( ( id >> page_bits ) >= pages_.size() )
  {
    if ( pages_.size() == table_capacity_ )
      grow_table();
    pages_.emplace_back( new node[page_size] );
    table_.load( std::memory_order_relaxed )[pages_.size() - 1] = pages_.back().get();
  }
  size_.store( id + 1, std::memory_order_release );
  return static_cast<node_id>( id );
}

void node_arena::grow_table()
{
  auto const capacity = std::max<std::size_t>( 16, table_capacity_ * 2 );
  auto table = std::make_unique<node*[]>( capacity );
  for ( std::size_t i = 0; i < pages_.size(); ++i )
    table[i] = pages_[i].get();
  table_.store( table.get(), std::memory_order_release );
  tables_.push_back( std::move( table ) );
  table_capacity_ = capacity;
}

/* --------------------------------------------------------------- strash */

struct aig::strash_table
{
  static constexpr std::size_t num_locks = 4096;

  std::vector<node_id> heads = std::vector<node_id>( 1024, 0 );
  std::unique_ptr<std::mutex[]> locks = std::make_unique<std::mutex[]>( num_locks );
  std::size_t count = 0; /* maintained only by single-threaded inserts */
};

std::size_t aig::bucket_of( literal a, literal b ) const
{
  std::uint64_t h = a.raw() * 0x9E3779B97F4A7C15ull ^ ( b.raw() + 0x632BE59BD9B4E019ull ) * 0xC2B2AE3D27D4EB4Full;
  h ^= h >> 29;
  return static_cast<std::size_t>( h & ( strash_->heads.size() - 1 ) );
}

std::mutex& aig::lock_of( std::size_t bucket ) const
{
  return strash_->locks[bucket & ( strash_table::num_locks - 1 )];
}

node_id aig::strash_find( literal a, literal b, std::uint32_t* level ) const
{
  auto const [x, y] = normalized( a, b );
  auto const bucket = bucket_of( x, y );
  std::lock_guard lock( lock_of( bucket ) );
  for ( auto id = strash_->heads[bucket]; id != 0; id = at( id ).next )
  {
    auto const& n = at( id );
    if ( n.fanin0 == x && n.fanin1 == y )
    {
      if ( level )
        *level = n.level;
      return id;
    }
  }
  return 0;
}

node_id aig::strash_find_and_ref( literal a, literal b, std::uint32_t* level )
{
  auto const [x, y] = normalized( a, b );
  auto const bucket = bucket_of( x, y );
  std::lock_guard lock( lock_of( bucket ) );
  for ( auto id = strash_->heads[bucket]; id != 0; id = at( id ).next )
  {
    auto& n = at( id );
    if ( n.fanin0 == x && n.fanin1 == y )
    {
      n.refs.fetch_add( 1, std::memory_order_relaxed );
      if ( level )
        *level = n.level;
      return id;
    }
  }
  return 0;
}

node_id aig::strash_insert( node_id id )
{
  auto& n = at( id );
  auto const [x, y] = normalized( n.fanin0, n.fanin1 );
  n.fanin0 = x;
  n.fanin1 = y;
  auto const bucket = bucket_of( x, y );
  std::lock_guard lock( lock_of( bucket ) );
  for ( auto other = strash_->heads[bucket]; other != 0; other = at( other ).next )
  {
    auto const& m = at( other );
    if ( m.fanin0 == x && m.fanin1 == y )
      return other;
  }
  n.next = strash_->heads[bucket];
  strash_->heads[bucket] = id;
  n.flags.fetch_or( node_flags::hashed, std::memory_order_relaxed );
  return 0;
}

void aig::strash_unlink( node_id id )
{
  auto& n = at( id );
  auto const bucket = bucket_of( n.fanin0, n.fanin1 );
  std::lock_guard lock( lock_of( bucket ) );
  if ( ( n.flags.load( std::memory_order_relaxed ) & node_flags::hashed ) == 0 )
    return;
  auto* link = &strash_->heads[bucket];
  while ( *link != 0 && *link != id )
    link = &at( *link ).next;
  if ( *link == 0 )
    throw integrity_error( "node " + std::to_string( id ) + " flagged hashed but missing from its bucket" );
  *link = n.next;
  n.next = 0;
  n.flags.fetch_and( static_cast<std::uint8_t>( ~node_flags::hashed ), std::memory_order_relaxed );
}

bool aig::deref_node( node_id id, bool honor_reused )
{
  auto& n = at( id );
  if ( n.kind == node_kind::pi || n.kind == node_kind::constant )
  {
    n.refs.fetch_sub( 1, std::memory_order_relaxed );
    return false;
  }

  /* fast path: the count cannot reach zero */
  auto current = n.refs.load( std::memory_order_relaxed );
  while ( current > 1 )
  {
    if ( n.refs.compare_exchange_weak( current, current - 1, std::memory_order_relaxed ) )
      return false;
  }
  if ( current == 0 )
    throw integrity_error( "reference count underflow on node " + std::to_string( id ) );

  if ( n.kind == node_kind::buffer )
  {
    if ( n.refs.fetch_sub( 1, std::memory_order_relaxed ) != 1 )
      return false;
    if ( !honor_reused )
      clear_flag( id, node_flags::reused );
    return !is_reused( id );
  }

  /* the 1 -> 0 transition and the unlink are atomic w.r.t. strash lookups */
  auto const bucket = bucket_of( n.fanin0, n.fanin1 );
  std::unique_lock lock( lock_of( bucket ) );
  if ( n.refs.fetch_sub( 1, std::memory_order_relaxed ) != 1 )
    return false;
  if ( is_reused( id ) )
  {
    if ( honor_reused )
      return false;
    clear_flag( id, node_flags::reused );
  }
  if ( n.flags.load( std::memory_order_relaxed ) & node_flags::hashed )
  {
    auto* link = &strash_->heads[bucket];
    while ( *link != 0 && *link != id )
      link = &at( *link ).next;
    if ( *link != 0 )
      *link = n.next;
    n.next = 0;
    n.flags.fetch_and( static_cast<std::uint8_t>( ~node_flags::hashed ), std::memory_order_relaxed );
  }
  return true;
}

node_id aig::allocate()
{
  auto const id = nodes_->append();
  auto& n = at( id );
  n.kind = node_kind::and_gate;
  num_ands_.fetch_add( 1, std::memory_order_relaxed );
  return id;
}

void aig::tombstone( node_id id )
{
  auto& n = at( id );
  if ( n.flags.load( std::memory_order_relaxed ) & node_flags::deleted )
    throw integrity_error( "node " + std::to_string( id ) + " deleted twice" );
  if ( n.kind == node_kind::and_gate )
    num_ands_.fetch_sub( 1, std::memory_order_relaxed );
  n.flags.store( node_flags::deleted, std::memory_order_relaxed );
}

void aig::make_buffer( node_id id, literal target )
{
  auto& n = at( id );
  if ( n.kind == node_kind::and_gate )
    num_ands_.fetch_sub( 1, std::memory_order_relaxed );
  n.kind = node_kind::buffer;
  n.fanin0 = target;
  n.fanin1 = const1;
  n.level = target.is_constant() ? 0 : at( target.node() ).level;
}

void aig::reserve( std::size_t expected_nodes )
{
  std::size_t buckets = 1024;
  while ( buckets < expected_nodes * 2 )
    buckets <<= 1;
  if ( buckets <= strash_->heads.size() )
    return;
  std::vector<node_id> hashed;
  hashed.reserve( strash_->count );
  for ( auto const head : strash_->heads )
    for ( auto id = head; id != 0; id = at( id ).next )
      hashed.push_back( id );
  strash_->heads.assign( buckets, 0 );
  for ( auto const id : hashed )
  {
    auto& n = at( id );
    auto const bucket = bucket_of( n.fanin0, n.fanin1 );
    n.next = strash_->heads[bucket];
    strash_->heads[bucket] = id;
  }
}

/* --------------------------------------------------------- construction */

aig::aig()
    : nodes_( std::make_unique<node_arena>() ), strash_( std::make_unique<strash_table>() )
{
  nodes_->append(); /* constant */
}

aig::aig( aig const& other )
    : aig()
{
  copy_from( other );
}

aig& aig::operator=( aig const& other )
{
  if ( this != &other )
  {
    nodes_ = std::make_unique<node_arena>();
    strash_ = std::make_unique<strash_table>();
    nodes_->append();
    copy_from( other );
  }
  return *this;
}

aig::aig( aig&& other ) noexcept
    : nodes_( std::move( other.nodes_ ) ), strash_( std::move( other.strash_ ) ), pis_( std::move( other.pis_ ) ), pos_( std::move( other.pos_ ) ), num_ands_( other.num_ands_.load() )
{
}

aig& aig::operator=( aig&& other ) noexcept
{
  nodes_ = std::move( other.nodes_ );
  strash_ = std::move( other.strash_ );
  pis_ = std::move( other.pis_ );
  pos_ = std::move( other.pos_ );
  num_ands_ = other.num_ands_.load();
  return *this;
}

aig::~aig() = default;

void aig::copy_from( aig const& other )
{
  auto const n = other.size();
  for ( std::size_t i = 1; i < n; ++i )
    nodes_->append();
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const& src = other.at( static_cast<node_id>( i ) );
    auto& dst = at( static_cast<node_id>( i ) );
    dst.fanin0 = src.fanin0;
    dst.fanin1 = src.fanin1;
    dst.level = src.level;
    dst.next = src.next;
    dst.kind = src.kind;
    dst.refs.store( src.refs.load() );
    dst.flags.store( src.flags.load() );
  }
  strash_->heads = other.strash_->heads;
  strash_->count = other.strash_->count;
  pis_ = other.pis_;
  pos_ = other.pos_;
  num_ands_ = other.num_ands_.load();
}

literal aig::add_pi()
{
  auto const id = nodes_->append();
  at( id ).kind = node_kind::pi;
  pis_.push_back( id );
  return literal( id, false );
}

void aig::check_operand( literal l ) const
{
  if ( l.node() >= size() || is_deleted( l.node() ) )
    throw integrity_error( "operand references deleted or unknown node " + std::to_string( l.node() ) );
}

literal aig::resolve( literal l ) const
{
  while ( at( l.node() ).kind == node_kind::buffer )
    l = at( l.node() ).fanin0 ^ l.is_complemented();
  return l;
}

literal aig::add_and( literal a, literal b )
{
  check_operand( a );
  check_operand( b );
  a = resolve( a );
  b = resolve( b );
  auto [x, y] = normalized( a, b );
  if ( x == y )
    return x;
  if ( x == !y )
    return const0;
  if ( x.is_constant() )
    return x == const0 ? const0 : y;

  if ( auto const hit = strash_find( x, y ); hit != 0 )
    return literal( hit, false );

  if ( strash_->count * 2 >= strash_->heads.size() * 3 )
    reserve( strash_->heads.size() );

  auto const id = allocate();
  auto& n = at( id );
  n.fanin0 = x;
  n.fanin1 = y;
  n.level = 1 + std::max( at( x.node() ).level, at( y.node() ).level );
  strash_insert( id );
  ++strash_->count;
  ref( x.node() );
  ref( y.node() );
  return literal( id, false );
}

void aig::add_po( literal l )
{
  check_operand( l );
  pos_.push_back( l );
  ref( l.node() );
}

/* ------------------------------------------------------- whole-graph ops */

std::vector<node_id> topological_order( aig const& g )
{
  auto const n = g.size();
  /* 0 = unvisited, 1 = on stack, 2 = done */
  std::vector<std::uint8_t> state( n, 0 );
  std::vector<node_id> order;
  std::vector<std::pair<node_id, std::uint8_t>> stack;

  auto const is_internal = [&]( node_id id ) {
    auto const k = g.kind( id );
    return k == node_kind::and_gate || k == node_kind::buffer;
  };

  auto const visit = [&]( node_id start ) {
    if ( state[start] != 0 || !is_internal( start ) )
      return;
    stack.emplace_back( start, 0 );
    state[start] = 1;
    while ( !stack.empty() )
    {
      auto& [id, next_fanin] = stack.back();
      auto const& nd = g.at( id );
      auto const arity = nd.kind == node_kind::and_gate ? 2 : 1;
      if ( next_fanin < arity )
      {
        auto const [lo, hi] = arity == 2 ? normalized( nd.fanin0, nd.fanin1 ) : std::pair{ nd.fanin0, nd.fanin0 };
        literal const f = next_fanin == 0 ? lo : hi;
        ++next_fanin;
        auto const child = f.node();
        if ( child >= n || g.is_deleted( child ) )
          throw integrity_error( "node " + std::to_string( id ) + " references deleted node " + std::to_string( child ) );
        if ( !is_internal( child ) )
          continue;
        if ( state[child] == 1 )
          throw integrity_error( "cycle through node " + std::to_string( child ) );
        if ( state[child] == 0 )
        {
          state[child] = 1;
          stack.emplace_back( child, 0 );
        }
        continue;
      }
      state[id] = 2;
      order.push_back( id );
      stack.pop_back();
    }
  };

  for ( auto const po : g.pos() )
    if ( po.node() >= n || g.is_deleted( po.node() ) )
      throw integrity_error( "PO references deleted node " + std::to_string( po.node() ) );
  /* roots by ascending id: once ids are topological (as after reading our
     own output) the order is the identity, so write/read/write is stable */
  for ( node_id id = 1; id < n; ++id )
    if ( !g.is_deleted( id ) )
      visit( id );
  return order;
}

level_snapshot levelize( aig& g )
{
  level_snapshot snap;
  snap.levels.assign( g.size(), 0 );
  for ( auto const id : topological_order( g ) )
  {
    auto& nd = g.at( id );
    std::uint32_t level;
    if ( nd.kind == node_kind::buffer )
      level = snap.levels[nd.fanin0.node()];
    else
      level = 1 + std::max( snap.levels[nd.fanin0.node()], snap.levels[nd.fanin1.node()] );
    snap.levels[id] = level;
    nd.level = level;
  }
  for ( auto const po : g.pos() )
    snap.depth = std::max( snap.depth, snap.levels[po.node()] );
  return snap;
}

std::uint64_t area( aig const& g )
{
  return g.num_ands();
}

aig double_aig( aig const& g, unsigned times )
{
  if ( times > 24 )
    throw interface_error( "doubling count " + std::to_string( times ) + " is out of range" );
  std::uint64_t const copies = std::uint64_t{ 1 } << times;
  if ( ( g.num_ands() + g.pis().size() + 1 ) * copies > std::numeric_limits<node_id>::max() / 2 )
    throw resource_error( "doubled graph exceeds the node id range" );

  auto const order = topological_order( g );
  aig result;
  result.reserve( static_cast<std::size_t>( ( g.num_ands() + g.pis().size() ) * copies ) );
  std::vector<literal> map( g.size() );
  auto const mapped = [&]( literal l ) { return map[l.node()] ^ l.is_complemented(); };
  for ( std::uint64_t c = 0; c < copies; ++c )
  {
    map[0] = const0;
    for ( auto const pi : g.pis() )
      map[pi] = result.add_pi();
    for ( auto const id : order )
    {
      auto const& n = g.at( id );
      map[id] = n.kind == node_kind::buffer ? mapped( n.fanin0 ) : result.add_and( mapped( n.fanin0 ), mapped( n.fanin1 ) );
    }
    for ( auto const po : g.pos() )
      result.add_po( mapped( po ) );
  }
  return result;
}

std::uint32_t depth( aig const& g )
{
  std::vector<std::uint32_t> levels( g.size(), 0 );
  for ( auto const id : topological_order( g ) )
  {
    auto const& nd = g.at( id );
    levels[id] = nd.kind == node_kind::buffer ? levels[nd.fanin0.node()]
                                              : 1 + std::max( levels[nd.fanin0.node()], levels[nd.fanin1.node()] );
  }
  std::uint32_t d = 0;
  for ( auto const po : g.pos() )
    d = std::max( d, levels[po.node()] );
  return d;
}

/* ----------------------------------------------------------------- MFFC */

namespace
{

bool is_cone_node( aig const& g, node_id id )
{
  auto const k = g.kind( id );
  return k == node_kind::and_gate || k == node_kind::buffer;
}

template<class Fn>
void for_each_fanin( aig const& g, node_id id, Fn&& fn )
{
  auto const& nd = g.at( id );
  fn( nd.fanin0.node() );
  if ( nd.kind == node_kind::and_gate )
    fn( nd.fanin1.node() );
}

} // namespace

mffc mffc_collect( aig& g, node_id root, std::span<node_id const> boundary )
{
  mffc result;
  result.root = root;
  if ( !g.is_and( root ) )
    return result;

  std::unordered_set<node_id> const stop( boundary.begin(), boundary.end() );
  std::vector<node_id> touched;
  std::vector<node_id> stack{ root };
  result.members.push_back( root );

  while ( !stack.empty() )
  {
    auto const id = stack.back();
    stack.pop_back();
    for_each_fanin( g, id, [&]( node_id f ) {
      if ( !is_cone_node( g, f ) || stop.contains( f ) )
        return;
      touched.push_back( f );
      if ( g.at( f ).refs.fetch_sub( 1, std::memory_order_relaxed ) == 1 )
      {
        result.members.push_back( f );
        stack.push_back( f );
      }
    } );
  }
  for ( auto const id : touched )
    g.ref( id );

  for ( auto const id : result.members )
    result.size += g.kind( id ) == node_kind::and_gate ? 1u : 0u;
  return result;
}

mffc mffc_collect_readonly( aig const& g, node_id root, std::span<node_id const> boundary, mffc_scratch& s )
{
  mffc result;
  result.root = root;
  if ( !g.is_and( root ) )
    return result;

  if ( s.stamp.size() < g.size() )
  {
    s.stamp.resize( g.size() + g.size() / 4 + 16, 0 );
    s.local_refs.resize( s.stamp.size(), 0 );
  }
  if ( ++s.epoch == 0 )
  {
    std::fill( s.stamp.begin(), s.stamp.end(), 0 );
    s.epoch = 1;
  }
  auto const boundary_mark = s.epoch;
  /* boundary nodes hold the stamp with an effectively infinite count */
  for ( auto const b : boundary )
  {
    s.stamp[b] = boundary_mark;
    s.local_refs[b] = UINT32_MAX;
  }

  s.stack.clear();
  s.stack.push_back( root );
  result.members.push_back( root );
  while ( !s.stack.empty() )
  {
    auto const id = s.stack.back();
    s.stack.pop_back();
    for_each_fanin( g, id, [&]( node_id f ) {
      if ( !is_cone_node( g, f ) )
        return;
      if ( s.stamp[f] != boundary_mark )
      {
        s.stamp[f] = boundary_mark;
        s.local_refs[f] = g.refs( f );
      }
      if ( s.local_refs[f] == UINT32_MAX )
        return;
      if ( --s.local_refs[f] == 0 )
      {
        result.members.push_back( f );
        s.stack.push_back( f );
      }
    } );
  }
  for ( auto const id : result.members )
    result.size += g.kind( id ) == node_kind::and_gate ? 1u : 0u;
  return result;
}

std::size_t dereference_fanins( aig& g, node_id id, std::vector<node_id>& dead, bool tombstone, bool honor_reused )
{
  std::size_t freed = 0;
  std::vector<node_id> stack{ id };
  while ( !stack.empty() )
  {
    auto const current = stack.back();
    stack.pop_back();
    auto const& nd = g.at( current );
    literal const fanins[2] = { nd.fanin0, nd.fanin1 };
    auto const count = nd.kind == node_kind::and_gate ? 2 : 1;
    for ( int i = 0; i < count; ++i )
    {
      auto const f = fanins[i].node();
      if ( g.is_deleted( f ) )
        throw integrity_error( "dereferencing deleted node " + std::to_string( f ) );
      if ( g.deref_node( f, honor_reused ) )
      {
        ++freed;
        dead.push_back( f );
        if ( tombstone )
          g.tombstone( f );
        stack.push_back( f );
      }
    }
  }
  return freed;
}

std::size_t delete_dereferenced( aig& g, node_id root, std::vector<node_id>& sink )
{
  if ( g.is_deleted( root ) )
    throw integrity_error( "node " + std::to_string( root ) + " deleted twice" );
  if ( g.kind( root ) != node_kind::and_gate && g.kind( root ) != node_kind::buffer )
    return 0;
  g.strash_unlink( root );
  g.tombstone( root );
  sink.push_back( root );
  return 1 + dereference_fanins( g, root, sink, true );
}

/* --------------------------------------------------------------- audits */

std::string check_strash( aig const& g )
{
  std::unordered_set<std::uint64_t> pairs;
  for ( node_id id = 1; id < g.size(); ++id )
  {
    auto const hashed = g.has_flag( id, node_flags::hashed );
    if ( g.is_deleted( id ) || g.kind( id ) != node_kind::and_gate )
    {
      if ( hashed )
        return "non-live node " + std::to_string( id ) + " is still hashed";
      continue;
    }
    auto const [a, b] = normalized( g.fanin0( id ), g.fanin1( id ) );
    if ( !pairs.insert( ( std::uint64_t{ a.raw() } << 32 ) | b.raw() ).second )
      return "duplicate fanin pair at node " + std::to_string( id );
    if ( !hashed || g.strash_find( a, b ) != id )
      return "live node " + std::to_string( id ) + " not reachable through strash";
  }
  return {};
}

std::string check_ref_counts( aig const& g )
{
  std::vector<std::uint32_t> expected( g.size(), 0 );
  for ( node_id id = 1; id < g.size(); ++id )
  {
    if ( g.is_deleted( id ) )
      continue;
    if ( g.kind( id ) == node_kind::and_gate )
    {
      ++expected[g.fanin0( id ).node()];
      ++expected[g.fanin1( id ).node()];
    }
    else if ( g.kind( id ) == node_kind::buffer )
      ++expected[g.fanin0( id ).node()];
  }
  for ( auto const po : g.pos() )
    ++expected[po.node()];
  for ( node_id id = 1; id < g.size(); ++id )
  {
    if ( g.is_deleted( id ) )
      continue;
    if ( expected[id] != g.refs( id ) )
      return "node " + std::to_string( id ) + " has " + std::to_string( g.refs( id ) ) + " refs, recount gives " + std::to_string( expected[id] );
  }
  return {};
}

std::string check_acyclic( aig const& g )
{
  try
  {
    topological_order( g );
  }
  catch ( integrity_error const& e )
  {
    return e.what();
  }
  return {};
}

void audit( aig const& g )
{
  for ( auto const& message : { check_acyclic( g ), check_strash( g ), check_ref_counts( g ) } )
    if ( !message.empty() )
      throw integrity_error( message );
  std::uint64_t live = 0;
  for ( node_id id = 1; id < g.size(); ++id )
    live += g.is_and( id ) ? 1u : 0u;
  if ( live != g.num_ands() )
    throw integrity_error( "num_ands is " + std::to_string( g.num_ands() ) + " but " + std::to_string( live ) + " And nodes are live" );
}

} // namespace aigrefac
