#include <aigrefac/refactor.hpp>
#include <aigrefac/verify.hpp>

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <thread>

namespace aigrefac
{

void validate( pass_config const& cfg )
{
  auto const limit = std::max( 1u, std::thread::hardware_concurrency() ) * 16u;
  if ( cfg.threads > std::max( 1024u, limit ) )
    throw interface_error( "thread count " + std::to_string( cfg.threads ) + " exceeds the platform limit" );
  if ( cfg.cut_size < 2 || cfg.cut_size > max_cut_size )
    throw interface_error( "cut size must lie in [2, " + std::to_string( max_cut_size ) + "]" );
  if ( cfg.iterations < 1 )
    throw interface_error( "at least one iteration is required" );
}

bool debug_checks_from_env()
{
  auto const* v = std::getenv( "AIGREFAC_DEBUG_CHECKS" );
  return v != nullptr && std::string( v ) == "1";
}

pass_stats& pass_stats::operator+=( pass_stats const& o )
{
  groups += o.groups;
  visited += o.visited;
  accepted += o.accepted;
  estimated_gain += o.estimated_gain;
  realized_gain += o.realized_gain;
  recycled += o.recycled;
  fresh += o.fresh;
  reused_hits += o.reused_hits;
  deleted += o.deleted;
  retained += o.retained;
  sweep_merges += o.sweep_merges;
  mffc_overlaps += o.mffc_overlaps;
  seconds += o.seconds;
  return *this;
}

level_groups schedule( aig& g )
{
  level_groups lg;
  lg.snapshot = levelize( g );
  for ( node_id id = 1; id < g.size(); ++id )
  {
    if ( !g.is_and( id ) )
      continue;
    auto const level = lg.snapshot.levels[id];
    if ( lg.groups.size() < level )
      lg.groups.resize( level );
    lg.groups[level - 1].push_back( id );
  }
  return lg;
}

/* ----------------------------------------------------------- evaluation */

namespace
{

/* And nodes that die when `root` gives way to `cand`: the root's whole MFFC,
   minus what the candidate keeps alive by pointing at leaves or shared nodes */
std::uint32_t dying_ands( aig const& g, node_id root, cut const& window, candidate_graph const& cand, mffc_scratch& s )
{
  auto const full = mffc_collect_readonly( g, root, {}, s );
  auto const epoch = s.epoch;
  auto revived = 0u;

  auto const revive = [&]( node_id id ) {
    if ( s.stamp[id] != epoch || s.local_refs[id]++ != 0 )
      return;
    s.stack.clear();
    s.stack.push_back( id );
    while ( !s.stack.empty() )
    {
      auto const n = s.stack.back();
      s.stack.pop_back();
      if ( g.kind( n ) != node_kind::and_gate && g.kind( n ) != node_kind::buffer )
        continue;
      revived += g.kind( n ) == node_kind::and_gate ? 1u : 0u;
      auto const f0 = g.fanin0( n ).node();
      if ( s.stamp[f0] == epoch && s.local_refs[f0]++ == 0 )
        s.stack.push_back( f0 );
      if ( g.kind( n ) == node_kind::and_gate )
      {
        auto const f1 = g.fanin1( n ).node();
        if ( s.stamp[f1] == epoch && s.local_refs[f1]++ == 0 )
          s.stack.push_back( f1 );
      }
    }
  };
  /* existing node behind a signal, or 0 */
  auto const existing = [&]( std::uint32_t lit ) -> node_id {
    auto const sig = lit >> 1;
    if ( sig == 0 )
      return 0;
    if ( sig <= cand.num_leaves )
      return window.leaves[sig - 1];
    return cand.steps[sig - cand.num_leaves - 1].hit;
  };

  for ( auto const& st : cand.steps )
    if ( st.hit == 0 )
    {
      if ( auto const n = existing( st.a ) )
        revive( n );
      if ( auto const n = existing( st.b ) )
        revive( n );
    }
  if ( auto const n = existing( cand.output ) )
    revive( n );
  return full.size - revived;
}

} // namespace

std::optional<replacement> refactor_node( worker_context& ctx, aig const& g, node_id root, pass_config const& cfg,
                                          std::uint32_t level_limit )
{
  ++ctx.stats.visited;
  if ( !g.is_and( root ) )
    return std::nullopt;

  replacement r;
  r.root = root;
  r.window = recon_cut( g, root, cfg.cut_size, ctx.scratch );
  r.cone = mffc_collect_readonly( g, root, r.window.leaves, ctx.mffc );
  auto const full_size = mffc_collect_readonly( g, root, {}, ctx.mffc ).size;

  collect_cone( g, r.window, ctx.scratch );
  auto const tt = compute_tt( g, r.window, ctx.scratch );

  candidate_options opts;
  opts.level_limit = level_limit;
  opts.max_cost = cfg.zero_gain ? full_size : full_size - 1;

  std::optional<candidate_graph> best;
  decision best_decision;
  /* covering the off-set first: its output is a plain And, which can take over the root slot */
  for ( bool const complemented : { true, false } )
  {
    opts.complemented = complemented;
    auto cand = build_candidate( g, r.window, isop( complemented ? ~tt : tt ), r.cone.members, opts, ctx.scratch );
    if ( !cand.feasible )
      continue;
    auto const d = evaluate( dying_ands( g, root, r.window, cand, ctx.mffc ), cand, cfg.zero_gain );
    if ( !d.accept )
      continue;
    if ( !best || d.gain > best_decision.gain || ( d.gain == best_decision.gain && ( best->output & 1u ) && !( cand.output & 1u ) ) )
    {
      best = std::move( cand );
      best_decision = d;
    }
  }
  if ( !best )
    return std::nullopt;

  r.candidate = std::move( *best );
  r.gain = best_decision.gain;
  ++ctx.stats.accepted;
  ctx.stats.estimated_gain += r.gain;
  return r;
}

/* ---------------------------------------------------------- replacement */

namespace
{

/* trivial And simplification; returns true and sets `out` when no gate is needed */
bool simplify( literal a, literal b, literal& out )
{
  auto const [x, y] = normalized( a, b );
  if ( x == y )
    out = x;
  else if ( x == !y )
    out = const0;
  else if ( x.is_constant() )
    out = x == const0 ? const0 : y;
  else
    return false;
  return true;
}

} // namespace

replacement_result apply_replacement( worker_context& ctx, aig& g, replacement const& repl )
{
  replacement_result res;
  auto const root = repl.root;
  auto const& cand = repl.candidate;
  auto const& leaves = repl.window.leaves;
  std::int64_t removed = 0;

  auto const queue = [&]( node_id id ) {
    ctx.deletion_queue.push_back( id );
    ++res.queued;
    if ( g.kind( id ) == node_kind::and_gate )
      ++removed;
  };
  /* a node whose last reference went away, and everything only it kept alive */
  auto const kill = [&]( node_id id ) {
    ctx.dead.clear();
    dereference_fanins( g, id, ctx.dead, false, false );
    queue( id );
    for ( auto const d : ctx.dead )
      queue( d );
  };

  /* the leaves bound the dereference walk */
  for ( auto const leaf : leaves )
    g.ref( leaf );
  g.strash_unlink( root );
  ctx.dead.clear();
  dereference_fanins( g, root, ctx.dead, false, false );
  ctx.recycle_pool.clear();
  for ( auto const id : ctx.dead )
  {
    if ( g.kind( id ) == node_kind::and_gate )
      ctx.recycle_pool.push_back( id );
    else
      queue( id );
  }
  std::sort( ctx.recycle_pool.begin(), ctx.recycle_pool.end() );
  std::size_t pool_next = 0;

  ctx.signals.clear();
  ctx.signals.push_back( const0 );
  for ( auto const leaf : leaves )
    ctx.signals.push_back( literal( leaf, false ) );
  auto const signal = [&]( std::uint32_t lit ) { return ctx.signals[lit >> 1] ^ ( ( lit & 1u ) != 0 ); };

  auto const first_step = cand.num_leaves + 1;
  std::size_t const output_step = ( cand.output & 1u ) == 0 && ( cand.output >> 1 ) >= first_step ? ( cand.output >> 1 ) - first_step : cand.steps.size();

  ctx.temp.clear();
  for ( std::size_t i = 0; i < cand.steps.size(); ++i )
  {
    auto const a = signal( cand.steps[i].a );
    auto const b = signal( cand.steps[i].b );
    literal result;
    if ( simplify( a, b, result ) )
    {
      ctx.signals.push_back( result );
      continue;
    }

    while ( true )
    {
      if ( auto const hit = g.strash_find_and_ref( a, b ); hit != 0 )
      {
        auto const before = g.at( hit ).flags.fetch_or( node_flags::reused, std::memory_order_relaxed );
        if ( ( before & node_flags::reused ) == 0 )
          ctx.reused.push_back( hit );
        ctx.temp.push_back( hit );
        ++res.hits;
        result = literal( hit, false );
        break;
      }

      node_id slot;
      bool from_pool = false;
      if ( i == output_step )
        slot = root;
      else if ( pool_next < ctx.recycle_pool.size() )
      {
        slot = ctx.recycle_pool[pool_next++];
        from_pool = true;
      }
      else
      {
        slot = g.allocate(); /* pool exhausted: locked arena growth */
        ++res.fresh;
      }

      auto const [x, y] = normalized( a, b );
      auto& n = g.at( slot );
      n.fanin0 = x;
      n.fanin1 = y;
      n.level = 1 + std::max( g.level( x.node() ), g.level( y.node() ) );
      n.next = 0;
      if ( slot != root )
      {
        n.kind = node_kind::and_gate;
        n.flags.store( 0, std::memory_order_relaxed );
        n.refs.store( 1, std::memory_order_relaxed ); /* held until the replacement ends */
      }
      g.ref( x.node() );
      g.ref( y.node() );

      if ( g.strash_insert( slot ) == 0 )
      {
        if ( slot == root )
          res.in_place = true;
        else
        {
          ctx.temp.push_back( slot );
          res.recycled += from_pool ? 1 : 0;
        }
        result = literal( slot, false );
        break;
      }

      /* another worker linked the same gate first: give the slot back and share theirs */
      g.deref_node( x.node(), false );
      g.deref_node( y.node(), false );
      if ( slot != root )
      {
        n.refs.store( 0, std::memory_order_relaxed );
        if ( from_pool )
          --pool_next;
        else
          ctx.recycle_pool.push_back( slot );
      }
    }
    ctx.signals.push_back( result );
  }

  if ( !res.in_place )
  {
    auto const out = signal( cand.output );
    g.ref( out.node() );
    g.make_buffer( root, out );
    ++removed;
  }

  for ( auto const id : ctx.temp )
    if ( g.deref_node( id, false ) )
      kill( id );
  for ( auto const leaf : leaves )
    if ( g.deref_node( leaf, false ) )
      kill( leaf );
  for ( ; pool_next < ctx.recycle_pool.size(); ++pool_next )
    queue( ctx.recycle_pool[pool_next] );

  res.realized_gain = removed - static_cast<std::int64_t>( res.fresh );
  ctx.stats.realized_gain += res.realized_gain;
  ctx.stats.recycled += res.recycled;
  ctx.stats.fresh += res.fresh;
  ctx.stats.reused_hits += res.hits;
  return res;
}

/* ------------------------------------------------------ post-processing */

post_process_result post_process( aig& g, std::span<worker_context> contexts )
{
  post_process_result result;
  for ( auto& ctx : contexts )
  {
    for ( auto const id : ctx.deletion_queue )
    {
      if ( g.is_deleted( id ) )
        throw integrity_error( "node " + std::to_string( id ) + " queued for deletion twice" );
      if ( g.is_reused( id ) )
      {
        ++result.retained;
        continue;
      }
      if ( g.refs( id ) != 0 )
      {
        ++result.retained;
        result.warnings.push_back( "queued node " + std::to_string( id ) + " still has " + std::to_string( g.refs( id ) ) + " references; kept" );
        continue;
      }
      g.strash_unlink( id );
      g.tombstone( id );
      ++result.deleted;
    }
    ctx.deletion_queue.clear();
  }
  for ( auto& ctx : contexts )
  {
    for ( auto const id : ctx.reused )
    {
      if ( g.is_deleted( id ) && g.is_reused( id ) )
        throw integrity_error( "reused node " + std::to_string( id ) + " was deleted" );
      if ( !g.is_deleted( id ) )
        g.clear_flag( id, node_flags::reused );
    }
    ctx.reused.clear();
  }
  return result;
}

/* --------------------------------------------------------- buffer sweep */

std::uint64_t sweep_buffers( aig& g )
{
  bool any = false;
  for ( node_id id = 1; id < g.size() && !any; ++id )
    any = g.is_buffer( id );
  if ( !any )
    return 0;

  auto const before = g.num_ands();
  auto const drop = [&]( node_id id ) { g.at( id ).refs.fetch_sub( 1, std::memory_order_relaxed ); };
  std::vector<node_id> orphans;

  for ( auto const id : topological_order( g ) )
  {
    if ( g.kind( id ) != node_kind::and_gate )
      continue;
    auto const f0 = g.fanin0( id ), f1 = g.fanin1( id );
    auto const r0 = g.resolve( f0 ), r1 = g.resolve( f1 );
    if ( r0 == f0 && r1 == f1 )
      continue;

    g.strash_unlink( id );
    literal target;
    bool merged = simplify( r0, r1, target );
    if ( !merged )
    {
      auto& n = g.at( id );
      std::tie( n.fanin0, n.fanin1 ) = normalized( r0, r1 );
      n.level = 1 + std::max( g.level( n.fanin0.node() ), g.level( n.fanin1.node() ) );
      if ( auto const dup = g.strash_insert( id ); dup != 0 )
      {
        merged = true;
        target = literal( dup, false );
      }
      else
      {
        g.ref( r0.node() );
        g.ref( r1.node() );
      }
    }
    if ( merged )
    {
      g.ref( target.node() );
      g.make_buffer( id, target );
      for ( auto const f : { r0, r1 } )
        if ( g.kind( f.node() ) == node_kind::and_gate && g.refs( f.node() ) == 0 )
          orphans.push_back( f.node() );
    }
    drop( f0.node() );
    drop( f1.node() );
    for ( auto const f : { f0, f1 } )
      if ( g.kind( f.node() ) == node_kind::and_gate && g.refs( f.node() ) == 0 )
        orphans.push_back( f.node() );
  }

  for ( std::size_t i = 0; i < g.pos().size(); ++i )
  {
    auto const po = g.pos()[i];
    auto const r = g.resolve( po );
    if ( r == po )
      continue;
    g.ref( r.node() );
    drop( po.node() );
    g.set_po( i, r );
  }

  for ( node_id id = 1; id < g.size(); ++id )
    if ( g.is_buffer( id ) )
    {
      auto const target = g.fanin0( id ).node();
      drop( target );
      g.tombstone( id );
      if ( g.kind( target ) == node_kind::and_gate && g.refs( target ) == 0 )
        orphans.push_back( target );
    }

  std::vector<node_id> sink;
  for ( auto const id : orphans )
    if ( g.is_and( id ) && g.refs( id ) == 0 )
      delete_dereferenced( g, id, sink );
  return before - g.num_ands();
}

/* --------------------------------------------------------------- passes */

namespace
{

using clock_type = std::chrono::steady_clock;

/* persistent workers released once per level group */
class worker_team
{
public:
  explicit worker_team( unsigned size )
      : start_( size ), finish_( size )
  {
    for ( unsigned i = 1; i < size; ++i )
      threads_.emplace_back( [this, i] { loop( i ); } );
  }

  ~worker_team()
  {
    stop_ = true;
    start_.arrive_and_wait();
    for ( auto& t : threads_ )
      t.join();
  }

  void run( std::function<void( unsigned )> job )
  {
    job_ = std::move( job );
    start_.arrive_and_wait();
    job_( 0 );
    finish_.arrive_and_wait();
  }

private:
  void loop( unsigned index )
  {
    while ( true )
    {
      start_.arrive_and_wait();
      if ( stop_ )
        return;
      job_( index );
      finish_.arrive_and_wait();
    }
  }

  std::barrier<> start_;
  std::barrier<> finish_;
  std::function<void( unsigned )> job_;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

/* every pair of group roots must have disjoint MFFCs; buffers persist over
   the pass so a deep graph does not pay O(size) per group */
class overlap_sampler
{
public:
  std::uint64_t count( aig const& g, std::span<node_id const> roots )
  {
    if ( owner_.size() < g.size() )
      owner_.resize( g.size(), 0 );
    std::uint64_t overlaps = 0;
    for ( std::size_t i = 0; i < roots.size(); ++i )
    {
      if ( !g.is_and( roots[i] ) )
        continue;
      for ( auto const m : mffc_collect_readonly( g, roots[i], {}, scratch_ ).members )
      {
        if ( owner_[m] != 0 )
          ++overlaps;
        else
          touched_.push_back( m );
        owner_[m] = static_cast<std::uint32_t>( i + 1 );
      }
    }
    for ( auto const m : touched_ )
      owner_[m] = 0;
    touched_.clear();
    return overlaps;
  }

private:
  std::vector<std::uint32_t> owner_;
  std::vector<node_id> touched_;
  mffc_scratch scratch_;
};

void merge( pass_stats& stats, post_process_result const& pp )
{
  stats.deleted += pp.deleted;
  stats.retained += pp.retained;
  for ( auto const& w : pp.warnings )
    std::cerr << "warning: " << w << "\n";
}

void merge( pass_stats& stats, worker_stats const& w )
{
  stats.visited += w.visited;
  stats.accepted += w.accepted;
  stats.estimated_gain += w.estimated_gain;
  stats.realized_gain += w.realized_gain;
  stats.recycled += w.recycled;
  stats.fresh += w.fresh;
  stats.reused_hits += w.reused_hits;
}

void process( worker_context& ctx, aig& g, node_id root, pass_config const& cfg, std::uint32_t level )
{
  if ( auto const repl = refactor_node( ctx, g, root, cfg, level ) )
    apply_replacement( ctx, g, *repl );
}

/* shared pass skeleton; `per_node_post` drains queues after every root */
template<class Body>
pass_stats run_pass( aig& g, pass_config const& cfg, Body&& body )
{
  validate( cfg );
  auto const start = clock_type::now();
  pass_stats stats;
  stats.debug_checked = cfg.debug_checks || debug_checks_from_env();
  stats.area_before = g.num_ands();

  std::optional<aig> backup;
  if ( cfg.snapshot )
    backup.emplace( g );
  try
  {
    g.reserve( g.size() );
    auto const lg = schedule( g );
    stats.depth_before = lg.snapshot.depth;
    body( lg, stats );
    stats.sweep_merges = sweep_buffers( g );
    /* merges are the fanout side of accepted replacements */
    stats.realized_gain += static_cast<std::int64_t>( stats.sweep_merges );
    stats.depth_after = levelize( g ).depth;
    if ( stats.debug_checked )
    {
      audit( g );
      if ( stats.mffc_overlaps != 0 )
        throw integrity_error( std::to_string( stats.mffc_overlaps ) + " MFFC overlaps inside level groups" );
    }
  }
  catch ( ... )
  {
    if ( backup )
      g = std::move( *backup );
    throw;
  }
  stats.area_after = g.num_ands();
  stats.seconds = std::chrono::duration<double>( clock_type::now() - start ).count();
  return stats;
}

} // namespace

pass_stats sequential_pass( aig& g, pass_config const& cfg )
{
  return run_pass( g, cfg, [&]( level_groups const& lg, pass_stats& stats ) {
    std::vector<worker_context> ctx( 1 );
    overlap_sampler sampler;
    for ( std::size_t l = 0; l < lg.groups.size(); ++l )
    {
      auto const& group = lg.groups[l];
      if ( stats.debug_checked )
        stats.mffc_overlaps += sampler.count( g, group );
      for ( auto const root : group )
      {
        process( ctx[0], g, root, cfg, static_cast<std::uint32_t>( l + 1 ) );
        merge( stats, post_process( g, ctx ) );
      }
      ++stats.groups;
    }
    merge( stats, ctx[0].stats );
  } );
}

pass_stats parallel_pass( aig& g, pass_config const& cfg )
{
  return run_pass( g, cfg, [&]( level_groups const& lg, pass_stats& stats ) {
    auto const workers = std::max( 1u, cfg.threads );
    std::vector<worker_context> ctx( workers );
    std::vector<std::exception_ptr> errors( workers );
    std::optional<worker_team> team;
    if ( workers > 1 )
      team.emplace( workers );
    overlap_sampler sampler;

    for ( std::size_t l = 0; l < lg.groups.size(); ++l )
    {
      auto const& group = lg.groups[l];
      if ( group.empty() )
        continue;
      if ( stats.debug_checked )
        stats.mffc_overlaps += sampler.count( g, group );

      auto const level = static_cast<std::uint32_t>( l + 1 );
      auto const job = [&]( unsigned w ) {
        /* static contiguous chunks */
        auto const begin = group.size() * w / workers;
        auto const end = group.size() * ( w + 1 ) / workers;
        try
        {
          for ( auto i = begin; i < end; ++i )
            process( ctx[w], g, group[i], cfg, level );
        }
        catch ( ... )
        {
          errors[w] = std::current_exception();
        }
      };
      if ( team )
        team->run( job );
      else
        job( 0 );
      for ( auto const& e : errors )
        if ( e )
          std::rethrow_exception( e );

      merge( stats, post_process( g, ctx ) );
      ++stats.groups;
    }
    for ( auto const& c : ctx )
      merge( stats, c.stats );
  } );
}

std::vector<pass_stats> refactor( aig& g, pass_config const& cfg )
{
  validate( cfg );
  std::vector<pass_stats> all;
  for ( unsigned i = 0; i < cfg.iterations; ++i )
  {
    std::optional<aig> before;
    if ( cfg.verify_each_pass )
      before.emplace( g );
    all.push_back( cfg.threads == 0 ? sequential_pass( g, cfg ) : parallel_pass( g, cfg ) );
    if ( before )
    {
      auto const verdict = equiv_check( *before, g, 65536, cfg.seed );
      if ( verdict.status == equiv_status::counterexample )
      {
        g = std::move( *before );
        throw verification_error( "pass " + std::to_string( i + 1 ) + " changed the function of PO " + std::to_string( verdict.po ) );
      }
    }
  }
  return all;
}

} // namespace aigrefac
