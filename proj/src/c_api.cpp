#include <aigrefac.h>

#include <aigrefac/aiger.hpp>
#include <aigrefac/refactor.hpp>
#include <aigrefac/verify.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct aigrefac_aig
{
  aigrefac::aiger_design design;
};

namespace
{

thread_local std::string last_error;

aigrefac_status fail( aigrefac_status status, std::string message )
{
  last_error = std::move( message );
  return status;
}

/* maps whatever the core throws onto a status */
template<class Fn>
aigrefac_status guarded( Fn&& fn )
{
  using namespace aigrefac;
  try
  {
    return fn();
  }
  catch ( parse_error const& e )
  {
    return fail( AIGREFAC_E_PARSE, e.what() );
  }
  catch ( unsupported_error const& e )
  {
    return fail( AIGREFAC_E_PARSE, e.what() );
  }
  catch ( interface_error const& e )
  {
    return fail( AIGREFAC_E_USAGE, e.what() );
  }
  catch ( verification_error const& e )
  {
    return fail( AIGREFAC_E_VERIFICATION, e.what() );
  }
  catch ( integrity_error const& e )
  {
    return fail( AIGREFAC_E_INTEGRITY, e.what() );
  }
  catch ( resource_error const& e )
  {
    return fail( AIGREFAC_E_RESOURCE, e.what() );
  }
  catch ( std::bad_alloc const& )
  {
    return fail( AIGREFAC_E_RESOURCE, "out of memory" );
  }
  catch ( error const& e )
  {
    return fail( AIGREFAC_E_IO, e.what() );
  }
  catch ( std::exception const& e )
  {
    return fail( AIGREFAC_E_INTERNAL, e.what() );
  }
  catch ( ... )
  {
    return fail( AIGREFAC_E_INTERNAL, "unknown exception" );
  }
}

aigrefac_status null_argument( char const* name )
{
  return fail( AIGREFAC_E_USAGE, std::string( name ) + " must not be null" );
}

aigrefac::aiger_format resolve_format( aigrefac_format format, char const* path )
{
  switch ( format )
  {
  case AIGREFAC_FORMAT_ASCII:
    return aigrefac::aiger_format::ascii;
  case AIGREFAC_FORMAT_BINARY:
    return aigrefac::aiger_format::binary;
  case AIGREFAC_FORMAT_AUTO:
    return path ? aigrefac::format_for_path( path ) : aigrefac::aiger_format::binary;
  }
  throw aigrefac::interface_error( "unknown AIGER format " + std::to_string( static_cast<int>( format ) ) );
}

aigrefac_pass_report to_report( aigrefac::pass_stats const& s )
{
  aigrefac_pass_report r{};
  r.area_before = s.area_before;
  r.area_after = s.area_after;
  r.depth_before = s.depth_before;
  r.depth_after = s.depth_after;
  r.groups = s.groups;
  r.visited = s.visited;
  r.accepted = s.accepted;
  r.estimated_gain = s.estimated_gain;
  r.realized_gain = s.realized_gain;
  r.recycled = s.recycled;
  r.fresh = s.fresh;
  r.reused_hits = s.reused_hits;
  r.deleted = s.deleted;
  r.retained = s.retained;
  r.sweep_merges = s.sweep_merges;
  r.mffc_overlaps = s.mffc_overlaps;
  r.debug_checked = s.debug_checked ? 1 : 0;
  r.seconds = s.seconds;
  return r;
}

} // namespace

extern "C" {

const char* aigrefac_version( void )
{
  return "1.0.0";
}

const char* aigrefac_last_error( void )
{
  return last_error.c_str();
}

const char* aigrefac_status_string( aigrefac_status status )
{
  switch ( status )
  {
  case AIGREFAC_OK:
    return "ok";
  case AIGREFAC_E_USAGE:
    return "usage error";
  case AIGREFAC_E_PARSE:
    return "parse error";
  case AIGREFAC_E_VERIFICATION:
    return "verification failure";
  case AIGREFAC_E_INTEGRITY:
    return "integrity error";
  case AIGREFAC_E_IO:
    return "i/o error";
  case AIGREFAC_E_RESOURCE:
    return "resource exhausted";
  case AIGREFAC_E_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

aigrefac_status aigrefac_read_file( const char* path, aigrefac_aig** out )
{
  if ( !path )
    return null_argument( "path" );
  if ( !out )
    return null_argument( "out" );
  *out = nullptr;
  return guarded( [&] {
    *out = new aigrefac_aig{ aigrefac::read_aiger_file( path ) };
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_read_buffer( const uint8_t* data, size_t size, aigrefac_aig** out )
{
  if ( !data && size != 0 )
    return null_argument( "data" );
  if ( !out )
    return null_argument( "out" );
  *out = nullptr;
  return guarded( [&] {
    *out = new aigrefac_aig{ aigrefac::read_aiger( { data, size } ) };
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_write_file( const aigrefac_aig* g, const char* path, aigrefac_format format )
{
  if ( !g )
    return null_argument( "g" );
  if ( !path )
    return null_argument( "path" );
  return guarded( [&] {
    aigrefac::write_aiger_file( g->design.graph, path, resolve_format( format, path ), g->design.trailer );
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_write_buffer( const aigrefac_aig* g, aigrefac_format format, uint8_t** data, size_t* size )
{
  if ( !g )
    return null_argument( "g" );
  if ( !data || !size )
    return null_argument( "data/size" );
  *data = nullptr;
  *size = 0;
  return guarded( [&] {
    auto const bytes = aigrefac::write_aiger( g->design.graph, resolve_format( format, nullptr ), g->design.trailer );
    auto* buffer = static_cast<uint8_t*>( std::malloc( bytes.empty() ? 1 : bytes.size() ) );
    if ( !buffer )
      throw std::bad_alloc();
    std::memcpy( buffer, bytes.data(), bytes.size() );
    *data = buffer;
    *size = bytes.size();
    return AIGREFAC_OK;
  } );
}

void aigrefac_buffer_free( uint8_t* data )
{
  std::free( data );
}

aigrefac_status aigrefac_clone( const aigrefac_aig* g, aigrefac_aig** out )
{
  if ( !g )
    return null_argument( "g" );
  if ( !out )
    return null_argument( "out" );
  *out = nullptr;
  return guarded( [&] {
    *out = new aigrefac_aig{ g->design };
    return AIGREFAC_OK;
  } );
}

void aigrefac_free( aigrefac_aig* g )
{
  delete g;
}

aigrefac_status aigrefac_get_stats( const aigrefac_aig* g, aigrefac_stats* out )
{
  if ( !g )
    return null_argument( "g" );
  if ( !out )
    return null_argument( "out" );
  return guarded( [&] {
    auto const s = aigrefac::stats( g->design.graph );
    *out = { s.pis, s.pos, s.area, s.depth };
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_audit( const aigrefac_aig* g )
{
  if ( !g )
    return null_argument( "g" );
  return guarded( [&] {
    aigrefac::audit( g->design.graph );
    return AIGREFAC_OK;
  } );
}

void aigrefac_config_init( aigrefac_config* cfg )
{
  if ( !cfg )
    return;
  aigrefac::pass_config const d;
  cfg->threads = d.threads;
  cfg->cut_size = d.cut_size;
  cfg->zero_gain = d.zero_gain;
  cfg->iterations = d.iterations;
  cfg->seed = d.seed;
  cfg->verify_each_pass = d.verify_each_pass;
  cfg->snapshot = d.snapshot;
  cfg->debug_checks = d.debug_checks;
}

aigrefac_status aigrefac_refactor( aigrefac_aig* g, const aigrefac_config* cfg, aigrefac_pass_report* reports, size_t capacity,
                                   size_t* count )
{
  if ( !g )
    return null_argument( "g" );
  if ( !cfg )
    return null_argument( "cfg" );
  if ( !reports && capacity != 0 )
    return null_argument( "reports" );
  if ( count )
    *count = 0;
  return guarded( [&] {
    aigrefac::pass_config c;
    c.threads = cfg->threads;
    c.cut_size = cfg->cut_size;
    c.zero_gain = cfg->zero_gain != 0;
    c.iterations = cfg->iterations;
    c.seed = cfg->seed;
    c.verify_each_pass = cfg->verify_each_pass != 0;
    c.snapshot = cfg->snapshot != 0;
    c.debug_checks = cfg->debug_checks != 0;
    auto const all = aigrefac::refactor( g->design.graph, c );
    for ( std::size_t i = 0; i < all.size() && i < capacity; ++i )
      reports[i] = to_report( all[i] );
    if ( count )
      *count = all.size();
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_double( const aigrefac_aig* g, unsigned times, aigrefac_aig** out )
{
  if ( !g )
    return null_argument( "g" );
  if ( !out )
    return null_argument( "out" );
  *out = nullptr;
  return guarded( [&] {
    *out = new aigrefac_aig{ { aigrefac::double_aig( g->design.graph, times ), {} } };
    return AIGREFAC_OK;
  } );
}

aigrefac_status aigrefac_equiv( const aigrefac_aig* a, const aigrefac_aig* b, uint64_t max_patterns, uint64_t seed,
                                aigrefac_verdict* out, uint8_t* witness, size_t witness_size )
{
  if ( !a || !b )
    return null_argument( "a/b" );
  if ( !out )
    return null_argument( "out" );
  if ( witness && witness_size < a->design.graph.pis().size() )
    return fail( AIGREFAC_E_USAGE, "witness buffer holds " + std::to_string( witness_size ) + " bytes, need " +
                                       std::to_string( a->design.graph.pis().size() ) );
  return guarded( [&] {
    auto const v = aigrefac::equiv_check( a->design.graph, b->design.graph, max_patterns, seed );
    out->status = v.status == aigrefac::equiv_status::equivalent_exhaustive ? AIGREFAC_EQUIVALENT_EXHAUSTIVE
                  : v.status == aigrefac::equiv_status::equivalent_sampled  ? AIGREFAC_EQUIVALENT_SAMPLED
                                                                            : AIGREFAC_COUNTEREXAMPLE;
    out->po = v.po;
    out->patterns = v.patterns;
    if ( witness )
      for ( std::size_t i = 0; i < v.witness.size(); ++i )
        witness[i] = v.witness[i] ? 1 : 0;
    return AIGREFAC_OK;
  } );
}

} // extern "C"
