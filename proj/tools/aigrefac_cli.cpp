/* command-line front end: refactor, double, stats, equiv, bench */
#include <aigrefac.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace
{

enum exit_code : int
{
  exit_ok = 0,
  exit_usage = 1,
  exit_parse = 2,
  exit_verification = 3,
  exit_integrity = 4
};

int exit_for( aigrefac_status s )
{
  switch ( s )
  {
  case AIGREFAC_OK:
    return exit_ok;
  case AIGREFAC_E_USAGE:
    return exit_usage;
  case AIGREFAC_E_PARSE:
  case AIGREFAC_E_IO:
    return exit_parse;
  case AIGREFAC_E_VERIFICATION:
    return exit_verification;
  default:
    return exit_integrity;
  }
}

/* carries a status out of nested helpers */
struct failure
{
  aigrefac_status status;
  std::string message;
};

void check( aigrefac_status s, std::string const& context )
{
  if ( s != AIGREFAC_OK )
    throw failure{ s, context + ": " + aigrefac_last_error() };
}

struct aig_deleter
{
  void operator()( aigrefac_aig* g ) const { aigrefac_free( g ); }
};
using aig_ptr = std::unique_ptr<aigrefac_aig, aig_deleter>;

aig_ptr load( std::string const& path )
{
  aigrefac_aig* g = nullptr;
  check( aigrefac_read_file( path.c_str(), &g ), path );
  return aig_ptr( g );
}

aig_ptr clone( aigrefac_aig const* g )
{
  aigrefac_aig* c = nullptr;
  check( aigrefac_clone( g, &c ), "clone" );
  return aig_ptr( c );
}

aigrefac_stats stats_of( aigrefac_aig const* g )
{
  aigrefac_stats s{};
  check( aigrefac_get_stats( g, &s ), "stats" );
  return s;
}

double seconds_since( std::chrono::steady_clock::time_point start )
{
  return std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
}

std::string circuit_name( std::string const& path )
{
  return std::filesystem::path( path ).stem().string();
}

char const* verdict_name( aigrefac_equiv_status s )
{
  switch ( s )
  {
  case AIGREFAC_EQUIVALENT_EXHAUSTIVE:
    return "equivalent_exhaustive";
  case AIGREFAC_EQUIVALENT_SAMPLED:
    return "equivalent_sampled";
  case AIGREFAC_COUNTEREXAMPLE:
    return "counterexample";
  }
  return "unknown";
}

struct equiv_result
{
  aigrefac_verdict verdict{};
  std::vector<std::uint8_t> witness;
};

equiv_result compare( aigrefac_aig const* a, aigrefac_aig const* b, std::uint64_t patterns, std::uint64_t seed )
{
  equiv_result r;
  r.witness.resize( std::max<std::uint64_t>( 1, stats_of( a ).pis ) );
  check( aigrefac_equiv( a, b, patterns, seed, &r.verdict, r.witness.data(), r.witness.size() ), "equiv" );
  return r;
}

void dump_witness( equiv_result const& r, std::size_t pis )
{
  std::cerr << "counterexample at PO " << r.verdict.po << ", PI values: ";
  for ( std::size_t i = 0; i < pis; ++i )
    std::cerr << static_cast<int>( r.witness[i] );
  std::cerr << "\n";
}

void append_report( std::string const& path, json const& record )
{
  if ( path.empty() )
    return;
  std::ofstream out( path, std::ios::app );
  if ( !out )
    throw failure{ AIGREFAC_E_IO, "cannot write report " + path };
  out << record.dump() << "\n";
}

/* --- plain-text tables --- */

void print_table( std::vector<std::string> const& header, std::vector<std::vector<std::string>> const& rows )
{
  std::vector<std::size_t> width( header.size() );
  for ( std::size_t c = 0; c < header.size(); ++c )
  {
    width[c] = header[c].size();
    for ( auto const& r : rows )
      width[c] = std::max( width[c], r[c].size() );
  }
  auto const line = [&]( std::vector<std::string> const& cells ) {
    for ( std::size_t c = 0; c < cells.size(); ++c )
      std::cout << ( c == 0 ? std::left : std::right ) << std::setw( static_cast<int>( width[c] ) ) << cells[c] << ( c + 1 < cells.size() ? "  " : "\n" );
  };
  line( header );
  std::size_t total = 0;
  for ( auto w : width )
    total += w + 2;
  std::cout << std::string( total - 2, '-' ) << "\n";
  for ( auto const& r : rows )
    line( r );
}

std::string grouped( std::uint64_t v )
{
  auto s = std::to_string( v );
  for ( int i = static_cast<int>( s.size() ) - 3; i > 0; i -= 3 )
    s.insert( static_cast<std::size_t>( i ), "," );
  return s;
}

std::string fixed( double v, int digits )
{
  std::ostringstream os;
  os << std::fixed << std::setprecision( digits ) << v;
  return os.str();
}

/* --- refactor --- */

struct refactor_options
{
  std::string input;
  std::string output;
  unsigned threads = 1;
  unsigned cut_size = 10;
  bool zero_gain = false;
  unsigned iterations = 1;
  std::uint64_t seed = 0;
  bool verify = false;
  std::uint64_t patterns = 65536;
  std::string report;
  bool total_time = false;
  bool table = false;
};

aigrefac_config config_of( refactor_options const& o, unsigned threads )
{
  aigrefac_config cfg;
  aigrefac_config_init( &cfg );
  cfg.threads = threads;
  cfg.cut_size = o.cut_size;
  cfg.zero_gain = o.zero_gain;
  cfg.iterations = o.iterations;
  cfg.seed = o.seed;
  return cfg;
}

struct run_outcome
{
  json record;
  std::uint64_t area_after = 0;
  std::uint32_t depth_after = 0;
  double seconds = 0.0;
};

/* one optimization run on a private copy of `source` */
run_outcome run_once( aigrefac_aig const* source, std::string const& input, refactor_options const& o, unsigned threads, double io_seconds )
{
  auto g = clone( source );
  auto const before = stats_of( g.get() );
  auto const cfg = config_of( o, threads );
  std::vector<aigrefac_pass_report> passes( o.iterations );
  std::size_t count = 0;
  auto const start = std::chrono::steady_clock::now();
  check( aigrefac_refactor( g.get(), &cfg, passes.data(), passes.size(), &count ), input );
  auto const wall = seconds_since( start );
  auto const after = stats_of( g.get() );

  double pass_seconds = 0.0;
  std::uint64_t accepted = 0;
  std::int64_t estimated = 0, realized = 0;
  for ( std::size_t i = 0; i < count; ++i )
  {
    pass_seconds += passes[i].seconds;
    accepted += passes[i].accepted;
    estimated += passes[i].estimated_gain;
    realized += passes[i].realized_gain;
  }

  run_outcome r;
  r.seconds = o.total_time ? wall + io_seconds : pass_seconds;
  r.area_after = after.area;
  r.depth_after = after.depth;
  r.record = { { "input", input },
               { "engine", threads == 0 ? "sequential" : "parallel" },
               { "threads", threads },
               { "cut_size", o.cut_size },
               { "zero_gain", o.zero_gain },
               { "iterations", o.iterations },
               { "seed", o.seed },
               { "timing", o.total_time ? "total" : "pass" },
               { "seconds", r.seconds },
               { "area_before", before.area },
               { "area_after", after.area },
               { "depth_before", before.depth },
               { "depth_after", after.depth },
               { "accepted", accepted },
               { "gain", realized },
               { "estimated_gain", estimated } };

  if ( o.verify )
  {
    auto const v = compare( source, g.get(), o.patterns, o.seed );
    r.record["equivalence"] = verdict_name( v.verdict.status );
    if ( v.verdict.status == AIGREFAC_COUNTEREXAMPLE )
    {
      dump_witness( v, before.pis );
      throw failure{ AIGREFAC_E_VERIFICATION, input + ": optimized circuit differs at PO " + std::to_string( v.verdict.po ) };
    }
  }
  else
    r.record["equivalence"] = nullptr;

  if ( !o.output.empty() )
  {
    auto const w = std::chrono::steady_clock::now();
    check( aigrefac_write_file( g.get(), o.output.c_str(), AIGREFAC_FORMAT_AUTO ), o.output );
    if ( o.total_time )
    {
      r.seconds += seconds_since( w );
      r.record["seconds"] = r.seconds;
    }
  }
  return r;
}

int cmd_refactor( refactor_options const& o )
{
  auto const read_start = std::chrono::steady_clock::now();
  auto const g = load( o.input );
  auto const io = seconds_since( read_start );
  auto const r = run_once( g.get(), o.input, o, o.threads, io );
  append_report( o.report, r.record );
  if ( o.table )
  {
    auto const& rec = r.record;
    print_table( { "Circuit", "Threads", "Time (s)", "Area", "Area'", "Depth", "Depth'", "Equivalence" },
                 { { circuit_name( o.input ), std::to_string( o.threads ), fixed( r.seconds, 3 ), grouped( rec["area_before"] ),
                     grouped( rec["area_after"] ), std::to_string( rec["depth_before"].get<unsigned>() ),
                     std::to_string( rec["depth_after"].get<unsigned>() ), rec["equivalence"].is_null() ? "-" : rec["equivalence"].get<std::string>() } } );
  }
  else
    std::cout << r.record.dump() << "\n";
  return exit_ok;
}

/* --- double --- */

int cmd_double( std::string const& input, std::string const& output, unsigned times, bool table )
{
  auto const g = load( input );
  aigrefac_aig* d = nullptr;
  check( aigrefac_double( g.get(), times, &d ), input );
  aig_ptr doubled( d );
  if ( !output.empty() )
    check( aigrefac_write_file( doubled.get(), output.c_str(), AIGREFAC_FORMAT_AUTO ), output );
  auto const s = stats_of( doubled.get() );
  auto const name = circuit_name( input ) + "_" + std::to_string( times ) + "xd";
  if ( table )
    print_table( { "Circuit", "PIs", "POs", "Area", "Depth" },
                 { { name, grouped( s.pis ), grouped( s.pos ), grouped( s.area ), std::to_string( s.depth ) } } );
  else
    std::cout << json{ { "input", input }, { "times", times }, { "name", name }, { "pis", s.pis }, { "pos", s.pos }, { "area", s.area }, { "depth", s.depth } }.dump()
              << "\n";
  return exit_ok;
}

/* --- stats --- */

int cmd_stats( std::vector<std::string> const& inputs, bool table )
{
  std::vector<std::vector<std::string>> rows;
  for ( auto const& input : inputs )
  {
    auto const g = load( input );
    auto const s = stats_of( g.get() );
    if ( table )
      rows.push_back( { circuit_name( input ), grouped( s.pis ), grouped( s.pos ), grouped( s.area ), std::to_string( s.depth ) } );
    else
      std::cout << json{ { "input", input }, { "pis", s.pis }, { "pos", s.pos }, { "area", s.area }, { "depth", s.depth } }.dump() << "\n";
  }
  if ( table )
    print_table( { "Circuit", "PIs", "POs", "Area", "Depth" }, rows );
  return exit_ok;
}

/* --- equiv --- */

int cmd_equiv( std::string const& a_path, std::string const& b_path, std::uint64_t patterns, std::uint64_t seed )
{
  auto const a = load( a_path );
  auto const b = load( b_path );
  auto const r = compare( a.get(), b.get(), patterns, seed );
  json rec{ { "a", a_path }, { "b", b_path }, { "verdict", verdict_name( r.verdict.status ) }, { "patterns", r.verdict.patterns } };
  if ( r.verdict.status == AIGREFAC_COUNTEREXAMPLE )
  {
    auto const pis = stats_of( a.get() ).pis;
    std::string bits;
    for ( std::size_t i = 0; i < pis; ++i )
      bits += r.witness[i] ? '1' : '0';
    rec["po"] = r.verdict.po;
    rec["witness"] = bits;
    std::cout << rec.dump() << "\n";
    dump_witness( r, pis );
    return exit_verification;
  }
  std::cout << rec.dump() << "\n";
  return exit_ok;
}

/* --- bench --- */

std::vector<std::string> read_manifest( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw failure{ AIGREFAC_E_IO, "cannot open manifest " + path };
  auto const base = std::filesystem::path( path ).parent_path();
  std::vector<std::string> inputs;
  std::string line;
  while ( std::getline( in, line ) )
  {
    auto const first = line.find_first_not_of( " \t\r" );
    if ( first == std::string::npos || line[first] == '#' )
      continue;
    auto const last = line.find_last_not_of( " \t\r" );
    std::filesystem::path p( line.substr( first, last - first + 1 ) );
    inputs.push_back( ( p.is_relative() ? base / p : p ).string() );
  }
  return inputs;
}

int cmd_bench( std::string const& manifest, std::vector<unsigned> threads_list, unsigned repeats, refactor_options o )
{
  if ( repeats == 0 )
    throw failure{ AIGREFAC_E_USAGE, "--repeats must be at least 1" };
  if ( threads_list.empty() )
    throw failure{ AIGREFAC_E_USAGE, "--threads-list must not be empty" };
  o.output.clear();

  int status = exit_ok;
  std::vector<std::vector<std::string>> rows;
  for ( auto const& input : read_manifest( manifest ) )
  {
    try
    {
      auto const read_start = std::chrono::steady_clock::now();
      auto const g = load( input );
      auto const io = seconds_since( read_start );

      /* QoR reference and speedup baseline */
      auto const seq = run_once( g.get(), input, o, 0, io );
      std::map<unsigned, std::vector<run_outcome>> runs;
      auto const measure = [&]( unsigned t ) {
        if ( runs.count( t ) )
          return;
        for ( unsigned r = 0; r < repeats; ++r )
          runs[t].push_back( run_once( g.get(), input, o, t, io ) );
      };
      measure( 1 );
      for ( auto const t : threads_list )
        measure( t );

      auto const mean = [&]( unsigned t ) {
        double sum = 0.0;
        for ( auto const& r : runs[t] )
          sum += r.seconds;
        return sum / static_cast<double>( runs[t].size() );
      };
      auto const base = mean( 1 );
      for ( auto const t : threads_list )
      {
        auto const m = mean( t );
        auto const speedup = m > 0.0 ? base / m : 0.0;
        auto const& last = runs[t].back();
        auto const area_ratio = seq.area_after ? static_cast<double>( last.area_after ) / static_cast<double>( seq.area_after ) : 1.0;
        auto const depth_ratio = seq.depth_after ? static_cast<double>( last.depth_after ) / static_cast<double>( seq.depth_after ) : 1.0;
        for ( std::size_t r = 0; r < runs[t].size(); ++r )
        {
          auto rec = runs[t][r].record;
          rec["repeat"] = r;
          rec["mean_seconds"] = m;
          rec["speedup"] = speedup;
          rec["sequential_area"] = seq.area_after;
          rec["sequential_depth"] = seq.depth_after;
          rec["sequential_seconds"] = seq.seconds;
          rec["area_ratio"] = static_cast<double>( runs[t][r].area_after ) / static_cast<double>( std::max<std::uint64_t>( 1, seq.area_after ) );
          rec["depth_ratio"] = static_cast<double>( runs[t][r].depth_after ) / static_cast<double>( std::max<std::uint32_t>( 1, seq.depth_after ) );
          append_report( o.report, rec );
          if ( !o.table )
            std::cout << rec.dump() << "\n";
        }
        rows.push_back( { circuit_name( input ), std::to_string( t ), fixed( seq.seconds, 3 ), fixed( m, 3 ), fixed( speedup, 2 ),
                          fixed( area_ratio, 4 ), fixed( depth_ratio, 4 ) } );
      }
    }
    catch ( failure const& f )
    {
      json rec{ { "input", input }, { "error", f.message }, { "status", aigrefac_status_string( f.status ) } };
      append_report( o.report, rec );
      if ( !o.table )
        std::cout << rec.dump() << "\n";
      std::cerr << "error: " << f.message << "\n";
      if ( status == exit_ok )
        status = exit_for( f.status );
    }
  }
  if ( o.table )
    print_table( { "Circuit", "Threads", "Seq (s)", "Time (s)", "Speedup", "Area ratio", "Depth ratio" }, rows );
  return status;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "And-Inverter Graph refactoring" };
  app.require_subcommand( 1 );

  refactor_options ro;
  auto* refactor = app.add_subcommand( "refactor", "optimize an AIGER file" );
  refactor->add_option( "input", ro.input, "input AIGER file" )->required();
  refactor->add_option( "output", ro.output, "optimized AIGER file (.aag writes ascii)" );
  refactor->add_option( "-o,--output-file", ro.output, "same as the positional output" );
  auto const add_pass_flags = [&]( CLI::App* sub ) {
    sub->add_option( "--cut-size", ro.cut_size, "cut size K" )->check( CLI::Range( 2, 16 ) );
    sub->add_flag( "--zero-gain", ro.zero_gain, "accept zero-gain replacements" );
    sub->add_option( "--iterations", ro.iterations, "passes per run" )->check( CLI::PositiveNumber );
    sub->add_option( "--seed", ro.seed, "seed for sampled equivalence checks" );
    sub->add_flag( "--verify", ro.verify, "check equivalence of input and result" );
    sub->add_option( "--patterns", ro.patterns, "random patterns for --verify above 16 PIs" );
    sub->add_option( "--report", ro.report, "append JSON-lines records to this file" );
    sub->add_flag( "--total-time", ro.total_time, "include file I/O in reported time" );
    sub->add_flag( "--table", ro.table, "print a human-readable table" );
  };
  refactor->add_option( "--threads", ro.threads, "worker count, 0 for the sequential engine" );
  add_pass_flags( refactor );

  std::string d_input, d_output;
  unsigned times = 1;
  bool d_table = false;
  auto* dbl = app.add_subcommand( "double", "disjoint union of 2^times copies" );
  dbl->add_option( "input", d_input )->required();
  dbl->add_option( "output", d_output );
  dbl->add_option( "--times", times, "number of doublings" )->check( CLI::Range( 0, 24 ) );
  dbl->add_flag( "--table", d_table );

  std::vector<std::string> s_inputs;
  bool s_table = false;
  auto* st = app.add_subcommand( "stats", "PIs, POs, area, depth" );
  st->add_option( "inputs", s_inputs )->required();
  st->add_flag( "--table", s_table );

  std::string e_a, e_b;
  std::uint64_t e_patterns = 65536, e_seed = 0;
  auto* eq = app.add_subcommand( "equiv", "combinational equivalence by simulation" );
  eq->add_option( "a", e_a )->required();
  eq->add_option( "b", e_b )->required();
  eq->add_option( "--patterns", e_patterns, "random patterns above 16 PIs" );
  eq->add_option( "--seed", e_seed );

  std::string manifest;
  std::vector<unsigned> threads_list{ 1, 2, 4, 8 };
  unsigned repeats = 5;
  auto* bench = app.add_subcommand( "bench", "runtime and QoR tables over a manifest" );
  bench->add_option( "manifest", manifest, "file listing one AIGER path per line" )->required();
  bench->add_option( "--threads-list", threads_list, "thread counts" )->delimiter( ',' );
  bench->add_option( "--repeats", repeats, "runs per thread count" );
  add_pass_flags( bench );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? exit_ok : exit_usage;
  }

  try
  {
    if ( *refactor )
      return cmd_refactor( ro );
    if ( *dbl )
      return cmd_double( d_input, d_output, times, d_table );
    if ( *st )
      return cmd_stats( s_inputs, s_table );
    if ( *eq )
      return cmd_equiv( e_a, e_b, e_patterns, e_seed );
    if ( *bench )
      return cmd_bench( manifest, threads_list, repeats, ro );
  }
  catch ( failure const& f )
  {
    std::cerr << "error: " << f.message << "\n";
    return exit_for( f.status );
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_integrity;
  }
  return exit_usage;
}
