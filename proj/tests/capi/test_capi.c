/* exercises the shared library through its C header only */
#include <aigrefac.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT( cond )                                                  \
  do                                                                    \
  {                                                                     \
    if ( !( cond ) )                                                    \
    {                                                                   \
      fprintf( stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond ); \
      ++failures;                                                       \
    }                                                                   \
  } while ( 0 )

/* f = (a & b) | (a & c), three gates that refactor into two */
static const char redundant[] = "aag 6 3 0 1 3\n2\n4\n6\n13\n8 4 2\n10 6 2\n12 11 9\nc\nkept verbatim\n";

static aigrefac_aig* load( const char* text )
{
  aigrefac_aig* g = NULL;
  EXPECT( aigrefac_read_buffer( (const uint8_t*)text, strlen( text ), &g ) == AIGREFAC_OK );
  return g;
}

static void test_read_and_stats( void )
{
  aigrefac_aig* g = load( redundant );
  aigrefac_stats s;
  EXPECT( aigrefac_get_stats( g, &s ) == AIGREFAC_OK );
  EXPECT( s.pis == 3 && s.pos == 1 && s.area == 3 && s.depth == 2 );
  EXPECT( aigrefac_audit( g ) == AIGREFAC_OK );
  aigrefac_free( g );
}

static void test_refactor( void )
{
  aigrefac_aig* g = load( redundant );
  aigrefac_aig* before = NULL;
  EXPECT( aigrefac_clone( g, &before ) == AIGREFAC_OK );

  aigrefac_config cfg;
  aigrefac_config_init( &cfg );
  EXPECT( cfg.iterations == 1 && cfg.cut_size >= 2 );
  cfg.threads = 2;
  cfg.iterations = 2;
  cfg.verify_each_pass = 1;

  aigrefac_pass_report reports[4];
  size_t count = 0;
  EXPECT( aigrefac_refactor( g, &cfg, reports, 4, &count ) == AIGREFAC_OK );
  EXPECT( count == 2 );
  EXPECT( reports[0].area_before == 3 && reports[0].area_after == 2 );
  EXPECT( reports[0].realized_gain == 1 );
  EXPECT( reports[1].area_before == reports[0].area_after );

  /* a smaller buffer still reports the full count */
  aigrefac_config_init( &cfg );
  EXPECT( aigrefac_refactor( g, &cfg, NULL, 0, &count ) == AIGREFAC_OK );
  EXPECT( count == 1 );

  aigrefac_verdict v;
  uint8_t witness[3];
  EXPECT( aigrefac_equiv( before, g, 1u << 16, 1, &v, witness, sizeof witness ) == AIGREFAC_OK );
  EXPECT( v.status == AIGREFAC_EQUIVALENT_EXHAUSTIVE );
  EXPECT( v.patterns == 8 );
  aigrefac_free( before );
  aigrefac_free( g );
}

static void test_counterexample( void )
{
  aigrefac_aig* f = load( "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n" );
  aigrefac_aig* h = load( "aag 3 2 0 1 1\n2\n4\n6\n6 2 5\n" );
  aigrefac_verdict v;
  uint8_t witness[2] = { 9, 9 };
  EXPECT( aigrefac_equiv( f, h, 1024, 0, &v, witness, 2 ) == AIGREFAC_OK );
  EXPECT( v.status == AIGREFAC_COUNTEREXAMPLE );
  EXPECT( v.po == 0 );
  /* the outputs differ exactly when a is set */
  EXPECT( witness[0] == 1 && witness[1] <= 1 );
  EXPECT( aigrefac_equiv( f, h, 1024, 0, &v, witness, 1 ) == AIGREFAC_E_USAGE );
  aigrefac_free( f );
  aigrefac_free( h );
}

static void test_write_round_trip( void )
{
  aigrefac_aig* g = load( redundant );
  uint8_t* ascii = NULL;
  size_t ascii_size = 0;
  EXPECT( aigrefac_write_buffer( g, AIGREFAC_FORMAT_ASCII, &ascii, &ascii_size ) == AIGREFAC_OK );
  EXPECT( ascii_size == strlen( redundant ) && memcmp( ascii, redundant, ascii_size ) == 0 );

  uint8_t* binary = NULL;
  size_t binary_size = 0;
  EXPECT( aigrefac_write_buffer( g, AIGREFAC_FORMAT_BINARY, &binary, &binary_size ) == AIGREFAC_OK );
  EXPECT( binary_size > 4 && memcmp( binary, "aig ", 4 ) == 0 );
  aigrefac_aig* back = NULL;
  EXPECT( aigrefac_read_buffer( binary, binary_size, &back ) == AIGREFAC_OK );
  aigrefac_stats s;
  EXPECT( aigrefac_get_stats( back, &s ) == AIGREFAC_OK && s.area == 3 );

  aigrefac_buffer_free( ascii );
  aigrefac_buffer_free( binary );
  aigrefac_free( back );
  aigrefac_free( g );
}

static void test_double( void )
{
  aigrefac_aig* g = load( "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n" );
  aigrefac_aig* d = NULL;
  EXPECT( aigrefac_double( g, 3, &d ) == AIGREFAC_OK );
  aigrefac_stats s;
  EXPECT( aigrefac_get_stats( d, &s ) == AIGREFAC_OK );
  EXPECT( s.pis == 16 && s.pos == 8 && s.area == 8 && s.depth == 1 );
  EXPECT( aigrefac_double( g, 99, &d ) != AIGREFAC_OK );
  aigrefac_free( d );
  aigrefac_free( g );
}

static void test_errors( void )
{
  aigrefac_aig* g = NULL;
  EXPECT( aigrefac_read_file( NULL, &g ) == AIGREFAC_E_USAGE );
  EXPECT( strlen( aigrefac_last_error() ) > 0 );
  EXPECT( aigrefac_read_file( "/nonexistent/x.aig", &g ) == AIGREFAC_E_IO );
  EXPECT( g == NULL );

  static const char bad[] = "aag 3 2 0 1 1\n2\n4\n6\n6 2 9\n";
  EXPECT( aigrefac_read_buffer( (const uint8_t*)bad, strlen( bad ), &g ) == AIGREFAC_E_PARSE );
  EXPECT( strlen( aigrefac_last_error() ) > 0 );
  static const char latch[] = "aag 3 1 1 1 1\n2\n4 6\n6\n6 2 4\n";
  EXPECT( aigrefac_read_buffer( (const uint8_t*)latch, strlen( latch ), &g ) == AIGREFAC_E_PARSE );

  g = load( redundant );
  aigrefac_config cfg;
  aigrefac_config_init( &cfg );
  cfg.cut_size = 1;
  EXPECT( aigrefac_refactor( g, &cfg, NULL, 0, NULL ) == AIGREFAC_E_USAGE );
  cfg.cut_size = 8;
  cfg.iterations = 0;
  EXPECT( aigrefac_refactor( g, &cfg, NULL, 0, NULL ) == AIGREFAC_E_USAGE );
  aigrefac_stats s;
  EXPECT( aigrefac_get_stats( g, &s ) == AIGREFAC_OK && s.area == 3 );
  EXPECT( aigrefac_refactor( NULL, &cfg, NULL, 0, NULL ) == AIGREFAC_E_USAGE );
  EXPECT( aigrefac_write_file( g, "/nonexistent/dir/out.aig", AIGREFAC_FORMAT_AUTO ) == AIGREFAC_E_IO );
  EXPECT( strcmp( aigrefac_status_string( AIGREFAC_E_PARSE ), "parse error" ) == 0 );
  aigrefac_free( g );
  aigrefac_free( NULL );
}

int main( void )
{
  EXPECT( strcmp( aigrefac_version(), "1.0.0" ) == 0 );
  test_read_and_stats();
  test_refactor();
  test_counterexample();
  test_write_round_trip();
  test_double();
  test_errors();
  if ( failures )
    fprintf( stderr, "%d check(s) failed\n", failures );
  else
    printf( "all C API checks passed\n" );
  return failures ? 1 : 0;
}
