/* C interface of the aigrefac shared library.
   Every call returns an aigrefac_status; on failure aigrefac_last_error()
   holds a message for the calling thread until its next failing call. */
#ifndef AIGREFAC_H
#define AIGREFAC_H

#include <stddef.h>
#include <stdint.h>

#if defined( _WIN32 )
#define AIGREFAC_API __declspec( dllexport )
#else
#define AIGREFAC_API __attribute__( ( visibility( "default" ) ) )
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aigrefac_status
{
  AIGREFAC_OK = 0,
  AIGREFAC_E_USAGE = 1,        /* null handle, bad argument or config */
  AIGREFAC_E_PARSE = 2,        /* malformed or unsupported AIGER */
  AIGREFAC_E_VERIFICATION = 3, /* a pass changed the function; graph restored */
  AIGREFAC_E_INTEGRITY = 4,    /* broken graph invariant */
  AIGREFAC_E_IO = 5,           /* file could not be opened or written */
  AIGREFAC_E_RESOURCE = 6,     /* out of memory or id space */
  AIGREFAC_E_INTERNAL = 7
} aigrefac_status;

typedef enum aigrefac_format
{
  AIGREFAC_FORMAT_AUTO = 0, /* by file name: ".aag" is ascii, anything else binary */
  AIGREFAC_FORMAT_ASCII = 1,
  AIGREFAC_FORMAT_BINARY = 2
} aigrefac_format;

typedef enum aigrefac_equiv_status
{
  AIGREFAC_EQUIVALENT_EXHAUSTIVE = 0,
  AIGREFAC_EQUIVALENT_SAMPLED = 1,
  AIGREFAC_COUNTEREXAMPLE = 2
} aigrefac_equiv_status;

/* opaque combinational AIG plus the AIGER trailer it was read with */
typedef struct aigrefac_aig aigrefac_aig;

typedef struct aigrefac_config
{
  unsigned threads; /* 0 runs the sequential engine */
  unsigned cut_size;
  int zero_gain;
  unsigned iterations;
  uint64_t seed;
  int verify_each_pass;
  int snapshot;
  int debug_checks;
} aigrefac_config;

typedef struct aigrefac_stats
{
  uint64_t pis;
  uint64_t pos;
  uint64_t area;
  uint32_t depth;
} aigrefac_stats;

typedef struct aigrefac_pass_report
{
  uint64_t area_before;
  uint64_t area_after;
  uint32_t depth_before;
  uint32_t depth_after;
  uint64_t groups;
  uint64_t visited;
  uint64_t accepted;
  int64_t estimated_gain;
  int64_t realized_gain;
  uint64_t recycled;
  uint64_t fresh;
  uint64_t reused_hits;
  uint64_t deleted;
  uint64_t retained;
  uint64_t sweep_merges;
  uint64_t mffc_overlaps;
  int debug_checked;
  double seconds;
} aigrefac_pass_report;

typedef struct aigrefac_verdict
{
  aigrefac_equiv_status status;
  uint64_t po;       /* failing output, for counterexamples */
  uint64_t patterns; /* patterns simulated */
} aigrefac_verdict;

AIGREFAC_API const char* aigrefac_version( void );
AIGREFAC_API const char* aigrefac_last_error( void );
AIGREFAC_API const char* aigrefac_status_string( aigrefac_status status );

AIGREFAC_API aigrefac_status aigrefac_read_file( const char* path, aigrefac_aig** out );
AIGREFAC_API aigrefac_status aigrefac_read_buffer( const uint8_t* data, size_t size, aigrefac_aig** out );
AIGREFAC_API aigrefac_status aigrefac_write_file( const aigrefac_aig* g, const char* path, aigrefac_format format );
/* *data is allocated by the library; release it with aigrefac_buffer_free */
AIGREFAC_API aigrefac_status aigrefac_write_buffer( const aigrefac_aig* g, aigrefac_format format, uint8_t** data, size_t* size );
AIGREFAC_API void aigrefac_buffer_free( uint8_t* data );

AIGREFAC_API aigrefac_status aigrefac_clone( const aigrefac_aig* g, aigrefac_aig** out );
AIGREFAC_API void aigrefac_free( aigrefac_aig* g );
AIGREFAC_API aigrefac_status aigrefac_get_stats( const aigrefac_aig* g, aigrefac_stats* out );
/* strash canonicity, reference counts, acyclicity */
AIGREFAC_API aigrefac_status aigrefac_audit( const aigrefac_aig* g );

AIGREFAC_API void aigrefac_config_init( aigrefac_config* cfg );
/* runs cfg->iterations passes in place; up to `capacity` per-pass reports are
   stored and *count receives the number of passes run */
AIGREFAC_API aigrefac_status aigrefac_refactor( aigrefac_aig* g, const aigrefac_config* cfg, aigrefac_pass_report* reports,
                                                size_t capacity, size_t* count );

/* disjoint union of 2^times copies of g */
AIGREFAC_API aigrefac_status aigrefac_double( const aigrefac_aig* g, unsigned times, aigrefac_aig** out );

/* witness (may be null) receives one 0/1 byte per PI on a counterexample;
   witness_size must then be at least the PI count */
AIGREFAC_API aigrefac_status aigrefac_equiv( const aigrefac_aig* a, const aigrefac_aig* b, uint64_t max_patterns, uint64_t seed,
                                             aigrefac_verdict* out, uint8_t* witness, size_t witness_size );

#ifdef __cplusplus
}
#endif

#endif
