#pragma once

#include <aigrefac/aig.hpp>
#include <aigrefac/resynth.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aigrefac
{

struct pass_config
{
  unsigned threads = 1; /* 0 selects the sequential engine */
  unsigned cut_size = default_cut_size;
  bool zero_gain = false;
  unsigned iterations = 1;
  std::uint64_t seed = 0; /* reserved for randomized policies */
  bool verify_each_pass = false;
  /* deep copy at pass start, restored when the pass hits an integrity error */
  bool snapshot = true;
  /* per-group MFFC disjointness sampling and pass-boundary audits;
     also switched on by AIGREFAC_DEBUG_CHECKS=1 */
  bool debug_checks = false;
};

/* throws interface_error when a field is out of range */
void validate( pass_config const& cfg );

/* true when AIGREFAC_DEBUG_CHECKS=1 */
bool debug_checks_from_env();

struct pass_stats
{
  std::uint64_t area_before = 0;
  std::uint64_t area_after = 0;
  std::uint32_t depth_before = 0;
  std::uint32_t depth_after = 0;
  std::uint64_t groups = 0;
  std::uint64_t visited = 0;
  std::uint64_t accepted = 0;
  std::int64_t estimated_gain = 0; /* sum of evaluated gains over accepted nodes */
  std::int64_t realized_gain = 0;  /* num_ands reductions of accepted nodes, sweep merges included */
  std::uint64_t recycled = 0;
  std::uint64_t fresh = 0;
  std::uint64_t reused_hits = 0;
  std::uint64_t deleted = 0;
  std::uint64_t retained = 0;     /* queued but kept by post-processing */
  std::uint64_t sweep_merges = 0; /* area removed by the end-of-pass buffer sweep */
  std::uint64_t mffc_overlaps = 0;
  bool debug_checked = false;
  double seconds = 0.0;

  pass_stats& operator+=( pass_stats const& other );
};

/* live And nodes grouped by their pass-start level */
struct level_groups
{
  level_snapshot snapshot;
  std::vector<std::vector<node_id>> groups; /* groups[i] holds level i + 1, ascending ids */
};

level_groups schedule( aig& g );

struct replacement
{
  node_id root = 0;
  cut window;
  candidate_graph candidate;
  mffc cone; /* bounded by the window leaves */
  std::int64_t gain = 0;
};

struct worker_stats
{
  std::uint64_t visited = 0;
  std::uint64_t accepted = 0;
  std::int64_t estimated_gain = 0;
  std::int64_t realized_gain = 0;
  std::uint64_t recycled = 0;
  std::uint64_t fresh = 0;
  std::uint64_t reused_hits = 0;
};

/* outcome of one replacement */
struct replacement_result
{
  std::int64_t realized_gain = 0;
  std::uint32_t recycled = 0;
  std::uint32_t fresh = 0;
  std::uint32_t hits = 0;
  std::uint32_t queued = 0;
  bool in_place = false; /* the root slot holds the new output gate */
};

/* everything a worker touches privately */
struct worker_context
{
  resynth_scratch scratch;
  mffc_scratch mffc;
  std::vector<node_id> recycle_pool;
  std::vector<node_id> deletion_queue;
  std::vector<node_id> reused; /* nodes this worker flagged during the current group */
  std::vector<node_id> dead;
  std::vector<node_id> temp;
  std::vector<literal> signals;
  worker_stats stats;
};

/*! \brief Evaluation stage: cut, function, ISOP of both polarities,
    candidate, gain. Never writes the graph. Shared hits must lie strictly
    below `level_limit`. */
std::optional<replacement> refactor_node( worker_context& ctx, aig const& g, node_id root, pass_config const& cfg,
                                          std::uint32_t level_limit );

/*! \brief Replacement stage: realizes the candidate in place, recycling the
    dead MFFC slots, flagging reused nodes, and queueing leftovers for
    post-processing. The root keeps its id, either as the new output gate or
    as a buffer forwarding the new output. */
replacement_result apply_replacement( worker_context& ctx, aig& g, replacement const& repl );

struct post_process_result
{
  std::uint64_t deleted = 0;
  std::uint64_t retained = 0;
  std::vector<std::string> warnings;
};

/*! Drains the deletion queues (worker order, then queue order), then clears
    every reused flag. Throws integrity_error on a double deletion. */
post_process_result post_process( aig& g, std::span<worker_context> contexts );

/* replaces buffers by their drivers, merging nodes that become trivial or
   duplicate; returns the number of And nodes removed */
std::uint64_t sweep_buffers( aig& g );

pass_stats sequential_pass( aig& g, pass_config const& cfg );
pass_stats parallel_pass( aig& g, pass_config const& cfg );

/* `cfg.iterations` passes; threads == 0 runs the sequential engine */
std::vector<pass_stats> refactor( aig& g, pass_config const& cfg );

} // namespace aigrefac
