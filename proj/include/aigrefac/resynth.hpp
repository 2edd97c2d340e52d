#pragma once

#include <aigrefac/aig.hpp>

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

namespace aigrefac
{

inline constexpr unsigned default_cut_size = 10;
inline constexpr unsigned max_cut_size = 16;

/* leaves and cone refer to resolved (non-buffer) nodes */
struct cut
{
  node_id root = 0;
  std::vector<node_id> leaves;
  std::vector<node_id> cone; /* topological, root last */
};

/*! \brief Truth table over `num_vars` variables, bit m = f(m), leaf i = bit i of m.

  Tables with fewer than 6 variables are kept replicated across the whole
  word so that the word-level operations need no masking.
*/
class truth_table
{
public:
  truth_table() = default;
  explicit truth_table( unsigned num_vars );

  static truth_table from_word( unsigned num_vars, std::uint64_t bits );
  static truth_table nth_var( unsigned num_vars, unsigned var );

  unsigned num_vars() const { return num_vars_; }
  std::size_t num_bits() const { return std::size_t{ 1 } << num_vars_; }
  std::vector<std::uint64_t>& words() { return words_; }
  std::vector<std::uint64_t> const& words() const { return words_; }

  bool get_bit( std::size_t m ) const { return ( words_[m >> 6] >> ( m & 63 ) ) & 1; }
  void set_bit( std::size_t m, bool v );
  /* the low 2^k bits (k <= 6) */
  std::uint64_t low_bits() const;

  bool is_const0() const;
  bool is_const1() const;
  bool depends_on( unsigned var ) const;
  truth_table cofactor0( unsigned var ) const;
  truth_table cofactor1( unsigned var ) const;

  truth_table operator~() const;
  truth_table operator&( truth_table const& other ) const;
  truth_table operator|( truth_table const& other ) const;
  bool operator==( truth_table const& other ) const = default;

private:
  unsigned num_vars_ = 0;
  std::vector<std::uint64_t> words_{ 0 };
};

/* positive / negative literal masks; a variable in neither is absent */
struct cube
{
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;

  bool operator==( cube const& ) const = default;
};

struct sop
{
  unsigned num_vars = 0;
  std::vector<cube> cubes;
};

/*! \brief Candidate subgraph over signals.

  Signal 0 is constant false, signals 1..k are the cut leaves, signal k+1+i
  is step i. Operands and the output are signal literals (2 * signal +
  complement).
*/
struct candidate_step
{
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  node_id hit = 0; /* existing node shared by this step; 0 if it must be created */
};

struct candidate_graph
{
  std::uint32_t num_leaves = 0;
  std::vector<candidate_step> steps;
  std::uint32_t output = 0;
  std::uint32_t cost = 0;
  bool feasible = true;
  std::vector<node_id> hits;

  static constexpr std::uint32_t signal_of_step( std::uint32_t num_leaves, std::size_t step ) { return num_leaves + 1 + static_cast<std::uint32_t>( step ); }
};

struct candidate_options
{
  /* a shared hit at or above this level makes the candidate infeasible */
  std::uint32_t level_limit = std::numeric_limits<std::uint32_t>::max();
  /* building stops (infeasible) once the cost exceeds this */
  std::uint32_t max_cost = std::numeric_limits<std::uint32_t>::max();
  /* the sop covers the complement of the root function */
  bool complemented = false;
};

/* per-worker buffers; nothing in here is shared */
struct resynth_scratch
{
  std::vector<std::uint32_t> mark;
  std::uint32_t epoch = 0;
  std::vector<std::uint32_t> slot;
  std::vector<std::uint64_t> tt_words;
  std::vector<node_id> stack;
  std::unordered_map<std::uint64_t, std::uint32_t> step_index;

  /* new traversal epoch, sized for `n` nodes */
  std::uint32_t next_epoch( std::size_t n );
};

/* reconvergence-driven cut: grows from the root's fanins, expanding the
   cheapest leaf (ties to the lowest id) while the leaf count fits in k */
cut recon_cut( aig const& g, node_id root, unsigned k, resynth_scratch& scratch );
cut recon_cut( aig const& g, node_id root, unsigned k );

/* fills `c.cone`; throws integrity_error if a PI is reached outside the leaves */
void collect_cone( aig const& g, cut& c, resynth_scratch& scratch );
void collect_cone( aig const& g, cut& c );

truth_table compute_tt( aig const& g, cut const& c, resynth_scratch& scratch );
truth_table compute_tt( aig const& g, cut const& c );

/* Minato-Morreale irredundant cover of the on-set; cubes sorted by first minterm */
sop isop( truth_table const& tt );

/* covered set of a cube list */
truth_table sop_cover( sop const& s );

candidate_graph build_candidate( aig const& g, cut const& c, sop const& s, std::span<node_id const> mffc_members,
                                 candidate_options const& options, resynth_scratch& scratch );
candidate_graph build_candidate( aig const& g, cut const& c, sop const& s, std::span<node_id const> mffc_members,
                                 candidate_options const& options = {} );

/* function of the candidate's output over its leaves */
truth_table candidate_function( candidate_graph const& cand );

struct decision
{
  bool accept = false;
  std::int64_t gain = 0;
};

decision evaluate( std::uint32_t mffc_size, candidate_graph const& cand, bool zero_gain );

} // namespace aigrefac
