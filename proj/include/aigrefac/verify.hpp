#pragma once

#include <aigrefac/aig.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aigrefac
{

struct circuit_stats
{
  std::uint64_t pis = 0;
  std::uint64_t pos = 0;
  std::uint64_t area = 0;
  std::uint32_t depth = 0;

  bool operator==( circuit_stats const& ) const = default;
};

circuit_stats stats( aig const& g );

/*! \brief Bit-parallel simulator; 64 patterns per word.

  The topological order is computed once, so repeated rounds over the same
  graph are cheap. The constant node simulates to all-zeros.
*/
class simulator
{
public:
  explicit simulator( aig const& g );

  /* `pi_words` holds `words` consecutive words per PI; returns the same layout per PO */
  std::vector<std::uint64_t> run( std::span<std::uint64_t const> pi_words, std::size_t words = 1 );

private:
  aig const& g_;
  std::vector<node_id> order_;
  std::vector<std::uint64_t> values_;
};

/* one word per PI in, one word per PO out */
std::vector<std::uint64_t> simulate( aig const& g, std::span<std::uint64_t const> pi_words );

/* PO signatures under `rounds * 64` seeded random patterns */
std::vector<std::uint64_t> signatures( aig const& g, std::size_t rounds, std::uint64_t seed );

enum class equiv_status
{
  equivalent_exhaustive,
  equivalent_sampled,
  counterexample
};

std::string to_string( equiv_status s );

struct equiv_verdict
{
  equiv_status status = equiv_status::equivalent_sampled;
  std::vector<bool> witness; /* PI assignment, when a counterexample was found */
  std::size_t po = 0;        /* first differing PO */
  std::uint64_t patterns = 0;
};

inline constexpr std::size_t exhaustive_pi_limit = 16;

/*! Exhaustive over all assignments when the PI count is at most 16, otherwise
    seeded random simulation of up to `max_patterns` patterns. Round r uses a
    generator derived from (seed, r) only. Throws interface_error on PI/PO
    arity mismatch. */
equiv_verdict equiv_check( aig const& a, aig const& b, std::uint64_t max_patterns = 65536, std::uint64_t seed = 0 );

/* evaluates both graphs on the witness; true iff PO `verdict.po` differs */
bool replay_counterexample( aig const& a, aig const& b, equiv_verdict const& verdict );

/* 64-bit mixer used for reproducible pattern streams */
std::uint64_t splitmix64( std::uint64_t& state );

} // namespace aigrefac
