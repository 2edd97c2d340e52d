#pragma once

#include <aigrefac/errors.hpp>
#include <aigrefac/literal.hpp>

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace aigrefac
{

enum class node_kind : std::uint8_t
{
  constant,
  pi,
  and_gate,
  /* a replaced root that forwards `fanin0`; `fanin1` is const1 and the node
     is neither hashed nor counted as area */
  buffer
};

namespace node_flags
{
inline constexpr std::uint8_t deleted = 1u;
inline constexpr std::uint8_t reused = 2u;
inline constexpr std::uint8_t hashed = 4u;
} // namespace node_flags

struct node
{
  literal fanin0;
  literal fanin1;
  std::uint32_t level = 0;
  node_id next = 0; /* strash chain */
  std::atomic<std::uint32_t> refs{ 0 };
  std::atomic<std::uint8_t> flags{ 0 };
  node_kind kind = node_kind::constant;
};

/*! \brief Id-indexed node storage with stable addresses.

  Nodes live in fixed-size pages that never move, so readers may hold
  references while another thread appends. Appends serialize on one mutex.
  The page table is republished on growth; retired tables are kept alive
  until destruction so concurrent readers never see a dangling table.
*/
class node_arena
{
public:
  static constexpr unsigned page_bits = 12;
  static constexpr std::size_t page_size = std::size_t{ 1 } << page_bits;

  node_arena() = default;
  node_arena( node_arena const& ) = delete;
  node_arena& operator=( node_arena const& ) = delete;

  node& operator[]( node_id id ) { return table_.load( std::memory_order_acquire )[id >> page_bits][id & ( page_size - 1 )]; }
  node const& operator[]( node_id id ) const { return table_.load( std::memory_order_acquire )[id >> page_bits][id & ( page_size - 1 )]; }

  std::size_t size() const { return size_.load( std::memory_order_acquire ); }

  /* appends one default node; safe to call concurrently */
  node_id append();

private:
  void grow_table();

  std::mutex mutex_;
  std::vector<std::unique_ptr<node[]>> pages_;
  std::vector<std::unique_ptr<node*[]>> tables_;
  std::atomic<node**> table_{ nullptr };
  std::size_t table_capacity_ = 0;
  std::atomic<std::size_t> size_{ 0 };
};

/*! \brief And-Inverter Graph with structural hashing and reference counts.

  Node 0 is the constant-false node. `refs` of a node counts the live And and
  buffer fanin references to it plus PO references. Deleted nodes are
  tombstoned in place; ids are never reused implicitly.

  The construction API (`add_pi`, `add_and`, `add_po`) is single-writer. The
  `strash_*`, `allocate`, `deref_node` and reference-count primitives are
  safe for concurrent use by refactoring workers whose write sets are
  disjoint.
*/
class aig
{
public:
  aig();
  aig( aig const& other );
  aig& operator=( aig const& other );
  aig( aig&& other ) noexcept;
  aig& operator=( aig&& other ) noexcept;
  ~aig();

  literal add_pi();
  /*! trivially simplifies, then returns the hashed node or creates it;
      a strash hit does not touch reference counts */
  literal add_and( literal a, literal b );
  void add_po( literal l );

  literal create_or( literal a, literal b ) { return !add_and( !a, !b ); }

  std::size_t size() const { return nodes_->size(); }
  std::uint64_t num_ands() const { return num_ands_.load( std::memory_order_relaxed ); }
  std::span<node_id const> pis() const { return pis_; }
  std::span<literal const> pos() const { return pos_; }
  void set_po( std::size_t index, literal l ) { pos_[index] = l; }

  node& at( node_id id ) { return ( *nodes_ )[id]; }
  node const& at( node_id id ) const { return ( *nodes_ )[id]; }

  node_kind kind( node_id id ) const { return at( id ).kind; }
  literal fanin0( node_id id ) const { return at( id ).fanin0; }
  literal fanin1( node_id id ) const { return at( id ).fanin1; }
  std::uint32_t level( node_id id ) const { return at( id ).level; }
  std::uint32_t refs( node_id id ) const { return at( id ).refs.load( std::memory_order_relaxed ); }
  bool has_flag( node_id id, std::uint8_t f ) const { return ( at( id ).flags.load( std::memory_order_relaxed ) & f ) != 0; }
  bool is_deleted( node_id id ) const { return has_flag( id, node_flags::deleted ); }
  bool is_reused( node_id id ) const { return has_flag( id, node_flags::reused ); }
  bool is_and( node_id id ) const { return kind( id ) == node_kind::and_gate && !is_deleted( id ); }
  bool is_buffer( node_id id ) const { return kind( id ) == node_kind::buffer && !is_deleted( id ); }
  bool is_pi( node_id id ) const { return kind( id ) == node_kind::pi; }

  /* follows buffer nodes to the literal they forward */
  literal resolve( literal l ) const;

  /* --- concurrent primitives --- */

  /* `level`, when given, receives the hit's level read under the bucket lock */
  node_id strash_find( literal a, literal b, std::uint32_t* level = nullptr ) const;
  /* finds the node hashed under (a, b) and adds one reference to it while
     holding the bucket lock; returns 0 on miss */
  node_id strash_find_and_ref( literal a, literal b, std::uint32_t* level = nullptr );
  /* links `id` under its current fanins; returns 0 on success, or the id of an
     already hashed node with the same fanins (in which case nothing changes) */
  node_id strash_insert( node_id id );
  void strash_unlink( node_id id );

  /* fresh And slot with zeroed fields; counts towards num_ands */
  node_id allocate();

  void ref( node_id id ) { at( id ).refs.fetch_add( 1, std::memory_order_relaxed ); }
  /*! drops one reference. When the count reaches zero on an And node the
      node is unlinked from strash under the bucket lock, so a concurrent
      `strash_find_and_ref` can never revive it. Returns true iff the node
      died. With `honor_reused` a reused-flagged node never dies (it stays
      hashed with its count at zero); without it the flag is cleared and the
      node dies like any other. */
  bool deref_node( node_id id, bool honor_reused = true );

  void set_flag( node_id id, std::uint8_t f ) { at( id ).flags.fetch_or( f, std::memory_order_relaxed ); }
  void clear_flag( node_id id, std::uint8_t f ) { at( id ).flags.fetch_and( static_cast<std::uint8_t>( ~f ), std::memory_order_relaxed ); }

  /* marks a dead node deleted; it must already be unlinked */
  void tombstone( node_id id );
  /* And -> buffer forwarding `target`; the caller has unlinked `id` and owns
     the reference on `target` */
  void make_buffer( node_id id, literal target );
  void add_num_ands( std::int64_t delta ) { num_ands_.fetch_add( static_cast<std::uint64_t>( delta ), std::memory_order_relaxed ); }

  /* single-threaded: sizes the hash table for `expected_nodes` */
  void reserve( std::size_t expected_nodes );

private:
  struct strash_table;

  std::size_t bucket_of( literal a, literal b ) const;
  std::mutex& lock_of( std::size_t bucket ) const;
  void copy_from( aig const& other );
  void check_operand( literal l ) const;

  std::unique_ptr<node_arena> nodes_;
  std::unique_ptr<strash_table> strash_;
  std::vector<node_id> pis_;
  std::vector<literal> pos_;
  std::atomic<std::uint64_t> num_ands_{ 0 };
};

/* fanin pair in strash order (smaller literal first) */
inline std::pair<literal, literal> normalized( literal a, literal b )
{
  return a <= b ? std::pair{ a, b } : std::pair{ b, a };
}

struct level_snapshot
{
  std::vector<std::uint32_t> levels; /* indexed by node id; 0 for dead nodes */
  std::uint32_t depth = 0;           /* max level over POs */
};

/* topological order of live And and buffer nodes (fanins first), the
   identity when ids already are topological; throws integrity_error on a
   cycle or a reference to a deleted node */
std::vector<node_id> topological_order( aig const& g );

/* recomputes every node level (buffers take their driver's level) */
level_snapshot levelize( aig& g );

std::uint64_t area( aig const& g );
std::uint32_t depth( aig const& g );

/* disjoint union of 2^times copies, each with its own PIs; PIs and POs are
   ordered copy by copy */
aig double_aig( aig const& g, unsigned times );

struct mffc
{
  node_id root = 0;
  std::vector<node_id> members; /* root first, then in discovery order */
  std::uint32_t size = 0;       /* And nodes among members */
};

/*! \brief Maximum fanout-free cone of `root` by the deref/re-ref walk.

  Dereferences fanins recursively from `root`, collecting every node whose
  count drops to zero, then restores all counts. Nodes in `boundary` are
  never entered. Single-threaded only; the counts are mutated in between.
*/
mffc mffc_collect( aig& g, node_id root, std::span<node_id const> boundary = {} );

/* scratch for the read-only MFFC walk; reusable across calls */
struct mffc_scratch
{
  std::vector<std::uint32_t> local_refs;
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<node_id> stack;
};

/*! Same result as `mffc_collect` but never writes the shared counts: the
    decrements go to a private overlay. Safe while other workers adjust
    counts of unrelated nodes. */
mffc mffc_collect_readonly( aig const& g, node_id root, std::span<node_id const> boundary, mffc_scratch& scratch );

/*! Drops the references `id` holds on its fanins, recursively freeing nodes
    whose count reaches zero (reused-flagged nodes are skipped and keep their
    subtree). Freed ids are appended to `dead`; when `tombstone` is set they
    are also marked deleted, otherwise they stay as unhashed pending slots.
    Returns the number of freed nodes. */
std::size_t dereference_fanins( aig& g, node_id id, std::vector<node_id>& dead, bool tombstone, bool honor_reused = true );

/* removes `root` (unhash + tombstone) and everything that dies with it */
std::size_t delete_dereferenced( aig& g, node_id root, std::vector<node_id>& sink );

/* --- structural audits; each returns an empty string when the check passes --- */
std::string check_strash( aig const& g );
std::string check_ref_counts( aig const& g );
std::string check_acyclic( aig const& g );
/* runs all audits, throws integrity_error on the first violation */
void audit( aig const& g );

} // namespace aigrefac
