#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace aigrefac
{

using node_id = std::uint32_t;

/// Reference to a node plus an inverter bit, packed as `2 * id + complemented`
/// (the same encoding AIGER uses for its literals).
class literal
{
public:
  constexpr literal() = default;
  constexpr literal( node_id id, bool complemented )
      : data_( ( id << 1 ) | static_cast<std::uint32_t>( complemented ) )
  {
  }

  static constexpr literal from_raw( std::uint32_t raw )
  {
    literal l;
    l.data_ = raw;
    return l;
  }

  static constexpr literal constant( bool value ) { return literal( 0, value ); }

  constexpr node_id node() const { return data_ >> 1; }
  constexpr bool is_complemented() const { return ( data_ & 1u ) != 0; }
  constexpr bool is_constant() const { return node() == 0; }
  constexpr std::uint32_t raw() const { return data_; }

  constexpr literal regular() const { return from_raw( data_ & ~1u ); }
  constexpr literal operator!() const { return from_raw( data_ ^ 1u ); }
  constexpr literal operator^( bool complement ) const { return from_raw( data_ ^ static_cast<std::uint32_t>( complement ) ); }

  /* lexicographic on (node id, complemented) */
  constexpr auto operator<=>( literal const& ) const = default;

private:
  std::uint32_t data_ = 0;
};

inline constexpr literal const0 = literal::constant( false );
inline constexpr literal const1 = literal::constant( true );

} // namespace aigrefac

template<>
struct std::hash<aigrefac::literal>
{
  std::size_t operator()( aigrefac::literal l ) const noexcept { return std::hash<std::uint32_t>{}( l.raw() ); }
};
