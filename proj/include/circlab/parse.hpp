#pragma once

// Text forms shared by the CLI and config files.
//
// Ratio specs:  const:2  linear:1  pow:2  list:2,3|const:2  file:<path>  dlictrex
// Set exprs:    fin:{1,3,5}  ivl:[4,6]+[9,12]  evens  odds  squares  all  from:N
//               blocks:cube-gap  lift(E)  shift(E,m)  union(E,F)  inter(E,F)  diff(E,F)
// Digit rules:  rat:5/24  finite:[0,1,1]  ones-on:E  max-on:E  periodic:[1,0]
//               floor-div:m={3:2,7:4}

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "circlab/circle.hpp"
#include "circlab/density.hpp"
#include "circlab/numeric.hpp"
#include "circlab/sequences.hpp"

namespace circlab {

BigInt parse_bigint(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
// p/q or an integer.
Rational parse_rational(std::string_view text);
// Comma separated, surrounding brackets optional.
std::vector<std::uint64_t> parse_u64_list(std::string_view text);
std::vector<BigInt> parse_bigint_list(std::string_view text);

// file:<path> holds one ratio per line, then a `tail:<spec>` line; `#` starts a comment.
RatioSpec parse_ratio_spec(std::string_view text);

// lift() needs the derived sequence; it may be null when no lift occurs.
NatSet parse_set_expr(std::string_view text, const std::shared_ptr<const DerivedSeq>& seq);

// rat: points keep digit_horizon digits when the expansion does not terminate.
CirclePoint parse_digit_rule(std::string_view text, const std::shared_ptr<const DerivedSeq>& seq,
                             std::uint64_t digit_horizon = 64);

}  // namespace circlab
