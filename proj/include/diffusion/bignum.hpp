#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "diffusion/configuration.hpp"

namespace diffusion {

// Arbitrary-precision mode: same engine templates, unbounded integers.
// The checked_* helpers become plain arithmetic for this type.
using BigInt = boost::multiprecision::cpp_int;
using BigConfig = BasicConfig<BigInt>;

} // namespace diffusion
