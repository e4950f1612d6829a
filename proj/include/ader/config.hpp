#ifndef ADER_CONFIG_HPP
#define ADER_CONFIG_HPP

#include <optional>
#include <string_view>

namespace ader {

// The four predictor kernel implementations. `generic` is the scalar
// reference the others are tested against.
enum class Variant { generic, log, splitck, splitck_aosoa };

inline constexpr Variant all_variants[] = {Variant::generic, Variant::log, Variant::splitck,
                                           Variant::splitck_aosoa};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

// Everything the kernels need to size buffers: order, quantity count and the
// SIMD width that drives padding and alignment.
struct SolverConfig {
  int order = 4;       // N: nodes per spatial dimension, polynomial degree N-1
  int quantities = 9;  // m
  int vec_width = 8;   // SIMD lane count in doubles (8 = 512-bit)
  // timestep safety factor; 0.35 is the largest value the stability sweep
  // in the README keeps stable through N = 9
  double cfl = 0.35;
};

}  // namespace ader

#endif
