// Infinitesimal generators of Euclidean symmetries acting blockwise on a
// stacked configuration (n agents in d ambient dimensions).  Each
// generator exposes the vector field used for momentum pairings and the
// exact finite group action used for invariance probing.
#pragma once

#include "dvi/model.hpp"

#include <string>
#include <vector>

namespace dvi {

// ===== Generator =====

struct NoetherGenerator {
  enum class Kind { translation, rotation };

  Kind kind = Kind::translation;
  int ambient_dim = 0;  // d, size of each agent block

  // Translation data: unit direction in R^d.
  Vector direction;

  // Rotation data: either a coordinate plane (i,j) of the block, or a
  // 3-vector axis when ambient_dim == 3.  plane_i < 0 selects axis form.
  int plane_i = -1;
  int plane_j = -1;
  Vector axis;

  std::string label;  // short name for diagnostics columns, e.g. "Txy"

  // Throws std::invalid_argument when ill-formed.
  void validate() const;

  // Vector field ξ(q) of the action, applied to each d-block of q.
  // Translation: the direction tiled over blocks.  Plane rotation (i,j):
  // block components map to out[i] = -q[j], out[j] = +q[i].  Axis
  // rotation: out_block = axis × q_block.
  Vector field(const Vector& q) const;

  // Exact finite action exp(eps·generator) applied to q: a shift for
  // translations, a Givens or Rodrigues rotation for rotations.
  Vector apply(const Vector& q, double eps) const;
};

// ===== Factories =====

// Unit-normalized translation along `direction` (length d).
NoetherGenerator translation_generator(int ambient_dim,
                                       const Vector& direction);

// Rotation in the coordinate plane (i, j), 0 ≤ i < j < d.
NoetherGenerator rotation_generator(int ambient_dim, int i, int j);

// Rotation about a 3D axis vector (ambient_dim must be 3).
NoetherGenerator rotation_generator_axis(const Vector& axis);

// The full Euclidean set for d ∈ {1,2,3}: d coordinate translations plus
// one plane rotation (d=2) or three plane rotations (d=3).
std::vector<NoetherGenerator> euclidean_generators(int ambient_dim);

}  // namespace dvi
