#pragma once

#include <cstdint>
#include <vector>

#include "hcr/fewshot.hpp"
#include "hcr/matrix.hpp"

namespace hcr {

// Recipe for a synthetic action dataset. Every class owns atoms_per_class
// "sub-action atoms" (orthonormal direction vectors); an item is a block
// sequence visiting each atom once — optionally in shuffled order — with
// every block holding a few noisy copies of its atom. shared_atoms of each
// class's atoms come from a pool common to all classes, modelling motion
// patterns that classes have in common.
struct SynthSpec {
  int classes = 5;
  int items_per_class = 20;
  int atoms_per_class = 3;
  int atom_dim = 16;
  int frames_per_atom_min = 4;
  int frames_per_atom_max = 8;
  double noise_sigma = 0.05;
  bool permute = true;
  int shared_atoms = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic generation: atoms come from substream 0 of the seed, item
// (c, i) from substream 1 + c * items_per_class + i, so items are
// independent of generation order. Class labels are "class0", "class1", ...
// and item ids "class{c}_item{i}".
Dataset generate_synthetic(const SynthSpec& spec);

// The atoms themselves (classes x atoms_per_class rows of atom_dim), for
// tests that need the ground-truth directions.
std::vector<Matrix> synthetic_atoms(const SynthSpec& spec);

}  // namespace hcr
