#include "hcr/synth.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hcr/error.hpp"
#include "hcr/rng.hpp"

namespace hcr {
namespace {

std::vector<double> gaussian_vector(Rng& rng, int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.normal();
  return v;
}

void subtract_projections(std::vector<double>& v,
                          const std::vector<std::vector<double>>& unit_basis) {
  for (const auto& b : unit_basis) {
    double coeff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) coeff += v[i] * b[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coeff * b[i];
  }
}

double vector_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Gram-Schmidt draw: orthogonal to every atom so far when dimensions allow,
// otherwise at least orthogonal within its own class.
std::vector<double> draw_atom(Rng& rng, int dim,
                              const std::vector<std::vector<double>>& global_basis,
                              const std::vector<std::vector<double>>& local_basis) {
  constexpr double kResidualFloor = 1e-6;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::vector<double> raw = gaussian_vector(rng, dim);

    std::vector<double> candidate = raw;
    subtract_projections(candidate, global_basis);
    double n = vector_norm(candidate);
    if (n <= kResidualFloor) {
      candidate = raw;
      subtract_projections(candidate, local_basis);
      n = vector_norm(candidate);
    }
    if (n > kResidualFloor) {
      for (double& x : candidate) x /= n;
      return candidate;
    }
  }
  throw InvalidState("could not draw an independent atom direction");
}

std::vector<std::vector<std::vector<double>>> build_atoms(const SynthSpec& spec) {
  Rng rng = Rng::substream(spec.seed, 0);
  std::vector<std::vector<double>> global_basis;

  std::vector<std::vector<double>> shared;
  for (int s = 0; s < spec.shared_atoms; ++s) {
    shared.push_back(draw_atom(rng, spec.atom_dim, global_basis, shared));
    global_basis.push_back(shared.back());
  }

  std::vector<std::vector<std::vector<double>>> per_class(
      static_cast<std::size_t>(spec.classes));
  for (int c = 0; c < spec.classes; ++c) {
    auto& atoms = per_class[static_cast<std::size_t>(c)];
    atoms = shared;
    while (static_cast<int>(atoms.size()) < spec.atoms_per_class) {
      atoms.push_back(draw_atom(rng, spec.atom_dim, global_basis, atoms));
      global_basis.push_back(atoms.back());
    }
  }
  return per_class;
}

}  // namespace

void SynthSpec::validate() const {
  if (classes < 1) throw InvalidArgument("need at least one class");
  if (items_per_class < 1) throw InvalidArgument("need at least one item per class");
  if (atoms_per_class < 1) throw InvalidArgument("need at least one atom per class");
  if (atom_dim < atoms_per_class) {
    throw InvalidArgument("atom_dim must be at least atoms_per_class so class atoms can be orthonormal");
  }
  if (frames_per_atom_min < 1 || frames_per_atom_max < frames_per_atom_min) {
    throw InvalidArgument("frames per atom must satisfy 1 <= min <= max");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgument("noise_sigma must be finite and non-negative");
  }
  if (shared_atoms < 0 || shared_atoms > atoms_per_class) {
    throw InvalidArgument("shared_atoms must lie in [0, atoms_per_class]");
  }
}

std::vector<Matrix> synthetic_atoms(const SynthSpec& spec) {
  spec.validate();
  const auto atoms = build_atoms(spec);
  std::vector<Matrix> out;
  out.reserve(atoms.size());
  for (const auto& class_atoms : atoms) {
    Matrix m(static_cast<int>(class_atoms.size()), spec.atom_dim);
    for (int a = 0; a < m.rows(); ++a) {
      auto row = m.row(a);
      for (int d = 0; d < spec.atom_dim; ++d) {
        row[static_cast<std::size_t>(d)] =
            class_atoms[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)];
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

Dataset generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const auto atoms = build_atoms(spec);

  Dataset dataset;
  for (int c = 0; c < spec.classes; ++c) {
    const auto& class_atoms = atoms[static_cast<std::size_t>(c)];
    for (int i = 0; i < spec.items_per_class; ++i) {
      Rng rng = Rng::substream(
          spec.seed, 1 + static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(spec.items_per_class) +
                         static_cast<std::uint64_t>(i));

      std::vector<int> order(static_cast<std::size_t>(spec.atoms_per_class));
      for (int a = 0; a < spec.atoms_per_class; ++a) order[static_cast<std::size_t>(a)] = a;
      if (spec.permute) rng.shuffle(order);

      std::vector<std::vector<double>> frames;
      for (int a : order) {
        const auto& atom = class_atoms[static_cast<std::size_t>(a)];
        const int length = rng.uniform_int(spec.frames_per_atom_min, spec.frames_per_atom_max);
        for (int t = 0; t < length; ++t) {
          std::vector<double> frame(static_cast<std::size_t>(spec.atom_dim));
          for (int d = 0; d < spec.atom_dim; ++d) {
            frame[static_cast<std::size_t>(d)] =
                atom[static_cast<std::size_t>(d)] + spec.noise_sigma * rng.normal();
          }
          frames.push_back(std::move(frame));
        }
      }

      Matrix data(static_cast<int>(frames.size()), spec.atom_dim);
      for (int t = 0; t < data.rows(); ++t) {
        auto row = data.row(t);
        for (int d = 0; d < spec.atom_dim; ++d) {
          row[static_cast<std::size_t>(d)] =
              frames[static_cast<std::size_t>(t)][static_cast<std::size_t>(d)];
        }
      }
      dataset.add_item(std::move(data), "class" + std::to_string(c),
                       "class" + std::to_string(c) + "_item" + std::to_string(i));
    }
  }
  return dataset;
}

}  // namespace hcr
