#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gql/amenability.hpp"
#include "gql/approximation.hpp"
#include "gql/filtration.hpp"
#include "gql/module_ops.hpp"

namespace gql {

using Rng = std::mt19937_64;

GroupTable cyclic_group(int m);  // elements "0", ..., "m-1"
GroupTable symmetric_group_s3();   // permutations in one-line notation, e.g. "132"

/// Points "00", "01", ... zero-padded so lexicographic order is path order.
std::vector<std::string> path_points(int m);
std::vector<std::vector<double>> path_distances(int m);

struct CorpusEntry {
  std::string name;
  Filtration filt;
  std::vector<std::string> points;  // path order for metric pair groupoids, empty otherwise
};

CorpusEntry cyclic_entry(int m);
CorpusEntry s3_entry();
/// Pair groupoid on m points with the path metric, scale 1, depth m - 1.
CorpusEntry path_entry(int m);
/// Z/2 acting on {p, q} by swap.
CorpusEntry swap_entry();
/// Z/m rotating m points.
CorpusEntry rotation_entry(int m);
/// Z/2 swapping a and b and fixing c: fibres of different sizes.
CorpusEntry reflection_entry();

/// Z/2, Z/4, S3, pair groupoids on 2, 3, 5, 8 points, swap, rotation on 3 and 4 points, reflection.
std::vector<CorpusEntry> standard_corpus();

ModuleVector random_function(const GroupoidPtr& g, Rng& rng);
/// Random function supported in K_level.
ModuleVector random_banded_function(const Filtration& filt, int level, Rng& rng);
/// Random family, not equivariant in general.
FibreOperatorFamily random_family(const GroupoidPtr& g, Rng& rng);
/// Random family with entries only where d_x <= band.
FibreOperatorFamily random_banded_family(const Filtration& filt, int band, Rng& rng);
/// λ(f) for random f.
FibreOperatorFamily random_equivariant(const GroupoidPtr& g, Rng& rng);
/// Gram matrices of random unit vectors: PSD with unit diagonal.
KernelFamily random_psd_kernel(const GroupoidPtr& g, Rng& rng);
/// Random non-negative density with squared fibre mass at most 1.
ModuleVector random_density(const GroupoidPtr& g, Rng& rng);

/// Width-w window witnesses on a path entry for each w, then the constant-one witness.
std::vector<NamedWitness> window_sweep(const CorpusEntry& path, const std::vector<int>& widths);

}  // namespace gql
