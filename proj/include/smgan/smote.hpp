#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "smgan/matrix.hpp"
#include "smgan/rng.hpp"

namespace smgan {

struct SmoteConfig {
  std::size_t k = 5;               // neighbor count; clamps to n-1 for tiny classes
  std::size_t target_count = 0;    // synthetic samples to produce
  std::uint64_t seed = 0;
};

struct SyntheticBatch {
  Matrix samples;  // target_count x d
  // (minority row, neighbor row) that produced each sample.
  std::vector<std::pair<std::size_t, std::size_t>> parents;
};

// The k rows nearest to `query` by Euclidean distance, excluding the query
// itself, nearest first. Ties break toward the lower row index. When x has
// fewer than k+1 rows, all other rows are returned.
std::vector<std::size_t> knn(std::size_t query, const Matrix& x, std::size_t k);

// One interpolated sample: xi + (xj - xi) * r, elementwise.
std::vector<double> interpolate_between(std::span<const double> xi, std::span<const double> xj,
                                        std::span<const double> r);

// `count` samples interpolated from row `query` toward uniformly chosen
// members of `neighbors`, each with a fresh per-coordinate uniform(0,1)
// vector. Chosen neighbor rows are appended to *chosen when given.
Matrix interpolate(const Matrix& x, std::size_t query, const std::vector<std::size_t>& neighbors,
                   std::size_t count, Rng& rng, std::vector<std::size_t>* chosen = nullptr);

// Produces exactly cfg.target_count samples, visiting minority rows
// round-robin. Deterministic for a fixed (minority, cfg).
SyntheticBatch smote_oversample(const Matrix& minority, const SmoteConfig& cfg);

// Inspection dump; one synthetic row per line, feature order as the input.
void write_synthetic_csv(const SyntheticBatch& batch, const std::string& path);

}  // namespace smgan
