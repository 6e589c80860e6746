#pragma once

#include <span>
#include <vector>

#include "kronsbl/tensor.hpp"

namespace kronsbl {

/// ||x - x_hat||^2 / ||x||^2 for one trial. Throws DegenerateInput for a zero truth.
double nmse(const CVector& truth, const CVector& estimate);

/// |A n B| / |A u B|. Throws DegenerateInput when both supports are empty.
double srr(std::span<const Index> truth, std::span<const Index> estimate);

/// Indices with |x_n| >= rel * max|x|; empty for a zero vector.
std::vector<Index> support_by_threshold(const CVector& x, double rel = 0.05);

/// Indices of the k largest |x_n| (smaller index first on ties), ascending.
std::vector<Index> support_top_k(const CVector& x, Index k);

/// Both lists sorted and paired by rank; mean squared difference.
double angle_mse(std::vector<double> truth, std::vector<double> estimate);

/// Fraction of entries strictly below the threshold.
double success_probability(std::span<const double> mse, double threshold = 1e-6);

/// Mean over configurations of ||C_k - C_hat_k||_F^2 / ||C_k||_F^2.
double channel_nmse(std::span<const CMatrix> truth, std::span<const CMatrix> estimate);

/// ||processed - clean||^2.
double residual_energy(const CVector& clean, const CVector& processed);

double mean(std::span<const double> v);
double median(std::span<const double> v);

}  // namespace kronsbl
