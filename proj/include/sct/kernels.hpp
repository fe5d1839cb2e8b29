#pragma once

#include <cstddef>
#include <vector>

#include "sct/core.hpp"

// Dense data-parallel kernels behind the SVM training and evaluation paths.
// Each kernel has a serial reference implementation and an OpenMP variant.
// The parallel variants assign whole output elements to threads and keep the
// per-element summation order identical to the serial code, so both produce
// bitwise-identical results for any thread count.
namespace sct::kernels {

/// Label-signed Gram matrix: out[i*n + k] = y[i]*y[k]*dot(x_i, x_k).
/// X is row-major n x m, y entries are +1/-1, out has n*n slots.
void gram_matrix_serial(const double* X, const int* y, std::size_t n,
                        std::size_t m, double* out);
void gram_matrix_omp(const double* X, const int* y, std::size_t n,
                     std::size_t m, double* out);

/// Decision values w.x_i + b for every row of X (row-major n x m).
void decision_values_serial(const ClassifierParams& c, const double* X,
                            std::size_t n, std::size_t m, double* out);
void decision_values_omp(const ClassifierParams& c, const double* X,
                         std::size_t n, std::size_t m, double* out);

/// One-against-one vote tally: classifiers[p] separates pairs[p] =
/// (pos, neg); each row's predicted class id is written to out.
/// Zero decision values vote for pos, ties go to the smallest class id.
void vote_rows_serial(const std::vector<ClassifierParams>& classifiers,
                      const std::vector<std::pair<int, int>>& pairs,
                      const double* X, std::size_t n, std::size_t m, int* out);
void vote_rows_omp(const std::vector<ClassifierParams>& classifiers,
                   const std::vector<std::pair<int, int>>& pairs,
                   const double* X, std::size_t n, std::size_t m, int* out);

}  // namespace sct::kernels
