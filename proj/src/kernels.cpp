#include "sct/kernels.hpp"

#include <stdexcept>

namespace sct::kernels {

namespace {

inline double dot(const double* a, const double* b, std::size_t m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += a[j] * b[j];
    return s;
}

inline double gram_entry(const double* X, const int* y, std::size_t m,
                         std::size_t i, std::size_t k) {
    return y[i] * y[k] * dot(X + i * m, X + k * m, m);
}

inline int vote_row(const std::vector<ClassifierParams>& classifiers,
                    const std::vector<std::pair<int, int>>& pairs,
                    const double* x, std::size_t m) {
    // Small scratch map: class id -> votes, kept ordered for the tie rule.
    std::vector<std::pair<int, int>> votes;  // (class id, count)
    auto bump = [&votes](int id) {
        for (auto& v : votes)
            if (v.first == id) { ++v.second; return; }
        votes.emplace_back(id, 1);
    };
    for (std::size_t p = 0; p < classifiers.size(); ++p) {
        const auto& c = classifiers[p];
        double f = c.b;
        for (std::size_t j = 0; j < m; ++j) f += c.w[j] * x[j];
        bump(f >= 0.0 ? pairs[p].first : pairs[p].second);
    }
    int best_id = votes.front().first;
    int best_count = votes.front().second;
    for (const auto& [id, count] : votes)
        if (count > best_count || (count == best_count && id < best_id)) {
            best_id = id;
            best_count = count;
        }
    return best_id;
}

}  // namespace

void gram_matrix_serial(const double* X, const int* y, std::size_t n,
                        std::size_t m, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            double v = gram_entry(X, y, m, i, k);
            out[i * n + k] = v;
            out[k * n + i] = v;
        }
}

void gram_matrix_omp(const double* X, const int* y, std::size_t n,
                     std::size_t m, double* out) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= i; ++k) {
            double v = gram_entry(X, y, m, i, k);
            out[i * n + k] = v;
            out[k * n + i] = v;
        }
}

void decision_values_serial(const ClassifierParams& c, const double* X,
                            std::size_t n, std::size_t m, double* out) {
    if (c.dim() != m) throw std::invalid_argument("feature dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
        out[i] = dot(c.w.data(), X + i * m, m) + c.b;
}

void decision_values_omp(const ClassifierParams& c, const double* X,
                         std::size_t n, std::size_t m, double* out) {
    if (c.dim() != m) throw std::invalid_argument("feature dimension mismatch");
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        out[i] = dot(c.w.data(), X + i * m, m) + c.b;
}

void vote_rows_serial(const std::vector<ClassifierParams>& classifiers,
                      const std::vector<std::pair<int, int>>& pairs,
                      const double* X, std::size_t n, std::size_t m, int* out) {
    if (classifiers.size() != pairs.size() || classifiers.empty())
        throw std::invalid_argument("need one classifier per pair");
    for (std::size_t i = 0; i < n; ++i)
        out[i] = vote_row(classifiers, pairs, X + i * m, m);
}

void vote_rows_omp(const std::vector<ClassifierParams>& classifiers,
                   const std::vector<std::pair<int, int>>& pairs,
                   const double* X, std::size_t n, std::size_t m, int* out) {
    if (classifiers.size() != pairs.size() || classifiers.empty())
        throw std::invalid_argument("need one classifier per pair");
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
        out[i] = vote_row(classifiers, pairs, X + i * m, m);
}

}  // namespace sct::kernels
