#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Domain types shared by all modules. Everything here is an immutable value
// after construction; instances can be copied and shared across threads
// freely.
namespace sct {

/// Parameters (w, b) of a binary linear classifier f(x) = w.x + b.
/// The stacked form is the length m+1 vector (w_1 ... w_m, b).
struct ClassifierParams {
    std::vector<double> w;
    double b = 0.0;

    std::size_t dim() const { return w.size(); }
};

/// Throws std::invalid_argument if w is empty or any entry is non-finite.
void validate_params(const ClassifierParams& c);

std::vector<double> stack_params(const ClassifierParams& c);

/// Inverse of stack_params. Throws std::invalid_argument if p.size() < 2.
ClassifierParams unstack_params(const std::vector<double>& p);

/// A classifier tagged with its sensing date (integer days relative to a
/// reference date declared in the surrounding file or config).
struct TimedClassifier {
    ClassifierParams params;
    int date = 0;
    std::optional<double> accuracy;  // held-out accuracy if known, in [0,1]
};

/// Ordered window of classifiers for one canonical class pair.
/// Canonical ordering: pos_class < neg_class, and the classifier is always
/// oriented so pos_class maps to +1. Appending keeps at most `window`
/// entries, dropping the oldest.
class PairHistory {
public:
    PairHistory(int pos_class, int neg_class, std::size_t window);

    int pos_class() const { return pos_class_; }
    int neg_class() const { return neg_class_; }
    std::size_t window() const { return window_; }
    const std::vector<TimedClassifier>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t feature_dim() const;

    /// Validates dimension agreement and strictly increasing dates.
    void append(TimedClassifier tc);

private:
    int pos_class_;
    int neg_class_;
    std::size_t window_;
    std::vector<TimedClassifier> entries_;
};

/// Feature matrix (row-major n x m) with per-row class labels and a shared
/// sensing date. Feature values stay in their native physical units.
struct LabeledDataset {
    std::vector<double> features;  // n * m, row-major
    std::vector<int> labels;       // n
    std::size_t n = 0;
    std::size_t m = 0;
    int date = 0;

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * m, m};
    }
    /// Sorted distinct class ids present in the dataset.
    std::vector<int> class_ids() const;
};

/// Throws std::invalid_argument on shape mismatch or non-finite features.
void validate_dataset(const LabeledDataset& d);

/// Rows of one class pair with labels mapped to {+1, -1}.
struct BinaryView {
    std::vector<double> features;  // n' * m, row-major
    std::vector<int> y;            // n', entries +1 or -1
    std::size_t n = 0;
    std::size_t m = 0;
    int pos_class = 0;
    int neg_class = 0;

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * m, m};
    }
};

/// Filters d to the rows labeled pos or neg, mapping pos -> +1 and
/// neg -> -1. Row order is preserved. Throws if pos == neg.
BinaryView make_binary_view(const LabeledDataset& d, int pos, int neg);

/// Canonical (pos, neg) ordering for a class pair: smaller id is +1.
inline std::pair<int, int> canonical_pair(int a, int b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace sct
