#include "sct/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sct {

void validate_params(const ClassifierParams& c) {
    if (c.w.empty())
        throw std::invalid_argument("classifier weight vector is empty");
    for (double v : c.w)
        if (!std::isfinite(v))
            throw std::invalid_argument("classifier weight is not finite");
    if (!std::isfinite(c.b))
        throw std::invalid_argument("classifier bias is not finite");
}

std::vector<double> stack_params(const ClassifierParams& c) {
    std::vector<double> p(c.w);
    p.push_back(c.b);
    return p;
}

ClassifierParams unstack_params(const std::vector<double>& p) {
    if (p.size() < 2)
        throw std::invalid_argument("stacked parameter vector needs at least 2 entries");
    ClassifierParams c;
    c.w.assign(p.begin(), p.end() - 1);
    c.b = p.back();
    return c;
}

PairHistory::PairHistory(int pos_class, int neg_class, std::size_t window)
    : pos_class_(pos_class), neg_class_(neg_class), window_(window) {
    if (pos_class >= neg_class)
        throw std::invalid_argument("pair must be canonically ordered: pos_class < neg_class");
    if (window == 0)
        throw std::invalid_argument("history window must be positive");
}

std::size_t PairHistory::feature_dim() const {
    return entries_.empty() ? 0 : entries_.front().params.dim();
}

void PairHistory::append(TimedClassifier tc) {
    validate_params(tc.params);
    if (!entries_.empty()) {
        if (tc.params.dim() != feature_dim())
            throw std::invalid_argument("history entries must share one feature dimension");
        if (tc.date <= entries_.back().date)
            throw std::invalid_argument("history dates must be strictly increasing");
    }
    if (tc.accuracy && (*tc.accuracy < 0.0 || *tc.accuracy > 1.0))
        throw std::invalid_argument("accuracy must lie in [0,1]");
    entries_.push_back(std::move(tc));
    if (entries_.size() > window_)
        entries_.erase(entries_.begin());
}

std::vector<int> LabeledDataset::class_ids() const {
    std::set<int> ids(labels.begin(), labels.end());
    return {ids.begin(), ids.end()};
}

void validate_dataset(const LabeledDataset& d) {
    if (d.n == 0 || d.m == 0)
        throw std::invalid_argument("dataset must have n >= 1 rows and m >= 1 features");
    if (d.features.size() != d.n * d.m)
        throw std::invalid_argument("feature matrix size does not match n*m");
    if (d.labels.size() != d.n)
        throw std::invalid_argument("label count does not match row count");
    for (double v : d.features)
        if (!std::isfinite(v))
            throw std::invalid_argument("dataset contains a non-finite feature value");
}

BinaryView make_binary_view(const LabeledDataset& d, int pos, int neg) {
    if (pos == neg)
        throw std::invalid_argument("binary view needs two distinct classes");
    BinaryView v;
    v.m = d.m;
    v.pos_class = pos;
    v.neg_class = neg;
    for (std::size_t i = 0; i < d.n; ++i) {
        if (d.labels[i] != pos && d.labels[i] != neg) continue;
        auto r = d.row(i);
        v.features.insert(v.features.end(), r.begin(), r.end());
        v.y.push_back(d.labels[i] == pos ? +1 : -1);
    }
    v.n = v.y.size();
    return v;
}

}  // namespace sct
