#include "mcgta/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mcgta/errors.hpp"

namespace mcgta {

namespace {

std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& k) {
    std::unordered_map<int, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    k = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            out[i] = k++;
            continue;
        }
        auto [it, inserted] = ids.try_emplace(labels[i], k);
        if (inserted) ++k;
        out[i] = it->second;
    }
    return out;
}

double choose2(std::int64_t n) { return 0.5 * double(n) * double(n - 1); }

void check_lengths(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) throw InvalidInput("label vectors differ in length");
    if (truth.size() < 2) throw InvalidInput("label vectors need at least 2 entries");
}

}  // namespace

ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) throw InvalidInput("label vectors differ in length");
    std::size_t kt = 0, kp = 0;
    const auto t = compact(truth, kt);
    const auto p = compact(pred, kp);
    ContingencyTable table;
    table.counts.assign(kt, std::vector<std::int64_t>(kp, 0));
    table.truth_sizes.assign(kt, 0);
    table.pred_sizes.assign(kp, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++table.counts[t[i]][p[i]];
        ++table.truth_sizes[t[i]];
        ++table.pred_sizes[p[i]];
    }
    table.total = static_cast<std::int64_t>(t.size());
    return table;
}

double ari(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred);
    const ContingencyTable table = contingency(truth, pred);
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& row : table.counts) {
        for (auto c : row) index += choose2(c);
    }
    for (auto a : table.truth_sizes) sum_a += choose2(a);
    for (auto b : table.pred_sizes) sum_b += choose2(b);
    const double expected = sum_a * sum_b / choose2(table.total);
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) return 1.0;
    return (index - expected) / denom;
}

double nmi(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred);
    const ContingencyTable table = contingency(truth, pred);
    const double n = double(table.total);
    auto entropy = [n](const std::vector<std::int64_t>& sizes) {
        double h = 0.0;
        for (auto s : sizes) {
            if (s > 0) h -= (double(s) / n) * std::log(double(s) / n);
        }
        return h;
    };
    const double ht = entropy(table.truth_sizes);
    const double hp = entropy(table.pred_sizes);
    if (table.truth_sizes.size() == 1 && table.pred_sizes.size() == 1) return 1.0;
    if (ht == 0.0 || hp == 0.0) return 0.0;

    double mi = 0.0;
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
        for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
            const auto c = table.counts[i][j];
            if (c == 0) continue;
            const double pij = double(c) / n;
            mi += pij * std::log(n * double(c) / (double(table.truth_sizes[i]) * double(table.pred_sizes[j])));
        }
    }
    return std::clamp(mi / std::sqrt(ht * hp), 0.0, 1.0);
}

}  // namespace mcgta
