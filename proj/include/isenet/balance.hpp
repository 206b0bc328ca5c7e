#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "isenet/beats.hpp"
#include "isenet/common.hpp"
#include "isenet/rng.hpp"

namespace isenet {

struct BalanceConfig {
    std::array<int64_t, 5> targets = {10000, 8000, 8000, 4000, 0};  // N,S,V,F,Q
    int smote_k = 5;
    uint64_t seed = 0;
};

// squared Euclidean distance on the flattened leads, with early exit once
// the running sum exceeds a known bound
inline double beat_dist2(const Beat& a, const Beat& b,
                         double bound = std::numeric_limits<double>::infinity()) {
    double acc = 0;
    std::size_t n = a.leads.size();
    for (std::size_t i = 0; i < n; i += 64) {
        std::size_t hi = std::min(i + 64, n);
        for (std::size_t j = i; j < hi; ++j) {
            double d = static_cast<double>(a.leads[j]) - static_cast<double>(b.leads[j]);
            acc += d * d;
        }
        if (acc > bound) return acc;
    }
    return acc;
}

// indices of the k nearest same-list neighbors of each point (self excluded)
inline std::vector<std::vector<std::size_t>> knn_indices(const std::vector<Beat>& beats, int k) {
    std::size_t n = beats.size();
    std::vector<std::vector<std::size_t>> out(n);
    parallel_for(n, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> dists;
        dists.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dists.emplace_back(beat_dist2(beats[i], beats[j]), j);
        }
        std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), dists.size());
        std::partial_sort(dists.begin(), dists.begin() + static_cast<long>(kk), dists.end());
        out[i].reserve(kk);
        for (std::size_t m = 0; m < kk; ++m) out[i].push_back(dists[m].second);
    });
    return out;
}

// SMOTE: each synthetic lies on the segment between a random original and
// one of its k nearest same-class neighbors.
inline std::vector<Beat> smote_oversample(const std::vector<Beat>& class_beats, int64_t target_n,
                                          int k, Rng& rng) {
    if (target_n <= static_cast<int64_t>(class_beats.size())) return class_beats;
    if (class_beats.size() < 2) throw ConfigError("smote needs at least 2 samples");
    if (k < 1) throw ConfigError("smote needs k >= 1");

    auto neighbors = knn_indices(class_beats, k);
    std::vector<Beat> out = class_beats;
    out.reserve(static_cast<std::size_t>(target_n));
    int64_t need = target_n - static_cast<int64_t>(class_beats.size());
    for (int64_t s = 0; s < need; ++s) {
        std::size_t ai = static_cast<std::size_t>(rng.uniform_int(class_beats.size()));
        const auto& nbrs = neighbors[ai];
        const Beat& a = class_beats[ai];
        const Beat& b = class_beats[nbrs[static_cast<std::size_t>(rng.uniform_int(nbrs.size()))]];
        double u = rng.uniform();
        Beat synth = a;
        for (std::size_t i = 0; i < synth.leads.size(); ++i)
            synth.leads[i] = static_cast<float>(a.leads[i] + u * (b.leads[i] - a.leads[i]));
        synth.origin = BeatOrigin::SmoteSynthetic;
        out.push_back(std::move(synth));
    }
    return out;
}

// A Tomek link is a pair of mutual nearest neighbors with different classes.
// Only the N-class member of a link is removed; ties in the nearest-neighbor
// search break toward the lower index, keeping the edit deterministic.
inline std::vector<Beat> tomek_edit(const std::vector<Beat>& beats, int64_t* removed_count = nullptr) {
    std::size_t n = beats.size();
    if (n < 2) {
        if (removed_count) *removed_count = 0;
        return beats;
    }
    std::vector<std::size_t> nn(n);
    parallel_for(n, [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = i;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = beat_dist2(beats[i], beats[j], best);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        nn[i] = best_j;
    });
    std::vector<bool> drop(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = nn[i];
        if (j <= i || nn[j] != i) continue;  // each mutual pair visited once
        if (beats[i].aami_class == beats[j].aami_class) continue;
        if (beats[i].aami_class == AamiClass::N) drop[i] = true;
        if (beats[j].aami_class == AamiClass::N) drop[j] = true;
    }
    std::vector<Beat> out;
    int64_t removed = 0;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (drop[i])
            removed++;
        else
            out.push_back(beats[i]);
    }
    if (removed_count) *removed_count = removed;
    return out;
}

struct BalanceStats {
    int64_t smote_added = 0;
    int64_t tomek_removed = 0;
    int64_t duplicated = 0;
    int64_t subsampled_out = 0;
};

// Label-shuffling equilibrium: SMOTE lifts S to its target, Tomek links are
// edited across the whole set, then every class is duplicated or subsampled
// to its exact target count. Q's target is zero and the class is dropped.
// Kept beats stay in input order; synthetics and duplicates are appended.
inline std::vector<Beat> label_shuffle_balance(const std::vector<Beat>& train,
                                               const BalanceConfig& cfg,
                                               BalanceStats* stats = nullptr) {
    BalanceStats local;
    Rng rng(cfg.seed);
    Rng smote_rng = rng.split(1);
    Rng sample_rng = rng.split(2);

    std::array<int64_t, 5> counts{};
    for (const auto& b : train) counts[static_cast<std::size_t>(b.aami_class)]++;
    for (int c = 0; c < 5; ++c)
        if (cfg.targets[static_cast<std::size_t>(c)] > 0 && counts[static_cast<std::size_t>(c)] == 0)
            throw ConfigError(std::string("class ") + aami_name(static_cast<AamiClass>(c)) +
                              " has a positive balance target but no samples");

    std::vector<Beat> work = train;

    // SMOTE for the S class only
    {
        int64_t target = cfg.targets[static_cast<int>(AamiClass::S)];
        int64_t have = counts[static_cast<int>(AamiClass::S)];
        if (target > have && have > 0) {
            std::vector<Beat> s_beats;
            s_beats.reserve(static_cast<std::size_t>(have));
            for (const auto& b : train)
                if (b.aami_class == AamiClass::S) s_beats.push_back(b);
            auto oversampled = smote_oversample(s_beats, target, cfg.smote_k, smote_rng);
            for (std::size_t i = s_beats.size(); i < oversampled.size(); ++i)
                work.push_back(std::move(oversampled[i]));
            local.smote_added = target - have;
        }
    }

    work = tomek_edit(work, &local.tomek_removed);

    // exact per-class targets
    std::array<std::vector<std::size_t>, 5> idx;
    for (std::size_t i = 0; i < work.size(); ++i)
        idx[static_cast<std::size_t>(work[i].aami_class)].push_back(i);
    std::vector<bool> keep(work.size(), true);
    std::vector<Beat> extras;
    for (int c = 0; c < 5; ++c) {
        const auto& cls = idx[static_cast<std::size_t>(c)];
        int64_t target = cfg.targets[static_cast<std::size_t>(c)];
        int64_t have = static_cast<int64_t>(cls.size());
        if (target == 0) {
            for (std::size_t i : cls) keep[i] = false;
            continue;
        }
        if (have == 0)
            throw ConfigError(std::string("class ") + aami_name(static_cast<AamiClass>(c)) +
                              " lost all samples before reaching its target");
        if (have > target) {
            auto sel = sample_rng.sample_without_replacement(static_cast<std::size_t>(have),
                                                             static_cast<std::size_t>(target));
            std::vector<bool> chosen(static_cast<std::size_t>(have), false);
            for (std::size_t s : sel) chosen[s] = true;
            for (std::size_t p = 0; p < static_cast<std::size_t>(have); ++p)
                if (!chosen[p]) keep[cls[p]] = false;
            local.subsampled_out += have - target;
        } else if (have < target) {
            int64_t need = target - have;
            for (int64_t w = 0; w < need / have; ++w) {
                for (std::size_t i : cls) {
                    Beat dup = work[i];
                    dup.origin = BeatOrigin::Duplicated;
                    extras.push_back(std::move(dup));
                }
            }
            for (int64_t r = 0; r < need % have; ++r) {
                std::size_t i = cls[static_cast<std::size_t>(
                    sample_rng.uniform_int(static_cast<uint64_t>(have)))];
                Beat dup = work[i];
                dup.origin = BeatOrigin::Duplicated;
                extras.push_back(std::move(dup));
            }
            local.duplicated += need;
        }
    }
    std::vector<Beat> out;
    out.reserve(work.size() + extras.size());
    for (std::size_t i = 0; i < work.size(); ++i)
        if (keep[i]) out.push_back(std::move(work[i]));
    for (auto& b : extras) out.push_back(std::move(b));
    if (stats) *stats = local;
    return out;
}

}  // namespace isenet
