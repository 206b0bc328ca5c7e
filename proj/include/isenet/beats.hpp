#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "isenet/common.hpp"
#include "isenet/signal.hpp"
#include "isenet/wfdb.hpp"

namespace isenet {

enum class LeadMode { MLII, V1, Both };
enum class SplitTag { Train, Test };
enum class BeatOrigin { Natural, SmoteSynthetic, Duplicated };

inline const char* lead_mode_name(LeadMode m) {
    switch (m) {
        case LeadMode::MLII: return "mlii";
        case LeadMode::V1: return "v1";
        default: return "both";
    }
}

inline int lead_count(LeadMode m) { return m == LeadMode::Both ? 2 : 1; }

// One preprocessed heartbeat: 512 time points per lead, channel-minor
// (leads[t * n_leads + c]), matching the [batch, 1, 512, channels] layout
// the models consume.
struct Beat {
    std::string record_id;
    int64_t r_index = 0;
    int n_leads = 1;
    std::vector<float> leads;  // 512 * n_leads
    AamiClass aami_class = AamiClass::Excluded;
    SplitTag split = SplitTag::Train;
    BeatOrigin origin = BeatOrigin::Natural;

    float at(std::size_t t, int lead) const { return leads[t * n_leads + lead]; }
};

// ---------------------------------------------------------------------------
// Record lists
// ---------------------------------------------------------------------------

inline const std::set<std::string>& paced_record_ids() {
    static const std::set<std::string> s = {"102", "104", "107", "217"};
    return s;
}

inline const std::set<std::string>& non_v1_record_ids() {
    static const std::set<std::string> s = {"100", "103", "114", "117", "123", "124"};
    return s;
}

inline const std::set<std::string>& ds1_ids() {
    static const std::set<std::string> s = {"101", "105", "106", "108", "109", "111", "112",
                                            "113", "115", "116", "118", "119", "121", "122"};
    return s;
}

inline const std::set<std::string>& ds2_ids() {
    static const std::set<std::string> s = {"200", "201", "202", "203", "205", "207", "208",
                                            "209", "210", "212", "213", "214", "215", "219",
                                            "220", "221", "222", "223", "228", "230", "231",
                                            "232", "233", "234"};
    return s;
}

inline const std::set<std::string>& ds2v_ids() {
    static const std::set<std::string> s = {"200", "202", "210", "213", "214", "219",
                                            "221", "228", "231", "233", "234"};
    return s;
}

inline const std::set<std::string>& ds2s_ids() {
    static const std::set<std::string> s = {"200", "202", "210", "212", "213", "214", "219",
                                            "221", "222", "228", "231", "232", "233", "234"};
    return s;
}

// Drop paced records and records whose second signal is not lead V1.
inline std::set<std::string> exclude_records(const std::set<std::string>& all_ids) {
    std::set<std::string> retained;
    for (const auto& id : all_ids) {
        if (paced_record_ids().count(id) || non_v1_record_ids().count(id)) continue;
        retained.insert(id);
    }
    return retained;
}

// ---------------------------------------------------------------------------
// Segmentation: windows cut at midpoints between adjacent R-peaks
// ---------------------------------------------------------------------------

struct SegmentedBeat {
    int64_t r_index = 0;
    AamiClass aami = AamiClass::Excluded;
    // raw mV windows, one per recorded lead
    std::array<std::vector<double>, 2> leads;
};

// The first and last annotated beats have no neighbor on one side and are
// dropped. Window j spans [R_j - floor(I_j/2), R_j + floor(I_{j+1}/2)]
// inclusive, with I the RR interval in samples.
inline std::vector<SegmentedBeat> segment_beats(const RawRecord& rec) {
    std::vector<const Annotation*> anchors;
    for (const auto& a : rec.annotations)
        if (a.aami_class != AamiClass::Excluded) anchors.push_back(&a);
    std::vector<SegmentedBeat> out;
    if (anchors.size() < 3) return out;
    for (std::size_t j = 1; j + 1 < anchors.size(); ++j) {
        int64_t r = anchors[j]->sample_index;
        int64_t prev_interval = r - anchors[j - 1]->sample_index;
        int64_t next_interval = anchors[j + 1]->sample_index - r;
        int64_t start = r - prev_interval / 2;
        int64_t end = r + next_interval / 2;  // inclusive
        SegmentedBeat beat;
        beat.r_index = r;
        beat.aami = anchors[j]->aami_class;
        for (int lead = 0; lead < 2; ++lead) {
            auto& w = beat.leads[lead];
            w.reserve(static_cast<std::size_t>(end - start + 1));
            for (int64_t t = start; t <= end; ++t)
                w.push_back(rec.signals[static_cast<std::size_t>(t)][static_cast<std::size_t>(lead)]);
        }
        out.push_back(std::move(beat));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-record preprocessing: denoise -> resample -> z-score -> Beat
// ---------------------------------------------------------------------------

struct PreprocessStats {
    int64_t emitted = 0;
    int64_t rejected_length = 0;   // outside the resampling bounds
    int64_t unfiltered_short = 0;  // denoise passthrough (window < taps)
};

struct PreprocessConfig {
    DenoiseConfig denoise;
    ResampleBounds bounds;
    int64_t train_boundary_samples = 108000;  // 300 s at 360 Hz
};

// Downsampling above 512 points keeps the leads time-aligned by drawing one
// index subset and applying it to every lead.
inline bool resample_beat_leads(std::array<std::vector<double>, 2>& leads, int n_leads, Rng& rng,
                                const ResampleBounds& bounds) {
    std::size_t n = leads[0].size();
    if (n < bounds.min_len || n > bounds.max_len) return false;
    if (n == kBeatLength) return true;
    if (n < kBeatLength) {
        for (int c = 0; c < n_leads; ++c) {
            Rng unused(0);
            auto r = resample_to_512(leads[c], unused, bounds);
            leads[c] = std::move(*r);
        }
        return true;
    }
    auto middle = rng.sample_without_replacement(n - 2, kBeatLength - 2);
    for (int c = 0; c < n_leads; ++c) {
        std::vector<double> out;
        out.reserve(kBeatLength);
        out.push_back(leads[c].front());
        for (std::size_t idx : middle) out.push_back(leads[c][idx + 1]);
        out.push_back(leads[c].back());
        leads[c] = std::move(out);
    }
    return true;
}

inline std::vector<Beat> record_to_beats(const RawRecord& rec, LeadMode mode, Rng rng,
                                         const PreprocessConfig& cfg, PreprocessStats& stats) {
    // channel order contract: 0 = MLII, 1 = V1
    if (rec.header.signals.size() >= 2) {
        if (rec.header.signals[0].lead_name != "MLII" || rec.header.signals[1].lead_name != "V1")
            throw DataError("record " + rec.header.record_id + ": lead configuration is (" +
                            rec.header.signals[0].lead_name + ", " +
                            rec.header.signals[1].lead_name + "), expected (MLII, V1)");
    }
    int n_leads = lead_count(mode);
    std::vector<Beat> out;
    auto segments = segment_beats(rec);
    for (auto& seg : segments) {
        // select leads before the heavy filtering work
        std::array<std::vector<double>, 2> work;
        if (mode == LeadMode::MLII)
            work[0] = std::move(seg.leads[0]);
        else if (mode == LeadMode::V1)
            work[0] = std::move(seg.leads[1]);
        else
            work = std::move(seg.leads);

        bool short_window = false;
        for (int c = 0; c < n_leads; ++c) {
            auto den = denoise(work[c], cfg.denoise);
            if (!den.filtered) short_window = true;
            work[c] = std::move(den.data);
        }
        if (short_window) stats.unfiltered_short++;

        if (!resample_beat_leads(work, n_leads, rng, cfg.bounds)) {
            stats.rejected_length++;
            continue;
        }

        Beat b;
        b.record_id = rec.header.record_id;
        b.r_index = seg.r_index;
        b.n_leads = n_leads;
        b.aami_class = seg.aami;
        b.split = seg.r_index < cfg.train_boundary_samples ? SplitTag::Train : SplitTag::Test;
        b.origin = BeatOrigin::Natural;
        b.leads.resize(kBeatLength * static_cast<std::size_t>(n_leads));
        for (int c = 0; c < n_leads; ++c) {
            auto norm = zscore(work[c]);
            for (std::size_t t = 0; t < kBeatLength; ++t)
                b.leads[t * static_cast<std::size_t>(n_leads) + static_cast<std::size_t>(c)] =
                    static_cast<float>(norm[t]);
        }
        out.push_back(std::move(b));
        stats.emitted++;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset splits
// ---------------------------------------------------------------------------

struct DatasetSplit {
    std::set<std::string> ds1, ds2, ds2v, ds2s;
    int64_t train_boundary_samples = 108000;
    std::vector<Beat> train, test;
    std::array<int64_t, 5> train_counts{};  // N,S,V,F,Q
    std::array<int64_t, 5> test_counts{};
    PreprocessStats stats;
};

inline std::array<int64_t, 5> count_classes(const std::vector<Beat>& beats) {
    std::array<int64_t, 5> counts{};
    for (const auto& b : beats) counts[static_cast<int>(b.aami_class)]++;
    return counts;
}

// records must already be the retained 38 (or a subset, for small runs)
inline DatasetSplit build_splits(const std::vector<RawRecord>& records, LeadMode mode,
                                 uint64_t seed, const PreprocessConfig& cfg = {}) {
    DatasetSplit split;
    split.ds1 = ds1_ids();
    split.ds2 = ds2_ids();
    split.ds2v = ds2v_ids();
    split.ds2s = ds2s_ids();
    split.train_boundary_samples = cfg.train_boundary_samples;

    Rng base(seed);
    std::vector<std::vector<Beat>> per_record(records.size());
    std::vector<PreprocessStats> per_stats(records.size());
    parallel_for(records.size(), [&](std::size_t i) {
        // substream keyed by record id so the result is independent of the
        // record order and of the thread count
        uint64_t key = 0;
        for (char ch : records[i].header.record_id) key = key * 131 + static_cast<uint64_t>(ch);
        per_record[i] = record_to_beats(records[i], mode, base.split(key), cfg, per_stats[i]);
    });
    for (std::size_t i = 0; i < records.size(); ++i) {
        split.stats.emitted += per_stats[i].emitted;
        split.stats.rejected_length += per_stats[i].rejected_length;
        split.stats.unfiltered_short += per_stats[i].unfiltered_short;
        for (auto& b : per_record[i]) {
            if (b.split == SplitTag::Train)
                split.train.push_back(std::move(b));
            else
                split.test.push_back(std::move(b));
        }
    }
    split.train_counts = count_classes(split.train);
    split.test_counts = count_classes(split.test);
    return split;
}

}  // namespace isenet
