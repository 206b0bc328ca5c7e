#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isenet/balance.hpp"
#include "isenet/beats.hpp"
#include "isenet/common.hpp"
#include "json.hpp"

namespace isenet {

// Prepared dataset: balanced training beats plus the untouched test split,
// with every preprocessing decision recorded in the manifest.
struct BeatDataset {
    LeadMode lead_mode = LeadMode::Both;
    uint64_t seed = 0;
    std::vector<Beat> train;  // balanced
    std::vector<Beat> test;
    nlohmann::json manifest;
};

namespace detail {

inline void write_f32_le(std::ofstream& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    char b[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                 static_cast<char>((bits >> 16) & 0xFF), static_cast<char>((bits >> 24) & 0xFF)};
    out.write(b, 4);
}

inline float read_f32_le(const uint8_t* p) {
    uint32_t bits = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                    (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

inline const char* split_name(SplitTag s) { return s == SplitTag::Train ? "train" : "test"; }
inline const char* origin_name(BeatOrigin o) {
    switch (o) {
        case BeatOrigin::Natural: return "natural";
        case BeatOrigin::SmoteSynthetic: return "smote";
        default: return "dup";
    }
}

}  // namespace detail

// Layout on disk:
//   <dir>/manifest.json   counts, seeds, rejections, blob checksum
//   <dir>/beats.f32       [n_beats, 512, n_leads] little-endian float32,
//                         train beats first, then test beats
//   <dir>/beats.csv       index,record_id,r_index,class,split,origin
inline void save_dataset(const BeatDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    int n_leads = lead_count(ds.lead_mode);
    std::vector<const Beat*> all;
    all.reserve(ds.train.size() + ds.test.size());
    for (const auto& b : ds.train) all.push_back(&b);
    for (const auto& b : ds.test) all.push_back(&b);

    {
        std::ofstream blob(dir / "beats.f32", std::ios::binary);
        if (!blob) throw DataError("cannot write " + (dir / "beats.f32").string());
        for (const Beat* b : all) {
            if (b->leads.size() != kBeatLength * static_cast<std::size_t>(n_leads))
                throw DataError("beat with unexpected lead layout while saving");
            for (float v : b->leads) detail::write_f32_le(blob, v);
        }
    }
    {
        std::ofstream csv(dir / "beats.csv");
        csv << "index,record_id,r_index,class,split,origin\n";
        for (std::size_t i = 0; i < all.size(); ++i) {
            const Beat* b = all[i];
            csv << i << ',' << b->record_id << ',' << b->r_index << ','
                << aami_name(b->aami_class) << ',' << detail::split_name(b->split) << ','
                << detail::origin_name(b->origin) << "\n";
        }
    }
    nlohmann::json manifest = ds.manifest;
    manifest["lead_mode"] = lead_mode_name(ds.lead_mode);
    manifest["n_leads"] = n_leads;
    manifest["beat_length"] = kBeatLength;
    manifest["n_train"] = ds.train.size();
    manifest["n_test"] = ds.test.size();
    manifest["seed"] = ds.seed;
    {
        auto bytes = read_file_bytes(dir / "beats.f32");
        manifest["blob_sha256"] = sha256_hex_bytes(bytes);
    }
    std::ofstream mf(dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
}

// sha256 helper shared with the fetch cache; kept separate so dataset.hpp
// does not pull in the HTTP client
std::string sha256_hex_bytes(const std::vector<uint8_t>& bytes);

inline BeatDataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw DataError("cannot open " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    mf >> manifest;

    BeatDataset ds;
    ds.manifest = manifest;
    std::string lm = manifest.at("lead_mode").get<std::string>();
    ds.lead_mode = lm == "mlii" ? LeadMode::MLII : lm == "v1" ? LeadMode::V1 : LeadMode::Both;
    ds.seed = manifest.value("seed", 0ULL);
    int n_leads = manifest.at("n_leads").get<int>();
    std::size_t n_train = manifest.at("n_train").get<std::size_t>();
    std::size_t n_test = manifest.at("n_test").get<std::size_t>();

    auto blob = read_file_bytes(dir / "beats.f32");
    std::size_t stride = kBeatLength * static_cast<std::size_t>(n_leads) * 4;
    if (blob.size() != (n_train + n_test) * stride)
        throw IntegrityError("beats.f32 size does not match the manifest");

    std::ifstream csv(dir / "beats.csv");
    if (!csv) throw DataError("cannot open " + (dir / "beats.csv").string());
    std::string line;
    std::getline(csv, line);  // header
    std::size_t i = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        Beat b;
        std::getline(ls, tok, ',');  // index
        std::getline(ls, b.record_id, ',');
        std::getline(ls, tok, ',');
        b.r_index = std::stoll(tok);
        std::getline(ls, tok, ',');
        b.aami_class = tok == "N"   ? AamiClass::N
                       : tok == "S" ? AamiClass::S
                       : tok == "V" ? AamiClass::V
                       : tok == "F" ? AamiClass::F
                       : tok == "Q" ? AamiClass::Q
                                    : AamiClass::Excluded;
        std::getline(ls, tok, ',');
        b.split = tok == "train" ? SplitTag::Train : SplitTag::Test;
        std::getline(ls, tok, ',');
        b.origin = tok == "natural" ? BeatOrigin::Natural
                   : tok == "smote" ? BeatOrigin::SmoteSynthetic
                                    : BeatOrigin::Duplicated;
        b.n_leads = n_leads;
        b.leads.resize(kBeatLength * static_cast<std::size_t>(n_leads));
        const uint8_t* p = blob.data() + i * stride;
        for (std::size_t k = 0; k < b.leads.size(); ++k)
            b.leads[k] = detail::read_f32_le(p + k * 4);
        if (b.split == SplitTag::Train)
            ds.train.push_back(std::move(b));
        else
            ds.test.push_back(std::move(b));
        ++i;
    }
    if (i != n_train + n_test) throw IntegrityError("beats.csv row count does not match manifest");
    return ds;
}

}  // namespace isenet
