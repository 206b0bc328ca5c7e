#pragma once

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "httplib.h"
#include "isenet/common.hpp"
#include "json.hpp"

namespace isenet {

struct RecordFiles {
    std::filesystem::path hea, dat, atr;
};

inline std::string sha256_hex(const std::vector<uint8_t>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

// HTTPS/HTTP download client with an on-disk cache keyed by record id and
// file extension. Re-fetching a cached record performs no network call.
class FetchClient {
   public:
    FetchClient(std::string base_url, std::filesystem::path cache_dir)
        : base_url_(std::move(base_url)), cache_dir_(std::move(cache_dir)) {
        std::filesystem::create_directories(cache_dir_);
        load_checksums();
    }

    RecordFiles fetch_record(const std::string& record_id) {
        RecordFiles f{cache_dir_ / (record_id + ".hea"), cache_dir_ / (record_id + ".dat"),
                      cache_dir_ / (record_id + ".atr")};
        for (const auto& path : {f.hea, f.dat, f.atr}) {
            if (std::filesystem::exists(path)) continue;
            download(record_id, path);
        }
        return f;
    }

    // true when all three files are already on disk
    bool cached(const std::string& record_id) const {
        for (const char* ext : {".hea", ".dat", ".atr"})
            if (!std::filesystem::exists(cache_dir_ / (record_id + ext))) return false;
        return true;
    }

    const std::filesystem::path& cache_dir() const { return cache_dir_; }

   private:
    void download(const std::string& record_id, const std::filesystem::path& dest) {
        std::lock_guard<std::mutex> lk(mutex_);
        if (std::filesystem::exists(dest)) return;

        std::string host, path_prefix;
        split_url(base_url_, host, path_prefix);
        std::string remote = path_prefix + "/" + dest.filename().string();

        httplib::Result res;
        try {
            httplib::Client cli(host);
            cli.set_connection_timeout(20);
            cli.set_read_timeout(60);
            cli.set_follow_location(true);
            res = cli.Get(remote);
        } catch (const std::exception& e) {
            throw RetriableError("fetch " + record_id + ": " + e.what());
        }
        if (!res)
            throw RetriableError("fetch " + record_id + ": network error contacting " + host +
                                 " (" + httplib::to_string(res.error()) + ")");
        if (res->status == 404)
            throw DataError("fetch " + record_id + ": remote file not found: " + remote);
        if (res->status != 200)
            throw RetriableError("fetch " + record_id + ": HTTP status " +
                                 std::to_string(res->status));
        std::vector<uint8_t> body(res->body.begin(), res->body.end());
        if (body.empty()) throw IntegrityError("fetch " + record_id + ": empty body for " + remote);
        if (dest.extension() == ".hea" && body.front() != '#' &&
            (body.front() < ' ' || body.front() > '~'))
            throw IntegrityError("fetch " + record_id + ": header file is not text");

        std::filesystem::path tmp = dest;
        tmp += ".part";
        {
            std::ofstream out(tmp, std::ios::binary);
            out.write(reinterpret_cast<const char*>(body.data()),
                      static_cast<std::streamsize>(body.size()));
            if (!out) throw DataError("cannot write " + tmp.string());
        }
        std::filesystem::rename(tmp, dest);
        checksums_[dest.filename().string()] = sha256_hex(body);
        save_checksums();
    }

    static void split_url(const std::string& url, std::string& host, std::string& path) {
        std::string rest = url;
        auto scheme_end = rest.find("://");
        std::string scheme = "https";
        if (scheme_end != std::string::npos) {
            scheme = rest.substr(0, scheme_end);
            rest = rest.substr(scheme_end + 3);
        }
        auto slash = rest.find('/');
        if (slash == std::string::npos) {
            host = scheme + "://" + rest;
            path = "";
        } else {
            host = scheme + "://" + rest.substr(0, slash);
            path = rest.substr(slash);
            while (!path.empty() && path.back() == '/') path.pop_back();
        }
    }

    void load_checksums() {
        auto p = cache_dir_ / "checksums.json";
        if (!std::filesystem::exists(p)) return;
        std::ifstream in(p);
        nlohmann::json j;
        in >> j;
        for (auto& [k, v] : j.items()) checksums_[k] = v.get<std::string>();
    }

    void save_checksums() {
        nlohmann::json j(checksums_);
        std::ofstream out(cache_dir_ / "checksums.json");
        out << j.dump(2) << "\n";
    }

    std::string base_url_;
    std::filesystem::path cache_dir_;
    std::map<std::string, std::string> checksums_;
    std::mutex mutex_;
};

// The 48 mitdb record ids.
inline const std::vector<std::string>& mitdb_all_ids() {
    static const std::vector<std::string> ids = {
        "100", "101", "102", "103", "104", "105", "106", "107", "108", "109", "111", "112",
        "113", "114", "115", "116", "117", "118", "119", "121", "122", "123", "124", "200",
        "201", "202", "203", "205", "207", "208", "209", "210", "212", "213", "214", "215",
        "217", "219", "220", "221", "222", "223", "228", "230", "231", "232", "233", "234"};
    return ids;
}

}  // namespace isenet
