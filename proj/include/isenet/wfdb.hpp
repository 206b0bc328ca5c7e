#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isenet/common.hpp"

namespace isenet {

enum class AamiClass : int { N = 0, S = 1, V = 2, F = 3, Q = 4, Excluded = 5 };

inline const char* aami_name(AamiClass c) {
    switch (c) {
        case AamiClass::N: return "N";
        case AamiClass::S: return "S";
        case AamiClass::V: return "V";
        case AamiClass::F: return "F";
        case AamiClass::Q: return "Q";
        default: return "X";
    }
}

// MIT beat-type codes -> AAMI superclass. Codes outside the five lists map
// to Excluded (non-beat annotations, noise markers, rhythm changes, ...).
inline AamiClass map_aami(int mit_code) {
    switch (mit_code) {
        case 1: case 2: case 3: case 25:
            return AamiClass::N;
        case 4: case 7: case 8: case 9: case 11: case 34: case 35:
            return AamiClass::S;
        case 5: case 10:
            return AamiClass::V;
        case 6:
            return AamiClass::F;
        case 12: case 13: case 38:
            return AamiClass::Q;
        default:
            return AamiClass::Excluded;
    }
}

struct SignalSpec {
    std::string lead_name;
    double gain = 200.0;      // ADC units per mV
    int baseline = 0;         // ADC units at 0 mV
    int format_code = 212;
};

struct RecordHeader {
    std::string record_id;
    int n_signals = 0;
    double sampling_rate = 0.0;
    int64_t n_samples = 0;
    std::vector<SignalSpec> signals;
};

struct Annotation {
    int64_t sample_index = 0;
    int mit_code = 0;
    AamiClass aami_class = AamiClass::Excluded;
};

struct RawRecord {
    RecordHeader header;
    // physical millivolts, [n_samples][n_signals]
    std::vector<std::array<double, 2>> signals;
    std::vector<Annotation> annotations;
};

// ---------------------------------------------------------------------------
// Header (.hea) parsing
// ---------------------------------------------------------------------------

inline RecordHeader parse_header(const std::string& text, const std::string& record_id) {
    RecordHeader h;
    h.record_id = record_id;
    std::istringstream in(text);
    std::string line;
    // skip comments and blank lines before the record line
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.find_first_not_of(" \t\r") != std::string::npos)
            break;
    }
    {
        std::istringstream ls(line);
        std::string name;
        double fs = 0;
        int64_t n = 0;
        int nsig = 0;
        if (!(ls >> name >> nsig)) throw DataError("malformed header record line: " + line);
        if (!(ls >> fs)) fs = 250.0;  // WFDB default
        if (!(ls >> n)) n = 0;
        h.n_signals = nsig;
        h.sampling_rate = fs;
        h.n_samples = n;
    }
    for (int i = 0; i < h.n_signals; ++i) {
        if (!std::getline(in, line)) throw DataError("header truncated: missing signal line");
        std::istringstream ls(line);
        std::string fname, fmt_tok, gain_tok;
        if (!(ls >> fname >> fmt_tok >> gain_tok))
            throw DataError("malformed signal line: " + line);
        SignalSpec sig;
        // format may carry a samples-per-frame suffix like "212x1"
        sig.format_code = std::stoi(fmt_tok);
        // gain token: gain(baseline)/units, every part optional
        double gain = 0;
        int baseline = 0;
        bool have_baseline = false;
        {
            std::string g = gain_tok;
            auto slash = g.find('/');
            if (slash != std::string::npos) g = g.substr(0, slash);
            auto open = g.find('(');
            if (open != std::string::npos) {
                auto close = g.find(')', open);
                baseline = std::stoi(g.substr(open + 1, close - open - 1));
                have_baseline = true;
                g = g.substr(0, open);
            }
            gain = g.empty() ? 0.0 : std::stod(g);
        }
        if (gain == 0) gain = 200.0;  // WFDB: 0 means "assume default"
        sig.gain = gain;
        int adc_res = 0, adc_zero = 0;
        if (ls >> adc_res >> adc_zero) {
            if (!have_baseline) baseline = adc_zero;
        }
        sig.baseline = baseline;
        // remaining numeric fields: initial value, checksum, block size
        int64_t skip_num;
        for (int k = 0; k < 3 && (ls >> skip_num); ++k) {
        }
        ls.clear();
        std::string desc;
        std::getline(ls, desc);
        auto b = desc.find_first_not_of(" \t\r");
        sig.lead_name = b == std::string::npos ? "" : desc.substr(b);
        while (!sig.lead_name.empty() &&
               (sig.lead_name.back() == '\r' || sig.lead_name.back() == ' '))
            sig.lead_name.pop_back();
        h.signals.push_back(sig);
    }
    if (h.signals.empty()) throw DataError("header declares no signals: " + record_id);
    return h;
}

// ---------------------------------------------------------------------------
// Format 212: two 12-bit two's-complement samples packed into 3 bytes.
//   byte0          = low 8 bits of sample A
//   byte1 low  nib = high 4 bits of sample A
//   byte1 high nib = high 4 bits of sample B
//   byte2          = low 8 bits of sample B
// ---------------------------------------------------------------------------

inline int sign_extend_12(int v) { return v >= 2048 ? v - 4096 : v; }

// decodes n_samples frames of 2 samples each
inline std::vector<std::array<int, 2>> decode_format212(const std::vector<uint8_t>& raw,
                                                        int64_t n_samples) {
    if (static_cast<int64_t>(raw.size()) < n_samples * 3)
        throw DataError("format 212 stream truncated: need " + std::to_string(n_samples * 3) +
                        " bytes, have " + std::to_string(raw.size()));
    std::vector<std::array<int, 2>> out(static_cast<std::size_t>(n_samples));
    for (int64_t i = 0; i < n_samples; ++i) {
        uint8_t b0 = raw[i * 3], b1 = raw[i * 3 + 1], b2 = raw[i * 3 + 2];
        int a = ((b1 & 0x0F) << 8) | b0;
        int b = ((b1 & 0xF0) << 4) | b2;
        out[static_cast<std::size_t>(i)] = {sign_extend_12(a), sign_extend_12(b)};
    }
    return out;
}

inline std::vector<uint8_t> encode_format212(const std::vector<std::array<int, 2>>& samples) {
    std::vector<uint8_t> out;
    out.reserve(samples.size() * 3);
    for (const auto& p : samples) {
        int a = p[0] & 0xFFF, b = p[1] & 0xFFF;
        out.push_back(static_cast<uint8_t>(a & 0xFF));
        out.push_back(static_cast<uint8_t>(((a >> 8) & 0x0F) | (((b >> 8) & 0x0F) << 4)));
        out.push_back(static_cast<uint8_t>(b & 0xFF));
    }
    return out;
}

inline double adc_to_physical(int adc, double gain, int baseline) {
    if (gain == 0) throw ConfigError("adc_to_physical: gain must be nonzero");
    return (adc - baseline) / gain;
}

// ---------------------------------------------------------------------------
// MIT annotation (.atr) stream: little-endian 16-bit words, high 6 bits are
// the type code, low 10 bits the sample increment. Pseudo-annotation codes
// SKIP/NUM/SUB/CHN/AUX carry bookkeeping payloads and never become beats.
// A zero word terminates the stream.
// ---------------------------------------------------------------------------

namespace mitann {
constexpr int SKIP = 59;
constexpr int NUM = 60;
constexpr int SUB = 61;
constexpr int CHN = 62;
constexpr int AUX = 63;
}  // namespace mitann

inline std::vector<Annotation> parse_annotations(const std::vector<uint8_t>& raw) {
    std::vector<Annotation> out;
    int64_t time = 0;
    std::size_t i = 0;
    bool terminated = false;
    while (!terminated) {
        if (i + 2 > raw.size()) {
            if (i < raw.size()) throw DataError("annotation stream has a dangling byte");
            break;
        }
        uint16_t word = static_cast<uint16_t>(raw[i] | (raw[i + 1] << 8));
        i += 2;
        int code = word >> 10;
        int field = word & 0x3FF;
        if (code == 0) {
            if (field == 0) {
                terminated = true;
                break;
            }
            throw DataError("annotation stream: NOTQRS word with nonzero time field");
        }
        switch (code) {
            case mitann::SKIP: {
                if (i + 4 > raw.size())
                    throw DataError("annotation stream: truncated SKIP interval");
                // PDP-11 order: high 16 bits first, then low 16 bits,
                // each little-endian
                uint32_t hi = static_cast<uint32_t>(raw[i] | (raw[i + 1] << 8));
                uint32_t lo = static_cast<uint32_t>(raw[i + 2] | (raw[i + 3] << 8));
                i += 4;
                time += static_cast<int32_t>((hi << 16) | lo);
                break;
            }
            case mitann::NUM:
            case mitann::SUB:
            case mitann::CHN:
                break;  // payload is the field itself; discarded
            case mitann::AUX: {
                std::size_t len = static_cast<std::size_t>(field);
                len += len & 1;  // pad byte keeps the stream word-aligned
                if (i + len > raw.size())
                    throw DataError("annotation stream: dangling AUX payload");
                i += len;
                break;
            }
            default: {
                time += field;
                Annotation a;
                a.sample_index = time;
                a.mit_code = code;
                a.aami_class = map_aami(code);
                out.push_back(a);
                break;
            }
        }
    }
    if (!terminated) throw DataError("annotation stream missing terminator word");
    return out;
}

// ---------------------------------------------------------------------------
// Record assembly from the .hea/.dat/.atr triple
// ---------------------------------------------------------------------------

inline std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

inline RawRecord load_record(const std::filesystem::path& hea,
                             const std::filesystem::path& dat,
                             const std::filesystem::path& atr,
                             const std::string& record_id) {
    RawRecord rec;
    {
        std::ifstream in(hea);
        if (!in) throw DataError("cannot open header: " + hea.string());
        std::stringstream ss;
        ss << in.rdbuf();
        rec.header = parse_header(ss.str(), record_id);
    }
    if (rec.header.n_signals != 2)
        throw DataError("record " + record_id + ": expected 2 signals, header declares " +
                        std::to_string(rec.header.n_signals));
    for (const auto& sig : rec.header.signals)
        if (sig.format_code != 212)
            throw DataError("record " + record_id + ": unsupported signal format " +
                            std::to_string(sig.format_code));

    auto dat_bytes = read_file_bytes(dat);
    int64_t n = rec.header.n_samples;
    if (n == 0) n = static_cast<int64_t>(dat_bytes.size()) / 3;
    auto adc = decode_format212(dat_bytes, n);
    rec.signals.resize(adc.size());
    for (std::size_t i = 0; i < adc.size(); ++i) {
        rec.signals[i] = {
            adc_to_physical(adc[i][0], rec.header.signals[0].gain, rec.header.signals[0].baseline),
            adc_to_physical(adc[i][1], rec.header.signals[1].gain, rec.header.signals[1].baseline)};
    }

    rec.annotations = parse_annotations(read_file_bytes(atr));
    int64_t prev = -1;
    for (const auto& a : rec.annotations) {
        if (a.sample_index <= prev)
            throw DataError("record " + record_id + ": annotation indices not increasing");
        prev = a.sample_index;
        if (a.sample_index >= static_cast<int64_t>(rec.signals.size()))
            throw DataError("record " + record_id + ": annotation beyond signal end");
    }
    return rec;
}

}  // namespace isenet
