#include "skylabel/dataio.hpp"

#include "skylabel/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "IQ serialization assumes a little-endian host");

namespace skylabel {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_num(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_num(std::string_view s, const std::string& where) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(where + ": invalid number '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double to_radians(double value, PhaseUnit unit) {
    switch (unit) {
    case PhaseUnit::Radians: return value;
    case PhaseUnit::Degrees: return value * std::numbers::pi / 180.0;
    case PhaseUnit::Cycles: return value * kTwoPi;
    }
    return value;
}

double from_radians(double value, PhaseUnit unit) {
    switch (unit) {
    case PhaseUnit::Radians: return value;
    case PhaseUnit::Degrees: return value * 180.0 / std::numbers::pi;
    case PhaseUnit::Cycles: return value / kTwoPi;
    }
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

json parse_json_file(const std::string& path) {
    std::ifstream in = open_input(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

} // namespace

PhaseUnit parse_phase_unit(std::string_view name) {
    if (name == "rad")
        return PhaseUnit::Radians;
    if (name == "deg")
        return PhaseUnit::Degrees;
    if (name == "cycles")
        return PhaseUnit::Cycles;
    throw ParseError("unknown phase unit '" + std::string(name) + "' (expected rad|deg|cycles)");
}

std::string phase_unit_name(PhaseUnit u) {
    switch (u) {
    case PhaseUnit::Radians: return "rad";
    case PhaseUnit::Degrees: return "deg";
    case PhaseUnit::Cycles: return "cycles";
    }
    return "rad";
}

PhaseLogFile read_phase_csv(const std::string& path, std::optional<PhaseUnit> unit_override) {
    std::ifstream in = open_input(path);

    PhaseLogHeader header;
    bool unit_declared = false;
    std::vector<std::string> channel_order;
    struct Row {
        UtcTime epoch;
        double phase;
        std::optional<double> amplitude;
        std::size_t file_pos;
    };
    std::map<std::string, std::vector<Row>> rows;

    std::string raw;
    std::size_t line_no = 0;
    bool saw_columns = false;
    std::size_t file_pos = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        const std::string where = path + ":" + std::to_string(line_no);
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const std::string_view body = trim(line.substr(1));
            const std::size_t eq = body.find('=');
            if (eq == std::string_view::npos)
                continue; // tolerate free-form comments
            const std::string_view key = trim(body.substr(0, eq));
            const std::string_view value = trim(body.substr(eq + 1));
            if (key == "station_id") {
                header.station_id = std::string(value);
            } else if (key == "channels") {
                for (std::string_view c : split(value, ','))
                    channel_order.emplace_back(trim(c));
            } else if (key == "phase_unit") {
                header.phase_unit = parse_phase_unit(value);
                unit_declared = true;
            } else if (key == "utc_offset_hours") {
                header.utc_offset_hours = int(parse_num(value, where));
            } else if (key == "source") {
                header.source = std::string(value);
            }
            continue;
        }
        if (!saw_columns) {
            // first non-comment line is the column header
            if (line != "epoch_utc,channel,phase,amplitude")
                throw ParseError(where + ": expected column header "
                                         "'epoch_utc,channel,phase,amplitude'");
            saw_columns = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 4)
            throw ParseError(where + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        Row row;
        try {
            row.epoch = parse_iso8601(trim(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        const std::string channel{trim(fields[1])};
        if (channel.empty())
            throw ParseError(where + ": empty channel name");
        row.phase = parse_num(trim(fields[2]), where);
        const std::string_view amp = trim(fields[3]);
        if (!amp.empty())
            row.amplitude = parse_num(amp, where);
        row.file_pos = file_pos++;
        rows[channel].push_back(row);
        if (std::find(channel_order.begin(), channel_order.end(), channel) ==
            channel_order.end())
            channel_order.push_back(channel);
    }

    if (!unit_declared && !unit_override)
        throw UnitAmbiguity(path + ": no phase_unit declared and no override given; "
                                   "refusing to guess between rad, deg and cycles");
    const PhaseUnit unit = unit_override.value_or(header.phase_unit);
    header.phase_unit = unit;
    header.channels = channel_order;

    PhaseLogFile out;
    out.header = header;
    for (const std::string& channel : channel_order) {
        auto& channel_rows = rows[channel];
        std::stable_sort(channel_rows.begin(), channel_rows.end(),
                         [](const Row& a, const Row& b) {
                             if (a.epoch != b.epoch)
                                 return a.epoch < b.epoch;
                             return a.file_pos < b.file_pos;
                         });
        PhaseSeries series;
        series.channel = channel;
        for (std::size_t i = 0; i < channel_rows.size(); ++i) {
            // last-wins on duplicate epochs
            if (i + 1 < channel_rows.size() && channel_rows[i + 1].epoch == channel_rows[i].epoch)
                continue;
            const Row& r = channel_rows[i];
            series.samples.push_back(PhaseSample{r.epoch, to_radians(r.phase, unit), r.amplitude});
        }
        out.series.push_back(std::move(series));
    }
    return out;
}

void write_phase_csv(const std::string& path, std::span<const PhaseSeries> series,
                     const PhaseLogHeader& header) {
    std::ofstream out = open_output(path);

    out << "# station_id=" << header.station_id << "\n";
    out << "# channels=";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << (i ? "," : "") << series[i].channel;
    out << "\n";
    out << "# phase_unit=" << phase_unit_name(header.phase_unit) << "\n";
    out << "# utc_offset_hours=" << header.utc_offset_hours << "\n";
    out << "# source=" << header.source << "\n";
    out << "epoch_utc,channel,phase,amplitude\n";

    struct Cursor {
        std::size_t next = 0;
    };
    std::vector<Cursor> cursors(series.size());
    while (true) {
        std::size_t best = series.size();
        for (std::size_t c = 0; c < series.size(); ++c) {
            if (cursors[c].next >= series[c].samples.size())
                continue;
            if (best == series.size() ||
                series[c].samples[cursors[c].next].epoch_utc <
                    series[best].samples[cursors[best].next].epoch_utc)
                best = c;
        }
        if (best == series.size())
            break;
        const PhaseSample& s = series[best].samples[cursors[best].next++];
        out << format_iso8601(s.epoch_utc) << ',' << series[best].channel << ','
            << fmt_num(from_radians(s.phase_rad, header.phase_unit)) << ',';
        if (s.amplitude)
            out << fmt_num(*s.amplitude);
        out << "\n";
    }
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

void write_labels(const std::string& path, std::span<const LabelRecord> records,
                  LabelFormat format) {
    std::ofstream out = open_output(path);
    if (format == LabelFormat::Csv) {
        out << "epoch_utc,channel,phase_rad,z_score,is_skywave,mu_day,sigma_day\n";
        for (const LabelRecord& r : records) {
            out << format_iso8601(r.epoch_utc) << ',' << r.channel << ',' << fmt_num(r.phase_rad)
                << ',' << fmt_num(r.z_score) << ',' << (r.is_skywave ? "true" : "false") << ','
                << fmt_num(r.stats.mu_rad) << ',' << fmt_num(r.stats.sigma_rad) << "\n";
        }
    } else {
        for (const LabelRecord& r : records) {
            json j;
            j["epoch_utc"] = format_iso8601(r.epoch_utc);
            j["channel"] = r.channel;
            j["phase_rad"] = r.phase_rad;
            if (std::isinf(r.z_score))
                j["z_score"] = "inf";
            else
                j["z_score"] = r.z_score;
            j["is_skywave"] = r.is_skywave;
            j["mu_day"] = r.stats.mu_rad;
            j["sigma_day"] = r.stats.sigma_rad;
            out << j.dump() << "\n";
        }
    }
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

namespace {

bool parse_bool(std::string_view s, const std::string& where) {
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    throw ParseError(where + ": invalid boolean '" + std::string(s) + "'");
}

double parse_maybe_inf(std::string_view s, const std::string& where) {
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    return parse_num(s, where);
}

} // namespace

std::vector<LabelRecord> read_labels(const std::string& path, LabelFormat format) {
    std::ifstream in = open_input(path);
    std::vector<LabelRecord> records;
    std::string raw;
    std::size_t line_no = 0;
    bool saw_columns = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        const std::string where = path + ":" + std::to_string(line_no);
        if (line.empty() || line[0] == '#')
            continue;
        LabelRecord r;
        if (format == LabelFormat::Csv) {
            if (!saw_columns) {
                if (line != "epoch_utc,channel,phase_rad,z_score,is_skywave,mu_day,sigma_day")
                    throw ParseError(where + ": unexpected label CSV column header");
                saw_columns = true;
                continue;
            }
            const auto fields = split(line, ',');
            if (fields.size() != 7)
                throw ParseError(where + ": expected 7 fields, got " +
                                 std::to_string(fields.size()));
            try {
                r.epoch_utc = parse_iso8601(trim(fields[0]));
            } catch (const ParseError& e) {
                throw ParseError(where + ": " + e.what());
            }
            r.channel = std::string(trim(fields[1]));
            r.phase_rad = parse_num(trim(fields[2]), where);
            r.z_score = parse_maybe_inf(trim(fields[3]), where);
            r.is_skywave = parse_bool(trim(fields[4]), where);
            r.stats.mu_rad = parse_num(trim(fields[5]), where);
            r.stats.sigma_rad = parse_num(trim(fields[6]), where);
        } else {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(where + ": " + e.what());
            }
            try {
                r.epoch_utc = parse_iso8601(j.at("epoch_utc").get<std::string>());
                r.channel = j.at("channel").get<std::string>();
                r.phase_rad = j.at("phase_rad").get<double>();
                if (j.at("z_score").is_string())
                    r.z_score = parse_maybe_inf(j.at("z_score").get<std::string>(), where);
                else
                    r.z_score = j.at("z_score").get<double>();
                r.is_skywave = j.at("is_skywave").get<bool>();
                r.stats.mu_rad = j.at("mu_day").get<double>();
                r.stats.sigma_rad = j.at("sigma_day").get<double>();
            } catch (const json::exception& e) {
                throw ParseError(where + ": " + e.what());
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_iq(const std::string& iq_path, const std::string& meta_path, const IqBuffer& buf,
              double center_freq_hz) {
    {
        std::ofstream out = open_output(iq_path);
        std::vector<float> interleaved;
        interleaved.reserve(buf.samples.size() * 2);
        for (const std::complex<double>& s : buf.samples) {
            interleaved.push_back(float(s.real()));
            interleaved.push_back(float(s.imag()));
        }
        out.write(reinterpret_cast<const char*>(interleaved.data()),
                  std::streamsize(interleaved.size() * sizeof(float)));
        if (!out)
            throw IoError("failed writing '" + iq_path + "'");
    }
    json j;
    j["sample_rate_hz"] = buf.sample_rate_hz;
    j["center_freq_hz"] = center_freq_hz;
    j["start_epoch_utc"] = format_iso8601(buf.start_epoch_utc);
    j["format"] = "f32le-iq";
    std::ofstream meta = open_output(meta_path);
    meta << j.dump(2) << "\n";
    if (!meta)
        throw IoError("failed writing '" + meta_path + "'");
}

IqFile read_iq(const std::string& iq_path, const std::string& meta_path) {
    const json j = parse_json_file(meta_path);
    IqFile out;
    try {
        out.meta.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        out.meta.center_freq_hz = j.at("center_freq_hz").get<double>();
        out.meta.start_epoch_utc = parse_iso8601(j.at("start_epoch_utc").get<std::string>());
        out.meta.format = j.at("format").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(meta_path + ": " + e.what());
    }
    if (out.meta.format != "f32le-iq")
        throw ParseError(meta_path + ": unsupported IQ format '" + out.meta.format + "'");

    std::ifstream in = open_input(iq_path);
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0, std::ios::beg);
    if (bytes < 0 || bytes % std::streamoff(2 * sizeof(float)) != 0)
        throw ParseError(iq_path + ": size " + std::to_string(bytes) +
                         " is not a whole number of float32 IQ pairs");
    std::vector<float> interleaved(std::size_t(bytes) / sizeof(float));
    in.read(reinterpret_cast<char*>(interleaved.data()), bytes);
    if (!in)
        throw IoError("failed reading '" + iq_path + "'");

    out.buffer.sample_rate_hz = out.meta.sample_rate_hz;
    out.buffer.start_epoch_utc = out.meta.start_epoch_utc;
    out.buffer.samples.reserve(interleaved.size() / 2);
    for (std::size_t i = 0; i + 1 < interleaved.size(); i += 2)
        out.buffer.samples.emplace_back(double(interleaved[i]), double(interleaved[i + 1]));
    return out;
}

namespace {

void check_known_keys(const json& j, std::initializer_list<const char*> known,
                      const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw ConfigError(path + ": unknown config key '" + key + "'");
    }
}

GeoPoint geo_from_json(const json& j, const std::string& path) {
    check_known_keys(j, {"lat", "lon"}, path);
    GeoPoint p;
    p.lat_deg = j.at("lat").get<double>();
    p.lon_deg = j.at("lon").get<double>();
    return p;
}

} // namespace

SimConfig load_sim_config(const std::string& path) {
    const json j = parse_json_file(path);
    check_known_keys(j,
                     {"carrier_hz", "cw_offsets_hz", "cw_amplitudes", "msk_bitrate_bps",
                      "msk_amplitude", "sample_rate_hz", "tx", "rx", "iono_height_m",
                      "iono_height_sigma_m", "alpha_night", "transition_minutes", "noise_sigma",
                      "seed", "utc_offset_hours", "epoch_spacing_s"},
                     path);
    SimConfig cfg;
    try {
        if (j.contains("carrier_hz")) cfg.carrier_hz = j["carrier_hz"].get<double>();
        if (j.contains("cw_offsets_hz")) cfg.cw_offsets_hz = j["cw_offsets_hz"].get<std::array<double, 2>>();
        if (j.contains("cw_amplitudes")) cfg.cw_amplitudes = j["cw_amplitudes"].get<std::array<double, 2>>();
        if (j.contains("msk_bitrate_bps")) cfg.msk_bitrate_bps = j["msk_bitrate_bps"].get<double>();
        if (j.contains("msk_amplitude")) cfg.msk_amplitude = j["msk_amplitude"].get<double>();
        if (j.contains("sample_rate_hz")) cfg.sample_rate_hz = j["sample_rate_hz"].get<double>();
        if (j.contains("tx")) cfg.tx = geo_from_json(j["tx"], path);
        if (j.contains("rx")) cfg.rx = geo_from_json(j["rx"], path);
        if (j.contains("iono_height_m")) cfg.iono_height_m = j["iono_height_m"].get<double>();
        if (j.contains("iono_height_sigma_m"))
            cfg.iono_height_sigma_m = j["iono_height_sigma_m"].get<double>();
        if (j.contains("alpha_night")) cfg.alpha_night = j["alpha_night"].get<double>();
        if (j.contains("transition_minutes"))
            cfg.transition_minutes = j["transition_minutes"].get<double>();
        if (j.contains("noise_sigma")) cfg.noise_sigma = j["noise_sigma"].get<double>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("utc_offset_hours"))
            cfg.utc_offset_hours = j["utc_offset_hours"].get<int>();
        if (j.contains("epoch_spacing_s")) cfg.epoch_spacing_s = j["epoch_spacing_s"].get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

EstimatorConfig load_estimator_config(const std::string& path) {
    const json j = parse_json_file(path);
    check_known_keys(j, {"tone_offsets_hz", "integration_seconds", "epoch_spacing_seconds"},
                     path);
    EstimatorConfig cfg;
    try {
        if (j.contains("tone_offsets_hz"))
            cfg.tone_offsets_hz = j["tone_offsets_hz"].get<std::array<double, 2>>();
        if (j.contains("integration_seconds"))
            cfg.integration_seconds = j["integration_seconds"].get<double>();
        if (j.contains("epoch_spacing_seconds"))
            cfg.epoch_spacing_seconds = j["epoch_spacing_seconds"].get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

void write_truth_csv(const std::string& path, std::span<const TruthRecord> records) {
    std::ofstream out = open_output(path);
    out << "epoch_utc,alpha,td_s,eta_CW1,beta_CW1,eta_CW2,beta_CW2\n";
    for (const TruthRecord& r : records) {
        out << format_iso8601(r.epoch_utc) << ',' << fmt_num(r.alpha) << ',' << fmt_num(r.delay_s)
            << ',' << fmt_num(r.eta[0]) << ',' << fmt_num(r.beta_rad[0]) << ','
            << fmt_num(r.eta[1]) << ',' << fmt_num(r.beta_rad[1]) << "\n";
    }
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

std::vector<TruthRecord> read_truth_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<TruthRecord> records;
    std::string raw;
    std::size_t line_no = 0;
    bool saw_columns = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        const std::string where = path + ":" + std::to_string(line_no);
        if (line.empty() || line[0] == '#')
            continue;
        if (!saw_columns) {
            if (line != "epoch_utc,alpha,td_s,eta_CW1,beta_CW1,eta_CW2,beta_CW2")
                throw ParseError(where + ": unexpected truth CSV column header");
            saw_columns = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 7)
            throw ParseError(where + ": expected 7 fields, got " + std::to_string(fields.size()));
        TruthRecord r;
        try {
            r.epoch_utc = parse_iso8601(trim(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        r.alpha = parse_num(trim(fields[1]), where);
        r.delay_s = parse_num(trim(fields[2]), where);
        r.eta[0] = parse_num(trim(fields[3]), where);
        r.beta_rad[0] = parse_num(trim(fields[4]), where);
        r.eta[1] = parse_num(trim(fields[5]), where);
        r.beta_rad[1] = parse_num(trim(fields[6]), where);
        records.push_back(r);
    }
    return records;
}

} // namespace skylabel
