// skylabel: synthesize MF R-Mode CW phase data, extract tone phases from IQ
// captures, and generate skywave ground-truth labels.

#include "skylabel/dataio.hpp"
#include "skylabel/errors.hpp"
#include "skylabel/estimator.hpp"
#include "skylabel/labeler.hpp"
#include "skylabel/signal.hpp"
#include "skylabel/solar.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

using namespace skylabel;

namespace {

LabelFormat label_format_for(const std::string& path) {
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl")
        return LabelFormat::Jsonl;
    return LabelFormat::Csv;
}

void run_sun(double lat, double lon, const std::string& date_text, int utc_offset) {
    const CivilDate date = parse_date(date_text);
    const SolarEvents ev = solar_events({lat, lon}, date);
    const auto day_min = std::chrono::duration_cast<std::chrono::minutes>(ev.sunset_utc -
                                                                          ev.sunrise_utc);
    std::printf("date:               %s\n", format_date(date).c_str());
    std::printf("location:           %.6f, %.6f\n", lat, lon);
    std::printf("sunrise (local):    %s\n", format_local(ev.sunrise_utc, utc_offset).c_str());
    std::printf("sunrise (UTC):      %s\n", format_iso8601(ev.sunrise_utc).c_str());
    std::printf("solar noon (local): %s\n", format_local(ev.solar_noon_utc, utc_offset).c_str());
    std::printf("sunset (local):     %s\n", format_local(ev.sunset_utc, utc_offset).c_str());
    std::printf("sunset (UTC):       %s\n", format_iso8601(ev.sunset_utc).c_str());
    std::printf("day length:         %ldh%02ldm\n", long(day_min.count()) / 60,
                long(day_min.count()) % 60);
}

void run_simulate(const std::string& config_path, const std::string& start_text, int days,
                  const std::string& out_phases, const std::string& out_iq,
                  const std::string& out_truth, double iq_seconds, int threads) {
    const SimConfig cfg = load_sim_config(config_path);
    const CivilDate start = parse_date(start_text);

    const CampaignResult campaign = synthesize_campaign(cfg, start, days, threads);

    PhaseLogHeader header;
    header.station_id = "synthetic";
    header.phase_unit = PhaseUnit::Radians;
    header.utc_offset_hours = cfg.utc_offset_hours;
    header.source = "skylabel simulate";
    write_phase_csv(out_phases, campaign.phases, header);
    std::fprintf(stderr, "wrote %zu epochs x %zu channels to %s\n",
                 campaign.phases.at(0).samples.size(), campaign.phases.size(),
                 out_phases.c_str());

    if (!out_truth.empty()) {
        write_truth_csv(out_truth, campaign.truth);
        std::fprintf(stderr, "wrote truth trace to %s\n", out_truth.c_str());
    }
    if (!out_iq.empty()) {
        const UtcTime t0 = local_midnight_utc(start, cfg.utc_offset_hours);
        const IqBuffer iq = synthesize_iq(cfg, t0, iq_seconds);
        write_iq(out_iq, out_iq + ".json", iq, cfg.carrier_hz);
        std::fprintf(stderr, "wrote %zu IQ samples to %s (+ sidecar %s.json)\n",
                     iq.samples.size(), out_iq.c_str(), out_iq.c_str());
    }
}

void run_phases(const std::string& iq_path, const std::string& meta_path,
                const std::string& config_path, const std::string& out_path) {
    const EstimatorConfig cfg = load_estimator_config(config_path);
    const IqFile iq = read_iq(iq_path, meta_path);
    const EstimationResult result = phase_series_from_iq(std::span(&iq.buffer, 1), cfg);

    PhaseLogHeader header;
    header.station_id = "iq-capture";
    header.phase_unit = PhaseUnit::Radians;
    header.utc_offset_hours = 0;
    header.source = "skylabel phases " + iq_path;
    write_phase_csv(out_path, result.series, header);
    std::fprintf(stderr, "wrote %zu epochs x %zu tones to %s\n",
                 result.series.at(0).samples.size(), result.series.size(), out_path.c_str());
    if (!result.missing_epochs.empty())
        std::fprintf(stderr, "note: %zu epoch(s) had no IQ coverage, first at %s\n",
                     result.missing_epochs.size(),
                     format_iso8601(result.missing_epochs.front()).c_str());
}

void run_label(const std::string& phases_path, const std::string& date_text, double lat,
               double lon, int utc_offset, const std::string& window_mode,
               const std::string& fixed_start, const std::string& fixed_end, double threshold,
               const std::string& unwrap, const std::string& detrend, bool combined,
               const std::string& out_path) {
    const PhaseLogFile log = read_phase_csv(phases_path);
    const CivilDate date = parse_date(date_text);

    WindowPolicy policy;
    policy.utc_offset_hours = utc_offset;
    if (window_mode == "solar") {
        policy.mode = WindowMode::SolarOffset;
    } else if (window_mode == "fixed") {
        policy.mode = WindowMode::FixedLocal;
        policy.fixed_start_min = parse_local_hhmm(fixed_start);
        policy.fixed_end_min = parse_local_hhmm(fixed_end);
    } else {
        throw ConfigError("--window must be 'solar' or 'fixed'");
    }

    PreprocessOptions opts;
    if (unwrap == "on")
        opts.unwrap = true;
    else if (unwrap == "off")
        opts.unwrap = false;
    else
        throw ConfigError("--unwrap must be 'on' or 'off'");
    if (detrend == "none")
        opts.detrend = Detrend::None;
    else if (detrend == "linear")
        opts.detrend = Detrend::Linear;
    else
        throw ConfigError("--detrend must be 'none' or 'linear'");

    std::vector<std::vector<LabelRecord>> per_channel;
    for (const PhaseSeries& series : log.series)
        per_channel.push_back(label_series(series, {lat, lon}, date, policy, threshold, opts));

    std::vector<LabelRecord> all;
    for (const auto& records : per_channel)
        all.insert(all.end(), records.begin(), records.end());
    if (combined) {
        const auto merged = combined_or_labels(per_channel);
        all.insert(all.end(), merged.begin(), merged.end());
    }

    write_labels(out_path, all, label_format_for(out_path));
    std::size_t flagged = 0;
    for (const LabelRecord& r : all)
        flagged += r.is_skywave ? 1u : 0u;
    std::fprintf(stderr, "wrote %zu label(s) to %s (%zu flagged as skywave)\n", all.size(),
                 out_path.c_str(), flagged);
}

void run_plotdata(const std::string& phases_path, const std::string& labels_path,
                  const std::string& out_path) {
    const PhaseLogFile log = read_phase_csv(phases_path);
    const auto labels = read_labels(labels_path, label_format_for(labels_path));

    std::map<std::pair<std::string, UtcTime>, const LabelRecord*> by_key;
    for (const LabelRecord& r : labels)
        by_key[{r.channel, r.epoch_utc}] = &r;

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + out_path + "' for writing");
    out << "epoch_utc,channel,phase_rad,z_score,is_skywave\n";
    std::size_t rows = 0;
    for (const PhaseSeries& series : log.series) {
        for (const PhaseSample& s : series.samples) {
            out << format_iso8601(s.epoch_utc) << ',' << series.channel << ',';
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", s.phase_rad);
            out << buf << ',';
            const auto it = by_key.find({series.channel, s.epoch_utc});
            if (it != by_key.end()) {
                std::snprintf(buf, sizeof buf, "%.12g", it->second->z_score);
                out << buf << ',' << (it->second->is_skywave ? "true" : "false");
            } else {
                out << ',';
            }
            out << "\n";
            ++rows;
        }
    }
    if (!out)
        throw IoError("failed writing '" + out_path + "'");
    std::fprintf(stderr, "wrote %zu plot rows to %s\n", rows, out_path.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MF R-Mode skywave toolkit: signal simulation, CW tone phase "
                 "extraction and Z-score ground-truth labeling"};
    app.require_subcommand(1);

    // sun
    auto* sun = app.add_subcommand("sun", "Sunrise/sunset for a location and date");
    double sun_lat = 0.0, sun_lon = 0.0;
    std::string sun_date;
    int sun_off = 0;
    sun->add_option("--lat", sun_lat, "Latitude, degrees north")->required();
    sun->add_option("--lon", sun_lon, "Longitude, degrees east")->required();
    sun->add_option("--date", sun_date, "Civil date YYYY-MM-DD")->required();
    sun->add_option("--utc-offset", sun_off, "Station UTC offset, hours")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Synthesize a phase-measurement campaign");
    std::string sim_config, sim_start, sim_phases, sim_iq, sim_truth;
    int sim_days = 3, sim_threads = 1;
    double sim_iq_seconds = 60.0;
    simulate->add_option("--config", sim_config, "SimConfig JSON")->required();
    simulate->add_option("--start", sim_start, "First campaign date YYYY-MM-DD")->required();
    simulate->add_option("--days", sim_days, "Campaign length in days (>= 3)")->required();
    simulate->add_option("--out-phases", sim_phases, "Output phase CSV")->required();
    simulate->add_option("--out-iq", sim_iq, "Optional f32le-iq output path");
    simulate->add_option("--out-truth", sim_truth, "Optional ground-truth trace CSV");
    simulate->add_option("--iq-seconds", sim_iq_seconds,
                         "Length of the IQ snippet written by --out-iq");
    simulate->add_option("--threads", sim_threads, "Worker threads (output is identical)");

    // phases
    auto* phases = app.add_subcommand("phases", "Extract CW tone phases from an IQ capture");
    std::string ph_iq, ph_meta, ph_config, ph_out;
    phases->add_option("--iq", ph_iq, "f32le-iq sample file")->required();
    phases->add_option("--meta", ph_meta, "IQ sidecar metadata JSON")->required();
    phases->add_option("--config", ph_config, "EstimatorConfig JSON")->required();
    phases->add_option("--out", ph_out, "Output phase CSV")->required();

    // label
    auto* label = app.add_subcommand("label", "Generate skywave ground-truth labels");
    std::string lb_phases, lb_date, lb_out;
    std::string lb_window = "solar", lb_fixed_start = "08:30", lb_fixed_end = "20:00";
    std::string lb_unwrap = "on", lb_detrend = "none";
    double lb_lat = 0.0, lb_lon = 0.0, lb_threshold = kDefaultZThreshold;
    int lb_off = 0;
    bool lb_combined = false;
    label->add_option("--phases", lb_phases, "Input phase CSV")->required();
    label->add_option("--date", lb_date, "Target civil date YYYY-MM-DD")->required();
    label->add_option("--lat", lb_lat, "Station latitude, degrees north")->required();
    label->add_option("--lon", lb_lon, "Station longitude, degrees east")->required();
    label->add_option("--utc-offset", lb_off, "Station UTC offset, hours")->required();
    label->add_option("--window", lb_window, "Daytime window policy: solar|fixed");
    label->add_option("--fixed-start", lb_fixed_start, "Fixed window start, local HH:MM");
    label->add_option("--fixed-end", lb_fixed_end, "Fixed window end, local HH:MM");
    label->add_option("--threshold", lb_threshold, "Z-score decision threshold");
    label->add_option("--unwrap", lb_unwrap, "Phase unwrapping: on|off");
    label->add_option("--detrend", lb_detrend, "Detrend mode: none|linear");
    label->add_flag("--combined", lb_combined, "Also emit the OR across channels");
    label->add_option("--out", lb_out, "Output label file (.csv or .jsonl)")->required();

    // plotdata
    auto* plotdata =
        app.add_subcommand("plotdata", "Merge phases and labels into a plot-ready table");
    std::string pd_phases, pd_labels, pd_out;
    plotdata->add_option("--phases", pd_phases, "Input phase CSV")->required();
    plotdata->add_option("--labels", pd_labels, "Input label file")->required();
    plotdata->add_option("--out", pd_out, "Output merged CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sun)
            run_sun(sun_lat, sun_lon, sun_date, sun_off);
        else if (*simulate)
            run_simulate(sim_config, sim_start, sim_days, sim_phases, sim_iq, sim_truth,
                         sim_iq_seconds, sim_threads);
        else if (*phases)
            run_phases(ph_iq, ph_meta, ph_config, ph_out);
        else if (*label)
            run_label(lb_phases, lb_date, lb_lat, lb_lon, lb_off, lb_window, lb_fixed_start,
                      lb_fixed_end, lb_threshold, lb_unwrap, lb_detrend, lb_combined, lb_out);
        else if (*plotdata)
            run_plotdata(pd_phases, pd_labels, pd_out);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UnitAmbiguity& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InsufficientData& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DegenerateWindow& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DegenerateCancellation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        // remaining toolkit errors are bad parameters: usage
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
