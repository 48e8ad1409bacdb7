#pragma once

#include "skylabel/estimator.hpp"
#include "skylabel/labeler.hpp"
#include "skylabel/phase_data.hpp"
#include "skylabel/signal.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skylabel {

enum class PhaseUnit { Radians, Degrees, Cycles };

PhaseUnit parse_phase_unit(std::string_view name); ///< "rad" | "deg" | "cycles"
std::string phase_unit_name(PhaseUnit u);

/// '#'-prefixed key=value header of a phase log.
struct PhaseLogHeader {
    std::string station_id = "unknown";
    std::vector<std::string> channels;
    PhaseUnit phase_unit = PhaseUnit::Radians;
    int utc_offset_hours = 0;
    std::string source = "unknown";
};

struct PhaseLogFile {
    PhaseLogHeader header;
    std::vector<PhaseSeries> series; ///< phases always converted to radians
};

/// Reads a phase CSV. Phases are converted to radians from the declared
/// unit (or `unit_override` when given); a file that declares no unit and
/// has no override is rejected with UnitAmbiguity. Rows are sorted by epoch
/// and de-duplicated per channel, last row in file order winning.
PhaseLogFile read_phase_csv(const std::string& path,
                            std::optional<PhaseUnit> unit_override = std::nullopt);

/// Writes '#' key=value header lines, a column header
/// `epoch_utc,channel,phase,amplitude`, then rows interleaved by epoch with
/// phases in the declared unit.
void write_phase_csv(const std::string& path, std::span<const PhaseSeries> series,
                     const PhaseLogHeader& header);

enum class LabelFormat { Csv, Jsonl };

/// Columns/keys: epoch_utc, channel, phase_rad, z_score, is_skywave,
/// mu_day, sigma_day. Booleans are true/false; an infinite Z-score is
/// serialized as "inf".
void write_labels(const std::string& path, std::span<const LabelRecord> records,
                  LabelFormat format);

std::vector<LabelRecord> read_labels(const std::string& path, LabelFormat format);

/// Sidecar metadata of an f32le-iq capture.
struct IqMeta {
    double sample_rate_hz = 0.0;
    double center_freq_hz = 0.0;
    UtcTime start_epoch_utc{};
    std::string format = "f32le-iq";
};

/// Raw interleaved little-endian float32 pairs (I then Q) plus a JSON
/// sidecar {sample_rate_hz, center_freq_hz, start_epoch_utc, format}.
void write_iq(const std::string& iq_path, const std::string& meta_path, const IqBuffer& buf,
              double center_freq_hz);

struct IqFile {
    IqBuffer buffer;
    IqMeta meta;
};

IqFile read_iq(const std::string& iq_path, const std::string& meta_path);

/// JSON configs mirror the struct field names exactly; absent keys keep
/// their defaults.
SimConfig load_sim_config(const std::string& path);
EstimatorConfig load_estimator_config(const std::string& path);

/// Truth-trace CSV emitted next to a synthetic campaign:
/// epoch_utc,alpha,td_s,eta_CW1,beta_CW1,eta_CW2,beta_CW2.
void write_truth_csv(const std::string& path, std::span<const TruthRecord> records);

std::vector<TruthRecord> read_truth_csv(const std::string& path);

} // namespace skylabel
