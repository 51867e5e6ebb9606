#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/crlb.hpp"
#include "otfs/estimator.hpp"

namespace otfs {

// Monte-Carlo campaign settings. Defaults follow the reference setup:
// M = 128, N = 32, 3 GHz carrier, 2 kHz spacing, QPSK, 120 km/h mobile
// (k_max = 4), l_max = 10.
struct SimConfig {
    GridDims dims{128, 32, 2000.0};
    double carrier_hz = 3e9;
    int l_max = 10;
    int k_max = 4;
    int n_hat = 1;
    std::vector<int> path_counts = {6};
    std::vector<int> pilot_counts = {10};     // pilots in one Doppler column (N_p = 1)
    std::vector<double> snrp_db = {30, 35, 40, 45, 50};
    double snrd_db = 14.0;                    // data SNR for PAPR frames
    std::vector<double> snrd_sweep_db = {4, 8, 12, 16};  // BER sweep
    double ber_snrp_db = 40.0;                // pilot SNR during BER runs
    Waveform waveform = Waveform::BiOrthogonal;
    int trials = 200;
    int papr_frames = 500;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = hardware concurrency
    Hyperparams hp;

    std::string to_json() const;
    static SimConfig from_json(const std::string& text);
};

// One CSV line. Unused fields stay NaN and serialize empty.
struct MetricRow {
    std::string sweep;
    std::string waveform;
    int M = 0, N = 0, P = 0, l_max = 0, k_max = 0, n_hat = 0, pilots = 0;
    double snrp_db = std::nan("");
    double snrd_db = std::nan("");
    int trials = 0;
    double nmse_h_db = std::nan("");
    double nmse_kappa_db = std::nan("");
    double nmse_H_db = std::nan("");
    double crlb_h_db = std::nan("");
    double crlb_kappa_db = std::nan("");
    double papr_db = std::nan("");
    double ber = std::nan("");
    std::string config_hash;
};

std::string csv_header();
std::string csv_line(const MetricRow& row);
void write_csv(const std::string& path, const std::vector<MetricRow>& rows);

// FNV-1a over the resolved config text, for row provenance.
std::string config_hash(const SimConfig& cfg);

// Trial-averaged normalized squared error in dB, floored at -200 dB.
double nmse_db(const std::vector<double>& per_trial_ratios);

// Median of a sample (by copy); NaN when empty.
double median_of(std::vector<double> values);

// ||H(est) - H(truth)||_F^2 / ||H(truth)||_F^2 computed from the per-shift
// structure of the channel matrices, without materializing them. Matches the
// dense computation exactly; usable at full M = 128, N = 32 scale.
double channel_nmse_ratio(const DDChannel& truth, const DDChannel& est, Waveform wf);

// Per-cell outcome of an NMSE sweep: the CSV row plus the per-trial error
// ratios behind it (medians, quantiles, per-seed comparisons).
struct NmseCell {
    MetricRow row;
    std::vector<double> ratio_h, ratio_kappa, ratio_H;
    std::vector<double> crlb_h, crlb_kappa;  // per-realization normalized bounds
};

// Full estimation pipeline on one random draw; the building block of both
// the sweeps and the acceptance checks.
struct TrialMetrics {
    double ratio_h = 0.0, ratio_kappa = 0.0, ratio_H = 0.0;
    double crlb_h = 0.0, crlb_kappa = 0.0;
    int iterations = 0;
    int support_hits = 0;  // true paths recovered by support detection
};
TrialMetrics run_estimation_trial(const SimConfig& cfg, int num_paths, int num_pilots,
                                  double snrp_db, std::uint64_t trial_seed);

std::vector<NmseCell> run_nmse_sweep(const SimConfig& cfg);

std::vector<MetricRow> run_papr_table(const SimConfig& cfg);

// LMMSE detection over the whole grid followed by nearest-QPSK slicing.
Eigen::VectorXcd lmmse_detect(const DDGrid& y, const Eigen::MatrixXcd& H, double snr_d_linear);

// BER sweep comparing perfect CSI, the proposed estimator, the thresholding
// baseline and the integer-Doppler ablation under one LMMSE detector.
struct BerCell {
    double snrd_db = 0.0;
    double ber_perfect = 0.0, ber_proposed = 0.0, ber_threshold = 0.0, ber_integer = 0.0;
};
std::vector<BerCell> run_ber(const SimConfig& cfg);
std::vector<MetricRow> ber_rows(const SimConfig& cfg, const std::vector<BerCell>& cells);

// gnuplot companion script for a CSV emitted by one of the sweeps.
void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& sweep);

}  // namespace otfs
