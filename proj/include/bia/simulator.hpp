#pragma once
// Link-level Monte Carlo: complex Gaussian mode gains, supersymbol
// transmission through the switched diagonal channels, zero-forcing
// recovery, log-det rate estimation, and a QPSK sanity path. All drivers
// refuse schemes that do not pass verification first.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bia/scheme.hpp"

namespace bia {

using cplx = std::complex<double>;

// Thrown by the simulation drivers when the scheme fails verification.
struct VerificationRefusal : std::runtime_error {
  explicit VerificationRefusal(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic standard complex Gaussian stream (E|z|^2 = 1). A fixed
// splitmix-based generator keeps draws bit-identical across platforms for
// the same seed, which std::normal_distribution does not guarantee.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}
  cplx next();

 private:
  std::uint64_t state_;
};

// One complex gain per (receiver p, transmitter q, mode m), constant across
// the supersymbol, redrawn per trial.
struct ChannelModeTable {
  int K = 0;
  int modes = 0;
  std::uint64_t seed = 0;
  std::vector<cplx> gains;  // ((p-1)*K + (q-1))*modes + m

  cplx gain(int p, int q, int m) const {
    return gains[(std::size_t(p - 1) * K + (q - 1)) * modes + m];
  }
};

ChannelModeTable make_mode_table(int K, int modes, std::uint64_t seed);

// Column of v as seen at receiver p from transmitter q: slot i carries
// gain(p, q, S[i][p-1]) wherever v[i] = 1.
std::vector<cplx> realize_column_c(const ChannelModeTable& table, int p, int q,
                                   const SwitchMatrix& S, const std::vector<std::uint8_t>& v);

// Received vectors for all receivers given per-transmitter symbol blocks
// (symbols[q-1] has one entry per precoder vector of tx q). noise_scale 0
// gives the exact linear model.
std::vector<std::vector<cplx>> simulate_supersymbol(const Scheme& scheme,
                                                    const ChannelModeTable& table,
                                                    const std::vector<std::vector<cplx>>& symbols,
                                                    std::uint64_t noise_seed, double noise_scale);

struct DecodeResult {
  std::vector<cplx> estimates;  // one per own precoder vector
  double cond = 0.0;            // condition number of the projected desired matrix
  bool discarded = false;       // cond above threshold, estimates not meaningful
};

inline constexpr double kCondDiscardThreshold = 1e12;

// Project y onto the orthogonal complement of the full interference span at
// receiver p (every realized column of every other transmitter), then least
// squares against the projected desired columns.
DecodeResult zf_decode(int p, const std::vector<cplx>& y, const Scheme& scheme,
                       const ChannelModeTable& table);

struct RoundTripStats {
  int draws = 0;
  long long receiver_trials = 0;   // draws x K
  long long discarded = 0;
  double discard_rate = 0.0;
  long long symbols_checked = 0;   // over kept receiver trials
  long long symbols_recovered = 0; // within tolerance
  double max_rel_error = 0.0;      // over kept receiver trials
  double max_cond_kept = 0.0;
};

// Zero-noise transmit/decode cycles with fresh channel draws; every receiver
// decodes its own block each draw.
RoundTripStats noiseless_roundtrip(const Scheme& scheme, int draws, std::uint64_t seed,
                                   double rel_tol);

struct RateCurve {
  std::vector<double> snr_db;
  std::vector<std::vector<double>> per_user_rate;  // [user][snr point], bits/channel use
  std::vector<double> sum_rate;                    // per snr point
  double dof_slope = 0.0;
  double dof_slope_ci = 0.0;  // half-width, normal approximation
  double discard_rate = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Per-trial per-receiver rate (1/n) log2 det(I + (rho/d_q) G*G) where G is
// the desired block projected off the aligned interference block; averaged
// over trials, slope fitted on the top SNR decade.
RateCurve estimate_rates(const Scheme& scheme, const std::vector<double>& snr_db, int trials,
                         std::uint64_t seed);

struct SerResult {
  int trials = 0;
  long long symbols = 0;
  long long symbol_errors = 0;
  double ser = 0.0;
  double discard_rate = 0.0;
};

// QPSK through the full chain with unit-variance noise at the given SNR.
SerResult qpsk_ser(const Scheme& scheme, double snr_db, int trials, std::uint64_t seed);

// CSV with columns snr_db,user,rate_bpcu,sum_rate and a leading meta comment.
std::string rate_curve_csv(const RateCurve& curve, const Scheme& scheme,
                           const std::string& meta_comment);

}  // namespace bia
