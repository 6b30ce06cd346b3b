#include "bia/simulator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bia/channel.hpp"
#include "bia/verifier.hpp"

namespace bia {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Internal seed for the verification gate in front of every driver.
constexpr std::uint64_t kGateSeed = 0xB1A0'5EEDULL;

void ensure_verified(const Scheme& scheme) {
  const VerificationReport rep = verify_scheme(scheme, 3, kGateSeed);
  if (!rep.all_pass) {
    throw VerificationRefusal("scheme failed verification; simulation refused");
  }
}

Eigen::MatrixXcd to_matrix(const std::vector<std::vector<cplx>>& cols, int n) {
  Eigen::MatrixXcd m(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(c)) = cols[c][static_cast<std::size_t>(i)];
  return m;
}

// Thin orthonormal basis of the column space.
Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& a) {
  if (a.cols() == 0) return Eigen::MatrixXcd(a.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXcd thin = Eigen::MatrixXcd::Identity(a.rows(), rank);
  return qr.householderQ() * thin;
}

Eigen::MatrixXcd project_off(const Eigen::MatrixXcd& basis, const Eigen::MatrixXcd& m) {
  if (basis.cols() == 0) return m;
  return m - basis * (basis.adjoint() * m);
}

// Desired columns of receiver q and one aligned representative per outside
// coalition (smallest member transmits it).
void realized_blocks(const Scheme& scheme, const ChannelModeTable& table, int q,
                     Eigen::MatrixXcd* desired, Eigen::MatrixXcd* aligned) {
  const PrecoderSet& own = scheme.precoders[static_cast<std::size_t>(q - 1)];
  std::vector<std::vector<cplx>> d_cols;
  for (const auto& v : own.vectors) d_cols.push_back(realize_column_c(table, q, q, scheme.S, v));
  *desired = to_matrix(d_cols, scheme.n);

  std::vector<std::vector<cplx>> a_cols;
  for (std::size_t ci = 0; ci < scheme.coalitions.size(); ++ci) {
    const auto& Q = scheme.coalitions[ci];
    if (subset_contains(Q, q)) continue;
    a_cols.push_back(realize_column_c(table, q, Q[0], scheme.S,
                                      scheme.shared_vector(static_cast<int>(ci))));
  }
  *aligned = to_matrix(a_cols, scheme.n);
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y, double* ci) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  if (ci) {
    if (m > 2) {
      const double intercept = my - slope * mx;
      double sse = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double e = y[i] - (intercept + slope * x[i]);
        sse += e * e;
      }
      const double se = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
      *ci = 1.96 * se;
    } else {
      *ci = 0.0;
    }
  }
  return slope;
}

}  // namespace

cplx GaussianStream::next() {
  state_ = splitmix64(state_);
  const std::uint64_t a = state_;
  state_ = splitmix64(state_);
  const std::uint64_t b = state_;
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0, 1)
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double re = rad * std::cos(2.0 * kPi * u2);
  const double im = rad * std::sin(2.0 * kPi * u2);
  return {re * 0.7071067811865476, im * 0.7071067811865476};
}

ChannelModeTable make_mode_table(int K, int modes, std::uint64_t seed) {
  ChannelModeTable t;
  t.K = K;
  t.modes = modes;
  t.seed = seed;
  t.gains.resize(static_cast<std::size_t>(K) * K * modes);
  GaussianStream g(splitmix64(seed ^ 0x424941'32ULL));
  for (auto& v : t.gains) v = g.next();
  return t;
}

std::vector<cplx> realize_column_c(const ChannelModeTable& table, int p, int q,
                                   const SwitchMatrix& S, const std::vector<std::uint8_t>& v) {
  const std::size_t n = v.size();
  std::vector<cplx> col(n, cplx(0, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i]) col[i] = table.gain(p, q, S[i][static_cast<std::size_t>(p - 1)]);
  }
  return col;
}

std::vector<std::vector<cplx>> simulate_supersymbol(const Scheme& scheme,
                                                    const ChannelModeTable& table,
                                                    const std::vector<std::vector<cplx>>& symbols,
                                                    std::uint64_t noise_seed, double noise_scale) {
  const int n = scheme.n;
  const int K = scheme.K;
  if (static_cast<int>(symbols.size()) != K)
    throw std::invalid_argument("one symbol block per transmitter required");

  // Per-transmitter sent supersymbol x = sum_j v_j X_j.
  std::vector<std::vector<cplx>> sent(static_cast<std::size_t>(K),
                                      std::vector<cplx>(static_cast<std::size_t>(n), cplx(0, 0)));
  for (int q = 1; q <= K; ++q) {
    const PrecoderSet& ps = scheme.precoders[static_cast<std::size_t>(q - 1)];
    if (symbols[static_cast<std::size_t>(q - 1)].size() != ps.vectors.size())
      throw std::invalid_argument("symbol count differs from precoder vector count");
    for (std::size_t j = 0; j < ps.vectors.size(); ++j) {
      const cplx x = symbols[static_cast<std::size_t>(q - 1)][j];
      const auto& v = ps.vectors[j];
      for (int i = 0; i < n; ++i) {
        if (v[static_cast<std::size_t>(i)]) sent[static_cast<std::size_t>(q - 1)][static_cast<std::size_t>(i)] += x;
      }
    }
  }

  std::vector<std::vector<cplx>> received(static_cast<std::size_t>(K),
                                          std::vector<cplx>(static_cast<std::size_t>(n), cplx(0, 0)));
  for (int p = 1; p <= K; ++p) {
    auto& y = received[static_cast<std::size_t>(p - 1)];
    for (int q = 1; q <= K; ++q) {
      const auto& x = sent[static_cast<std::size_t>(q - 1)];
      for (int i = 0; i < n; ++i) {
        const int m = scheme.S[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)];
        y[static_cast<std::size_t>(i)] += table.gain(p, q, m) * x[static_cast<std::size_t>(i)];
      }
    }
    if (noise_scale > 0.0) {
      GaussianStream g(derive_seed(noise_seed, static_cast<std::uint64_t>(p)));
      for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += noise_scale * g.next();
    }
  }
  return received;
}

DecodeResult zf_decode(int p, const std::vector<cplx>& y, const Scheme& scheme,
                       const ChannelModeTable& table) {
  const int n = scheme.n;
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("received vector length");

  std::vector<std::vector<cplx>> d_cols;
  const PrecoderSet& own = scheme.precoders[static_cast<std::size_t>(p - 1)];
  for (const auto& v : own.vectors) d_cols.push_back(realize_column_c(table, p, p, scheme.S, v));
  const Eigen::MatrixXcd D = to_matrix(d_cols, n);

  // Every realized column of every other transmitter; the receiver projects
  // out the entire interference span, claimed alignments included.
  std::vector<std::vector<cplx>> i_cols;
  for (int q = 1; q <= scheme.K; ++q) {
    if (q == p) continue;
    const PrecoderSet& ps = scheme.precoders[static_cast<std::size_t>(q - 1)];
    for (const auto& v : ps.vectors) i_cols.push_back(realize_column_c(table, p, q, scheme.S, v));
  }
  const Eigen::MatrixXcd basis = orthonormal_basis(to_matrix(i_cols, n));

  const Eigen::MatrixXcd G = project_off(basis, D);
  Eigen::VectorXcd py = Eigen::Map<const Eigen::VectorXcd>(y.data(), n);
  py = py - basis * (basis.adjoint() * py);

  DecodeResult res;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  res.cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(res.cond < kCondDiscardThreshold)) {
    res.discarded = true;
    return res;
  }
  const Eigen::VectorXcd xhat = svd.solve(py);
  res.estimates.assign(xhat.data(), xhat.data() + xhat.size());
  return res;
}

RoundTripStats noiseless_roundtrip(const Scheme& scheme, int draws, std::uint64_t seed,
                                   double rel_tol) {
  ensure_verified(scheme);
  RoundTripStats st;
  st.draws = draws;
  for (int t = 0; t < draws; ++t) {
    const ChannelModeTable table =
        make_mode_table(scheme.K, scheme.modes, derive_seed(seed, 2ULL * t));
    GaussianStream sym(derive_seed(seed, 2ULL * t + 1));
    std::vector<std::vector<cplx>> symbols(static_cast<std::size_t>(scheme.K));
    for (int q = 1; q <= scheme.K; ++q) {
      auto& blk = symbols[static_cast<std::size_t>(q - 1)];
      blk.resize(scheme.precoders[static_cast<std::size_t>(q - 1)].vectors.size());
      for (auto& x : blk) x = sym.next();
    }
    const auto received = simulate_supersymbol(scheme, table, symbols, 0, 0.0);

    for (int p = 1; p <= scheme.K; ++p) {
      ++st.receiver_trials;
      const DecodeResult res = zf_decode(p, received[static_cast<std::size_t>(p - 1)], scheme, table);
      if (res.discarded) {
        ++st.discarded;
        continue;
      }
      st.max_cond_kept = std::max(st.max_cond_kept, res.cond);
      const auto& truth = symbols[static_cast<std::size_t>(p - 1)];
      double err2 = 0.0, ref2 = 0.0;
      for (std::size_t j = 0; j < truth.size(); ++j) {
        err2 += std::norm(res.estimates[j] - truth[j]);
        ref2 += std::norm(truth[j]);
      }
      const double rel = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
      st.max_rel_error = std::max(st.max_rel_error, rel);
      st.symbols_checked += static_cast<long long>(truth.size());
      if (rel <= rel_tol) st.symbols_recovered += static_cast<long long>(truth.size());
    }
  }
  st.discard_rate = st.receiver_trials
                        ? static_cast<double>(st.discarded) / static_cast<double>(st.receiver_trials)
                        : 0.0;
  return st;
}

RateCurve estimate_rates(const Scheme& scheme, const std::vector<double>& snr_db, int trials,
                         std::uint64_t seed) {
  if (snr_db.empty()) throw std::invalid_argument("empty SNR list");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  ensure_verified(scheme);

  const int K = scheme.K;
  const int S = static_cast<int>(snr_db.size());
  RateCurve curve;
  curve.snr_db = snr_db;
  curve.trials = trials;
  curve.seed = seed;
  curve.per_user_rate.assign(static_cast<std::size_t>(K),
                             std::vector<double>(static_cast<std::size_t>(S), 0.0));
  std::vector<std::vector<long long>> kept(static_cast<std::size_t>(K),
                                           std::vector<long long>(static_cast<std::size_t>(S), 0));
  long long discard_events = 0;

  for (int t = 0; t < trials; ++t) {
    const ChannelModeTable table =
        make_mode_table(K, scheme.modes, derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (int q = 1; q <= K; ++q) {
      Eigen::MatrixXcd desired, aligned;
      realized_blocks(scheme, table, q, &desired, &aligned);
      const Eigen::MatrixXcd G = project_off(orthonormal_basis(aligned), desired);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
      const auto& sv = svd.singularValues();
      const double smin = sv(sv.size() - 1);
      const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
      if (!(cond < kCondDiscardThreshold)) {
        ++discard_events;
        continue;
      }
      const double d_q = static_cast<double>(desired.cols());
      for (int s = 0; s < S; ++s) {
        const double rho = std::pow(10.0, snr_db[static_cast<std::size_t>(s)] / 10.0);
        double rate = 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
          rate += std::log2(1.0 + rho / d_q * sv(i) * sv(i));
        }
        curve.per_user_rate[static_cast<std::size_t>(q - 1)][static_cast<std::size_t>(s)] +=
            rate / static_cast<double>(scheme.n);
        ++kept[static_cast<std::size_t>(q - 1)][static_cast<std::size_t>(s)];
      }
    }
  }

  curve.sum_rate.assign(static_cast<std::size_t>(S), 0.0);
  for (int q = 0; q < K; ++q) {
    for (int s = 0; s < S; ++s) {
      const long long k = kept[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)];
      double& v = curve.per_user_rate[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)];
      v = k ? v / static_cast<double>(k) : 0.0;
      curve.sum_rate[static_cast<std::size_t>(s)] += v;
    }
  }
  curve.discard_rate =
      static_cast<double>(discard_events) / (static_cast<double>(trials) * K);

  // Slope over the top SNR decade, in bits per log2(rho).
  const double top = *std::max_element(snr_db.begin(), snr_db.end());
  std::vector<double> xs, ys;
  for (int s = 0; s < S; ++s) {
    if (snr_db[static_cast<std::size_t>(s)] >= top - 10.0) {
      xs.push_back(snr_db[static_cast<std::size_t>(s)] * std::log2(10.0) / 10.0);
      ys.push_back(curve.sum_rate[static_cast<std::size_t>(s)]);
    }
  }
  if (xs.size() < 2) throw std::invalid_argument("at least two SNR points needed for the slope");
  curve.dof_slope = slope_fit(xs, ys, &curve.dof_slope_ci);
  return curve;
}

SerResult qpsk_ser(const Scheme& scheme, double snr_db, int trials, std::uint64_t seed) {
  ensure_verified(scheme);
  const double rho = std::pow(10.0, snr_db / 10.0);
  SerResult out;
  out.trials = trials;
  long long discarded = 0, receiver_trials = 0;
  constexpr double kInv = 0.7071067811865476;

  for (int t = 0; t < trials; ++t) {
    const ChannelModeTable table =
        make_mode_table(scheme.K, scheme.modes, derive_seed(seed, 3ULL * t));
    std::uint64_t bits_state = derive_seed(seed, 3ULL * t + 2);

    std::vector<std::vector<cplx>> symbols(static_cast<std::size_t>(scheme.K));
    std::vector<std::vector<std::pair<int, int>>> sent_bits(static_cast<std::size_t>(scheme.K));
    for (int q = 1; q <= scheme.K; ++q) {
      const std::size_t d = scheme.precoders[static_cast<std::size_t>(q - 1)].vectors.size();
      const double amp = std::sqrt(rho / static_cast<double>(d));
      for (std::size_t j = 0; j < d; ++j) {
        bits_state = splitmix64(bits_state);
        const int b0 = bits_state & 1 ? 1 : -1;
        const int b1 = bits_state & 2 ? 1 : -1;
        sent_bits[static_cast<std::size_t>(q - 1)].push_back({b0, b1});
        symbols[static_cast<std::size_t>(q - 1)].push_back(
            amp * cplx(b0 * kInv, b1 * kInv));
      }
    }
    const auto received =
        simulate_supersymbol(scheme, table, symbols, derive_seed(seed, 3ULL * t + 1), 1.0);

    for (int p = 1; p <= scheme.K; ++p) {
      ++receiver_trials;
      const DecodeResult res = zf_decode(p, received[static_cast<std::size_t>(p - 1)], scheme, table);
      if (res.discarded) {
        ++discarded;
        continue;
      }
      const auto& truth = sent_bits[static_cast<std::size_t>(p - 1)];
      for (std::size_t j = 0; j < truth.size(); ++j) {
        ++out.symbols;
        const int b0 = res.estimates[j].real() >= 0.0 ? 1 : -1;
        const int b1 = res.estimates[j].imag() >= 0.0 ? 1 : -1;
        if (b0 != truth[j].first || b1 != truth[j].second) ++out.symbol_errors;
      }
    }
  }
  out.ser = out.symbols ? static_cast<double>(out.symbol_errors) / static_cast<double>(out.symbols)
                        : 0.0;
  out.discard_rate =
      receiver_trials ? static_cast<double>(discarded) / static_cast<double>(receiver_trials) : 0.0;
  return out;
}

std::string rate_curve_csv(const RateCurve& curve, const Scheme& scheme,
                           const std::string& meta_comment) {
  std::ostringstream os;
  if (!meta_comment.empty()) os << "# " << meta_comment << "\n";
  os << "snr_db,user,rate_bpcu,sum_rate\n";
  char buf[160];
  for (std::size_t s = 0; s < curve.snr_db.size(); ++s) {
    for (int q = 1; q <= scheme.K; ++q) {
      std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g\n", curve.snr_db[s], q,
                    curve.per_user_rate[static_cast<std::size_t>(q - 1)][s], curve.sum_rate[s]);
      os << buf;
    }
  }
  return os.str();
}

}  // namespace bia
