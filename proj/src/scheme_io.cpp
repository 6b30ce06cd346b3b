#include "bia/scheme_io.hpp"

#include <fstream>
#include <sstream>

#include "bia/version.hpp"

namespace bia {

namespace {

using LoadError = SchemeFileError;

Json matrix_to_json(const std::vector<std::vector<std::uint8_t>>& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (std::uint8_t v : row) r.push_back(static_cast<int>(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::vector<std::uint8_t>> matrix_from_json(const Json& j, const char* name) {
  if (!j.is_array()) throw LoadError(std::string(name) + " must be an array of rows");
  std::vector<std::vector<std::uint8_t>> m;
  for (const auto& row : j) {
    if (!row.is_array()) throw LoadError(std::string(name) + " rows must be arrays");
    std::vector<std::uint8_t> out;
    out.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw LoadError(std::string(name) + " entries must be integers");
      const long long x = v.get<long long>();
      if (x < 0 || x > 255) throw LoadError(std::string(name) + " entry out of range");
      out.push_back(static_cast<std::uint8_t>(x));
    }
    m.push_back(std::move(out));
  }
  return m;
}

}  // namespace

Json tool_json() {
  Json t;
  t["name"] = kToolName;
  t["version"] = kToolVersion;
  return t;
}

Json params_json(const Scheme& scheme, std::uint64_t seed) {
  Json p;
  p["K"] = scheme.K;
  p["r"] = scheme.r;
  p["n"] = scheme.n;
  p["M"] = scheme.modes;
  p["pad_b"] = scheme.padded;
  p["seed"] = seed;
  return p;
}

Json scheme_to_json(const Scheme& scheme, std::uint64_t seed) {
  Json j;
  j["tool"] = tool_json();
  j["params"] = params_json(scheme, seed);
  j["F"] = matrix_to_json(scheme.F);
  j["S"] = matrix_to_json(scheme.S);
  Json precoders = Json::array();
  for (const auto& ps : scheme.precoders) {
    Json entry;
    entry["tx"] = ps.tx;
    Json vectors = Json::array();
    for (std::size_t i = 0; i < ps.labels.size(); ++i) {
      Json v;
      v["coalition"] = ps.labels[i];
      Json bits = Json::array();
      for (std::uint8_t b : ps.vectors[i]) bits.push_back(static_cast<int>(b));
      v["vector"] = std::move(bits);
      vectors.push_back(std::move(v));
    }
    entry["vectors"] = std::move(vectors);
    precoders.push_back(std::move(entry));
  }
  j["precoders"] = std::move(precoders);
  return j;
}

Scheme scheme_from_json(const Json& j, std::uint64_t* seed_out) {
  if (!j.is_object()) throw LoadError("top level must be an object");
  if (!j.contains("params") || !j["params"].is_object()) throw LoadError("missing params");
  const Json& p = j["params"];
  for (const char* key : {"K", "r", "n", "M"}) {
    if (!p.contains(key) || !p[key].is_number_integer())
      throw LoadError(std::string("params.") + key + " missing or not an integer");
  }

  Scheme s;
  s.K = p["K"].get<int>();
  s.r = p["r"].get<int>();
  s.n = p["n"].get<int>();
  s.modes = p["M"].get<int>();
  if (s.K < 1 || s.r < 1 || s.r > s.K || s.n < 1 || s.modes < 1)
    throw LoadError("params out of range");
  s.padded = p.value("pad_b", false);
  s.b = s.n - (s.r - 1) * s.K;
  if (seed_out) *seed_out = p.value("seed", std::uint64_t{0});

  if (!j.contains("F") || !j.contains("S")) throw LoadError("missing F or S");
  s.F = matrix_from_json(j["F"], "F");
  s.S = matrix_from_json(j["S"], "S");

  if (!j.contains("precoders") || !j["precoders"].is_array())
    throw LoadError("missing precoders");
  s.coalitions = subsets_lex(s.K, s.r);
  for (const auto& entry : j["precoders"]) {
    if (!entry.is_object() || !entry.contains("tx") || !entry.contains("vectors"))
      throw LoadError("malformed precoder entry");
    PrecoderSet ps;
    ps.tx = entry["tx"].get<int>();
    if (!entry["vectors"].is_array()) throw LoadError("precoder vectors must be an array");
    for (const auto& v : entry["vectors"]) {
      if (!v.is_object() || !v.contains("coalition") || !v.contains("vector"))
        throw LoadError("malformed precoder vector entry");
      std::vector<int> coalition;
      for (const auto& x : v["coalition"]) {
        if (!x.is_number_integer()) throw LoadError("coalition entries must be integers");
        coalition.push_back(x.get<int>());
      }
      std::vector<std::uint8_t> bits;
      for (const auto& x : v["vector"]) {
        if (!x.is_number_integer()) throw LoadError("vector entries must be integers");
        const long long b = x.get<long long>();
        if (b < 0 || b > 255) throw LoadError("vector entry out of range");
        bits.push_back(static_cast<std::uint8_t>(b));
      }
      ps.labels.push_back(std::move(coalition));
      ps.vectors.push_back(std::move(bits));
    }
    s.precoders.push_back(std::move(ps));
  }
  return s;
}

void save_scheme(const std::string& path, const Scheme& scheme, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << scheme_to_json(scheme, seed).dump(2) << "\n";
}

Scheme load_scheme(const std::string& path, std::uint64_t* seed_out) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(std::string("parse error: ") + e.what());
  }
  return scheme_from_json(j, seed_out);
}

Json report_to_json(const VerificationReport& rep) {
  Json j;
  j["tool"] = tool_json();
  Json p;
  p["K"] = rep.K;
  p["r"] = rep.r;
  p["n"] = rep.n;
  p["M"] = rep.modes;
  j["params"] = std::move(p);
  j["seeds"] = rep.seeds;
  j["seeds_agree"] = rep.seeds_agree;

  Json st;
  st["pass"] = rep.structure_pass;
  st["errors"] = rep.structure_errors;
  j["structure"] = std::move(st);

  Json l2;
  l2["pass"] = rep.lemma2_all();
  l2["per_tx"] = rep.lemma2_pass;
  j["lemma2"] = std::move(l2);

  const auto pair_checks = [](const std::vector<PairCheck>& checks, bool pass) {
    Json out;
    out["pass"] = pass;
    Json list = Json::array();
    for (const PairCheck& c : checks) {
      Json e;
      e["coalition"] = c.coalition + 1;  // 1-based index into the lex coalition list
      e["rx"] = c.rx;
      e["rank"] = c.rank;
      e["pass"] = c.pass;
      list.push_back(std::move(e));
    }
    out["checks"] = std::move(list);
    return out;
  };
  j["lemma3"] = pair_checks(rep.lemma3, rep.lemma3_all());
  j["lemma4"] = pair_checks(rep.lemma4, rep.lemma4_all());

  Json rxs = Json::array();
  for (const ReceiverReport& rr : rep.receivers) {
    Json e;
    e["rx"] = rr.rx;
    e["desired_rank"] = rr.desired_rank;
    e["aligned_rank"] = rr.aligned_rank;
    e["combined_rank"] = rr.combined_rank;
    e["decodability_pass"] = rr.decodability_pass;
    e["counting_lhs"] = rr.counting_lhs;
    e["counting_slack"] = rr.counting_slack;
    e["counting_pass"] = rr.counting_pass;
    e["total_rank"] = rr.total_rank;
    e["total_rank_pass"] = rr.total_rank_pass;
    e["member_joint_rank"] = rr.member_joint_rank;
    e["observation_rank"] = rr.observation_rank;
    if (!rr.dependent_aligned.empty()) e["dependent_aligned"] = rr.dependent_aligned;
    if (!rr.dependent_desired.empty()) e["dependent_desired"] = rr.dependent_desired;
    rxs.push_back(std::move(e));
  }
  j["receivers"] = std::move(rxs);
  j["total_rank_target"] = rep.total_rank_target;
  j["all_pass"] = rep.all_pass;

  if (rep.all_pass) {
    Json dof;
    Json per_user = Json::array();
    for (const Rational& d : rep.dof_per_user) {
      Json e;
      e["num"] = d.num();
      e["den"] = d.den();
      per_user.push_back(std::move(e));
    }
    dof["per_user"] = std::move(per_user);
    Json sum;
    sum["num"] = rep.dof_sum.num();
    sum["den"] = rep.dof_sum.den();
    sum["decimal"] = rep.dof_sum.to_double();
    dof["sum"] = std::move(sum);
    j["achieved_dof"] = std::move(dof);
  }
  return j;
}

std::string report_to_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "# " << kToolName << " v" << kToolVersion << " verify K=" << rep.K << " r=" << rep.r
     << " n=" << rep.n << " M=" << rep.modes << " seeds=";
  for (std::size_t i = 0; i < rep.seeds.size(); ++i) {
    if (i) os << "/";
    os << rep.seeds[i];
  }
  os << " all_pass=" << (rep.all_pass ? 1 : 0) << "\n";
  os << "rx,desired_rank,aligned_rank,combined_rank,decodability_pass,counting_lhs,"
        "counting_slack,counting_pass,total_rank,total_rank_pass\n";
  for (const ReceiverReport& rr : rep.receivers) {
    os << rr.rx << "," << rr.desired_rank << "," << rr.aligned_rank << "," << rr.combined_rank
       << "," << (rr.decodability_pass ? 1 : 0) << "," << rr.counting_lhs << ","
       << rr.counting_slack << "," << (rr.counting_pass ? 1 : 0) << "," << rr.total_rank << ","
       << (rr.total_rank_pass ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace bia
