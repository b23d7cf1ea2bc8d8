#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radbound/bounds.hpp"
#include "radbound/decomp.hpp"
#include "radbound/montecarlo.hpp"
#include "radbound/operator_norm.hpp"
#include "radbound/patterns.hpp"
#include "radbound/rademacher.hpp"
#include "radbound/report.hpp"
#include "radbound/sparse.hpp"

namespace radbound {

// ---------------------------------------------------------------------------
// pattern mini-language: "name:key=value,..."
// ---------------------------------------------------------------------------

struct PatternInstance {
  std::string spec_string;
  std::string kind;  // circulant | hypercube | torus | band-graph | file
  SparsePattern matrix;
  std::optional<CirculantSpec> circulant;
  std::optional<OffsetGraphSpec> offsets;
  std::optional<DirectedGraph> graph;
  int m = 0;  // torus parameters when applicable
  int d = 0;
};

namespace detail {

// values may be comma-separated lists; a token containing '=' starts a new key
inline std::map<std::string, std::vector<std::string>> parse_kv(const std::string& body) {
  std::map<std::string, std::vector<std::string>> kv;
  std::string key;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      kv[key].push_back(tok.substr(eq + 1));
    } else if (!key.empty()) {
      kv[key].push_back(tok);
    } else {
      throw std::invalid_argument("pattern: stray token '" + tok + "'");
    }
  }
  return kv;
}

inline int kv_int(const std::map<std::string, std::vector<std::string>>& kv,
                  const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end() || it->second.empty())
    throw std::invalid_argument("pattern: missing parameter '" + key + "'");
  return std::stoi(it->second.front());
}

}  // namespace detail

inline PatternInstance parse_pattern(const std::string& spec) {
  PatternInstance out;
  out.spec_string = spec;
  const auto colon = spec.find(':');
  out.kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (out.kind == "file") {
    std::ifstream in(body);
    if (!in) throw std::invalid_argument("pattern file not found: " + body);
    out.matrix = SparsePattern::read_text(in);
    return out;
  }

  const auto kv = detail::parse_kv(body);
  if (out.kind == "circulant") {
    const int n = detail::kv_int(kv, "n");
    if (kv.count("offsets")) {
      std::vector<int> offs;
      for (const std::string& s : kv.at("offsets")) offs.push_back(std::stoi(s));
      std::sort(offs.begin(), offs.end());
      out.offsets = OffsetGraphSpec(n, offs);
      out.circulant = adjacency_band(*out.offsets);
      out.graph = circulant_graph(*out.offsets);
    } else if (kv.count("band")) {
      std::vector<double> band;
      for (const std::string& s : kv.at("band")) band.push_back(std::stod(s));
      if (static_cast<int>(band.size()) > n)
        throw std::invalid_argument("circulant pattern: band longer than n");
      band.resize(n, 0.0);
      out.circulant = CirculantSpec(n, band);
    } else {
      throw std::invalid_argument("circulant pattern needs offsets= or band=");
    }
    out.matrix = circulant_matrix(*out.circulant);
  } else if (out.kind == "hypercube") {
    out.d = detail::kv_int(kv, "d");
    out.graph = hypercube(out.d);
    out.matrix = out.graph->adjacency();
  } else if (out.kind == "torus") {
    out.m = detail::kv_int(kv, "m");
    out.d = detail::kv_int(kv, "d");
    out.graph = torus(out.m, out.d);
    out.matrix = out.graph->adjacency();
  } else if (out.kind == "band-graph") {
    out.m = detail::kv_int(kv, "m");
    out.d = detail::kv_int(kv, "d");
    const TorusBandEmbedding emb = torus_as_circulant_bands(out.m, out.d);
    out.offsets = emb.spec;
    out.circulant = adjacency_band(emb.spec);
    out.graph = circulant_graph(emb.spec);
    out.matrix = circulant_matrix(*out.circulant);
  } else {
    throw std::invalid_argument("unknown pattern kind: " + out.kind);
  }
  return out;
}

// ---------------------------------------------------------------------------
// campaign running
// ---------------------------------------------------------------------------

struct CampaignConfig {
  std::string pattern;
  std::vector<std::string> quantities;
  long samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  double tol = 1e-10;
  std::string out;              // report path; empty = stdout
  std::string format = "json";  // json | csv
  std::string emit_blocks_dir;  // decompose: write B_k pattern files here
};

namespace detail {

inline RadNormConfig rad_config_for(const CampaignConfig& cfg) {
  RadNormConfig rc;
  rc.seed = cfg.seed;
  rc.mc_samples = std::max<long>(1000, cfg.samples);
  return rc;
}

inline ReportRecord run_quantity(const PatternInstance& pat, const std::string& quantity,
                                 const CampaignConfig& cfg);

}  // namespace detail

inline std::vector<ReportRecord> run_campaign(const CampaignConfig& cfg) {
  const PatternInstance pat = parse_pattern(cfg.pattern);
  std::vector<ReportRecord> records;
  for (const std::string& q : cfg.quantities)
    records.push_back(detail::run_quantity(pat, q, cfg));
  return records;
}

inline bool all_pass(const std::vector<ReportRecord>& records) {
  for (const ReportRecord& r : records)
    if (!r.pass) return false;
  return true;
}

inline void write_reports(const std::vector<ReportRecord>& records,
                          const std::vector<double>& runtimes_ms, const CampaignConfig& cfg,
                          std::ostream& os) {
  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const ReportRecord& r : records) arr.push_back(r.to_json());
    os << arr.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    os << kCsvHeader << '\n';
    for (std::size_t i = 0; i < records.size(); ++i)
      os << records[i].csv_row(i < runtimes_ms.size() ? runtimes_ms[i] : 0.0) << '\n';
  } else {
    throw std::invalid_argument("unknown format: " + cfg.format);
  }
}

namespace detail {

inline double default_order(const PatternInstance& pat) {
  return std::log(std::max(pat.matrix.rows(), 2) + 1.0);
}

inline ReportRecord bounds_record(const PatternInstance& pat, double p,
                                  const CampaignConfig& cfg) {
  ReportRecord rec;
  rec.quantity = "bounds";
  rec.seed = cfg.seed;
  nlohmann::json x;
  if (pat.kind == "hypercube") {
    const GraphNpBounds hyp = hypercube_Np_bounds(pat.d, p);
    GraphNpConfig gc;
    for (auto& lvl : hypercube_levels(pat.d)) gc.candidate_sets.push_back(lvl);
    const GraphNpBounds gb = graph_Np_bounds(*pat.graph, p, gc);
    x["d"] = pat.d;
    x["p"] = p;
    x["hypercube_lower"] = hyp.lower;
    x["hypercube_upper"] = hyp.upper;
    x["graph_lower"] = gb.lower;
    x["graph_upper"] = gb.upper;
    x["expansion"] = gb.expansion;
    if (!std::isnan(gb.sqrt_p_over_8)) x["sqrt_p_over_8"] = gb.sqrt_p_over_8;
    x["min_d_sqrt_p"] = gb.min_d_sqrt_p;
    x["sparsity"] = gb.sparsity;
    x["sqrt_d_sparsity"] = gb.sqrt_d_sparsity;
    rec.mean = hyp.upper;
  } else if (pat.kind == "torus") {
    const auto [lo, hi] = torus_expected_norm_bounds(pat.m, pat.d);
    x["m"] = pat.m;
    x["d"] = pat.d;
    x["lower"] = lo;
    x["upper"] = hi;
    x["reduction_factor"] = torus_reduction_factor(pat.m);
    rec.mean = hi;
  } else if (pat.circulant) {
    RadNormConfig rc = rad_config_for(cfg);
    const CirculantBounds cb = circulant_bounds(*pat.circulant, rc);
    x["band_l2"] = cb.band_l2;
    x["rad_term"] = cb.rad_term;
    x["rad_term_stderr"] = cb.rad_term_stderr;
    x["loglog"] = cb.loglog;
    x["lower"] = cb.lower;
    x["upper"] = cb.upper;
    if (!std::isnan(cb.degree_form_upper)) x["degree_form_upper"] = cb.degree_form_upper;
    x["seginer"] = seginer_bound(pat.matrix);
    x["max_row_l2"] = cb.breakdown.max_row_l2;
    x["max_col_l2"] = cb.breakdown.max_col_l2;
    rec.mean = cb.upper;
    rec.stderr_ = cb.rad_term_stderr;
  } else {
    LowerRhsConfig tc;
    tc.rad.seed = cfg.seed;
    const BoundBreakdown bb = norm_lower_rhs(pat.matrix, tc);
    x["max_row_l2"] = bb.max_row_l2;
    x["max_col_l2"] = bb.max_col_l2;
    x["gamma"] = bb.gamma;
    x["k_used"] = bb.k_used;
    x["removed_set"] = bb.removed_set;
    x["full_sup_log_n"] = bb.full_sup_log_n;
    x["formula"] = bb.formula;
    x["seginer"] = seginer_bound(pat.matrix);
    if (pat.matrix.max_abs() <= 1.0) x["gaussian"] = gaussian_reference_bound(pat.matrix);
    rec.mean = bb.max_row_l2 + bb.max_col_l2 + bb.gamma;
  }
  rec.extra = std::move(x);
  return rec;
}

inline ReportRecord decompose_record(const PatternInstance& pat, const CampaignConfig& cfg) {
  if (!pat.offsets && !pat.circulant)
    throw std::invalid_argument("decompose requires a circulant pattern");
  ReportRecord rec;
  rec.quantity = "decompose";
  rec.seed = cfg.seed;
  nlohmann::json x;
  if (pat.offsets) {
    try {
      const BlockCover cover = block_cover(*pat.offsets);
      x["n"] = cover.spec.n;
      x["m"] = cover.seq.m;
      x["s"] = cover.seq.s();
      x["N"] = cover.N;
      x["max_block"] = cover.max_block;
      x["covered_edges"] = cover.seq.covered_edges;
      x["min_edge_multiplicity"] = cover.min_edge_multiplicity;
      x["blocks_ok"] = cover.blocks_ok;
      x["entrywise_ok"] = cover.entrywise_ok;
      rec.pass = cover.blocks_ok && cover.entrywise_ok;
      rec.mean = static_cast<double>(cover.min_edge_multiplicity) / cover.N;
      if (!cfg.emit_blocks_dir.empty()) {
        for (int k = 0; k < cover.N; ++k) {
          std::ofstream bf(cfg.emit_blocks_dir + "/block_" + std::to_string(k) + ".txt");
          cover.block(k).write_text(bf);
        }
        x["blocks_written"] = cover.N;
      }
    } catch (const std::logic_error& err) {
      rec.pass = false;
      x["certificate_error"] = err.what();
    }
  }
  if (pat.circulant) {
    bool zero_one = true;
    for (double b : pat.circulant->band)
      if (b != 0.0 && b != 1.0) zero_one = false;
    if (!zero_one) {
      const DyadicSplit split = dyadic_split(*pat.circulant);
      x["dyadic_k0"] = split.k0;
      x["dyadic_scale"] = split.scale;
      const ComposedUpperBound cub = composed_upper_bound(*pat.circulant, rad_config_for(cfg));
      x["composed_upper"] = cub.total;
    }
  }
  rec.extra = std::move(x);
  return rec;
}

inline ReportRecord verify_record(const PatternInstance& pat, const CampaignConfig& cfg) {
  ReportRecord rec;
  rec.quantity = "verify";
  rec.seed = cfg.seed;
  rec.samples = cfg.samples;
  rec.slack = 3.0;
  nlohmann::json checks = nlohmann::json::array();
  bool all_ok = true;

  {  // per-realization norm floor
    const long floor_samples = std::min<long>(cfg.samples, 256);
    const FloorCheckReport fr =
        check_norm_floor(pat.matrix, floor_samples, cfg.seed, 1e-11, cfg.threads);
    checks.push_back({{"check", "norm-floor"},
                      {"pass", fr.pass},
                      {"floor", fr.floor},
                      {"min_margin", fr.min_margin},
                      {"samples", fr.samples}});
    all_ok &= fr.pass;
  }

  if (pat.circulant) {  // shift invariance with seeded witness vectors
    const int n = pat.circulant->n;
    Rng rng(derive_seed(cfg.seed, 0x7369u));
    std::vector<double> s(n), t(n);
    detail::random_unit(rng, s);
    detail::random_unit(rng, t);
    const ShiftInvarianceReport sr = check_shift_invariance(
        *pat.circulant, s, t, default_order(pat), std::min<long>(cfg.samples, 4000), cfg.seed);
    checks.push_back({{"check", "shift-invariance"},
                      {"pass", sr.pass},
                      {"max_deviation", sr.max_deviation},
                      {"slack", sr.slack},
                      {"exact", sr.exact}});
    all_ok &= sr.pass;
  }

  if (pat.offsets) {  // cube family identities
    const CubeFamily fam(*pat.offsets);
    const int n = pat.offsets->n;
    const int m = fam.m();
    bool ok = true;
    std::vector<int> membership(n, 0);
    for (int k = 0; k < n && ok; ++k) {
      const auto dk = fam.lower_cube(k);
      const auto uk = fam.upper_cube(k);
      ok = static_cast<int>(dk.size()) == m && static_cast<int>(uk.size()) == m;
      for (int v : dk) {
        ++membership[v];
        if (ok) {
          const auto uv = fam.upper_cube(v);
          ok = std::binary_search(uv.begin(), uv.end(), k);  // i in D_k iff k in U_i
        }
      }
    }
    for (int v = 0; v < n && ok; ++v) ok = membership[v] == m;
    checks.push_back({{"check", "cube-identities"}, {"pass", ok}, {"m", m}});
    all_ok &= ok;
  }

  if (pat.kind == "hypercube") {  // sampled edge-isoperimetry
    const DirectedGraph& g = *pat.graph;
    Rng rng(derive_seed(cfg.seed, 0x6861u));
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const int size = 1 + static_cast<int>(rng.next_below(g.vertex_count()));
      std::vector<int> iset;
      for (int v = 0; v < g.vertex_count(); ++v) iset.push_back(v);
      for (int i = 0; i < size; ++i)
        std::swap(iset[i], iset[i + rng.next_below(iset.size() - i)]);
      iset.resize(size);
      int k = 0;
      while ((1 << k) < size) ++k;
      ok = edges_within(g, iset) <= static_cast<long>(k) << k;
    }
    checks.push_back({{"check", "harper-isoperimetry"}, {"pass", ok}});
    all_ok &= ok;
  }

  rec.pass = all_ok;
  rec.mean = all_ok ? 1.0 : 0.0;
  rec.extra = {{"checks", checks}};
  return rec;
}

inline ReportRecord run_quantity(const PatternInstance& pat, const std::string& quantity,
                                 const CampaignConfig& cfg) {
  const auto colon = quantity.find(':');
  const std::string name = quantity.substr(0, colon);
  std::map<std::string, std::vector<std::string>> args;
  if (colon != std::string::npos) args = parse_kv(quantity.substr(colon + 1));

  if (name == "expected-norm") {
    const NormEstimate est =
        estimate_expected_norm(pat.matrix, cfg.samples, cfg.seed, cfg.tol, cfg.threads);
    ReportRecord rec;
    rec.quantity = "expected-norm";
    rec.mean = est.mean;
    rec.stderr_ = est.stderr_;
    rec.samples = est.samples;
    rec.seed = cfg.seed;
    rec.slack = 3.0 * est.stderr_;
    return rec;
  }
  if (name == "norm") {
    const NormResult nr = operator_norm(pat.matrix, cfg.tol, 50000, cfg.seed);
    ReportRecord rec;
    rec.quantity = "norm";
    rec.mean = nr.value;
    rec.seed = cfg.seed;
    rec.pass = nr.converged;
    rec.extra = {{"iterations", nr.iterations},
                 {"converged", nr.converged},
                 {"residual", nr.residual}};
    return rec;
  }
  if (name == "radnorm") {
    const double p = args.count("p") ? std::stod(args.at("p").front()) : default_order(pat);
    const RadNormEstimate est = estimate_rad_norm(pat.matrix, p, rad_config_for(cfg));
    ReportRecord rec;
    rec.quantity = quantity;
    rec.mean = est.lower;
    rec.stderr_ = est.lower_stderr;
    rec.samples = est.method == "monte-carlo" ? rad_config_for(cfg).mc_samples : 0;
    rec.seed = cfg.seed;
    rec.slack = 3.0 * est.lower_stderr;
    rec.extra = {{"p", p}, {"surrogate", est.surrogate}, {"method", est.method}};
    return rec;
  }
  if (name == "bounds") {
    const double p = args.count("p") ? std::stod(args.at("p").front()) : default_order(pat);
    ReportRecord rec = bounds_record(pat, p, cfg);
    return rec;
  }
  if (name == "decompose") return decompose_record(pat, cfg);
  if (name == "verify") return verify_record(pat, cfg);
  throw std::invalid_argument("unknown quantity: " + quantity);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// campaign config files: flat key=value lines, one [item] section per item
// ---------------------------------------------------------------------------

inline std::vector<CampaignConfig> parse_campaign_file(std::istream& in,
                                                       const CampaignConfig& defaults) {
  std::vector<CampaignConfig> items;
  CampaignConfig cur = defaults;
  bool open = false;
  std::string line;
  auto flush = [&] {
    if (open) {
      if (cur.pattern.empty()) throw std::invalid_argument("campaign item without pattern");
      if (cur.quantities.empty()) cur.quantities = {"verify"};
      items.push_back(cur);
    }
  };
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.empty() || line[0] == '#') continue;
    if (line == "[item]") {
      flush();
      cur = defaults;
      cur.quantities.clear();
      open = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad config line: " + line);
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(val);
    if (!open) throw std::invalid_argument("config entries must follow an [item] header");
    if (key == "pattern")
      cur.pattern = val;
    else if (key == "quantity")
      cur.quantities.push_back(val);
    else if (key == "samples")
      cur.samples = std::stol(val);
    else if (key == "seed")
      cur.seed = std::stoull(val);
    else if (key == "threads")
      cur.threads = std::stoi(val);
    else if (key == "tol")
      cur.tol = std::stod(val);
    else if (key == "format")
      cur.format = val;
    else if (key == "out")
      cur.out = val;
    else
      throw std::invalid_argument("unknown campaign key: " + key);
  }
  flush();
  return items;
}

}  // namespace radbound
