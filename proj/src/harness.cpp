#include "gcop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcop/errors.hpp"

namespace gcop {

namespace {

using nlohmann::json;

constexpr std::uint64_t kStreamsPerRep = 8;

std::string format_double(double v, const char* fmt = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string join_indices(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(idx[i]);
  }
  return out;
}

std::vector<int> draw_indices(int n, int k, IndexMode mode, RngStream& rng) {
  std::vector<int> ind;
  if (mode == IndexMode::block) {
    const int offset = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - k + 1)));
    ind.resize(k);
    std::iota(ind.begin(), ind.end(), offset);
    return ind;
  }
  // Partial Fisher-Yates for k distinct indices.
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  ind.assign(pool.begin(), pool.begin() + k);
  std::sort(ind.begin(), ind.end());
  return ind;
}

int count_hits(const std::vector<int>& kept, const std::vector<int>& malformed) {
  int hits = 0;
  for (const int i : kept)
    if (std::find(malformed.begin(), malformed.end(), i) != malformed.end()) ++hits;
  return hits;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw std::domain_error("config: n must be >= 2");
  if (cfg.k < 2 || cfg.k > cfg.n) throw std::domain_error("config: need 2 <= k <= n");
  if (cfg.t < 2) throw std::domain_error("config: t must be >= 2");
  if (cfg.reps < 1) throw std::domain_error("config: reps must be >= 1");
  if (cfg.t <= cfg.n) throw std::domain_error("config: t must exceed n for JSBS");
}

json correlation_json(const CorrelationSpec& spec, double eps_used) {
  json j;
  j["kind"] = correlation_kind_name(spec.kind);
  switch (spec.kind) {
    case CorrelationSpec::Kind::random:
      break;
    case CorrelationSpec::Kind::constant:
      j["alpha"] = spec.alpha;
      break;
    case CorrelationSpec::Kind::toeplitz:
      j["rho"] = spec.rho;
      break;
    case CorrelationSpec::Kind::noised_toeplitz:
      j["rho"] = spec.rho;
      j["eps"] = spec.eps;
      j["m"] = spec.m;
      j["eps_used"] = eps_used;
      break;
  }
  return j;
}

}  // namespace

const char* index_mode_name(IndexMode mode) {
  return mode == IndexMode::block ? "block" : "scatter";
}

double cov_change(const CovMatrix& sigma_orig, const CovMatrix& sigma_new) {
  if (sigma_orig.rows() != sigma_new.rows() || sigma_orig.cols() != sigma_new.cols())
    throw std::domain_error("cov_change: dimension mismatch");
  const double denom = sigma_orig.norm();
  if (!(denom > 0.0)) throw std::domain_error("cov_change: zero-norm reference");
  return (sigma_orig - sigma_new).norm() / denom;
}

double discriminability(const std::vector<ExperimentRecord>& records, int k,
                        int reps, Selector selector) {
  if (records.empty()) throw std::domain_error("discriminability: no records");
  if (k < 1 || reps < 1) throw std::domain_error("discriminability: bad k or reps");
  double sum = 0.0;
  for (const auto& rec : records)
    sum += selector == Selector::mev ? rec.mev_hits : rec.jsbs_hits;
  return sum / (static_cast<double>(k) * static_cast<double>(reps));
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);

  const bool random_kind = cfg.correlation.kind == CorrelationSpec::Kind::random;
  Eigen::MatrixXd sigma_fixed;
  if (!random_kind) {
    if (!cfg.cov_cache.empty() && std::filesystem::exists(cfg.cov_cache)) {
      sigma_fixed = load_matrix_csv(cfg.cov_cache);
      if (sigma_fixed.rows() != cfg.n || sigma_fixed.cols() != cfg.n)
        throw std::runtime_error("cov cache dimension mismatch: " + cfg.cov_cache);
    } else {
      RngStream mat_rng(cfg.seed, 0);
      sigma_fixed = make_correlation(cfg.correlation, cfg.n, mat_rng).matrix;
      if (!cfg.cov_cache.empty()) save_matrix_csv(cfg.cov_cache, sigma_fixed);
    }
  }

  std::vector<ExperimentRecord> records(static_cast<std::size_t>(cfg.reps));

  const auto worker = [&](int p) {
    ExperimentRecord rec;
    rec.rep = p + 1;
    try {
      const std::uint64_t base = kStreamsPerRep * static_cast<std::uint64_t>(p + 1);
      Eigen::MatrixXd sigma;
      if (random_kind) {
        RngStream srng(cfg.seed, base + 0);
        sigma = random_correlation(cfg.n, srng);
      } else {
        sigma = sigma_fixed;
      }

      RngStream sample_rng(cfg.seed, base + 1);
      const Eigen::MatrixXd x = mvn_sample(sigma, static_cast<int>(cfg.t), sample_rng);

      RngStream idx_rng(cfg.seed, base + 2);
      rec.malformed = draw_indices(cfg.n, cfg.k, cfg.indices, idx_rng);

      RngStream malform_rng(cfg.seed, base + 3);
      const MalformResult mal = gcop2arch(x, cfg.family, rec.malformed, cfg.core, malform_rng);
      rec.theta = mal.theta;
      rec.rho_bar = mal.rho_bar;

      const CovMatrix m2_orig = covariance(x);
      const CovMatrix m2_new = covariance(mal.data);
      rec.cov_change = cov_change(m2_orig, m2_new);

      rec.mev_kept = mev_order(m2_new, cfg.mev_rule).kept_last(cfg.k);
      rec.jsbs_kept = jsbs_order(m2_new, third_cumulant(mal.data)).kept_last(cfg.k);
      rec.mev_hits = count_hits(rec.mev_kept, rec.malformed);
      rec.jsbs_hits = count_hits(rec.jsbs_kept, rec.malformed);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    records[static_cast<std::size_t>(p)] = std::move(rec);
  };

  int threads = cfg.threads;
  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, cfg.reps);

  if (threads <= 1) {
    for (int p = 0; p < cfg.reps; ++p) worker(p);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (;;) {
          const int p = next.fetch_add(1);
          if (p >= cfg.reps) return;
          worker(p);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::string experiment_json(const ExperimentConfig& cfg,
                            const std::vector<ExperimentRecord>& records,
                            double eps_used) {
  json root;
  json& c = root["config"];
  c["n"] = cfg.n;
  c["t"] = cfg.t;
  c["k"] = cfg.k;
  c["family"] = family_name(cfg.family);
  c["core"] = core_kind_name(cfg.core);
  c["correlation"] = correlation_json(cfg.correlation, eps_used);
  c["reps"] = cfg.reps;
  c["seed"] = cfg.seed;
  c["mev_rule"] = mev_rule_name(cfg.mev_rule);
  c["indices"] = index_mode_name(cfg.indices);
  c["threads"] = cfg.threads;
  if (!cfg.cov_cache.empty()) c["cov_cache"] = cfg.cov_cache;

  json recs = json::array();
  int ok_count = 0;
  for (const auto& r : records) {
    json jr;
    jr["rep"] = r.rep;
    if (r.ok()) {
      jr["theta"] = r.theta;
      jr["rho_bar"] = r.rho_bar;
      jr["cov_change"] = r.cov_change;
      jr["malformed"] = r.malformed;
      jr["mev_kept"] = r.mev_kept;
      jr["jsbs_kept"] = r.jsbs_kept;
      jr["mev_hits"] = r.mev_hits;
      jr["jsbs_hits"] = r.jsbs_hits;
      ++ok_count;
    } else {
      jr["error"] = r.error;
    }
    recs.push_back(std::move(jr));
  }
  root["records"] = std::move(recs);

  json& s = root["summary"];
  s["completed_reps"] = ok_count;
  if (ok_count > 0) {
    std::vector<ExperimentRecord> ok;
    ok.reserve(static_cast<std::size_t>(ok_count));
    for (const auto& r : records)
      if (r.ok()) ok.push_back(r);
    s["d_bar_mev"] = discriminability(ok, cfg.k, ok_count, Selector::mev);
    s["d_bar_jsbs"] = discriminability(ok, cfg.k, ok_count, Selector::jsbs);
    double mean_cov = 0.0;
    for (const auto& r : ok) mean_cov += r.cov_change;
    s["mean_cov_change"] = mean_cov / ok_count;
  }
  s["d_bar_theoretical"] = static_cast<double>(cfg.k) / static_cast<double>(cfg.n);

  return root.dump(2) + "\n";
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string out =
      "rep,theta,cov_change,mev_hits,jsbs_hits,malformed_indices,mev_kept,jsbs_kept\n";
  for (const auto& r : records) {
    out += std::to_string(r.rep);
    out += ',';
    if (r.ok()) {
      out += format_double(r.theta);
      out += ',';
      out += format_double(r.cov_change);
      out += ',';
      out += std::to_string(r.mev_hits);
      out += ',';
      out += std::to_string(r.jsbs_hits);
      out += ',';
      out += join_indices(r.malformed);
      out += ',';
      out += join_indices(r.mev_kept);
      out += ',';
      out += join_indices(r.jsbs_kept);
    } else {
      out += ",,,,,,";
    }
    out += '\n';
  }
  return out;
}

namespace {

bool parse_correlation(const std::string& text, CorrelationSpec& spec, std::string& err) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) {
    err = "empty --cov value";
    return false;
  }
  try {
    if (parts[0] == "random") {
      if (parts.size() != 1) throw std::invalid_argument("random takes no parameters");
      spec.kind = CorrelationSpec::Kind::random;
    } else if (parts[0] == "constant") {
      if (parts.size() != 2) throw std::invalid_argument("expected constant:<alpha>");
      spec.kind = CorrelationSpec::Kind::constant;
      spec.alpha = std::stod(parts[1]);
    } else if (parts[0] == "toeplitz") {
      if (parts.size() != 2) throw std::invalid_argument("expected toeplitz:<rho>");
      spec.kind = CorrelationSpec::Kind::toeplitz;
      spec.rho = std::stod(parts[1]);
    } else if (parts[0] == "noised") {
      if (parts.size() != 3) throw std::invalid_argument("expected noised:<rho>:<eps>");
      spec.kind = CorrelationSpec::Kind::noised_toeplitz;
      spec.rho = std::stod(parts[1]);
      spec.eps = std::stod(parts[2]);
    } else {
      throw std::invalid_argument("unknown correlation kind '" + parts[0] + "'");
    }
  } catch (const std::exception& e) {
    err = std::string("bad --cov value '") + text + "': " + e.what();
    return false;
  }
  return true;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "Archimedean-copula data malformation and MEV/JSBS feature-selection benchmark"};

  ExperimentConfig cfg;
  std::string family_str = "clayton";
  std::string cov_str = "toeplitz:0.5";
  std::string core_str = "eigen";
  std::string mev_rule_str = "max-kept";
  std::string indices_str = "block";
  std::string out_path;
  std::string csv_path;

  app.add_option("--n", cfg.n, "number of marginals")->capture_default_str();
  app.add_option("--t", cfg.t, "number of realisations")->capture_default_str();
  app.add_option("--k", cfg.k, "size of the malformed subset")->capture_default_str();
  app.add_option("--family", family_str, "copula family: gumbel|clayton|amh")
      ->capture_default_str();
  app.add_option("--cov", cov_str,
                 "correlation generator: random | constant:<alpha> | toeplitz:<rho> "
                 "| noised:<rho>:<eps>")
      ->capture_default_str();
  app.add_option("--core", core_str, "core transform: eigen|naive")->capture_default_str();
  app.add_option("--reps", cfg.reps, "number of repetitions")->capture_default_str();
  app.add_option("--seed", cfg.seed, "root seed")->capture_default_str();
  app.add_option("--mev-rule", mev_rule_str, "MEV removal rule: max-kept|min-kept")
      ->capture_default_str();
  app.add_option("--indices", indices_str,
                 "malformed index selection: block (contiguous run at random offset) "
                 "| scatter (uniform without replacement)")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads (0 = auto)")
      ->capture_default_str();
  app.add_option("--out", out_path, "write the JSON summary here");
  app.add_option("--csv", csv_path, "write the per-rep CSV here");
  app.add_option("--cov-cache", cfg.cov_cache,
                 "matrix cache (header-free CSV, row-major); loaded when present, "
                 "written otherwise; ignored for --cov random");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints usage, returns 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto fam = family_from_name(family_str);
  if (!fam) {
    std::cerr << "unknown --family '" << family_str << "' (gumbel|clayton|amh)\n";
    return 2;
  }
  cfg.family = *fam;

  if (core_str == "eigen") {
    cfg.core = CoreKind::eigen;
  } else if (core_str == "naive") {
    cfg.core = CoreKind::naive;
  } else {
    std::cerr << "unknown --core '" << core_str << "' (eigen|naive)\n";
    return 2;
  }

  if (mev_rule_str == "max-kept") {
    cfg.mev_rule = MevRule::max_kept;
  } else if (mev_rule_str == "min-kept") {
    cfg.mev_rule = MevRule::min_kept;
  } else {
    std::cerr << "unknown --mev-rule '" << mev_rule_str << "' (max-kept|min-kept)\n";
    return 2;
  }

  if (indices_str == "block") {
    cfg.indices = IndexMode::block;
  } else if (indices_str == "scatter") {
    cfg.indices = IndexMode::scatter;
  } else {
    std::cerr << "unknown --indices '" << indices_str << "' (block|scatter)\n";
    return 2;
  }

  std::string err;
  if (!parse_correlation(cov_str, cfg.correlation, err)) {
    std::cerr << err << "\n";
    return 2;
  }

  try {
    validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto records = run_experiment(cfg);

    int ok_count = 0;
    std::vector<ExperimentRecord> ok;
    for (const auto& r : records) {
      if (r.ok()) {
        ok.push_back(r);
        ++ok_count;
      } else {
        std::cerr << "rep " << r.rep << " failed: " << r.error << "\n";
      }
    }

    // eps_used for the JSON: regenerate cheaply for the noised kind.
    double eps_used = cfg.correlation.eps;
    if (cfg.correlation.kind == CorrelationSpec::Kind::noised_toeplitz) {
      RngStream mat_rng(cfg.seed, 0);
      eps_used = make_correlation(cfg.correlation, cfg.n, mat_rng).eps_used;
    }

    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw std::runtime_error("cannot open --out path " + out_path);
      f << experiment_json(cfg, records, eps_used);
    }
    if (!csv_path.empty()) {
      std::ofstream f(csv_path);
      if (!f) throw std::runtime_error("cannot open --csv path " + csv_path);
      f << records_csv(records);
    }

    if (ok_count == 0) {
      std::cerr << "all repetitions failed\n";
      return 1;
    }
    const double d_mev = discriminability(ok, cfg.k, ok_count, Selector::mev);
    const double d_jsbs = discriminability(ok, cfg.k, ok_count, Selector::jsbs);
    std::cout << "d_bar_mev=" << format_double(d_mev)
              << " d_bar_jsbs=" << format_double(d_jsbs)
              << " d_bar_theoretical=" << format_double(static_cast<double>(cfg.k) / cfg.n)
              << " completed_reps=" << ok_count << "/" << cfg.reps << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gcop
