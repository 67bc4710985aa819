#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>

#include "bdlab/criterion.hpp"
#include "bdlab/dirichlet.hpp"
#include "bdlab/error.hpp"
#include "bdlab/hardy.hpp"
#include "bdlab/numtheory.hpp"
#include "bdlab/pdcp.hpp"
#include "bdlab/series_io.hpp"

#ifndef BDLAB_VERSION
#define BDLAB_VERSION "0.0.0"
#endif

namespace bdlab::cli {

namespace {

using nlohmann::json;

struct Common {
  std::size_t N = kDefaultTruncation;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results stay in
/// index order.
template <class T, class Fn>
std::vector<T> sweep(std::size_t count, unsigned threads, Fn fn) {
  std::vector<T> results(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) results[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return results;
}

std::complex<double> parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw InvalidInput("empty complex number");
  std::size_t used = 0;
  try {
    if (s.back() != 'i') {
      const double re = std::stod(s, &used);
      if (used != s.size()) throw InvalidInput("bad complex number '" + s + "'");
      return {re, 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that is not an exponent sign or the leading one.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    const auto imag_of = [](const std::string& t) {
      if (t.empty() || t == "+") return 1.0;
      if (t == "-") return -1.0;
      std::size_t u = 0;
      const double v = std::stod(t, &u);
      if (u != t.size()) throw InvalidInput("bad imaginary part '" + t + "'");
      return v;
    };
    if (split == std::string::npos) return {0.0, imag_of(body)};
    const std::string re_part = body.substr(0, split);
    const double re = std::stod(re_part, &used);
    if (used != re_part.size()) throw InvalidInput("bad complex number '" + s + "'");
    return {re, imag_of(body.substr(split))};
  } catch (const std::logic_error&) {
    throw InvalidInput("bad complex number '" + s + "'");
  }
}

json metadata(const std::string& command, const Common& c) {
  return {{"version", BDLAB_VERSION},
          {"command", command},
          {"N", c.N},
          {"format", c.format},
          {"seed", c.seed},
          {"threads", c.threads},
          {"tolerances",
           {{"identity", kIdentityTolerance},
            {"isometry_relative", 1e-12},
            {"hk_decay_constant", kHkDecayConstant},
            {"golden_pair", 1e-12}}}};
}

/// A table emitted either as CSV (header + rows) or as one JSON document.
struct Output {
  std::vector<std::string> csv;
  json doc;
};

void emit(const Output& o, const std::string& command, const Common& c, std::ostream& out) {
  std::ostringstream body;
  if (c.format == "json") {
    body << o.doc.dump(2) << '\n';
  } else {
    for (const auto& line : o.csv) body << line << '\n';
  }
  if (c.out.empty() || c.out == "-") {
    out << body.str();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw IoError("cannot open '" + c.out + "' for writing");
  f << body.str();
  std::ofstream meta(c.out + ".meta.json", std::ios::binary);
  if (!meta) throw IoError("cannot open '" + c.out + ".meta.json' for writing");
  meta << metadata(command, c).dump(2) << '\n';
  if (!f || !meta) throw IoError("write to '" + c.out + "' failed");
}

NTTables tables_for_cli(std::int64_t limit, const Common& c) {
  const char* dir = std::getenv("BDLAB_CACHE_DIR");
  if (dir != nullptr && *dir != '\0') return load_or_sieve(limit, dir, c.threads);
  return sieve(limit, c.threads);
}

Output cmd_hk(const Common& c, std::int64_t k, std::optional<std::size_t> n, std::optional<double> cval,
              const std::vector<std::size_t>& lengths) {
  Output o;
  if (cval) {
    if (lengths.empty()) throw InvalidInput("--lengths must not be empty");
    const auto norms = hkc_partial_norms(k, *cval, lengths);
    o.csv.push_back("N,norm");
    o.doc = {{"k", k}, {"c", *cval}, {"rows", json::array()}};
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      o.csv.push_back(std::to_string(lengths[i]) + "," + format_double(norms[i]));
      o.doc["rows"].push_back({{"N", lengths[i]}, {"norm", norms[i]}});
    }
    return o;
  }
  const TruncatedSeries h = hk_coeffs(k, n.value_or(c.N));
  std::ostringstream csv;
  write_csv(h.seq, csv);
  std::istringstream lines(csv.str());
  for (std::string line; std::getline(lines, line);) o.csv.push_back(line);
  o.doc = to_json(h.seq);
  o.doc["k"] = k;
  o.doc["tail_bound"] = h.tail_bound;
  return o;
}

Output cmd_verify(const Common& c, bool all, const std::string& identity, const IdentityParams& params, bool& pass) {
  std::vector<std::pair<Identity, IdentityParams>> jobs;
  if (all) {
    for (Identity id : {Identity::SemigroupW, Identity::SemigroupT, Identity::Quasiconjugacy, Identity::WnOnHk,
                        Identity::TIsometry, Identity::PsiIsometry}) {
      jobs.emplace_back(id, params);
    }
    for (std::int64_t k = 2; k <= 12; ++k) {
      IdentityParams p = params;
      p.k = k;
      jobs.emplace_back(Identity::PhiMapsRkToHk, p);
    }
  } else {
    if (identity.empty()) throw InvalidInput("verify needs --all or --identity");
    jobs.emplace_back(identity_from_string(identity), params);
  }
  const auto reports = sweep<IdentityReport>(jobs.size(), c.threads, [&](std::size_t i) {
    return verify_identity(jobs[i].first, jobs[i].second, c.N);
  });
  Output o;
  o.csv.push_back("identity,m,n,k,seed,sup_discrepancy,weighted_discrepancy,reliable_range,threshold,pass");
  o.doc = {{"N", c.N}, {"seed", c.seed}, {"reports", json::array()}};
  pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass;
    o.doc["reports"].push_back(to_json(r));
    o.csv.push_back(to_string(r.identity) + "," + std::to_string(r.params.m) + "," + std::to_string(r.params.n) + "," +
                    std::to_string(r.params.k) + "," + std::to_string(r.params.seed) + "," +
                    format_double(r.sup_discrepancy) + "," + format_double(r.weighted_discrepancy) + "," +
                    std::to_string(r.reliable_range) + "," + format_double(r.threshold) + "," +
                    (r.pass ? "PASS" : "FAIL"));
  }
  o.doc["pass"] = pass;
  return o;
}

Output cmd_distance(const Common& c, const std::string& family, const std::string& target,
                    const std::vector<std::int64_t>& Ks) {
  if (Ks.empty()) throw InvalidInput("--K must not be empty");
  const Family fam = family_from_string(family);
  const Target tgt = target_from_string(target);
  Output o;
  o.csv.push_back(distance_csv_header());
  o.doc = {{"family", family}, {"target", target}, {"N", c.N}, {"rows", json::array()}};
  // Cells run in order; parallelism is inside the Gram assembly.
  for (std::int64_t K : Ks) {
    const DistanceReport r = distance(build_gram(fam, K, c.N, tgt, c.threads));
    o.csv.push_back(to_csv_row(r));
    json row = to_json(r);
    row.erase("wall_time");
    o.doc["rows"].push_back(row);
  }
  return o;
}

Output cmd_moebius(const Common& c, const std::vector<std::int64_t>& ns) {
  if (ns.empty()) throw InvalidInput("--n must not be empty");
  for (auto n : ns) {
    if (n < 1) throw InvalidInput("--n values must be >= 1");
  }
  const NTTables tables = tables_for_cli(*std::max_element(ns.begin(), ns.end()), c);
  const DivisorSquareTail tail;
  const auto reports = sweep<MoebiusResidualReport>(
      ns.size(), c.threads, [&](std::size_t i) { return moebius_residual(ns[i], c.N, &tables, &tail); });
  Output o;
  o.csv.push_back(moebius_csv_header());
  o.doc = {{"N", c.N}, {"phi_cutoff", tail.cutoff()}, {"rows", json::array()}};
  for (const auto& r : reports) {
    o.csv.push_back(to_csv_row(r));
    o.doc["rows"].push_back(to_json(r));
  }
  return o;
}

Output cmd_dirichlet(const Common& c, const std::vector<std::int64_t>& ks, std::optional<std::size_t> golden) {
  Output o;
  if (golden) {
    const GoldenPairReport g = golden_pair_check(*golden);
    o.csv = {"grid,max_deviation,a0,pass",
             std::to_string(g.grid) + "," + format_double(g.max_deviation) + "," + format_double(g.a0) + "," +
                 (g.pass ? "PASS" : "FAIL")};
    o.doc = {{"grid", g.grid}, {"max_deviation", g.max_deviation}, {"a0", g.a0}, {"pass", g.pass}};
    return o;
  }
  if (ks.empty()) throw InvalidInput("--k must not be empty");
  for (auto k : ks) {
    if (k < 2) throw InvalidInput("--k values must be >= 2");
  }
  struct Row {
    DirichletDecomposition d;
    EnergyCrosscheck x;
  };
  const auto rows = sweep<std::optional<Row>>(ks.size(), c.threads, [&](std::size_t i) {
    return std::optional<Row>(Row{decompose(named_function(NamedFunction::s_k, c.N, ks[i]), 1.0),
                                  dirichlet_energy_bergman_crosscheck(ks[i], c.N)});
  });
  o.csv.push_back("k,N,a,energy,residual,energy_extrapolated,bergman_norm2,relative_difference");
  o.doc = {{"N", c.N}, {"rows", json::array()}};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Row& r = *rows[i];
    o.csv.push_back(std::to_string(ks[i]) + "," + std::to_string(c.N) + "," + format_double(r.d.a) + "," +
                    format_double(r.d.energy) + "," + format_double(r.d.residual) + "," + format_double(r.x.energy) +
                    "," + format_double(r.x.bergman_norm2) + "," + format_double(r.x.relative_difference));
    json row = to_json(r.d);
    row["k"] = ks[i];
    row["energy_extrapolated"] = r.x.energy;
    row["bergman_norm2"] = r.x.bergman_norm2;
    row["relative_difference"] = r.x.relative_difference;
    o.doc["rows"].push_back(row);
  }
  return o;
}

Output cmd_pdcp(const Common& c, const std::string& mode, double s, std::size_t grid, std::optional<std::size_t> ns,
                const std::vector<std::int64_t>& n_max) {
  Output o;
  const std::size_t coeffs = ns.value_or(c.N);
  if (mode == "samples") {
    const auto samples = sample_odd_periodic(wintner_fs(s, coeffs), grid);
    std::ostringstream csv;
    write_samples_csv(samples, csv);
    std::istringstream lines(csv.str());
    for (std::string line; std::getline(lines, line);) o.csv.push_back(line);
    o.doc = {{"s", s}, {"Ns", coeffs}, {"x", json::array()}, {"value", json::array()}};
    for (const auto& [x, v] : samples) {
      o.doc["x"].push_back(x);
      o.doc["value"].push_back(v);
    }
    return o;
  }
  if (mode == "span") {
    if (n_max.empty()) throw InvalidInput("--n-max must not be empty");
    const SineSeq gen = wintner_fs(s, coeffs);
    SineSeq target{std::vector<double>(coeffs, 0.0), 0.0};
    target.coeffs[0] = 1.0;
    o.csv.push_back("n_max,Ns,distance,ridge,condition,truncation_bound");
    o.doc = {{"s", s}, {"Ns", coeffs}, {"target", "e_1"}, {"rows", json::array()}};
    for (auto m : n_max) {
      const DistanceReport r = span_distance_L2(target, gen, m, c.threads);
      o.csv.push_back(to_csv_row(r));
      json row = to_json(r);
      row.erase("wall_time");
      o.doc["rows"].push_back(row);
    }
    return o;
  }
  if (mode == "witness") {
    const RangeExclusionReport r = range_exclusion_witness(c.N, c.seed);
    o.csv.push_back("r,log_mean,ims_mean,poly_mean");
    for (std::size_t i = 0; i < r.radii.size(); ++i) {
      o.csv.push_back(format_double(r.radii[i]) + "," + format_double(r.log_means[i]) + "," +
                      format_double(r.ims_means[i]) + "," + format_double(r.poly_means[i]));
    }
    o.doc = to_json(r);
    return o;
  }
  throw InvalidInput("unknown pdcp mode '" + mode + "'");
}

Output cmd_pointwise(const Common& c, const std::vector<std::int64_t>& ns, const std::vector<std::string>& zs) {
  if (ns.empty() || zs.empty()) throw InvalidInput("--n and --z must not be empty");
  std::vector<std::complex<double>> points;
  for (const auto& z : zs) points.push_back(parse_complex(z));
  const NTTables tables = tables_for_cli(*std::max_element(ns.begin(), ns.end()), c);
  const auto reports = sweep<CompactOpenReport>(
      ns.size(), c.threads, [&](std::size_t i) { return compact_open_check(points, ns[i], c.N, &tables); });
  Output o;
  o.csv.push_back("n,N,re,im,deviation,bound");
  o.doc = {{"N", c.N}, {"rows", json::array()}};
  for (const auto& r : reports) {
    for (const auto& p : r.points) {
      o.csv.push_back(std::to_string(r.n) + "," + std::to_string(r.N) + "," + format_double(p.z.real()) + "," +
                      format_double(p.z.imag()) + "," + format_double(p.deviation) + "," + format_double(p.bound));
    }
    o.doc["rows"].push_back(to_json(r));
  }
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments on h_k, dilation operators and Moebius combinations", "bdlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--N", c.N, "truncation length")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 28));
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file (default standard output)");
  app.add_option("--seed", c.seed, "seed for randomized checks");
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 1024u));

  auto* hk = app.add_subcommand("hk", "coefficients of h_k, or partial norms of h_{k,c}");
  std::int64_t hk_k = 2;
  std::optional<std::size_t> hk_n;
  std::optional<double> hk_c;
  std::vector<std::size_t> hk_lengths{1u << 14, 1u << 15, 1u << 16};
  hk->add_option("--k", hk_k)->required()->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  hk->add_option("--n", hk_n, "number of coefficients (default N)");
  hk->add_option("--c", hk_c, "report partial norms of h_{k,c} instead");
  hk->add_option("--lengths", hk_lengths)->delimiter(',');

  auto* verify = app.add_subcommand("verify", "operator identities");
  bool verify_all = false;
  std::string verify_id;
  IdentityParams params;
  verify->add_flag("--all", verify_all);
  verify->add_option("--identity", verify_id);
  verify->add_option("--m", params.m);
  verify->add_option("--n", params.n);
  verify->add_option("--k", params.k);

  auto* dist = app.add_subcommand("distance", "least-squares distance to span{f_2..f_K}");
  std::string family = "Hk", target = "One";
  std::vector<std::int64_t> Ks{2, 4, 8, 16, 32, 64};
  dist->add_option("--family", family)->check(CLI::IsMember({"Hk", "ImsHk"}));
  dist->add_option("--target", target)->check(CLI::IsMember({"One", "OneMinusZ"}));
  dist->add_option("--K", Ks)->delimiter(',');

  auto* moeb = app.add_subcommand("moebius", "residual of the Moebius combination");
  std::vector<std::int64_t> moeb_n{10, 100, 1000};
  moeb->add_option("--n", moeb_n)->delimiter(',');

  auto* dir = app.add_subcommand("dirichlet", "local Dirichlet decomposition of s_k");
  std::vector<std::int64_t> dir_k{2, 3, 5, 10};
  std::optional<std::size_t> golden;
  dir->add_option("--k", dir_k)->delimiter(',');
  dir->add_option("--golden", golden, "check the golden-ratio pair on this many circle points");

  auto* pd = app.add_subcommand("pdcp", "sine-basis experiments");
  std::string mode = "samples";
  double s = 1.0;
  std::size_t grid = 1024;
  std::optional<std::size_t> ns;
  std::vector<std::int64_t> n_max{8, 16, 32, 64};
  pd->add_option("--mode", mode)->check(CLI::IsMember({"samples", "span", "witness"}));
  pd->add_option("--s", s, "exponent of f_s");
  pd->add_option("--grid", grid);
  pd->add_option("--Ns", ns, "sine coefficients (default N)");
  pd->add_option("--n-max", n_max)->delimiter(',');

  auto* pw = app.add_subcommand("pointwise", "sum (mu(k)/k) h_k(z) against 1");
  std::vector<std::int64_t> pw_n{100, 1000};
  std::vector<std::string> pw_z{"0", "0.5", "0.5i"};
  pw->add_option("--n", pw_n)->delimiter(',');
  pw->add_option("--z", pw_z, "points such as 0.5, -0.25+0.5i, 0.5i")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bdlab: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    Output o;
    bool ok = true;
    if (command == "hk") {
      o = cmd_hk(c, hk_k, hk_n, hk_c, hk_lengths);
    } else if (command == "verify") {
      params.seed = c.seed;
      o = cmd_verify(c, verify_all, verify_id, params, ok);
    } else if (command == "distance") {
      o = cmd_distance(c, family, target, Ks);
    } else if (command == "moebius") {
      o = cmd_moebius(c, moeb_n);
    } else if (command == "dirichlet") {
      o = cmd_dirichlet(c, dir_k, golden);
    } else if (command == "pdcp") {
      o = cmd_pdcp(c, mode, s, grid, ns, n_max);
    } else {
      o = cmd_pointwise(c, pw_n, pw_z);
    }
    emit(o, command, c, out);
    if (!ok) {
      err << "bdlab: at least one identity failed\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "bdlab: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "bdlab: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalFailure& e) {
    err << "bdlab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "bdlab: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace bdlab::cli
