#include "multispec/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "multispec/emit.hpp"
#include "multispec/ensemble.hpp"
#include "multispec/errors.hpp"
#include "multispec/moment_engine.hpp"
#include "multispec/sampler.hpp"
#include "multispec/spec_io.hpp"
#include "multispec/spectral.hpp"
#include "multispec/studies.hpp"
#include "multispec/walk_oracle.hpp"

namespace multispec::cli {

namespace {

using Path = std::filesystem::path;

struct TableOutput {
  bool json = false;
  bool csv = false;
  std::string out;

  void attach(CLI::App* sub) {
    auto* j = sub->add_flag("--json", json, "Write JSON (manifest + rows)");
    sub->add_flag("--csv", csv, "Write CSV (the default)")->excludes(j);
    sub->add_option("--out", out, "Output file; stdout when empty");
  }
  OutputFormat format() const { return json ? OutputFormat::Json : OutputFormat::Csv; }
  std::optional<Path> path() const { return out.empty() ? std::nullopt : std::optional<Path>(out); }
};

// converge and correlator name the destination with the format flag itself.
struct FileOutput {
  std::string csv;
  std::string json;

  void attach(CLI::App* sub) {
    auto* c = sub->add_option("--csv", csv, "Write CSV to this file");
    sub->add_option("--json", json, "Write JSON to this file")->excludes(c);
  }
  OutputFormat format() const { return json.empty() ? OutputFormat::Csv : OutputFormat::Json; }
  std::optional<Path> path() const {
    if (!json.empty()) return Path(json);
    if (!csv.empty()) return Path(csv);
    return std::nullopt;
  }
};

struct StudyFlags {
  std::string method = "exact";
  int probes = 64;
  int exact_limit = kExactTraceLimit;
  int eigen_limit = kDenseEigenLimit;

  void attach(CLI::App* sub) {
    sub->add_option("--method", method, "Moment estimator: exact, eigen or hutchinson")
        ->check(CLI::IsMember({"exact", "eigen", "hutchinson"}));
    sub->add_option("--probes", probes, "Hutchinson probe vectors")->check(CLI::PositiveNumber);
    sub->add_option("--exact-limit", exact_limit, "Largest n for the exact trace");
    sub->add_option("--eigen-limit", eigen_limit, "Largest n for the dense eigensolver");
  }
  StudyOptions options() const {
    StudyOptions o;
    o.method = parse_moment_method(method);
    o.probes = probes;
    o.exact_limit = exact_limit;
    o.eigen_limit = eigen_limit;
    return o;
  }
};

nlohmann::json collect_flags(const CLI::App& sub) {
  nlohmann::json flags = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() == 0) {
      flags[name] = opt->get_default_str();
      continue;
    }
    std::string joined;
    for (const auto& r : opt->results()) {
      if (!joined.empty()) joined += ',';
      joined += r;
    }
    flags[name] = joined;
  }
  return flags;
}

RunManifest make_manifest(const CLI::App& sub, const EnsembleSpec& spec, std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.subcommand = sub.get_name();
  m.spec = spec_to_json(spec);
  m.flags = collect_flags(sub);
  m.seed = seed;
  m.timestamp = manifest_timestamp();
  return m;
}

std::vector<Cell> concat(std::vector<Cell> a, const std::vector<Cell>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string join_ints(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) {
    if (!s.empty()) s += ',';
    s += std::to_string(x);
  }
  return s;
}

// Every composition of `total` into positive parts, in lexicographic order.
void compositions(int total, std::vector<int>& prefix, const std::function<void(const std::vector<int>&)>& visit) {
  if (total == 0) {
    visit(prefix);
    return;
  }
  for (int part = 1; part <= total; ++part) {
    prefix.push_back(part);
    compositions(total - part, prefix, visit);
    prefix.pop_back();
  }
}

void add_identity_rows(Table& table, const IdentityReport& report) {
  for (const auto& cell : report.cells) {
    std::vector<Cell> row{report.name, cell.key};
    row = concat(row, rational_cells(cell.enumerated));
    row = concat(row, rational_cells(cell.predicted));
    row.push_back(static_cast<long long>(cell.enumerated_count));
    row.push_back(cell.predicted_count.get_str());
    row.push_back(std::string(cell.holds() ? "true" : "false"));
    table.add_row(std::move(row));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of sparse multi-component random matrices", "multispec"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MULTISPEC_VERSION));

  std::string spec_path;
  auto add_spec = [&spec_path](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "Ensemble spec (JSON)")->required();
  };

  // moments
  auto* moments = app.add_subcommand("moments", "Limiting moments m_0..m_order from the recurrence");
  int moments_order = 8;
  TableOutput moments_out;
  add_spec(moments);
  moments->add_option("--order", moments_order, "Highest moment order")->check(CLI::NonNegativeNumber);
  moments_out.attach(moments);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Moments by enumerating essential walks");
  int oracle_order = 4;
  int oracle_max_length = kDefaultMaxWalkLength;
  bool list_walks = false;
  TableOutput oracle_out;
  add_spec(oracle);
  oracle->add_option("--order", oracle_order, "Highest (even) walk length")->check(CLI::NonNegativeNumber);
  oracle->add_flag("--list-walks", list_walks, "List every walk of length --order with its weight");
  oracle->add_option("--max-length", oracle_max_length, "Enumeration guard on walk length");
  oracle_out.attach(oracle);

  // verify
  auto* verify = app.add_subcommand("verify", "Check the splitting identities and cluster counts");
  int max_l = 4;
  int max_cluster = 6;
  int verify_max_length = kDefaultMaxWalkLength;
  int cluster_guard = kMaxBruteForceCluster;
  TableOutput verify_out;
  add_spec(verify);
  verify->add_option("--max-l", max_l, "Largest half length checked")->check(CLI::PositiveNumber);
  verify->add_option("--max-cluster", max_cluster, "Largest j + sum(i) for cluster counts")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-length", verify_max_length, "Enumeration guard on walk length");
  verify->add_option("--cluster-guard", cluster_guard, "Brute-force guard on cluster size");
  verify_out.attach(verify);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw one matrix as i,j,w rows (1-based)");
  int sample_n = 0;
  std::string sample_law;
  std::uint64_t sample_seed = 1;
  TableOutput sample_out;
  add_spec(sample);
  sample->add_option("--n", sample_n, "Matrix size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--law", sample_law, "rademacher, uniform, gaussian or two_point:<a>,<prob>")->required();
  sample->add_option("--seed", sample_seed, "Base seed");
  sample_out.attach(sample);

  // converge
  auto* converge = app.add_subcommand("converge", "Monte Carlo moments against the limit");
  std::string converge_law;
  std::vector<int> converge_n{250, 500, 1000, 2000};
  int kmax = 6;
  int converge_trials = 200;
  std::uint64_t converge_seed = 1;
  StudyFlags converge_study;
  FileOutput converge_out;
  add_spec(converge);
  converge->add_option("--law", converge_law, "Weight law")->required();
  converge->add_option("--n", converge_n, "Matrix sizes")->delimiter(',')->check(CLI::PositiveNumber);
  converge->add_option("--kmax", kmax, "Highest moment order")->check(CLI::PositiveNumber);
  converge->add_option("--trials", converge_trials, "Realizations per n")->check(CLI::PositiveNumber);
  converge->add_option("--seed", converge_seed, "Base seed");
  converge_study.attach(converge);
  converge_out.attach(converge);

  // correlator
  auto* correlator = app.add_subcommand("correlator", "Covariance of M_k and M_m across realizations");
  std::string correlator_law;
  std::vector<int> correlator_n{250, 500, 1000, 2000};
  int corr_k = 2;
  int corr_m = 2;
  int correlator_trials = 400;
  std::uint64_t correlator_seed = 1;
  StudyFlags correlator_study;
  FileOutput correlator_out;
  add_spec(correlator);
  correlator->add_option("--law", correlator_law, "Weight law")->required();
  correlator->add_option("--n-list", correlator_n, "Matrix sizes")->delimiter(',')->check(CLI::PositiveNumber);
  correlator->add_option("--k", corr_k, "First moment order")->check(CLI::PositiveNumber);
  correlator->add_option("--m", corr_m, "Second moment order")->check(CLI::PositiveNumber);
  correlator->add_option("--trials", correlator_trials, "Realizations per n")->check(CLI::Range(2, 1 << 30));
  correlator->add_option("--seed", correlator_seed, "Base seed");
  correlator_study.attach(correlator);
  correlator_out.attach(correlator);

  // carleman
  auto* carleman = app.add_subcommand("carleman", "Growth of m_2k^(1/2k) and the Carleman check");
  int k_range = 8;
  TableOutput carleman_out;
  add_spec(carleman);
  carleman->add_option("--k-range", k_range, "Fit over 1 <= k <= k-range")->check(CLI::Range(3, 1 << 20));
  carleman_out.attach(carleman);

  if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
    if (app.get_subcommand_no_throw(args.front()) == nullptr) {
      err << "unknown subcommand '" << args.front() << "'; see --help\n";
      return kExitValidation;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << MULTISPEC_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const EnsembleSpec spec = load_spec_file(spec_path);

    if (moments->parsed()) {
      const LimitingMoments m = limiting_moments(spec, moments_order);
      Table table({"s", "m_s", "m_s_decimal"});
      for (int s = 0; s <= moments_order; ++s) table.add_row(concat({static_cast<long long>(s)}, rational_cells(m[s])));
      emit(table, make_manifest(*moments, spec, std::nullopt), moments_out.format(), moments_out.path(), out);
      return kExitOk;
    }

    if (oracle->parsed()) {
      if (oracle_order % 2 != 0) throw std::invalid_argument("--order must be even");
      if (oracle_order > oracle_max_length) {
        throw GuardError("walk length " + std::to_string(oracle_order) + " exceeds --max-length " +
                         std::to_string(oracle_max_length));
      }
      Table table;
      if (list_walks) {
        table = Table({"walk", "weight", "weight_decimal"});
        for (const Walk& w : enumerate_essential_walks(spec, oracle_order, oracle_max_length)) {
          table.add_row(concat({w.to_string()}, rational_cells(walk_weight(w, spec))));
        }
      } else {
        table = Table({"s", "m_s", "m_s_decimal", "walks"});
        for (int s = 0; s <= oracle_order; s += 2) {
          const auto walks = enumerate_essential_walks(spec, s, oracle_max_length);
          Rational total = 0;
          for (const Walk& w : walks) total += walk_weight(w, spec);
          std::vector<Cell> row = concat({static_cast<long long>(s)}, rational_cells(total));
          row.push_back(static_cast<long long>(walks.size()));
          table.add_row(std::move(row));
        }
      }
      emit(table, make_manifest(*oracle, spec, std::nullopt), oracle_out.format(), oracle_out.path(), out);
      return kExitOk;
    }

    if (verify->parsed()) {
      if (2 * max_l > verify_max_length) {
        throw GuardError("half length " + std::to_string(max_l) + " exceeds --max-length " +
                         std::to_string(verify_max_length));
      }
      const WalkCensus census(spec, max_l);
      Table table({"identity", "cell", "enumerated", "enumerated_decimal", "predicted", "predicted_decimal",
                   "enumerated_count", "predicted_count", "holds"});
      std::vector<std::string> failures;
      auto record = [&](const IdentityReport& report, const std::string& where) {
        add_identity_rows(table, report);
        if (!report.holds()) {
          const IdentityCell* bad = report.first_failure();
          failures.push_back(report.name + " " + where + (bad ? " at " + bad->key : " (unclassified walks)"));
        }
      };
      std::size_t checks = 0;
      for (int l = 1; l <= max_l; ++l) {
        for (int r = 0; r <= l; ++r, ++checks) {
          record(verify_first_splitting(census, l, r), "l=" + std::to_string(l) + " r=" + std::to_string(r));
        }
      }
      for (int f = 1; f <= max_l; ++f) {
        for (int u = 0; f + u <= max_l; ++u, ++checks) {
          record(verify_second_splitting(census, f, u), "f=" + std::to_string(f) + " u=" + std::to_string(u));
        }
      }
      std::size_t clusters = 0;
      for (int total = 1; total <= max_cluster; ++total) {
        for (int j = 1; j <= total; ++j) {
          std::vector<int> prefix;
          compositions(total - j, prefix, [&](const std::vector<int>& i_list) {
            IdentityReport report;
            report.name = "cluster";
            IdentityCell cell;
            cell.key = "j=" + std::to_string(j) + ";i=" + join_ints(i_list);
            const BigInt brute = brute_force_cluster_count(j, i_list, cluster_guard);
            const BigInt closed = cluster_pass_count(j, i_list);
            cell.enumerated = Rational(brute);
            cell.predicted = Rational(closed);
            cell.enumerated_count = brute.get_ui();
            cell.predicted_count = closed;
            report.cells.push_back(cell);
            record(report, cell.key);
            ++clusters;
          });
        }
      }
      const auto path = verify_out.path();
      if (path) emit(table, make_manifest(*verify, spec, std::nullopt), verify_out.format(), path, out);
      out << "first and second splitting: " << checks << " (l,r) and (f,u) checks over l <= " << max_l << "\n";
      out << "cluster counts: " << clusters << " cases with j + sum(i) <= " << max_cluster << "\n";
      if (!failures.empty()) {
        for (const auto& f : failures) out << "FAILED: " << f << "\n";
        return kExitValidation;
      }
      out << "all splitting identities hold\n";
      return kExitOk;
    }

    if (sample->parsed()) {
      const WeightLaw law = WeightLaw::parse(sample_law);
      const WeightedSparseMatrix a = sample_matrix(spec, sample_n, law, sample_seed);
      Table table({"i", "j", "w"});
      for (const MatrixEntry& e : a.entries()) {
        table.add_row({static_cast<long long>(e.i + 1), static_cast<long long>(e.j + 1), e.w});
      }
      emit(table, make_manifest(*sample, spec, sample_seed), sample_out.format(), sample_out.path(), out);
      return kExitOk;
    }

    if (converge->parsed()) {
      const WeightLaw law = WeightLaw::parse(converge_law);
      std::vector<int> ns = converge_n;
      std::sort(ns.begin(), ns.end());
      ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
      const auto rows =
          moment_convergence_study(spec, law, ns, kmax, converge_trials, converge_seed, converge_study.options());
      Table table({"n", "k", "mean", "stderr", "limit", "limit_decimal", "delta"});
      for (const auto& r : rows) {
        std::vector<Cell> row{static_cast<long long>(r.n), static_cast<long long>(r.k), r.mean, r.standard_error};
        row = concat(row, rational_cells(r.limit));
        row.push_back(r.delta);
        table.add_row(std::move(row));
      }
      emit(table, make_manifest(*converge, spec, converge_seed), converge_out.format(), converge_out.path(), out);
      return kExitOk;
    }

    if (correlator->parsed()) {
      const WeightLaw law = WeightLaw::parse(correlator_law);
      std::vector<int> ns = correlator_n;
      std::sort(ns.begin(), ns.end());
      ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
      Table table({"n", "C_hat", "stderr", "n_C_hat", "n_C_hat_stderr"});
      for (int n : ns) {
        const CorrelatorEstimate c = correlator_estimate(spec, law, n, corr_k, corr_m, correlator_trials,
                                                         correlator_seed, correlator_study.options());
        table.add_row({static_cast<long long>(n), c.value, c.standard_error, c.scaled(), c.scaled_error()});
      }
      emit(table, make_manifest(*correlator, spec, correlator_seed), correlator_out.format(),
           correlator_out.path(), out);
      return kExitOk;
    }

    if (carleman->parsed()) {
      const LimitingMoments m = limiting_moments(spec, 2 * k_range);
      const GrowthReport report = carleman_diagnostic(m, k_range);
      Table table({"k", "m_2k", "m_2k_decimal", "root", "partial_sum"});
      for (const auto& r : report.rows) {
        std::vector<Cell> row = concat({static_cast<long long>(r.k)}, rational_cells(m[2 * r.k]));
        row.push_back(r.root);
        row.push_back(r.partial_sum);
        table.add_row(std::move(row));
      }
      emit(table, make_manifest(*carleman, spec, std::nullopt), carleman_out.format(), carleman_out.path(), out);
      std::ostringstream verdict;
      if (report.degenerate) {
        verdict << "some m_2k vanish; ";
      } else {
        verdict << "gamma = " << format_real(report.gamma) << " +/- " << format_real(report.gamma_stderr)
                << " (threshold " << report.threshold << "); ";
      }
      verdict << (report.consistent ? "consistent with Carleman" : "NOT consistent with Carleman");
      err << verdict.str() << "\n";
      return kExitOk;
    }
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitGuard;
  }
  err << "usage error: no subcommand\n";
  return kExitValidation;
}

}  // namespace multispec::cli
