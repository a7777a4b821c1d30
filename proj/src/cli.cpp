#include "renyivec/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "renyivec/io.hpp"

namespace renyivec::cli {

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kInvalidInput = 2;

std::string json_quote(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string error_json(const std::string& kind, const std::string& message) {
  return "{\"error\":{\"kind\":" + json_quote(kind) + ",\"message\":" + json_quote(message) +
         "}}\n";
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty entry in list: " + text);
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad integer in list: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

std::vector<std::int64_t> resolve_alphabets(const std::string& m_text, int n) {
  auto values = parse_int_list(m_text);
  if (values.size() == 1) return std::vector<std::int64_t>(n, values[0]);
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("--M needs one value or one per party");
  return values;
}

std::string int_list_json(const std::vector<std::int64_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out + "]";
}

EntropyVector vector_of_state(const StateVariant& state, RenyiOrder order) {
  return std::visit([&](const auto& s) { return entropy_vector(s, order); }, state);
}

DensityMatrix densify(const StateVariant& state) {
  if (const auto* c = std::get_if<ClassicalState>(&state)) return density_from_classical(*c);
  if (const auto* p = std::get_if<SparsePureState>(&state)) return density_from_pure(*p);
  return std::get<DensityMatrix>(state);
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string kind, alpha, subset, m_text, generators, out_path;
  int n = 0;
  double target = 0;
};

int run_construct(const ConstructArgs& a, std::ostream& out) {
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  SubsetMask subset = a.subset.empty() ? SubsetMask((1u << a.n) - 1, a.n)
                                       : parse_subset(a.subset, a.n);

  ConstructionResult result;
  std::vector<std::int64_t> alphabets;
  std::string budget_note;
  auto build = [&](bool build_state) {
    if (a.kind == "spike") {
      if (order.below_one()) {
        if (a.m_text.empty())
          throw std::invalid_argument("--M is required for alpha < 1 spikes");
        alphabets = resolve_alphabets(a.m_text, a.n);
        if (subset.is_full()) {
          result = spike_classical(a.n, a.target, order.alpha(), alphabets, build_state);
        } else {
          for (auto m : alphabets)
            if (m != alphabets[0])
              throw std::invalid_argument("quantum spikes use one uniform M");
          result = spike_quantum_lt1(a.n, subset, a.target, order.alpha(), alphabets[0],
                                     build_state);
        }
      } else if (order.above_one()) {
        const std::int64_t m = a.m_text.empty() ? 0 : parse_int_list(a.m_text).at(0);
        auto R = two_atom_distribution(a.target, order, m);
        alphabets = {static_cast<std::int64_t>(R.total_count())};
        result = spike_quantum_gt1(a.n, SubsetMask(subset.bits, a.n + 1), a.target,
                                   order, R, build_state);
      } else {
        throw std::invalid_argument("no spike constructions exist for alpha 0 or 1");
      }
    } else if (a.kind == "dilution") {
      if (!order.above_one())
        throw std::invalid_argument("dilution requires alpha > 1 (or infinity)");
      const std::int64_t m = a.m_text.empty() ? 0 : parse_int_list(a.m_text).at(0);
      auto R = two_atom_distribution(a.target, order, m);
      alphabets = {static_cast<std::int64_t>(R.total_count())};
      result = dilution_classical_gt1(a.n, order, R, build_state);
    } else if (a.kind == "upset") {
      if (a.generators.empty())
        throw std::invalid_argument("--generators is required for upset constructions");
      std::vector<SubsetMask> gens;
      std::stringstream ss(a.generators);
      std::string item;
      while (std::getline(ss, item, ',')) gens.push_back(parse_subset(item, a.n));
      if (order.below_one()) {
        if (a.m_text.empty())
          throw std::invalid_argument("--M is required for alpha < 1 upsets");
        alphabets = resolve_alphabets(a.m_text, a.n);
        result = upset_classical_lt1(a.n, gens, a.target, order.alpha(), alphabets,
                                     build_state);
      } else if (order.above_one()) {
        if (!a.m_text.empty())
          throw std::invalid_argument(
              "M is derived from the target for alpha > 1 upsets");
        result = upset_classical_gt1(a.n, gens, a.target, order, build_state);
        alphabets = result.descriptor.M;
      } else {
        throw std::invalid_argument("no upset constructions exist for alpha 0 or 1");
      }
    } else {
      throw std::invalid_argument("unknown construction kind: " + a.kind);
    }
  };

  try {
    build(true);
  } catch (const BudgetError& e) {
    // the descriptor tier still exists; only a requested state file is fatal
    if (!a.out_path.empty()) throw;
    build(false);
    budget_note = e.what();
  }

  std::string state_json;
  if (result.classical) state_json = to_json(*result.classical);
  if (result.pure) state_json = to_json(*result.pure);
  if (!a.out_path.empty()) write_file(a.out_path, state_json + "\n");

  std::string doc = "{\"command\":\"construct\",\"params\":{\"kind\":" + json_quote(a.kind) +
                    ",\"n\":" + std::to_string(a.n) + ",\"alpha\":" + json_quote(order.str()) +
                    ",\"target\":" + format_double(a.target) +
                    ",\"subset\":" + json_quote(subset.str()) +
                    ",\"M\":" + int_list_json(alphabets);
  if (!a.generators.empty()) doc += ",\"generators\":" + json_quote(a.generators);
  doc += ",\"out\":" + json_quote(a.out_path) + "}";
  doc += ",\"descriptor\":" + to_json(result.descriptor);
  doc += ",\"analytic_entropy_vector\":" +
         to_json(analytic_entropy_vector(result.descriptor));
  if (!budget_note.empty())
    doc += ",\"state\":null,\"state_omitted\":" + json_quote(budget_note);
  else if (a.out_path.empty())
    doc += ",\"state\":" + state_json;
  else
    doc += ",\"state_file\":" + json_quote(a.out_path);
  out << doc << "}\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct EntropyArgs {
  std::string state_path, alpha, out_path;
  bool csv = false, nats = false, json = false;
};

int run_entropy(const EntropyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.csv && a.json)
    throw std::invalid_argument("--json and --csv are mutually exclusive");
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  const auto state = parse_state_json(read_file(a.state_path));
  const auto ev = vector_of_state(state, order);

  const std::string params = "{\"state\":" + json_quote(a.state_path) + ",\"alpha\":" +
                             json_quote(order.str()) +
                             (std::string(",\"format\":") + (a.csv ? "\"csv\"" : "\"json\"")) +
                             ",\"nats\":" + (a.nats ? "true" : "false") +
                             ",\"out\":" + json_quote(a.out_path) + "}";
  if (a.csv) {
    const std::string csv = entropy_vector_csv(ev, a.nats);
    if (a.out_path.empty()) {
      // data to stdout; the parameter echo goes to stderr to keep the CSV clean
      err << "{\"command\":\"entropy\",\"params\":" << params << "}\n";
      out << csv;
    } else {
      write_file(a.out_path, csv);
      out << "{\"command\":\"entropy\",\"params\":" << params
          << ",\"csv_file\":" << json_quote(a.out_path) << "}\n";
    }
    return kOk;
  }
  std::string doc =
      "{\"command\":\"entropy\",\"params\":" + params + ",\"entropy_vector\":" + to_json(ev);
  if (!a.out_path.empty()) {
    write_file(a.out_path, to_json(ev) + "\n");
    doc += ",\"out_file\":" + json_quote(a.out_path);
  }
  out << doc << "}\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string state_path, checks = "monotonicity", alpha = "1";
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  const auto state = parse_state_json(read_file(a.state_path));

  std::vector<std::string> checks;
  std::stringstream ss(a.checks);
  std::string item;
  while (std::getline(ss, item, ',')) checks.push_back(item);
  if (checks.empty()) throw std::invalid_argument("no checks requested");

  bool pass = true;
  std::string results;
  for (const auto& check : checks) {
    if (!results.empty()) results += ',';
    if (check == "monotonicity") {
      const auto ev = vector_of_state(state, order);
      const auto report = check_monotonicity(ev);
      pass = pass && report.pass();
      results += "\"monotonicity\":" + to_json(report, ev.n);
    } else if (check == "ssa") {
      const auto ev = vector_of_state(state, RenyiOrder::one());
      const auto report = check_vn_inequalities(ev);
      pass = pass && report.pass();
      results += "\"ssa\":" + to_json(report);
    } else {
      throw std::invalid_argument("unknown check: " + check +
                                  " (available: monotonicity, ssa)");
    }
  }

  out << "{\"command\":\"verify\",\"params\":{\"state\":" << json_quote(a.state_path)
      << ",\"checks\":" << json_quote(a.checks) << ",\"alpha\":" << json_quote(order.str())
      << "},\"results\":{" << results << "},\"pass\":" << (pass ? "true" : "false")
      << "}\n";
  return pass ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

struct AudenaertArgs {
  std::string state_path, alpha;
};

int run_audenaert(const AudenaertArgs& a, std::ostream& out) {
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  const auto state = parse_state_json(read_file(a.state_path));
  const auto rho = densify(state);
  const auto report = audenaert_report(rho, order);
  const bool chain_ok = report.lhs <= report.bound_plus + kSlackTol &&
                        report.bound_plus <= report.bound_classic + kSlackTol;
  out << "{\"command\":\"audenaert\",\"params\":{\"state\":" << json_quote(a.state_path)
      << ",\"alpha\":" << json_quote(order.str()) << "},\"report\":" << to_json(report)
      << ",\"pass\":" << (chain_ok ? "true" : "false") << "}\n";
  return chain_ok ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string kind = "spike", target_vector_path, alpha, schedule, csv_path, subset;
  int n = 0;
  double target = -1;
};

int run_sweep(const SweepArgs& a, std::ostream& out) {
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  const auto schedule = parse_int_list(a.schedule);

  EntropyVector target;
  if (!a.target_vector_path.empty()) {
    target = parse_entropy_vector_json(read_file(a.target_vector_path));
  } else {
    if (a.n <= 0 || a.target < 0)
      throw std::invalid_argument("need --target-vector or both --n and --target");
    target = EntropyVector(a.n, order);
    const SubsetMask subset = a.subset.empty() ? SubsetMask((1u << a.n) - 1, a.n)
                                               : parse_subset(a.subset, a.n);
    target.set(subset, a.target);
  }

  std::vector<SweepRow> rows;
  if (a.kind == "spike") {
    rows = convergence_sweep(target, order, schedule);
  } else if (a.kind == "dilution") {
    const std::uint32_t full = (1u << target.n) - 1;
    for (std::uint32_t m = 1; m < full; ++m)
      if (target.entries[m] != 0)
        throw std::invalid_argument("dilution sweeps target s on the full party set");
    rows = convergence_sweep_dilution(target.entries[full], target.n, order, schedule);
  } else {
    throw std::invalid_argument("unknown sweep kind: " + a.kind);
  }

  write_file(a.csv_path, sweep_csv(rows, target));

  std::string doc = "{\"command\":\"sweep\",\"params\":{\"kind\":" + json_quote(a.kind) +
                    ",\"alpha\":" + json_quote(order.str()) + ",\"schedule\":" +
                    json_quote(a.schedule) + ",\"target_vector\":" + to_json(target) +
                    ",\"csv\":" + json_quote(a.csv_path) + "},\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) doc += ',';
    doc += "{\"M\":" + std::to_string(rows[i].M) +
           ",\"sup_error\":" + format_double(rows[i].sup_error) + "}";
  }
  out << doc << "]}\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct WitnessArgs {
  std::string property = "subadditivity", alpha, dims = "2,2";
  std::int64_t trials = 10000;
  std::uint64_t seed = 7;
};

int run_witness(const WitnessArgs& a, std::ostream& out) {
  if (a.property != "subadditivity")
    throw std::invalid_argument("unknown property: " + a.property +
                                " (available: subadditivity)");
  const RenyiOrder order = RenyiOrder::parse(a.alpha);
  const auto dims = parse_int_list(a.dims);
  if (dims.size() != 2) throw std::invalid_argument("--dims needs two entries");

  const auto witness = find_subadditivity_violation(
      order, a.trials, a.seed, {static_cast<int>(dims[0]), static_cast<int>(dims[1])});

  std::string doc = "{\"command\":\"witness\",\"params\":{\"property\":" +
                    json_quote(a.property) + ",\"alpha\":" + json_quote(order.str()) +
                    ",\"trials\":" + std::to_string(a.trials) +
                    ",\"seed\":" + std::to_string(a.seed) +
                    ",\"dims\":" + int_list_json(dims) + "}";
  doc += std::string(",\"found\":") + (witness ? "true" : "false");
  if (witness) doc += ",\"witness\":" + to_json(*witness);
  out << doc << "}\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renyi entropy vectors of multipartite states: constructions, "
               "verification, and sweeps"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand(
      "construct", "Build a spike / dilution / upset state and write it as JSON");
  construct->add_option("--kind", ca.kind, "spike | dilution | upset")->required();
  construct->add_option("--n", ca.n, "number of parties")->required();
  construct->add_option("--alpha", ca.alpha, "Renyi order (0, 1, inf, or decimal)")
      ->required();
  construct->add_option("--target", ca.target, "target entropy in bits")->required();
  construct->add_option("--subset", ca.subset, "target subset, e.g. 12 (default: all)");
  construct->add_option("--M", ca.m_text, "alphabet size(s), comma-separated");
  construct->add_option("--generators", ca.generators,
                        "upset generators, e.g. 1,23");
  construct->add_option("--out", ca.out_path, "state JSON output path");

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Entropy vector of a state file");
  entropy->add_option("--state", ea.state_path, "state JSON path")->required();
  entropy->add_option("--alpha", ea.alpha, "Renyi order")->required();
  entropy->add_option("--out", ea.out_path, "write the vector/CSV here");
  entropy->add_flag("--json", ea.json, "emit JSON (the default)");
  entropy->add_flag("--csv", ea.csv, "emit CSV instead of JSON");
  entropy->add_flag("--nats", ea.nats, "CSV in nats (JSON always stores bits)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run inequality checks on a state");
  verify->add_option("--state", va.state_path, "state JSON path")->required();
  verify->add_option("--checks", va.checks, "comma list: monotonicity,ssa");
  verify->add_option("--alpha", va.alpha, "order for monotonicity (default 1)");

  AudenaertArgs aa;
  auto* aud = app.add_subcommand("audenaert", "Audenaert+ norm bound report");
  aud->add_option("--state", aa.state_path, "bipartite state JSON path")->required();
  aud->add_option("--alpha", aa.alpha, "Renyi order > 1 or inf")->required();

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over alphabet sizes");
  sweep->add_option("--kind", sa.kind, "spike | dilution");
  sweep->add_option("--target-vector", sa.target_vector_path, "EntropyVector JSON path");
  sweep->add_option("--n", sa.n, "party count (with --target)");
  sweep->add_option("--target", sa.target, "single-subset target in bits");
  sweep->add_option("--subset", sa.subset, "subset for --target (default: all)");
  sweep->add_option("--alpha", sa.alpha, "Renyi order")->required();
  sweep->add_option("--schedule", sa.schedule, "comma list of increasing M")->required();
  sweep->add_option("--csv", sa.csv_path, "CSV output path")->required();

  WitnessArgs wa;
  auto* witness = app.add_subcommand("witness", "Search for inequality violations");
  witness->add_option("--property", wa.property, "subadditivity");
  witness->add_option("--alpha", wa.alpha, "Renyi order")->required();
  witness->add_option("--trials", wa.trials, "number of random trials");
  witness->add_option("--seed", wa.seed, "random seed");
  witness->add_option("--dims", wa.dims, "local dimensions, e.g. 2,2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what());
    return kInvalidInput;
  }

  try {
    if (construct->parsed()) return run_construct(ca, out);
    if (entropy->parsed()) return run_entropy(ea, out, err);
    if (verify->parsed()) return run_verify(va, out);
    if (aud->parsed()) return run_audenaert(aa, out);
    if (sweep->parsed()) return run_sweep(sa, out);
    if (witness->parsed()) return run_witness(wa, out);
    err << error_json("usage", "no subcommand given");
    return kInvalidInput;
  } catch (const BudgetError& e) {
    err << error_json("budget", e.what());
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << error_json("invalid_input", e.what());
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what());
    return kInvalidInput;
  }
}

}  // namespace renyivec::cli
