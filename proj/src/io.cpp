#include "renyivec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace renyivec {

namespace {

using nlohmann::json;

void append_quoted(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_num(std::string& out, double x) { out += format_double(x); }

void append_key(std::string& out, const char* key) {
  out += '"';
  out += key;
  out += "\":";
}

std::string subset_str(std::uint32_t bits, int n) { return SubsetMask(bits, n).str(); }

json parse_or_throw(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON input");
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json(const ClassicalState& state) {
  std::string out = "{\"type\":\"classical\",\"n\":" + std::to_string(state.n);
  append_key(out += ',', "alphabet_sizes");
  out += '[';
  for (int i = 0; i < state.n; ++i) {
    if (i) out += ',';
    out += std::to_string(state.alphabet_sizes[i]);
  }
  out += "],";
  append_key(out, "atoms");
  out += '[';
  bool first = true;
  for (const auto& [idx, p] : state.atoms) {
    if (!first) out += ',';
    first = false;
    out += "{\"x\":[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(idx[i]);
    }
    out += "],\"p\":";
    append_num(out, p);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_json(const SparsePureState& psi) {
  std::string out = "{\"type\":\"pure\",\"n\":" + std::to_string(psi.n);
  append_key(out += ',', "dims");
  out += '[';
  for (int i = 0; i < psi.n; ++i) {
    if (i) out += ',';
    out += std::to_string(psi.dims[i]);
  }
  out += "],";
  append_key(out, "amplitudes");
  out += '[';
  bool first = true;
  for (const auto& [idx, a] : psi.amplitudes) {
    if (!first) out += ',';
    first = false;
    out += "{\"index\":[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(idx[i]);
    }
    out += "],\"re\":";
    append_num(out, a.real());
    out += ",\"im\":";
    append_num(out, a.imag());
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_json(const DensityMatrix& rho) {
  std::string out = "{\"type\":\"dense\",\"n\":" + std::to_string(rho.n());
  append_key(out += ',', "dims");
  out += '[';
  for (int i = 0; i < rho.n(); ++i) {
    if (i) out += ',';
    out += std::to_string(rho.dims[i]);
  }
  out += "],";
  const auto dim = rho.mat.rows();
  for (const char* part : {"re", "im"}) {
    append_key(out, part);
    out += '[';
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r) out += ',';
      out += '[';
      for (Eigen::Index c = 0; c < dim; ++c) {
        if (c) out += ',';
        append_num(out, part[0] == 'r' ? rho.mat(r, c).real() : rho.mat(r, c).imag());
      }
      out += ']';
    }
    out += ']';
    if (part[0] == 'r') out += ',';
  }
  out += '}';
  return out;
}

std::string to_json(const StateVariant& state) {
  return std::visit([](const auto& s) { return to_json(s); }, state);
}

std::string to_json(const EntropyVector& ev) {
  std::string out = "{\"n\":" + std::to_string(ev.n) + ",\"alpha\":";
  append_quoted(out, ev.order.str());
  out += ",\"entries\":{";
  bool first = true;
  for (const auto& I : subsets_by_size(ev.n)) {
    if (!first) out += ',';
    first = false;
    append_quoted(out, I.str());
    out += ':';
    append_num(out, ev.at(I));
  }
  out += "}}";
  return out;
}

std::string to_json(const WeightedSpectrum& spec) {
  std::string out = "{\"atoms\":[";
  for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
    if (i) out += ',';
    out += "{\"value\":";
    append_num(out, spec.atoms[i].value);
    out += ",\"multiplicity\":";
    append_num(out, spec.atoms[i].multiplicity);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_json(const ConstructionDescriptor& desc) {
  std::string out = "{\"kind\":";
  append_quoted(out, kind_name(desc.kind));
  out += ",\"n\":" + std::to_string(desc.n) + ",\"alpha\":";
  append_quoted(out, desc.alpha.str());
  out += ",\"s_bits\":";
  append_num(out, desc.s_bits);
  if (!desc.M.empty()) {
    out += ",\"M\":[";
    for (std::size_t i = 0; i < desc.M.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(desc.M[i]);
    }
    out += ']';
  }
  switch (desc.kind) {
    case ConstructionKind::SpikeClassical:
      out += ",\"t\":";
      append_num(out, desc.t());
      break;
    case ConstructionKind::SpikeQuantumLt1:
      out += ",\"subset\":";
      append_quoted(out, subset_str(desc.subset_bits, desc.n));
      out += ",\"t\":";
      append_num(out, desc.t());
      break;
    case ConstructionKind::SpikeQuantumGt1:
      out += ",\"subset\":";
      append_quoted(out, subset_str(desc.subset_bits, desc.n + 1));
      out += ",\"R\":" + to_json(desc.R);
      break;
    case ConstructionKind::DilutionGt1:
      out += ",\"R\":" + to_json(desc.R);
      break;
    case ConstructionKind::UpsetLt1: {
      out += ",\"generators\":[";
      for (std::size_t i = 0; i < desc.generators.size(); ++i) {
        if (i) out += ',';
        append_quoted(out, subset_str(desc.generators[i], desc.n));
      }
      out += "],\"t\":[";
      for (std::size_t i = 0; i < desc.t_list.size(); ++i) {
        if (i) out += ',';
        append_num(out, desc.t_list[i]);
      }
      out += ']';
      break;
    }
    case ConstructionKind::UpsetGt1: {
      out += ",\"generators\":[";
      for (std::size_t i = 0; i < desc.generators.size(); ++i) {
        if (i) out += ',';
        append_quoted(out, subset_str(desc.generators[i], desc.n));
      }
      out += ']';
      break;
    }
    case ConstructionKind::Purification:
      out += ",\"inner\":" + to_json(desc.components.at(0));
      break;
    case ConstructionKind::TensorComposite: {
      out += ",\"components\":[";
      for (std::size_t i = 0; i < desc.components.size(); ++i) {
        if (i) out += ',';
        out += to_json(desc.components[i]);
      }
      out += ']';
      break;
    }
  }
  out += '}';
  return out;
}

std::string to_json(const MonotonicityReport& report, int n) {
  std::string out = "{\"pass\":";
  out += report.pass() ? "true" : "false";
  out += ",\"violations\":[";
  for (std::size_t i = 0; i < report.violations.size(); ++i) {
    if (i) out += ',';
    out += '[';
    append_quoted(out, subset_str(report.violations[i].first, n));
    out += ',';
    append_quoted(out, subset_str(report.violations[i].second, n));
    out += ']';
  }
  out += "],\"negative_entries\":[";
  for (std::size_t i = 0; i < report.negative_entries.size(); ++i) {
    if (i) out += ',';
    append_quoted(out, subset_str(report.negative_entries[i], n));
  }
  out += "]}";
  return out;
}

std::string to_json(const VnReport& report) {
  std::string out = "{\"pass\":";
  out += report.pass() ? "true" : "false";
  out += ",\"min_slack\":";
  append_num(out, report.min_slack);
  out += ",\"slacks\":[";
  for (std::size_t i = 0; i < report.slacks.size(); ++i) {
    if (i) out += ',';
    out += "{\"name\":";
    append_quoted(out, report.slacks[i].name);
    out += ",\"slack\":";
    append_num(out, report.slacks[i].slack);
    out += '}';
  }
  out += "]}";
  return out;
}

std::string to_json(const AudenaertReport& report) {
  std::string out = "{\"alpha\":";
  append_quoted(out, report.alpha.str());
  const std::pair<const char*, double> nums[] = {
      {"norm_a", report.norm_a},         {"norm_b", report.norm_b},
      {"norm_ab", report.norm_ab},       {"lhs", report.lhs},
      {"m_alpha", report.m_alpha},       {"kappa_star", report.kappa_star},
      {"bound_plus", report.bound_plus}, {"bound_classic", report.bound_classic},
      {"mult_a", report.mult_a},         {"mult_b", report.mult_b}};
  for (const auto& [key, value] : nums) {
    out += ',';
    append_key(out, key);
    append_num(out, value);
  }
  const std::pair<const char*, bool> flags[] = {
      {"rho_a_pure", report.rho_a_pure},
      {"rho_b_pure", report.rho_b_pure},
      {"rho_ab_pure", report.rho_ab_pure},
      {"lhs_equals_classic", report.lhs_equals_classic}};
  for (const auto& [key, value] : flags) {
    out += ',';
    append_key(out, key);
    out += value ? "true" : "false";
  }
  out += '}';
  return out;
}

std::string to_json(const ViolationWitness& witness) {
  std::string out = "{\"property\":\"subadditivity\",\"sampler\":";
  append_quoted(out, witness.sampler);
  out += ",\"trial\":" + std::to_string(witness.trial);
  out += ",\"seed\":" + std::to_string(witness.seed);
  out += ",\"dims\":[" + std::to_string(witness.dims.first) + "," +
         std::to_string(witness.dims.second) + "]";
  out += ",\"subsets\":[\"1\",\"2\"],\"lhs\":";
  append_num(out, witness.lhs);
  out += ",\"rhs\":";
  append_num(out, witness.rhs);
  out += ",\"slack\":";
  append_num(out, witness.slack);
  out += ",\"state\":";
  out += std::visit([](const auto& s) { return to_json(s); }, witness.state);
  out += '}';
  return out;
}

StateVariant parse_state_json(const std::string& text) {
  const json j = parse_or_throw(text);
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("state JSON needs a \"type\" field");
  const std::string type = j["type"];

  if (type == "classical") {
    const int n = j.at("n").get<int>();
    std::vector<std::int64_t> sizes = j.at("alphabet_sizes").get<std::vector<std::int64_t>>();
    std::map<std::vector<std::uint32_t>, double> atoms;
    for (const auto& atom : j.at("atoms")) {
      auto idx = atom.at("x").get<std::vector<std::uint32_t>>();
      const double p = atom.at("p").get<double>();
      if (atoms.count(idx)) throw std::invalid_argument("duplicate atom index");
      atoms[idx] = p;
    }
    return make_classical_state(n, std::move(sizes), std::move(atoms));
  }
  if (type == "pure") {
    const int n = j.at("n").get<int>();
    auto dims = j.at("dims").get<std::vector<std::uint64_t>>();
    std::map<std::vector<std::uint64_t>, Complex> amps;
    for (const auto& amp : j.at("amplitudes")) {
      auto idx = amp.at("index").get<std::vector<std::uint64_t>>();
      if (amps.count(idx)) throw std::invalid_argument("duplicate amplitude index");
      amps[idx] = Complex(amp.at("re").get<double>(), amp.at("im").get<double>());
    }
    return make_pure_state(n, std::move(dims), std::move(amps));
  }
  if (type == "dense") {
    DensityMatrix rho;
    rho.dims = j.at("dims").get<std::vector<std::int64_t>>();
    const std::int64_t d = checked_total_dim(rho.dims);
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<std::int64_t>(re.size()) != d ||
        static_cast<std::int64_t>(im.size()) != d)
      throw std::invalid_argument("dense matrix shape does not match dims");
    rho.mat = Eigen::MatrixXcd::Zero(d, d);
    for (std::int64_t r = 0; r < d; ++r)
      for (std::int64_t c = 0; c < d; ++c)
        rho.mat(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
    rho.validate();
    return rho;
  }
  throw std::invalid_argument("unknown state type: " + type);
}

EntropyVector parse_entropy_vector_json(const std::string& text) {
  const json j = parse_or_throw(text);
  const int n = j.at("n").get<int>();
  const RenyiOrder order = RenyiOrder::parse(j.at("alpha").get<std::string>());
  EntropyVector out(n, order);
  const auto& entries = j.at("entries");
  std::size_t seen = 0;
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    const auto mask = parse_subset(it.key(), n);
    out.set(mask, it.value().get<double>());
    ++seen;
  }
  if (seen != (std::size_t{1} << n) - 1)
    throw std::invalid_argument("entropy vector needs exactly 2^n - 1 entries");
  for (std::uint32_t m = 1; m < (1u << n); ++m)
    if (out.entries[m] < -kSlackTol)
      throw std::invalid_argument("entropy vector entries must be nonnegative");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

std::string entropy_vector_csv(const EntropyVector& ev, bool nats) {
  std::string out = nats ? "subset,entropy_nats\n" : "subset,entropy_bits\n";
  const double scale = nats ? 0.6931471805599453 : 1.0;
  for (const auto& I : subsets_by_size(ev.n)) {
    out += I.str();
    out += ',';
    out += format_double(ev.at(I) * scale);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const EntropyVector& target) {
  std::string out = "M,subset,entropy_bits,target_bits,abs_error\n";
  for (const auto& row : rows)
    for (const auto& I : subsets_by_size(target.n)) {
      out += std::to_string(row.M);
      out += ',';
      out += I.str();
      out += ',';
      out += format_double(row.achieved.at(I));
      out += ',';
      out += format_double(target.at(I));
      out += ',';
      out += format_double(std::abs(row.achieved.at(I) - target.at(I)));
      out += '\n';
    }
  return out;
}

}  // namespace renyivec
