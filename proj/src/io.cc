// Copyright 2026 The Riskshed Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "riskshed/io.h"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "riskshed/errors.h"
#include "riskshed/rng.h"

namespace riskshed {
namespace {

using nlohmann::json;

constexpr const char* kProblemFormat = "riskshed-problem";
constexpr const char* kResultFormat = "riskshed-result";
constexpr const char* kManifestFormat = "riskshed-manifest";

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) throw InvalidModel("NaN cannot be serialized");
  return v > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double d : v) out.push_back(number(d));
  return out;
}

std::string senses_string(const std::vector<Sense>& senses) {
  std::string out;
  for (Sense s : senses) {
    out += s == Sense::kLessEqual ? 'L' : s == Sense::kEqual ? 'E' : 'G';
  }
  return out;
}

json matrix_json(const SparseMatrix& m) {
  json entries = json::array();
  for (const Triplet& t : m.triplets()) {
    entries.push_back(json::array({t.row, t.col, number(t.value)}));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

json flags_json(const std::vector<std::uint8_t>& flags) {
  json out = json::array();
  for (std::uint8_t f : flags) out.push_back(f ? 1 : 0);
  return out;
}

// A position in the parsed document, for diagnostics that name the field.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  Node operator[](const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    const auto it = j_.find(key);
    if (it == j_.end()) {
      throw ParseError("missing field '" + child(key) + "'");
    }
    return Node(*it, child(key));
  }
  Node item(std::size_t i) const {
    return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]");
  }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  bool is_null() const { return j_.is_null(); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double as_double() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string()) {
      const auto& s = j_.get_ref<const std::string&>();
      if (s == "inf") return kInfinity;
      if (s == "-inf") return -kInfinity;
    }
    fail("expected a number");
  }
  long long as_int() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  int as_int32() const {
    const long long v = as_int();
    if (v < INT32_MIN || v > INT32_MAX) fail("integer out of range");
    return static_cast<int>(v);
  }
  std::uint64_t as_u64() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }
  std::string as_string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> as_doubles() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = item(i).as_double();
    return out;
  }
  std::vector<std::string> as_strings() const {
    std::vector<std::string> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = item(i).as_string();
    return out;
  }
  std::vector<std::uint8_t> as_flags() const {
    std::vector<std::uint8_t> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const long long v = item(i).as_int();
      if (v != 0 && v != 1) item(i).fail("expected 0 or 1");
      out[i] = static_cast<std::uint8_t>(v);
    }
    return out;
  }
  std::vector<Sense> as_senses() const {
    std::vector<Sense> out;
    for (char c : as_string()) {
      if (c == 'L') out.push_back(Sense::kLessEqual);
      else if (c == 'E') out.push_back(Sense::kEqual);
      else if (c == 'G') out.push_back(Sense::kGreaterEqual);
      else fail(std::string("unknown row sense '") + c + "'");
    }
    return out;
  }
  SparseMatrix as_matrix() const {
    const int rows = (*this)["rows"].as_int32();
    const int cols = (*this)["cols"].as_int32();
    if (rows < 0 || cols < 0) fail("negative dimension");
    const Node entries = (*this)["entries"];
    std::vector<Triplet> triplets;
    triplets.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Node e = entries.item(k);
      if (e.size() != 3) e.fail("expected [row, col, value]");
      const int r = e.item(0).as_int32();
      const int c = e.item(1).as_int32();
      if (r < 0 || r >= rows || c < 0 || c >= cols) e.fail("index out of range");
      triplets.push_back({r, c, e.item(2).as_double()});
    }
    return SparseMatrix(rows, cols, std::move(triplets));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_ + ": " + what);
  }

 private:
  std::string child(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
};

using Fields = std::vector<std::pair<std::string, json>>;

std::string checksum_of(const Fields& fields) {
  json all = json::object();
  for (const auto& [key, value] : fields) all[key] = value;
  return fnv1a64_hex(all.dump());
}

// One top-level field per line, in the given order, checksum last.
std::string write_document(const Fields& fields) {
  std::string out = "{\n";
  for (const auto& [key, value] : fields) {
    out += "  " + json(key).dump() + ": " + value.dump() + ",\n";
  }
  out += "  \"checksum\": " + json(checksum_of(fields)).dump() + "\n}\n";
  return out;
}

// The top-level section whose line holds byte `offset`.
std::string section_at(std::string_view text, std::size_t offset) {
  std::string section = "header";
  std::size_t pos = 0;
  while (pos < text.size() && pos <= offset) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    if (line.starts_with("  \"")) {
      const std::size_t close = line.find('"', 3);
      if (close != std::string_view::npos) {
        section = std::string(line.substr(3, close - 3));
      }
    }
    pos = end + 1;
  }
  return section;
}

json read_document(std::string_view text, const char* format) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    const std::size_t line =
        1 + std::count(text.begin(), text.begin() + std::min(offset, text.size()), '\n');
    const bool at_end = offset + 1 >= text.size();
    throw ParseError(std::string(at_end ? "unexpected end of input" : "malformed input") +
                     " at line " + std::to_string(line) + " in section '" +
                     section_at(text, offset) + "'");
  }
  if (!doc.is_object()) throw ParseError("line 1: expected a JSON object");
  const Node root(doc, "");
  const long long version = root["version"].as_int();
  if (version != kFormatVersion) {
    throw VersionMismatch("format version " + std::to_string(version) +
                          " is not supported (expected " +
                          std::to_string(kFormatVersion) + ")");
  }
  if (root["format"].as_string() != format) {
    throw ParseError("format: expected '" + std::string(format) + "'");
  }
  const std::string stored = root["checksum"].as_string();
  json body = doc;
  body.erase("checksum");
  if (fnv1a64_hex(body.dump()) != stored) {
    throw ParseError("checksum: content does not match " + stored);
  }
  return doc;
}

json problem_json(const TwoStageProblem& p) {
  json scenarios = json::array();
  for (const Scenario& s : p.scenarios) {
    scenarios.push_back({{"probability", number(s.probability)},
                         {"cost", numbers(s.recourse_cost)},
                         {"recourse_matrix", matrix_json(s.recourse_matrix)},
                         {"technology_matrix", matrix_json(s.technology_matrix)},
                         {"rhs", numbers(s.rhs)},
                         {"senses", senses_string(s.senses)},
                         {"lower", numbers(s.lower)},
                         {"upper", numbers(s.upper)},
                         {"binary", flags_json(s.binary)}});
  }
  return {{"first_stage",
           {{"cost", numbers(p.first_stage_cost)},
            {"matrix", matrix_json(p.first_stage_matrix)},
            {"senses", senses_string(p.first_stage_senses)},
            {"rhs", numbers(p.first_stage_rhs)},
            {"lower", numbers(p.first_stage_lower)},
            {"upper", numbers(p.first_stage_upper)},
            {"binary", flags_json(p.first_stage_binary)}}},
          {"scenarios", scenarios}};
}

TwoStageProblem parse_problem_payload(const Node& node) {
  TwoStageProblem p;
  const Node first = node["first_stage"];
  p.first_stage_cost = first["cost"].as_doubles();
  p.first_stage_matrix = first["matrix"].as_matrix();
  p.first_stage_senses = first["senses"].as_senses();
  p.first_stage_rhs = first["rhs"].as_doubles();
  p.first_stage_lower = first["lower"].as_doubles();
  p.first_stage_upper = first["upper"].as_doubles();
  p.first_stage_binary = first["binary"].as_flags();
  const Node scenarios = node["scenarios"];
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const Node n = scenarios.item(k);
    Scenario s;
    s.probability = n["probability"].as_double();
    s.recourse_cost = n["cost"].as_doubles();
    s.recourse_matrix = n["recourse_matrix"].as_matrix();
    s.technology_matrix = n["technology_matrix"].as_matrix();
    s.rhs = n["rhs"].as_doubles();
    s.senses = n["senses"].as_senses();
    s.lower = n["lower"].as_doubles();
    s.upper = n["upper"].as_doubles();
    s.binary = n["binary"].as_flags();
    p.scenarios.push_back(std::move(s));
  }
  const std::vector<std::string> issues = validate(p);
  if (!issues.empty()) throw ParseError("payload: " + issues.front());
  return p;
}

json grid_json(const std::vector<std::vector<double>>& grid) {
  json out = json::array();
  for (const auto& row : grid) out.push_back(numbers(row));
  return out;
}

std::vector<std::vector<double>> parse_grid(const Node& node) {
  std::vector<std::vector<double>> out(node.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = node.item(i).as_doubles();
  return out;
}

json mssop_json(const MssopInstance& in) {
  json demand = json::array();
  for (const auto& scenario : in.demand) demand.push_back(grid_json(scenario));
  return {{"items", in.items},
          {"periods", in.periods},
          {"setup_cost", numbers(in.setup_cost)},
          {"freight_cost", numbers(in.freight_cost)},
          {"breakpoint_weight", numbers(in.breakpoint_weight)},
          {"unit_weight", numbers(in.unit_weight)},
          {"holding_cost", numbers(in.holding_cost)},
          {"lost_sales_penalty", numbers(in.lost_sales_penalty)},
          {"initial_inventory", numbers(in.initial_inventory)},
          {"demand", demand},
          {"probability", numbers(in.probability)},
          {"demand_mean", grid_json(in.demand_mean)},
          {"demand_sd", grid_json(in.demand_sd)}};
}

MssopInstance parse_mssop(const Node& node) {
  MssopInstance in;
  in.items = node["items"].as_int32();
  in.periods = node["periods"].as_int32();
  in.setup_cost = node["setup_cost"].as_doubles();
  in.freight_cost = node["freight_cost"].as_doubles();
  in.breakpoint_weight = node["breakpoint_weight"].as_doubles();
  in.unit_weight = node["unit_weight"].as_doubles();
  in.holding_cost = node["holding_cost"].as_doubles();
  in.lost_sales_penalty = node["lost_sales_penalty"].as_doubles();
  in.initial_inventory = node["initial_inventory"].as_doubles();
  const Node demand = node["demand"];
  for (std::size_t k = 0; k < demand.size(); ++k) {
    in.demand.push_back(parse_grid(demand.item(k)));
  }
  in.probability = node["probability"].as_doubles();
  in.demand_mean = parse_grid(node["demand_mean"]);
  in.demand_sd = parse_grid(node["demand_sd"]);
  const std::vector<std::string> issues = in.validate();
  if (!issues.empty()) throw ParseError("payload: " + issues.front());
  return in;
}

json knapsack_spec_json(const KnapsackGenSpec& s) {
  return {{"n1", s.n1}, {"n2", s.n2}, {"m1", s.m1}, {"m2", s.m2},
          {"scenarios", s.scenarios}, {"seed", s.seed},
          {"letter", std::string(1, s.letter)}};
}

json mssop_spec_json(const MssopGenSpec& s) {
  return {{"items", s.items}, {"periods", s.periods},
          {"scenarios", s.scenarios}, {"lumpy_fraction", number(s.lumpy_fraction)},
          {"seed", s.seed}};
}

Fields problem_fields(const ProblemFile& f) {
  json rng = {{"name", std::string(Rng::kName)}};
  rng["seed"] = f.seed ? json(*f.seed) : json(nullptr);
  json generator = nullptr;
  json payload;
  switch (f.kind) {
    case ProblemKind::kGeneric:
      payload = problem_json(f.problem);
      break;
    case ProblemKind::kKnapsack:
      if (!f.knapsack_spec) throw InvalidModel("knapsack file without a generator spec");
      generator = knapsack_spec_json(*f.knapsack_spec);
      payload = problem_json(f.problem);
      break;
    case ProblemKind::kMssop:
      if (!f.mssop_spec || !f.mssop) {
        throw InvalidModel("mssop file needs a generator spec and an instance");
      }
      generator = mssop_spec_json(*f.mssop_spec);
      payload = mssop_json(*f.mssop);
      break;
  }
  return {{"format", kProblemFormat},
          {"version", kFormatVersion},
          {"kind", kind_name(f.kind)},
          {"name", f.name},
          {"rng", rng},
          {"generator", generator},
          {"payload", payload}};
}

std::map<std::string, std::string> parse_string_map(const Node& node,
                                                    const json& j) {
  if (!j.is_object()) node.fail("expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) node.fail("value of '" + key + "' is not a string");
    out[key] = value.get<std::string>();
  }
  return out;
}

}  // namespace

std::string kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kGeneric: return "generic-sp2";
    case ProblemKind::kKnapsack: return "knapsack";
    case ProblemKind::kMssop: return "mssop";
  }
  return "generic-sp2";
}

TwoStageProblem ProblemFile::materialize() const {
  if (kind == ProblemKind::kMssop) {
    if (!mssop) throw InvalidModel("mssop file without an instance");
    return build_mssop_two_stage(*mssop);
  }
  return problem;
}

ProblemFile make_problem_file(const KnapsackGenSpec& spec) {
  ProblemFile f;
  f.kind = ProblemKind::kKnapsack;
  f.name = spec.name();
  f.seed = spec.seed;
  f.knapsack_spec = spec;
  f.problem = generate_knapsack(spec);
  return f;
}

ProblemFile make_problem_file(const MssopGenSpec& spec) {
  ProblemFile f;
  f.kind = ProblemKind::kMssop;
  f.name = "M." + std::to_string(spec.items) + "." + std::to_string(spec.periods) +
           "." + std::to_string(spec.scenarios) + "." + std::to_string(spec.seed);
  f.seed = spec.seed;
  f.mssop_spec = spec;
  f.mssop = generate_mssop_instance(spec);
  return f;
}

ProblemFile make_problem_file(TwoStageProblem problem, std::string name) {
  ProblemFile f;
  f.name = std::move(name);
  f.problem = std::move(problem);
  return f;
}

std::string serialize_problem(const ProblemFile& file) {
  return write_document(problem_fields(file));
}

ProblemFile parse_problem(std::string_view text) {
  const json doc = read_document(text, kProblemFormat);
  const Node root(doc, "");
  ProblemFile f;
  const std::string kind = root["kind"].as_string();
  if (kind == "generic-sp2") {
    f.kind = ProblemKind::kGeneric;
  } else if (kind == "knapsack") {
    f.kind = ProblemKind::kKnapsack;
  } else if (kind == "mssop") {
    f.kind = ProblemKind::kMssop;
  } else {
    root["kind"].fail("unknown kind '" + kind + "'");
  }
  f.name = root["name"].as_string();
  const Node rng = root["rng"];
  if (rng["name"].as_string() != Rng::kName) {
    rng["name"].fail("unsupported generator '" + rng["name"].as_string() + "'");
  }
  if (!rng["seed"].is_null()) f.seed = rng["seed"].as_u64();
  const Node generator = root["generator"];
  const Node payload = root["payload"];
  switch (f.kind) {
    case ProblemKind::kGeneric:
      f.problem = parse_problem_payload(payload);
      break;
    case ProblemKind::kKnapsack: {
      KnapsackGenSpec s;
      s.n1 = generator["n1"].as_int32();
      s.n2 = generator["n2"].as_int32();
      s.m1 = generator["m1"].as_int32();
      s.m2 = generator["m2"].as_int32();
      s.scenarios = generator["scenarios"].as_int32();
      s.seed = generator["seed"].as_u64();
      const std::string letter = generator["letter"].as_string();
      if (letter.size() != 1) generator["letter"].fail("expected one character");
      s.letter = letter[0];
      f.knapsack_spec = s;
      f.problem = parse_problem_payload(payload);
      break;
    }
    case ProblemKind::kMssop: {
      MssopGenSpec s;
      s.items = generator["items"].as_int32();
      s.periods = generator["periods"].as_int32();
      s.scenarios = generator["scenarios"].as_int32();
      s.lumpy_fraction = generator["lumpy_fraction"].as_double();
      s.seed = generator["seed"].as_u64();
      f.mssop_spec = s;
      f.mssop = parse_mssop(payload);
      break;
    }
  }
  return f;
}

namespace {

void check_bounds(double lower, double upper, const char* where) {
  if (lower > upper + 1e-9 * std::max(1.0, std::abs(upper))) {
    throw InvalidModel(std::string(where) + ": lower bound " + shortest(lower) +
                       " exceeds upper bound " + shortest(upper));
  }
}

}  // namespace

std::string serialize_result(const ResultFile& r) {
  check_bounds(r.lower_bound, r.upper_bound, "result");
  json objectives = json::object();
  for (const auto& [key, value] : r.objectives) objectives[key] = number(value);
  return write_document({{"format", kResultFormat},
                         {"version", kFormatVersion},
                         {"solver", r.solver},
                         {"config", r.config},
                         {"status", r.status},
                         {"objectives", objectives},
                         {"bounds",
                          {{"lower", number(r.lower_bound)},
                           {"upper", number(r.upper_bound)},
                           {"gap_percent", number(r.gap_percent)}}},
                         {"x", numbers(r.x)},
                         {"history", r.history},
                         {"input_checksum", r.input_checksum}});
}

ResultFile parse_result(std::string_view text) {
  const json doc = read_document(text, kResultFormat);
  const Node root(doc, "");
  ResultFile r;
  r.solver = root["solver"].as_string();
  r.config = parse_string_map(root["config"], doc.at("config"));
  r.status = root["status"].as_string();
  const Node objectives = root["objectives"];
  if (!doc.at("objectives").is_object()) objectives.fail("expected an object");
  for (const auto& [key, value] : doc.at("objectives").items()) {
    r.objectives[key] = Node(value, "objectives." + key).as_double();
  }
  const Node bounds = root["bounds"];
  r.lower_bound = bounds["lower"].as_double();
  r.upper_bound = bounds["upper"].as_double();
  r.gap_percent = bounds["gap_percent"].as_double();
  try {
    check_bounds(r.lower_bound, r.upper_bound, "bounds");
  } catch (const InvalidModel& e) {
    throw ParseError(e.what());
  }
  r.x = root["x"].as_doubles();
  r.history = root["history"].as_string();
  r.input_checksum = root["input_checksum"].as_string();
  return r;
}

std::string serialize_manifest(const RunManifest& m) {
  return write_document({{"format", kManifestFormat},
                         {"version", kFormatVersion},
                         {"subcommand", m.subcommand},
                         {"arguments", m.arguments},
                         {"config", m.config},
                         {"inputs", m.inputs},
                         {"outputs", m.outputs},
                         {"wall_seconds", number(m.wall_seconds)},
                         {"exit_status", m.exit_status}});
}

RunManifest parse_manifest(std::string_view text) {
  const json doc = read_document(text, kManifestFormat);
  const Node root(doc, "");
  RunManifest m;
  m.subcommand = root["subcommand"].as_string();
  m.arguments = root["arguments"].as_strings();
  m.config = parse_string_map(root["config"], doc.at("config"));
  m.inputs = root["inputs"].as_strings();
  m.outputs = root["outputs"].as_strings();
  m.wall_seconds = root["wall_seconds"].as_double();
  m.exit_status = root["exit_status"].as_int32();
  return m;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[h & 0xf];
    h >>= 4;
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  std::filesystem::path temp = path;
  temp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("cannot write " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error("cannot replace " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_plan_csv(std::ostream& out, const ReplenishmentPlan& plan) {
  const std::size_t periods = plan.x.empty() ? 0 : plan.x.front().size();
  out << "item";
  for (std::size_t t = 0; t < periods; ++t) out << ",t" << t + 1;
  out << '\n';
  for (std::size_t i = 0; i < plan.x.size(); ++i) {
    out << i + 1;
    for (double v : plan.x[i]) out << ',' << shortest(v);
    out << '\n';
  }
}

void write_simulation_csv(std::ostream& out,
                          const std::vector<SimulationReport>& reports) {
  out << "policy,replication,lost_sales_count,lost_sales_quantity,"
         "holding_cost,penalty_cost,replenishment_cost,total_cost,demand\n";
  constexpr int kColumns = 7;
  for (const SimulationReport& report : reports) {
    double sums[kColumns] = {};
    for (const ReplicationRecord& r : report.replications) {
      double demand = 0.0;
      for (const auto& item : r.demand) {
        for (double d : item) demand += d;
      }
      const double row[kColumns] = {static_cast<double>(r.lost_sales_count),
                                    r.lost_sales_quantity, r.holding_cost,
                                    r.penalty_cost, r.replenishment_cost,
                                    r.total_cost, demand};
      out << report.policy << ',' << r.replication;
      for (int c = 0; c < kColumns; ++c) {
        out << ',' << shortest(row[c]);
        sums[c] += row[c];
      }
      out << '\n';
    }
    const double n = std::max<std::size_t>(1, report.replications.size());
    out << report.policy << ",mean";
    for (double v : sums) out << ',' << shortest(v / n);
    out << '\n';
  }
}

}  // namespace riskshed
