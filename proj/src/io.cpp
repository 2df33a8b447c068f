#include "spllns/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spllns {

using Json = nlohmann::ordered_json;

namespace {

Json number_to_json(double v) {
  constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53
  if (std::trunc(v) == v && std::abs(v) < kExactIntLimit) {
    return Json(static_cast<long long>(v));
  }
  return Json(v);
}

std::string syntax_location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(syntax_location(text, e.byte), "malformed JSON");
  }
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

long long as_integer(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::trunc(d) == d) return static_cast<long long>(d);
  }
  throw ParseError(where, "expected an integer");
}

const std::string& as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected a string");
  return v.get_ref<const std::string&>();
}

const Json& as_array(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where, "expected an array");
  return v;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("/", "expected a JSON object");

  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    name = as_string(*it, "/name");
  }
  if (auto it = doc.find("sense"); it != doc.end()) {
    if (as_string(*it, "/sense") != "min") {
      throw ParseError("/sense", "only \"min\" is supported");
    }
  }
  const long long n = as_integer(field(doc, "num_vars", "/"), "/num_vars");
  if (n < 0) throw ParseError("/num_vars", "must be non-negative");

  const Json& obj = as_array(field(doc, "objective", "/"), "/objective");
  if (static_cast<long long>(obj.size()) != n) {
    throw ParseError("/objective", "length " + std::to_string(obj.size()) +
                                       " does not match num_vars " +
                                       std::to_string(n));
  }
  std::vector<double> objective;
  objective.reserve(obj.size());
  for (std::size_t i = 0; i < obj.size(); ++i) {
    objective.push_back(as_number(obj[i], "/objective/" + std::to_string(i)));
  }

  if (auto it = doc.find("kinds"); it != doc.end()) {
    const Json& kinds = as_array(*it, "/kinds");
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      const std::string where = "/kinds/" + std::to_string(i);
      if (as_string(kinds[i], where) != "binary") {
        throw ParseError(where, "non-binary variable kind \"" +
                                    kinds[i].get<std::string>() + "\"");
      }
    }
  }

  std::vector<Constraint> constraints;
  const Json& rows = as_array(field(doc, "constraints", "/"), "/constraints");
  constraints.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const std::string where = "/constraints/" + std::to_string(j);
    const Json& row = rows[j];
    if (!row.is_object()) throw ParseError(where, "expected an object");
    if (auto it = row.find("op"); it != row.end()) {
      if (as_string(*it, where + "/op") != "le") {
        throw ParseError(where + "/op", "only \"le\" rows are supported");
      }
    }
    Constraint c;
    c.rhs = as_number(field(row, "rhs", where), where + "/rhs");
    const Json& coefs = as_array(field(row, "coefs", where), where + "/coefs");
    if (coefs.empty()) throw ParseError(where + "/coefs", "empty constraint");
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < coefs.size(); ++k) {
      const std::string at = where + "/coefs/" + std::to_string(k);
      const Json& pair = coefs[k];
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError(at, "expected [index, coefficient]");
      }
      const long long idx = as_integer(pair[0], at + "/0");
      if (idx < 0 || idx >= n) {
        throw ParseError(at + "/0", "index out of range (" +
                                        std::to_string(idx) + ")");
      }
      if (seen[idx]) {
        throw ParseError(at + "/0", "duplicate index " + std::to_string(idx));
      }
      seen[idx] = 1;
      c.terms.push_back({static_cast<int>(idx), as_number(pair[1], at + "/1")});
    }
    constraints.push_back(std::move(c));
  }

  try {
    return Instance(std::move(name), std::move(objective),
                    std::move(constraints));
  } catch (const InvalidInstance& e) {
    throw ParseError("/", e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  Json doc;
  doc["name"] = inst.name();
  doc["sense"] = "min";
  doc["num_vars"] = inst.num_vars();
  Json obj = Json::array();
  for (double c : inst.objective()) obj.push_back(number_to_json(c));
  doc["objective"] = std::move(obj);
  Json rows = Json::array();
  for (const Constraint& c : inst.constraints()) {
    Json coefs = Json::array();
    for (const Term& t : c.terms) {
      coefs.push_back(Json::array({t.var, number_to_json(t.coef)}));
    }
    Json row;
    row["coefs"] = std::move(coefs);
    row["op"] = "le";
    row["rhs"] = number_to_json(c.rhs);
    rows.push_back(std::move(row));
  }
  doc["constraints"] = std::move(rows);
  return doc.dump() + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Instance read_instance_file(const std::filesystem::path& path) {
  return parse_instance(read_text_file(path));
}

void write_instance_file(const std::filesystem::path& path,
                         const Instance& inst) {
  write_text_file(path, serialize_instance(inst));
}

std::string trajectory_record_to_json(const TrajectoryRecord& r) {
  Json j;
  j["t"] = r.t;
  j["time_s"] = r.time_s;
  j["incumbent"] = r.incumbent.ToBitString();
  j["obj"] = number_to_json(r.obj);
  j["eta"] = r.eta;
  j["tau"] = r.tau;
  j["sigma"] = r.sigma;
  j["destroyed"] = r.destroyed;
  Json pool = Json::array();
  for (double v : r.pool_objs) pool.push_back(number_to_json(v));
  j["pool_objs"] = std::move(pool);
  j["chosen"] = r.chosen.ToBitString();
  j["accepted"] = r.accepted;
  j["best_obj"] = number_to_json(r.best_obj);
  return j.dump();
}

TrajectoryRecord parse_trajectory_record(std::string_view line) {
  const Json j = parse_json(line);
  if (!j.is_object()) throw ParseError("/", "expected a JSON object");
  TrajectoryRecord r;
  r.t = as_integer(field(j, "t", "/"), "/t");
  r.time_s = as_number(field(j, "time_s", "/"), "/time_s");
  try {
    r.incumbent = Assignment::FromBitString(
        as_string(field(j, "incumbent", "/"), "/incumbent"));
    r.chosen =
        Assignment::FromBitString(as_string(field(j, "chosen", "/"), "/chosen"));
  } catch (const std::invalid_argument& e) {
    throw ParseError("/incumbent", e.what());
  }
  r.obj = as_number(field(j, "obj", "/"), "/obj");
  r.eta = static_cast<int>(as_integer(field(j, "eta", "/"), "/eta"));
  r.tau = as_number(field(j, "tau", "/"), "/tau");
  r.sigma = as_number(field(j, "sigma", "/"), "/sigma");
  const Json& destroyed = as_array(field(j, "destroyed", "/"), "/destroyed");
  for (std::size_t i = 0; i < destroyed.size(); ++i) {
    r.destroyed.push_back(static_cast<int>(
        as_integer(destroyed[i], "/destroyed/" + std::to_string(i))));
  }
  const Json& pool = as_array(field(j, "pool_objs", "/"), "/pool_objs");
  for (std::size_t i = 0; i < pool.size(); ++i) {
    r.pool_objs.push_back(as_number(pool[i], "/pool_objs/" + std::to_string(i)));
  }
  const Json& acc = field(j, "accepted", "/");
  if (!acc.is_boolean()) throw ParseError("/accepted", "expected a boolean");
  r.accepted = acc.get<bool>();
  r.best_obj = as_number(field(j, "best_obj", "/"), "/best_obj");
  return r;
}

void write_trajectory(std::ostream& out,
                      const std::vector<TrajectoryRecord>& records) {
  for (const TrajectoryRecord& r : records) {
    out << trajectory_record_to_json(r) << '\n';
  }
}

void write_trajectory_file(const std::filesystem::path& path,
                           const std::vector<TrajectoryRecord>& records) {
  std::ostringstream ss;
  write_trajectory(ss, records);
  write_text_file(path, ss.str());
}

std::vector<TrajectoryRecord> read_trajectory_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<TrajectoryRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.push_back(parse_trajectory_record(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + " " + e.location(),
                       e.message());
    }
  }
  return records;
}

}  // namespace spllns
