#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "covgame/instances.hpp"

namespace covgame {

using ordered_json = nlohmann::ordered_json;

namespace {

// 1-based line and column of a byte offset.
std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ordered_json parse_json(std::string_view text) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_col(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
  }
}

void expect_keys(const ordered_json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end())
      throw ParseError(where + "." + key, "unknown field");
  }
  for (const char* k : keys)
    if (!obj.contains(k)) throw ParseError(where + "." + k, "missing field");
}

double read_number(const ordered_json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

std::size_t read_index(const ordered_json& v, const std::string& where) {
  if (!v.is_number_unsigned()) throw ParseError(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

std::string serialize_instance(const CoveringInstance& inst) {
  ordered_json doc;
  doc["n"] = inst.num_agents();
  doc["costs"] = inst.costs();
  auto sets = ordered_json::array();
  for (const auto& s : inst.sets()) {
    ordered_json entry;
    entry["members"] = s.members;
    entry["weight"] = s.weight;
    sets.push_back(std::move(entry));
  }
  doc["sets"] = std::move(sets);
  return doc.dump() + "\n";
}

CoveringInstance parse_instance(std::string_view text) {
  const ordered_json doc = parse_json(text);
  expect_keys(doc, "$", {"n", "costs", "sets"});
  const std::size_t n = read_index(doc["n"], "$.n");

  const auto& jcosts = doc["costs"];
  if (!jcosts.is_array()) throw ParseError("$.costs", "expected an array");
  if (jcosts.size() != n)
    throw ParseError("$.costs", "has " + std::to_string(jcosts.size()) + " entries, expected n = " + std::to_string(n));
  std::vector<double> costs;
  for (std::size_t i = 0; i < n; ++i) costs.push_back(read_number(jcosts[i], "$.costs[" + std::to_string(i) + "]"));

  const auto& jsets = doc["sets"];
  if (!jsets.is_array()) throw ParseError("$.sets", "expected an array");
  std::vector<WeightedSet> sets;
  for (std::size_t k = 0; k < jsets.size(); ++k) {
    const std::string where = "$.sets[" + std::to_string(k) + "]";
    expect_keys(jsets[k], where, {"members", "weight"});
    const auto& jm = jsets[k]["members"];
    if (!jm.is_array()) throw ParseError(where + ".members", "expected an array");
    WeightedSet s;
    for (std::size_t j = 0; j < jm.size(); ++j)
      s.members.push_back(read_index(jm[j], where + ".members[" + std::to_string(j) + "]"));
    s.weight = read_number(jsets[k]["weight"], where + ".weight");
    sets.push_back(std::move(s));
  }

  try {
    return CoveringInstance(std::move(costs), std::move(sets));
  } catch (const InstanceError& e) {
    throw ParseError("$", e.what());
  }
}

std::string serialize_state(const JointState& s) {
  ordered_json doc;
  doc["actions"] = s.to_bits();
  return doc.dump() + "\n";
}

JointState parse_state(std::string_view text) {
  const ordered_json doc = parse_json(text);
  expect_keys(doc, "$", {"actions"});
  if (!doc["actions"].is_string()) throw ParseError("$.actions", "expected a string of 0/1");
  try {
    return JointState::from_bits(doc["actions"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError("$.actions", e.what());
  }
}

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CoveringInstance load_instance(const std::filesystem::path& path) { return parse_instance(read_text_file(path)); }

JointState load_state(const std::filesystem::path& path) { return parse_state(read_text_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace covgame
