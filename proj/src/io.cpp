#include "fraccap/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fraccap {

namespace {

using nlohmann::json;

std::array<double, 3> parse_point3(const json& j) {
  std::array<double, 3> p{};
  if (!j.is_array() || j.size() > 3) throw std::invalid_argument("point must be an array of <= 3 numbers");
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
  return p;
}

}  // namespace

Region region_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("region must be a JSON object");
  if (j.contains("op")) {
    std::string op = j.at("op").get<std::string>();
    const json& args = j.at("args");
    if (!args.is_array() || args.empty()) throw std::invalid_argument("combinator needs args");
    if (op == "complement") {
      if (args.size() != 1) throw std::invalid_argument("complement takes one argument");
      return Region::complement(region_from_json(args[0]));
    }
    if (op == "intersect" || op == "union") {
      if (args.size() < 2) throw std::invalid_argument(op + " takes >= 2 arguments");
      Region acc = region_from_json(args[0]);
      for (std::size_t i = 1; i < args.size(); ++i) {
        Region next = region_from_json(args[i]);
        acc = (op == "intersect") ? Region::intersect(acc, next) : Region::unite(acc, next);
      }
      return acc;
    }
    throw std::invalid_argument("unknown region op: " + op);
  }
  std::string shape = j.at("shape").get<std::string>();
  if (shape == "halfspace") return Region::halfspace();
  if (shape == "ball") {
    std::array<double, 3> c{};
    if (j.contains("c")) c = parse_point3(j.at("c"));
    return Region::ball(j.at("r").get<double>(), c);
  }
  if (shape == "sector") {
    std::array<double, 2> apex{};
    if (j.contains("apex")) {
      auto p = parse_point3(j.at("apex"));
      apex = {p[0], p[1]};
    }
    return Region::sector(j.at("alpha").get<double>(), j.at("beta").get<double>(), apex);
  }
  throw std::invalid_argument("unknown region shape: " + shape);
}

json region_to_json(const Region& region) {
  switch (region.kind()) {
    case Region::Kind::Halfspace:
      return json{{"shape", "halfspace"}};
    case Region::Kind::Ball: {
      auto c = region.ball_center();
      return json{{"shape", "ball"}, {"r", region.ball_radius()}, {"c", {c[0], c[1], c[2]}}};
    }
    case Region::Kind::Sector: {
      auto p = region.sector_apex();
      return json{{"shape", "sector"},
                  {"alpha", region.sector_alpha()},
                  {"beta", region.sector_beta()},
                  {"apex", {p[0], p[1]}}};
    }
    case Region::Kind::Complement:
      return json{{"op", "complement"}, {"args", {region_to_json(region.arg(0))}}};
    case Region::Kind::Intersect:
    case Region::Kind::Union: {
      json args = json::array();
      for (int i = 0; i < region.arg_count(); ++i) args.push_back(region_to_json(region.arg(i)));
      return json{{"op", region.kind() == Region::Kind::Intersect ? "intersect" : "union"},
                  {"args", args}};
    }
  }
  throw std::logic_error("unreachable region kind");
}

Region load_region(const std::string& path) {
  return region_from_json(json::parse(read_text_file(path)));
}

void save_gridset(const GridSet& set, const std::string& path) {
  json header;
  header["format"] = "fraccap-gridset-v1";
  header["n"] = set.dim();
  header["resolution"] = set.resolution();
  json lo = json::array(), hi = json::array();
  for (int a = 0; a < set.dim(); ++a) {
    lo.push_back(set.window().lo[a]);
    hi.push_back(set.window().hi[a]);
  }
  header["window"] = json{{"lo", lo}, {"hi", hi}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header.dump() << '\n';

  std::int64_t n_bytes = (set.cell_count() + 7) / 8;
  std::string bytes(static_cast<std::size_t>(n_bytes), '\0');
  const auto& words = set.words();
  for (std::int64_t b = 0; b < n_bytes; ++b) {
    std::uint64_t w = words[static_cast<std::size_t>(b / 8)];
    bytes[static_cast<std::size_t>(b)] = static_cast<char>((w >> ((b % 8) * 8)) & 0xFF);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridSet load_gridset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) throw std::runtime_error("missing header: " + path);
  json header = json::parse(header_line);
  if (header.at("format").get<std::string>() != "fraccap-gridset-v1") {
    throw std::runtime_error("unknown grid file format in " + path);
  }
  int n = header.at("n").get<int>();
  int res = header.at("resolution").get<int>();
  Box w;
  w.n = n;
  for (int a = 0; a < n; ++a) {
    w.lo[a] = header.at("window").at("lo").at(static_cast<std::size_t>(a)).get<double>();
    w.hi[a] = header.at("window").at("hi").at(static_cast<std::size_t>(a)).get<double>();
  }
  GridSet set(w, res);
  std::int64_t n_bytes = (set.cell_count() + 7) / 8;
  std::string bytes(static_cast<std::size_t>(n_bytes), '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(n_bytes));
  if (in.gcount() != n_bytes) throw std::runtime_error("truncated grid file: " + path);
  auto& words = set.mutable_words();
  for (std::int64_t b = 0; b < n_bytes; ++b) {
    auto byte = static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[static_cast<std::size_t>(b)]));
    words[static_cast<std::size_t>(b / 8)] |= byte << ((b % 8) * 8);
  }
  return set;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fraccap
