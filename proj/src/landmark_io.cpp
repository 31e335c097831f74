#include "bilat/landmark_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "bilat/format.hpp"

namespace bilat {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::parse_error, where + ": " + what);
}

// Line and column of a byte offset, both 1-based.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& require_field(const json& obj, const char* name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) parse_fail(where, std::string("missing field '") + name + "'");
  return *it;
}

double read_number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where, "expected a number, got " + v.dump());
  return v.get<double>();
}

long long read_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer landmark index, got " + v.dump());
  return v.get<long long>();
}

std::string read_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  parse_fail(where, "expected a string, got " + v.dump());
}

Matrix read_rows(const json& rows, std::size_t dim, const std::string& where) {
  if (!rows.is_array() || rows.empty()) parse_fail(where, "coordinates must be a nonempty array of rows");
  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string at = where + ", landmark " + std::to_string(k + 1);
    const json& row = rows[k];
    if (!row.is_array()) parse_fail(at, "coordinate row must be an array");
    if (row.size() != dim) {
      throw Error(ErrorCode::dimension_mismatch,
                  at + ": expected " + std::to_string(dim) + " coordinates, got " + std::to_string(row.size()));
    }
    for (std::size_t m = 0; m < dim; ++m) {
      x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = read_number(row[m], at);
    }
  }
  return x;
}

PairingScheme read_scheme(const json& s, const std::string& where) {
  if (!s.is_object()) parse_fail(where, "scheme must be an object with 'pairs' and 'solos'");
  std::vector<std::pair<long long, long long>> pairs;
  std::vector<long long> solos;
  if (auto it = s.find("pairs"); it != s.end()) {
    if (!it->is_array()) parse_fail(where, "scheme.pairs must be an array");
    for (std::size_t p = 0; p < it->size(); ++p) {
      const json& pr = (*it)[p];
      const std::string at = where + ", pair " + std::to_string(p + 1);
      if (!pr.is_array() || pr.size() != 2) parse_fail(at, "each pair must be [left, right]");
      pairs.emplace_back(read_index(pr[0], at), read_index(pr[1], at));
    }
  }
  if (auto it = s.find("solos"); it != s.end()) {
    if (!it->is_array()) parse_fail(where, "scheme.solos must be an array");
    for (const auto& v : *it) solos.push_back(read_index(v, where + ", solos"));
  }
  try {
    return PairingScheme::from_one_based(pairs, solos);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

json without(const json& obj, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
      extra[it.key()] = it.value();
    }
  }
  return extra;
}

void check_subject_shape(const Subject& s, std::size_t index, const PairingScheme& scheme) {
  const std::size_t k = scheme.landmark_count();
  if (s.coords.landmarks() != k) {
    const std::size_t missing = std::min(s.coords.landmarks(), k) + 1;
    throw Error(ErrorCode::scheme_mismatch,
                "subject '" + s.id + "' (#" + std::to_string(index + 1) + "): has " +
                    std::to_string(s.coords.landmarks()) + " landmarks but the scheme " +
                    (s.coords.landmarks() < k ? "references landmark " + std::to_string(missing)
                                              : "covers only " + std::to_string(k)));
  }
}

std::string json_string(const std::string& s) { return json(s).dump(); }

void write_rows(std::ostringstream& out, const Matrix& x, const std::string& indent) {
  out << "[\n";
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    out << indent << "  [";
    for (Eigen::Index m = 0; m < x.cols(); ++m) out << (m ? ", " : "") << format_number(x(k, m));
    out << "]" << (k + 1 < x.rows() ? "," : "") << "\n";
  }
  out << indent << "]";
}

}  // namespace

std::vector<Configuration> LandmarkFile::configurations() const {
  std::vector<Configuration> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) out.push_back(s.coords);
  return out;
}

std::vector<std::string> LandmarkFile::group_labels() const {
  std::vector<std::string> labels;
  for (const auto& s : subjects) {
    if (std::find(labels.begin(), labels.end(), s.group) == labels.end()) labels.push_back(s.group);
  }
  return labels;
}

LandmarkFile parse_landmark_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    parse_fail(source + ":" + std::to_string(line) + ":" + std::to_string(column), "malformed JSON");
  }
  if (!doc.is_object()) parse_fail(source, "top level must be a JSON object");

  const json& dim_json = require_field(doc, "dimension", source);
  if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
    parse_fail(source, "dimension must be a positive integer");
  }
  const auto dim = static_cast<std::size_t>(dim_json.get<long long>());
  PairingScheme scheme = read_scheme(require_field(doc, "scheme", source), source + ", scheme");
  Registration registration = Registration::raw;
  try {
    registration = parse_registration(read_string(require_field(doc, "registration", source), source));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    parse_fail(source, e.what());
  }

  LandmarkFile file{dim, std::move(scheme), registration, {}, {}, {}, {}, {}, {}};
  if (auto it = doc.find("frame"); it != doc.end()) file.frame = read_string(*it, source + ", frame");
  if (auto it = doc.find("provenance"); it != doc.end()) file.provenance = read_string(*it, source + ", provenance");
  if (auto it = doc.find("plane"); it != doc.end()) {
    const std::string at = source + ", plane";
    const json& normal = require_field(*it, "normal", at);
    if (!normal.is_array() || normal.size() != dim) parse_fail(at, "normal must have dimension entries");
    Vector n(static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < dim; ++m) n(static_cast<Eigen::Index>(m)) = read_number(normal[m], at);
    file.plane = Plane(std::move(n), read_number(require_field(*it, "offset", at), at));
  }
  if (auto it = doc.find("mean_shape"); it != doc.end()) {
    file.mean_shape = Configuration(read_rows(*it, dim, source + ", mean_shape"));
  }

  const json& subjects = require_field(doc, "subjects", source);
  if (!subjects.is_array()) parse_fail(source, "subjects must be an array");
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const json& s = subjects[i];
    std::string where = source + ", subject #" + std::to_string(i + 1);
    if (!s.is_object()) parse_fail(where, "subject must be an object");
    std::string id = read_string(require_field(s, "id", where), where);
    where = source + ", subject '" + id + "'";
    std::string group = read_string(require_field(s, "group", where), where);
    Matrix coords = read_rows(require_field(s, "coords", where), dim, where);
    Subject subject{std::move(id), std::move(group), Configuration(std::move(coords)),
                    without(s, {"id", "group", "coords"})};
    check_subject_shape(subject, i, file.scheme);
    file.subjects.push_back(std::move(subject));
  }
  if (file.mean_shape) check_subject_shape({"mean_shape", "", *file.mean_shape, json::object()}, 0, file.scheme);
  file.extra = without(doc, {"dimension", "scheme", "registration", "frame", "provenance", "plane", "mean_shape",
                             "subjects"});
  return file;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "failed writing '" + path.string() + "'");
}

LandmarkFile read_landmark_file(const std::filesystem::path& path) {
  return parse_landmark_json(read_text(path), path.string());
}

LandmarkFile read_landmark_stream(std::istream& in, const std::string& source) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_landmark_json(ss.str(), source);
}

std::string to_landmark_json(const LandmarkFile& file) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"dimension\": " << file.dimension << ",\n";
  out << "  \"scheme\": {\"pairs\": [";
  for (std::size_t p = 0; p < file.scheme.pair_count(); ++p) {
    const auto& pr = file.scheme.pairs()[p];
    out << (p ? ", " : "") << "[" << pr.left + 1 << ", " << pr.right + 1 << "]";
  }
  out << "], \"solos\": [";
  for (std::size_t s = 0; s < file.scheme.solo_count(); ++s) out << (s ? ", " : "") << file.scheme.solos()[s] + 1;
  out << "]},\n";
  out << "  \"registration\": " << json_string(std::string(to_string(file.registration))) << ",\n";
  if (file.frame) out << "  \"frame\": " << json_string(*file.frame) << ",\n";
  if (file.provenance) out << "  \"provenance\": " << json_string(*file.provenance) << ",\n";
  if (file.plane) {
    out << "  \"plane\": {\"normal\": [";
    for (Eigen::Index m = 0; m < file.plane->normal().size(); ++m) {
      out << (m ? ", " : "") << format_number(file.plane->normal()(m));
    }
    out << "], \"offset\": " << format_number(file.plane->offset()) << "},\n";
  }
  if (file.mean_shape) {
    out << "  \"mean_shape\": ";
    write_rows(out, file.mean_shape->coords(), "  ");
    out << ",\n";
  }
  for (auto it = file.extra.begin(); it != file.extra.end(); ++it) {
    out << "  " << json_string(it.key()) << ": " << it.value().dump() << ",\n";
  }
  out << "  \"subjects\": [";
  for (std::size_t i = 0; i < file.subjects.size(); ++i) {
    const Subject& s = file.subjects[i];
    out << (i ? "," : "") << "\n    {\"id\": " << json_string(s.id) << ", \"group\": " << json_string(s.group);
    for (auto it = s.extra.begin(); it != s.extra.end(); ++it) {
      out << ", " << json_string(it.key()) << ": " << it.value().dump();
    }
    out << ", \"coords\": ";
    write_rows(out, s.coords.coords(), "    ");
    out << "}";
  }
  out << (file.subjects.empty() ? "]\n" : "\n  ]\n") << "}\n";
  return out.str();
}

void write_landmark_file(const std::filesystem::path& path, const LandmarkFile& file) {
  write_text(path, to_landmark_json(file));
}

LandmarkFile read_landmark_csv(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
  const std::string side_name = sidecar.string();
  json side;
  try {
    side = json::parse(read_text(sidecar));
  } catch (const json::parse_error& e) {
    parse_fail(side_name, std::string("malformed JSON: ") + e.what());
  }
  PairingScheme scheme = read_scheme(require_field(side, "scheme", side_name), side_name + ", scheme");
  Registration registration = Registration::raw;
  if (auto it = side.find("registration"); it != side.end()) {
    registration = parse_registration(read_string(*it, side_name));
  }

  std::istringstream in(read_text(csv));
  const std::string name = csv.string();
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  struct Pending {
    std::string id, group;
    std::map<std::size_t, std::vector<double>> rows;
  };
  std::vector<Pending> subjects;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    const std::string at = name + ":" + std::to_string(line_no);
    if (dim == 0) {
      if (cells.size() < 4 || cells[0] != "id" || cells[1] != "group" || cells[2] != "landmark") {
        parse_fail(at, "header must be id,group,landmark,c1,...,cM");
      }
      dim = cells.size() - 3;
      continue;
    }
    if (cells.size() != dim + 3) parse_fail(at, "expected " + std::to_string(dim + 3) + " fields");
    long long landmark = 0;
    std::vector<double> row(dim);
    try {
      std::size_t used = 0;
      landmark = std::stoll(cells[2], &used);
      if (used != cells[2].size()) throw std::invalid_argument("landmark");
      for (std::size_t m = 0; m < dim; ++m) {
        row[m] = std::stod(cells[3 + m], &used);
        if (used != cells[3 + m].size()) throw std::invalid_argument("coordinate");
      }
    } catch (const std::logic_error&) {
      parse_fail(at, "subject '" + cells[0] + "': malformed number");
    }
    if (landmark < 1 || static_cast<std::size_t>(landmark) > scheme.landmark_count()) {
      throw Error(ErrorCode::index_out_of_range, at + ": subject '" + cells[0] + "': landmark " +
                                                     std::to_string(landmark) + " outside 1.." +
                                                     std::to_string(scheme.landmark_count()));
    }
    auto it = std::find_if(subjects.begin(), subjects.end(), [&](const Pending& p) { return p.id == cells[0]; });
    if (it == subjects.end()) {
      subjects.push_back({cells[0], cells[1], {}});
      it = subjects.end() - 1;
    }
    if (it->group != cells[1]) parse_fail(at, "subject '" + cells[0] + "' appears with two group labels");
    if (!it->rows.emplace(static_cast<std::size_t>(landmark), std::move(row)).second) {
      throw Error(ErrorCode::duplicate_index,
                  at + ": subject '" + cells[0] + "': landmark " + std::to_string(landmark) + " repeated");
    }
  }
  if (dim == 0) parse_fail(name, "empty CSV");

  LandmarkFile file{dim, std::move(scheme), registration, {}, {}, {}, {}, {}, {}};
  if (auto it = side.find("frame"); it != side.end()) file.frame = read_string(*it, side_name);
  for (auto& p : subjects) {
    Matrix x(static_cast<Eigen::Index>(file.scheme.landmark_count()), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 1; k <= file.scheme.landmark_count(); ++k) {
      auto r = p.rows.find(k);
      if (r == p.rows.end()) {
        throw Error(ErrorCode::missing_index,
                    name + ": subject '" + p.id + "': landmark " + std::to_string(k) + " missing");
      }
      for (std::size_t m = 0; m < dim; ++m) {
        x(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(m)) = r->second[m];
      }
    }
    file.subjects.push_back({p.id, p.group, Configuration(std::move(x)), json::object()});
  }
  return file;
}

}  // namespace bilat
