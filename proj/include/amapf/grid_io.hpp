#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amapf/errors.hpp"

namespace amapf {

struct Cell {
  int x = 0;  // column
  int y = 0;  // row, 0 = first map row
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// 4-connected occupancy grid as read from a MovingAI .map file.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, bool fill = true) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ParseError("map dimensions must be positive");
    passable_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  bool passable(Cell c) const { return in_bounds(c) && passable_[index(c)] != 0; }
  bool passable(int x, int y) const { return passable(Cell{x, y}); }
  void set_passable(Cell c, bool value) { passable_.at(index(c)) = value ? 1 : 0; }

  std::size_t passable_count() const {
    std::size_t n = 0;
    for (auto p : passable_) n += p;
    return n;
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> passable_;
};

struct ScenarioEntry {
  int bucket = 0;
  std::string map_name;
  int map_width = 0;
  int map_height = 0;
  Cell start;
  Cell goal;
  double optimal_length = 0.0;  // single-agent length, informational only
};

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  // trailing blank lines carry no content
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
  return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

inline int parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw ParseError("not an integer: '" + s + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("not an integer: '" + s + "'", line);
  }
}

inline double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("not a number: '" + s + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("not a number: '" + s + "'", line);
  }
}

inline bool is_passable_char(char c) noexcept { return c == '.' || c == 'G' || c == 'S'; }

}  // namespace detail

// Parses MovingAI map text. Passable: '.', 'G', 'S'; everything else is blocked.
inline GridMap parse_map(std::string_view text) {
  auto lines = detail::split_lines(text);
  int height = -1;
  int width = -1;
  std::size_t i = 0;
  bool saw_type = false;
  bool saw_map = false;
  for (; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    auto fields = detail::split_fields(lines[i]);
    if (fields.empty()) continue;
    if (fields[0] == "map") {
      if (fields.size() != 1) throw ParseError("malformed header: 'map' takes no arguments", lineno);
      saw_map = true;
      ++i;
      break;
    }
    if (fields.size() != 2) throw ParseError("malformed header line '" + lines[i] + "'", lineno);
    if (fields[0] == "type") {
      saw_type = true;
    } else if (fields[0] == "height") {
      height = detail::parse_int(fields[1], lineno);
    } else if (fields[0] == "width") {
      width = detail::parse_int(fields[1], lineno);
    } else {
      throw ParseError("malformed header: unknown key '" + fields[0] + "'", lineno);
    }
  }
  if (!saw_type) throw ParseError("malformed header: missing 'type'");
  if (height < 1 || width < 1) throw ParseError("malformed header: missing or invalid width/height");
  if (!saw_map) throw ParseError("malformed header: missing 'map' line");

  const std::size_t first_row = i;
  if (lines.size() - first_row != static_cast<std::size_t>(height)) {
    throw ParseError("row count mismatch: header says " + std::to_string(height) + ", got " +
                         std::to_string(lines.size() - first_row),
                     static_cast<int>(lines.size()));
  }
  GridMap map(width, height, false);
  for (int y = 0; y < height; ++y) {
    const std::string& row = lines[first_row + y];
    const int lineno = static_cast<int>(first_row + y) + 1;
    if (row.size() != static_cast<std::size_t>(width)) {
      throw ParseError("row length mismatch: expected " + std::to_string(width) + ", got " +
                           std::to_string(row.size()),
                       lineno);
    }
    for (int x = 0; x < width; ++x) map.set_passable({x, y}, detail::is_passable_char(row[x]));
  }
  return map;
}

inline std::string write_map(const GridMap& map) {
  std::string out = "type octile\nheight " + std::to_string(map.height()) + "\nwidth " +
                    std::to_string(map.width()) + "\nmap\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) out += map.passable(x, y) ? '.' : '@';
    out += '\n';
  }
  return out;
}

// Parses a MovingAI .scen body. The "version" line is optional.
inline std::vector<ScenarioEntry> parse_scenario(std::string_view text) {
  auto lines = detail::split_lines(text);
  std::vector<ScenarioEntry> entries;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    auto fields = detail::split_fields(lines[i]);
    if (fields.empty()) continue;
    if (i == 0 && fields[0] == "version") continue;
    if (fields.size() != 9) {
      throw ParseError("expected 9 fields, got " + std::to_string(fields.size()), lineno);
    }
    ScenarioEntry e;
    e.bucket = detail::parse_int(fields[0], lineno);
    e.map_name = fields[1];
    e.map_width = detail::parse_int(fields[2], lineno);
    e.map_height = detail::parse_int(fields[3], lineno);
    e.start = {detail::parse_int(fields[4], lineno), detail::parse_int(fields[5], lineno)};
    e.goal = {detail::parse_int(fields[6], lineno), detail::parse_int(fields[7], lineno)};
    e.optimal_length = detail::parse_double(fields[8], lineno);
    auto inside = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < e.map_width && c.y < e.map_height; };
    if (!inside(e.start) || !inside(e.goal)) {
      throw ParseError("start or goal outside declared map dimensions", lineno);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::string write_scenario(const std::vector<ScenarioEntry>& entries) {
  std::ostringstream out;
  out << "version 1\n";
  for (const auto& e : entries) {
    out << e.bucket << '\t' << e.map_name << '\t' << e.map_width << '\t' << e.map_height << '\t'
        << e.start.x << '\t' << e.start.y << '\t' << e.goal.x << '\t' << e.goal.y << '\t'
        << e.optimal_length << '\n';
  }
  return out.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline GridMap load_map(const std::string& path) { return parse_map(read_text_file(path)); }
inline std::vector<ScenarioEntry> load_scenario(const std::string& path) {
  return parse_scenario(read_text_file(path));
}

}  // namespace amapf
