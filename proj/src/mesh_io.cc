#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "polyiso/error.h"
#include "polyiso/mesh.h"

namespace polyiso {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string_view> tokens;
};

// Non-empty lines with comments stripped, split on whitespace.
std::vector<Line> Tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    number++;
    std::string_view raw = text.substr(pos, end - pos);
    if (size_t hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    Line line{number, {}};
    size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) i++;
      size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) j++;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double ParseDouble(std::string_view tok, int line) {
  double v = 0.0;
  const char *first = tok.data();
  if (!tok.empty() && tok.front() == '+') first++;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("bad number '" + std::string(tok) + "'", line);
  }
  return v;
}

long ParseInt(std::string_view tok, int line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("bad integer '" + std::string(tok) + "'", line);
  }
  return v;
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

TriangleMesh ReadOff(std::string_view text) {
  const std::vector<Line> lines = Tokenize(text);
  if (lines.empty() || lines[0].tokens[0] != "OFF") {
    throw ParseError("missing OFF header", lines.empty() ? 1 : lines[0].number);
  }
  size_t li = 0;
  std::vector<std::string_view> counts(lines[0].tokens.begin() + 1,
                                       lines[0].tokens.end());
  int counts_line = lines[0].number;
  if (counts.empty()) {
    if (lines.size() < 2) throw ParseError("missing counts line", lines[0].number + 1);
    li = 1;
    counts = lines[1].tokens;
    counts_line = lines[1].number;
  }
  if (counts.size() < 2 || counts.size() > 3) {
    throw ParseError("counts line must be 'V F [E]'", counts_line);
  }
  const long nv = ParseInt(counts[0], counts_line);
  const long nf = ParseInt(counts[1], counts_line);
  if (nv < 0 || nf < 0) throw ParseError("negative count", counts_line);
  li++;

  std::vector<Point3> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; i++, li++) {
    if (li >= lines.size()) {
      throw ParseError("unexpected end of file in vertex list",
                       lines.back().number + 1);
    }
    const Line &l = lines[li];
    if (l.tokens.size() != 3) {
      throw ParseError("vertex line needs 3 coordinates", l.number);
    }
    vertices.push_back({ParseDouble(l.tokens[0], l.number),
                        ParseDouble(l.tokens[1], l.number),
                        ParseDouble(l.tokens[2], l.number)});
  }

  std::vector<Face> faces;
  faces.reserve(nf);
  for (long i = 0; i < nf; i++, li++) {
    if (li >= lines.size()) {
      throw ParseError("unexpected end of file in face list",
                       lines.back().number + 1);
    }
    const Line &l = lines[li];
    const long arity = ParseInt(l.tokens[0], l.number);
    if (arity != 3) throw ParseError("non-triangular face", l.number);
    if (l.tokens.size() != 4) {
      throw ParseError("face line needs exactly 3 indices", l.number);
    }
    Face f{};
    for (int k = 0; k < 3; k++) {
      const long idx = ParseInt(l.tokens[k + 1], l.number);
      if (idx < 0 || idx >= nv) throw ParseError("index out of range", l.number);
      f[k] = static_cast<int>(idx);
    }
    faces.push_back(f);
  }
  if (li < lines.size()) {
    throw ParseError("trailing content after face list", lines[li].number);
  }
  return TriangleMesh(std::move(vertices), std::move(faces));
}

std::string WriteOff(const TriangleMesh &m) {
  std::string out = "OFF\n";
  out += std::to_string(m.NumVertices()) + " " + std::to_string(m.NumFaces()) +
         " " + std::to_string(m.NumEdges()) + "\n";
  for (const Point3 &p : m.vertices()) {
    out += FormatDouble(p.x) + " " + FormatDouble(p.y) + " " + FormatDouble(p.z) + "\n";
  }
  for (const Face &f : m.faces()) {
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " +
           std::to_string(f[2]) + "\n";
  }
  return out;
}

std::string WriteObj(const TriangleMesh &m) {
  std::string out;
  for (const Point3 &p : m.vertices()) {
    out += "v " + FormatDouble(p.x) + " " + FormatDouble(p.y) + " " +
           FormatDouble(p.z) + "\n";
  }
  for (const Face &f : m.faces()) {
    out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) +
           " " + std::to_string(f[2] + 1) + "\n";
  }
  return out;
}

TriangleMesh ReadOffFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ReadOff(ss.str());
}

void WriteTextFile(const std::string &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace polyiso
