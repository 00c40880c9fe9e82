#pragma once

// Readers and writers for the supported graph file formats:
//
//   edgelist  one `source,target` pair per line; `#` comments, blank lines
//   pajek     `*Vertices N`, optional `id "label"` lines, `*Arcs` / `*Edges`
//             (plus the `*Arcslist` / `*Edgeslist` variants), 1-based ids
//   asd       `N M` header then exactly M lines of 0-based `src dst`
//
// All readers accept `\n` and `\r\n` line endings. docs/formats.md has the
// byte-level description.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cyclerank/error.hpp"
#include "cyclerank/graph.hpp"

namespace cyclerank {

enum class Format { edgelist, pajek, asd };

inline std::string_view format_name(Format f) {
  switch (f) {
    case Format::edgelist: return "edgelist";
    case Format::pajek: return "pajek";
    case Format::asd: return "asd";
  }
  return "?";
}

inline Format parse_format(std::string_view name) {
  if (name == "edgelist" || name == "csv") return Format::edgelist;
  if (name == "pajek" || name == "net") return Format::pajek;
  if (name == "asd") return Format::asd;
  throw InvalidInput("unknown format '" + std::string(name) + "'");
}

inline Format format_from_extension(std::string_view path) {
  auto dot = path.rfind('.');
  std::string ext;
  if (dot != std::string_view::npos)
    for (char c : path.substr(dot + 1))
      ext.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (ext == "csv" || ext == "edgelist" || ext == "txt") return Format::edgelist;
  if (ext == "net" || ext == "pajek" || ext == "paj") return Format::pajek;
  if (ext == "asd") return Format::asd;
  throw InvalidInput("cannot infer format from '" + std::string(path) +
                     "'; pass one of edgelist, pajek, asd");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Calls fn(line_number, line) for every line, with a trailing `\r` removed.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_uint(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && p == tok.data() + tok.size();
}

inline std::uint64_t expect_uint(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  if (!parse_uint(tok, v))
    throw ParseError(line, std::string("expected non-negative integer ") + what +
                               ", got '" + std::string(tok) + "'");
  return v;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

inline EdgeList parse_edgelist(std::string_view text) {
  EdgeList list;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') return;
    auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(line_no, "expected exactly 2 comma-separated fields");
    auto src = detail::trim(line.substr(0, comma));
    auto dst = detail::trim(line.substr(comma + 1));
    if (src.empty() || dst.empty()) throw ParseError(line_no, "empty field");
    list.edges.emplace_back(std::string(src), std::string(dst));
  });
  return list;
}

inline EdgeList parse_pajek(std::string_view text) {
  enum class Section { none, vertices, arcs, edges, arcslist, edgeslist };
  Section section = Section::none;
  std::size_t n = 0;
  bool have_header = false;
  EdgeList list;
  std::vector<bool> labeled;

  auto vertex = [&](std::string_view tok, std::size_t line_no) -> std::size_t {
    auto id = detail::expect_uint(tok, line_no, "vertex id");
    if (id < 1 || id > n)
      throw ParseError(line_no, "vertex id " + std::string(tok) + " out of range [1, " +
                                    std::to_string(n) + "]");
    return static_cast<std::size_t>(id - 1);
  };
  auto add = [&](std::size_t u, std::size_t v, bool both) {
    list.edges.emplace_back(list.declared_labels[u], list.declared_labels[v]);
    if (both) list.edges.emplace_back(list.declared_labels[v], list.declared_labels[u]);
  };

  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '%') return;

    if (body.front() == '*') {
      auto toks = detail::split_ws(body);
      auto key = detail::lower(toks[0]);
      if (key == "*vertices") {
        if (have_header) throw ParseError(line_no, "duplicate *Vertices header");
        if (toks.size() < 2) throw ParseError(line_no, "*Vertices requires a vertex count");
        n = static_cast<std::size_t>(detail::expect_uint(toks[1], line_no, "vertex count"));
        have_header = true;
        list.declared_node_count = n;
        list.declared_labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) list.declared_labels[i] = std::to_string(i + 1);
        labeled.assign(n, false);
        section = Section::vertices;
        return;
      }
      if (!have_header) throw ParseError(line_no, "missing *Vertices header");
      if (key == "*arcs") section = Section::arcs;
      else if (key == "*edges") section = Section::edges;
      else if (key == "*arcslist") section = Section::arcslist;
      else if (key == "*edgeslist") section = Section::edgeslist;
      else throw ParseError(line_no, "unsupported section '" + std::string(toks[0]) + "'");
      return;
    }

    if (!have_header) throw ParseError(line_no, "missing *Vertices header");

    switch (section) {
      case Section::none:
        break;
      case Section::vertices: {
        auto sp = body.find_first_of(" \t");
        auto u = vertex(body.substr(0, sp), line_no);
        if (sp == std::string_view::npos) return;
        auto rest = detail::trim(body.substr(sp));
        std::string_view label;
        if (!rest.empty() && rest.front() == '"') {
          auto close = rest.find('"', 1);
          if (close == std::string_view::npos) throw ParseError(line_no, "unterminated quoted label");
          label = rest.substr(1, close - 1);
        } else {
          label = rest.substr(0, rest.find_first_of(" \t"));
        }
        label = detail::trim(label);
        if (labeled[u]) throw ParseError(line_no, "vertex " + std::to_string(u + 1) + " listed twice");
        labeled[u] = true;
        if (!label.empty()) list.declared_labels[u] = std::string(label);
        break;
      }
      case Section::arcs:
      case Section::edges: {
        auto toks = detail::split_ws(body);
        if (toks.size() < 2) throw ParseError(line_no, "expected `source target`");
        add(vertex(toks[0], line_no), vertex(toks[1], line_no), section == Section::edges);
        break;
      }
      case Section::arcslist:
      case Section::edgeslist: {
        auto toks = detail::split_ws(body);
        auto u = vertex(toks[0], line_no);
        for (std::size_t k = 1; k < toks.size(); ++k)
          add(u, vertex(toks[k], line_no), section == Section::edgeslist);
        break;
      }
    }
  });

  if (!have_header) throw ParseError(0, "missing *Vertices header");

  std::vector<std::string> sorted = list.declared_labels;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
    throw ParseError(0, "duplicate vertex label '" + *dup + "'");
  return list;
}

inline EdgeList parse_asd(std::string_view text) {
  EdgeList list;
  bool have_header = false;
  std::uint64_t n = 0, m = 0;
  std::size_t last_line = 0;

  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    last_line = line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') return;
    auto toks = detail::split_ws(body);
    if (toks.size() != 2)
      throw ParseError(line_no, have_header ? "expected `src dst`" : "expected `N M` header");
    if (!have_header) {
      n = detail::expect_uint(toks[0], line_no, "node count");
      m = detail::expect_uint(toks[1], line_no, "edge count");
      have_header = true;
      list.declared_node_count = static_cast<std::size_t>(n);
      list.edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 24)));
      return;
    }
    if (list.edges.size() == m)
      throw ParseError(line_no, "more edge lines than the declared " + std::to_string(m));
    auto u = detail::expect_uint(toks[0], line_no, "source index");
    auto v = detail::expect_uint(toks[1], line_no, "target index");
    if (u >= n || v >= n)
      throw ParseError(line_no, "node index " + std::to_string(std::max(u, v)) +
                                    " out of range for " + std::to_string(n) + " nodes");
    list.edges.emplace_back(std::to_string(u), std::to_string(v));
  });

  if (!have_header) throw ParseError(0, "missing `N M` header");
  if (list.edges.size() != m)
    throw ParseError(last_line, "expected " + std::to_string(m) + " edge lines, found " +
                                    std::to_string(list.edges.size()));
  return list;
}

inline EdgeList parse(std::string_view text, Format f) {
  switch (f) {
    case Format::edgelist: return parse_edgelist(text);
    case Format::pajek: return parse_pajek(text);
    case Format::asd: return parse_asd(text);
  }
  throw InvalidInput("unknown format");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(path, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

inline Graph load_graph(const std::string& path, std::optional<Format> format = std::nullopt) {
  const Format f = format ? *format : format_from_extension(path);
  return build_graph(parse(read_file(path), f));
}

// Writers. Each throws InvalidInput when a label cannot be represented in
// the target format.

inline void write_edgelist(const Graph& g, std::ostream& out) {
  for (const auto& label : g.labels()) {
    if (label.find_first_of(",\n\r") != std::string::npos || detail::trim(label) != label ||
        label.empty() || label.front() == '#')
      throw InvalidInput("label '" + label + "' is not representable in edgelist format");
  }
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.out_neighbors(u)) out << g.label(u) << ',' << g.label(v) << '\n';
}

inline void write_pajek(const Graph& g, std::ostream& out) {
  out << "*Vertices " << g.node_count() << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto& label = g.label(u);
    if (label.find_first_of("\"\n\r") != std::string::npos || detail::trim(label) != label)
      throw InvalidInput("label '" + label + "' is not representable in pajek format");
    out << (u + 1) << " \"" << label << "\"\n";
  }
  out << "*Arcs\n";
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.out_neighbors(u)) out << (u + 1) << ' ' << (v + 1) << '\n';
}

// ASD carries no labels: node i is written as index i.
inline void write_asd(const Graph& g, std::ostream& out) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.out_neighbors(u)) out << u << ' ' << v << '\n';
}

inline std::string serialize(const Graph& g, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::edgelist: write_edgelist(g, out); break;
    case Format::pajek: write_pajek(g, out); break;
    case Format::asd: write_asd(g, out); break;
  }
  return std::move(out).str();
}

// Internal binary cache used by the datastore.

namespace detail {
inline constexpr char kBinaryMagic[8] = {'C', 'R', 'G', 'R', 'A', 'P', 'H', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(0, "truncated graph cache");
  return v;
}
}  // namespace detail

inline void write_binary(const Graph& g, std::ostream& out) {
  out.write(detail::kBinaryMagic, sizeof detail::kBinaryMagic);
  detail::put<std::uint64_t>(out, g.node_count());
  detail::put<std::uint64_t>(out, g.edge_count());
  for (const auto& label : g.labels()) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(label.size()));
    out.write(label.data(), static_cast<std::streamsize>(label.size()));
  }
  for (const auto& [u, v] : g.edges()) {
    detail::put<NodeId>(out, u);
    detail::put<NodeId>(out, v);
  }
}

inline Graph read_binary(std::istream& in) {
  char magic[sizeof detail::kBinaryMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, detail::kBinaryMagic, sizeof magic) != 0)
    throw ParseError(0, "not a graph cache file");
  const auto n = detail::get<std::uint64_t>(in);
  const auto m = detail::get<std::uint64_t>(in);
  std::vector<std::string> labels(n);
  for (auto& label : labels) {
    label.resize(detail::get<std::uint32_t>(in));
    if (!in.read(label.data(), static_cast<std::streamsize>(label.size())))
      throw ParseError(0, "truncated graph cache");
  }
  std::vector<std::pair<NodeId, NodeId>> edges(m);
  for (auto& [u, v] : edges) {
    u = detail::get<NodeId>(in);
    v = detail::get<NodeId>(in);
  }
  return Graph(std::move(labels), std::move(edges));
}

}  // namespace cyclerank
