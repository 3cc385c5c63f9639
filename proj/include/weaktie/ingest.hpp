#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "weaktie/error.hpp"
#include "weaktie/graph.hpp"

namespace weaktie {

/// Authors of one paper; one record per input line of the papers format.
struct PaperRecord {
  std::vector<std::string> authors;
  std::size_t line = 0;
};

/// Result of reading a Pajek file: vertex labels in index order (vertex i is
/// `labels[i - 1]`) and one record per edge or arc line.
struct PajekNetwork {
  std::vector<std::string> labels;
  std::vector<EdgeRecord> records;
};

namespace detail {

/// Replaces every invalid UTF-8 sequence with U+FFFD.
inline std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  const auto* p = reinterpret_cast<const unsigned char*>(in.data());
  const std::size_t n = in.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    bool ok = len != 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) ok = (p[i + k] & 0xc0) == 0x80;
    if (ok && len > 1) {
      std::uint32_t cp = c & (0xff >> (len + 1));
      for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (p[i + k] & 0x3f);
      static constexpr std::uint32_t min_cp[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= min_cp[len] && cp <= 0x10ffff && (cp < 0xd800 || cp > 0xdfff);
    }
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out += "\xef\xbf\xbd";
      ++i;
    }
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto first = std::find_if(s.begin(), s.end(), not_space);
  auto last = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return first < last ? std::string_view(&*first, static_cast<std::size_t>(last - first))
                      : std::string_view{};
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

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline bool iequals_prefix(std::string_view s, std::string_view keyword) {
  if (s.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != keyword[i]) return false;
  return true;
}

/// Reads lines with CR stripped and invalid UTF-8 replaced; `fn(line, number)`.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    fn(sanitize_utf8(raw), number);
  }
}

}  // namespace detail

/**
 * Reads the Pajek subset used by the classic network archives: an optional
 * `*Network` line, `*Vertices N` with optional `i "label" [x y z ...]` lines,
 * then any number of `*Edges` / `*Arcs` (`i j [w]`) and `*Edgeslist` /
 * `*Arcslist` (`i j k ...`) sections. Arcs are emitted as-is and become
 * undirected edges in build_graph, which sums reciprocal pairs.
 *
 * Section keywords are case-insensitive; `%` lines and blank lines are
 * skipped; sections other than these are ignored up to the next keyword.
 * Vertices without a label line are named by their 1-based index. A label
 * used by more than one vertex gets `#<index>` appended from its second use.
 */
inline PajekNetwork parse_pajek(std::istream& in) {
  enum class Section { None, Vertices, Pairs, Lists, Ignored };
  Section section = Section::None;
  bool have_vertices = false;
  long long vertex_count = 0;
  std::vector<std::optional<std::string>> names;
  PajekNetwork net;

  auto vertex_index = [&](std::string_view token, std::size_t line) {
    auto v = detail::parse_int(token);
    if (!v) throw ParseError(line, "malformed vertex index '" + std::string(token) + "'");
    if (*v < 1 || *v > vertex_count)
      throw ParseError(line, "vertex " + std::to_string(*v) + " out of range 1.." +
                                 std::to_string(vertex_count));
    return static_cast<std::size_t>(*v);
  };
  auto label_of = [&](std::size_t i) -> const std::string& {
    return net.labels[i - 1];
  };
  bool labels_ready = false;
  auto finalize_labels = [&] {
    if (labels_ready) return;
    labels_ready = true;
    net.labels.resize(static_cast<std::size_t>(vertex_count));
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < net.labels.size(); ++i) {
      std::string name = names[i] && !names[i]->empty() ? *names[i] : std::to_string(i + 1);
      if (!seen.insert(name).second) {
        name += "#" + std::to_string(i + 1);
        seen.insert(name);
      }
      net.labels[i] = std::move(name);
    }
  };

  detail::for_each_line(in, [&](const std::string& raw, std::size_t line) {
    std::string_view text = detail::trim(raw);
    if (text.empty() || text.front() == '%') return;

    if (text.front() == '*') {
      auto tokens = detail::split_ws(text);
      std::string_view key = tokens.front();
      if (detail::iequals_prefix(key, "*vertices") && key.size() == 9) {
        if (have_vertices) throw ParseError(line, "duplicate *Vertices section");
        if (tokens.size() < 2) throw ParseError(line, "*Vertices without a count");
        auto n = detail::parse_int(tokens[1]);
        if (!n || *n < 0) throw ParseError(line, "malformed vertex count '" + std::string(tokens[1]) + "'");
        vertex_count = *n;
        names.assign(static_cast<std::size_t>(vertex_count), std::nullopt);
        have_vertices = true;
        section = Section::Vertices;
        return;
      }
      if (detail::iequals_prefix(key, "*network")) {
        section = Section::None;
        return;
      }
      bool list = detail::iequals_prefix(key, "*edgeslist") || detail::iequals_prefix(key, "*arcslist");
      bool pairs = !list && ((detail::iequals_prefix(key, "*edges") && key.size() == 6) ||
                             (detail::iequals_prefix(key, "*arcs") && key.size() == 5));
      if (list || pairs) {
        if (!have_vertices) throw ParseError(line, "missing *Vertices header before " + std::string(key));
        finalize_labels();
        section = list ? Section::Lists : Section::Pairs;
        return;
      }
      section = Section::Ignored;
      return;
    }

    switch (section) {
      case Section::None:
        throw ParseError(line, "missing *Vertices header");
      case Section::Ignored:
        return;
      case Section::Vertices: {
        std::size_t split = 0;
        while (split < text.size() && !std::isspace(static_cast<unsigned char>(text[split]))) ++split;
        std::size_t idx = vertex_index(text.substr(0, split), line);
        std::string_view rest = detail::trim(text.substr(split));
        std::string label;
        if (!rest.empty() && rest.front() == '"') {
          auto close = rest.find('"', 1);
          if (close == std::string_view::npos) throw ParseError(line, "unterminated vertex label");
          label = std::string(rest.substr(1, close - 1));
        } else if (!rest.empty()) {
          label = std::string(detail::split_ws(rest).front());
        }
        names[idx - 1] = std::move(label);
        return;
      }
      case Section::Pairs: {
        auto tokens = detail::split_ws(text);
        if (tokens.size() < 2) throw ParseError(line, "edge line needs two vertex indices");
        std::size_t a = vertex_index(tokens[0], line);
        std::size_t b = vertex_index(tokens[1], line);
        double w = 1.0;
        if (tokens.size() >= 3) {
          auto parsed = detail::parse_double(tokens[2]);
          if (!parsed) throw ParseError(line, "malformed weight '" + std::string(tokens[2]) + "'");
          w = *parsed;
        }
        net.records.push_back(EdgeRecord{label_of(a), label_of(b), w, line});
        return;
      }
      case Section::Lists: {
        auto tokens = detail::split_ws(text);
        std::size_t a = vertex_index(tokens[0], line);
        for (std::size_t k = 1; k < tokens.size(); ++k)
          net.records.push_back(EdgeRecord{label_of(a), label_of(vertex_index(tokens[k], line)), 1.0, line});
        return;
      }
    }
  });

  if (!have_vertices) throw ParseError(0, "missing *Vertices header");
  finalize_labels();
  return net;
}

inline PajekNetwork parse_pajek(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pajek(in);
}

/**
 * Weighted edge list: `source target [weight]` per line. Lines containing a
 * tab are split on tabs only (so labels may contain spaces); other lines on
 * runs of whitespace. Fields past the third are ignored. `#` starts a comment
 * line.
 */
inline std::vector<EdgeRecord> parse_edgelist(std::istream& in) {
  std::vector<EdgeRecord> out;
  detail::for_each_line(in, [&](const std::string& raw, std::size_t line) {
    std::string_view text = detail::trim(raw);
    if (text.empty() || text.front() == '#') return;
    std::vector<std::string_view> fields;
    if (text.find('\t') != std::string_view::npos) {
      for (std::string_view f : detail::split_on(text, '\t'))
        if (auto t = detail::trim(f); !t.empty()) fields.push_back(t);
    } else {
      fields = detail::split_ws(text);
    }
    if (fields.size() < 2)
      throw ParseError(line, "expected 'source target [weight]', got " + std::to_string(fields.size()) + " field");
    double w = 1.0;
    if (fields.size() >= 3) {
      auto parsed = detail::parse_double(fields[2]);
      if (!parsed) throw ParseError(line, "malformed weight '" + std::string(fields[2]) + "'");
      w = *parsed;
    }
    out.push_back(EdgeRecord{std::string(fields[0]), std::string(fields[1]), w, line});
  });
  return out;
}

inline std::vector<EdgeRecord> parse_edgelist(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edgelist(in);
}

/// One paper per line, authors separated by `;`. Blank and `#` lines are
/// skipped; an empty or repeated author on a line is an error.
inline std::vector<PaperRecord> parse_papers(std::istream& in) {
  std::vector<PaperRecord> out;
  detail::for_each_line(in, [&](const std::string& raw, std::size_t line) {
    std::string_view text = detail::trim(raw);
    if (text.empty() || text.front() == '#') return;
    PaperRecord paper{{}, line};
    std::unordered_set<std::string_view> seen;
    for (std::string_view field : detail::split_on(text, ';')) {
      std::string_view author = detail::trim(field);
      if (author.empty()) throw ParseError(line, "empty author name");
      if (!seen.insert(author).second)
        throw ParseError(line, "author '" + std::string(author) + "' listed twice");
      paper.authors.emplace_back(author);
    }
    out.push_back(std::move(paper));
  });
  return out;
}

inline std::vector<PaperRecord> parse_papers(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_papers(in);
}

/**
 * Co-authorship weighting: a paper with n >= 2 authors contributes 1/(n-1) to
 * every unordered pair of its authors. Single-author papers contribute
 * nothing. Repeated pairs across papers are summed later by build_graph.
 */
inline std::vector<EdgeRecord> newman_coauthorship_weights(std::span<const PaperRecord> papers) {
  std::vector<EdgeRecord> out;
  for (const PaperRecord& paper : papers) {
    const auto& a = paper.authors;
    if (a.empty()) throw GraphError("paper on line " + std::to_string(paper.line) + " has no authors");
    std::unordered_set<std::string_view> seen(a.begin(), a.end());
    if (seen.size() != a.size())
      throw GraphError("paper on line " + std::to_string(paper.line) + " repeats an author");
    if (a.size() < 2) continue;
    const double w = 1.0 / static_cast<double>(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        out.push_back(EdgeRecord{a[i], a[j], w, paper.line});
  }
  return out;
}

enum class DatasetFormat { Pajek, EdgeList, Papers };

inline std::optional<DatasetFormat> parse_dataset_format(std::string_view name) {
  if (name == "pajek") return DatasetFormat::Pajek;
  if (name == "edgelist") return DatasetFormat::EdgeList;
  if (name == "papers") return DatasetFormat::Papers;
  return std::nullopt;
}

/// A loaded dataset plus the FNV-1a 64 checksum of the raw file bytes.
struct Dataset {
  WeightedGraph graph;
  std::uint64_t checksum = 0;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline WeightedGraph graph_from_text(std::string_view text, DatasetFormat format) {
  std::istringstream in{std::string(text)};
  switch (format) {
    case DatasetFormat::Pajek: {
      PajekNetwork net = parse_pajek(in);
      return build_graph(net.records, net.labels);
    }
    case DatasetFormat::EdgeList:
      return build_graph(parse_edgelist(in));
    case DatasetFormat::Papers: {
      auto papers = parse_papers(in);
      // Single-author papers still introduce their author as a node.
      std::vector<std::string> authors;
      for (const PaperRecord& p : papers)
        for (const std::string& a : p.authors) authors.push_back(a);
      return build_graph(newman_coauthorship_weights(papers), authors);
    }
  }
  throw GraphError("unknown dataset format");
}

inline Dataset load_dataset(const std::string& path, DatasetFormat format) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open dataset file '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (file.bad()) throw IoError("error reading dataset file '" + path + "'");
  return Dataset{graph_from_text(bytes, format), fnv1a64(bytes)};
}

}  // namespace weaktie
