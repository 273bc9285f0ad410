#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "obddlab/diagrams.hpp"
#include "obddlab/errors.hpp"

namespace obddlab {

namespace {

std::string format_probability(double p) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", p);
  return buffer;
}

void print_edge(std::ostream &out, const DetEdge &e) { out << e; }

void print_edge(std::ostream &out, const NondetEdge &e) {
  out << '{';
  for (std::size_t i = 0; i < e.size(); ++i)
    out << (i ? ";" : "") << e[i];
  out << '}';
}

void print_edge(std::ostream &out, const ProbEdge &e) {
  out << '(';
  for (std::size_t i = 0; i < e.size(); ++i)
    out << (i ? ";" : "") << format_probability(e[i].probability) << "->"
        << e[i].target;
  out << ')';
}

template <class Edge>
std::string render(const LeveledProgram<Edge> &p, const char *keyword) {
  std::ostringstream out;
  out << keyword << ' ' << p.n << ' ' << p.layers << ' ' << width(p)
      << " order=" << p.order.to_string() << " start=" << p.start << '\n';
  for (std::size_t l = 0; l < p.levels.size(); ++l) {
    const auto &level = p.levels[l];
    out << 'L' << l + 1 << " var=" << level.var << ':';
    for (NodeId s = 0; s < level.size(); ++s) {
      out << ' ' << s << ':';
      print_edge(out, level.edge(s, false));
      out << ',';
      print_edge(out, level.edge(s, true));
    }
    out << '\n';
  }
  for (std::size_t j = 0; j < p.junctions.size(); ++j) {
    if (p.junctions[j].empty())
      continue;
    out << 'J' << j + 1 << ':';
    for (std::size_t s = 0; s < p.junctions[j].size(); ++s)
      out << ' ' << s << '=' << p.junctions[j][s];
    out << '\n';
  }
  out << "sinks:";
  for (std::size_t s = 0; s < p.accept.size(); ++s)
    out << ' ' << s << '=' << int{p.accept[s]};
  out << '\n';
  return out.str();
}

class Cursor {
public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  void skip_spaces() {
    while (!done() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  void expect(char c) {
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token)
      return false;
    pos_ += token.size();
    return true;
  }

  std::uint64_t number() {
    std::uint64_t value = 0;
    const char *begin = text_.data() + pos_;
    const auto [end, ec] =
        std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc())
      fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  double real() {
    const std::size_t stop = text_.find("->", pos_);
    if (stop == std::string_view::npos)
      fail("expected '<probability>-><target>'");
    const std::string token(text_.substr(pos_, stop - pos_));
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size())
        fail("bad probability '" + token + "'");
      pos_ = stop;
      return value;
    } catch (const std::logic_error &) {
      fail("bad probability '" + token + "'");
    }
  }

  std::string_view word() {
    const std::size_t begin = pos_;
    while (!done() && text_[pos_] != ' ' && text_[pos_] != '\t')
      ++pos_;
    return text_.substr(begin, pos_ - begin);
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw ShapeError("line " + std::to_string(line_) + ", column " +
                     std::to_string(pos_ + 1) + ": " + what);
  }

private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

NodeId node_number(Cursor &c) { return static_cast<NodeId>(c.number()); }

void parse_edge(Cursor &c, DetEdge &e) { e = node_number(c); }

void parse_edge(Cursor &c, NondetEdge &e) {
  c.expect('{');
  while (c.peek() != '}') {
    if (!e.empty())
      c.expect(';');
    e.push_back(node_number(c));
  }
  c.expect('}');
}

void parse_edge(Cursor &c, ProbEdge &e) {
  c.expect('(');
  while (c.peek() != ')') {
    if (!e.empty())
      c.expect(';');
    WeightedTarget wt;
    wt.probability = c.real();
    if (!c.accept("->"))
      c.fail("expected '->'");
    wt.target = node_number(c);
    e.push_back(wt);
  }
  c.expect(')');
}

// Reads "<index>=<value>" pairs, which must list indices 0, 1, 2, ...
std::vector<std::uint64_t> parse_assignments(Cursor &c) {
  std::vector<std::uint64_t> values;
  for (c.skip_spaces(); !c.done(); c.skip_spaces()) {
    if (c.number() != values.size())
      c.fail("entries must be listed in node order");
    c.expect('=');
    values.push_back(c.number());
  }
  return values;
}

template <class Edge>
LeveledProgram<Edge> parse(const std::string &text, std::string_view keyword) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  LeveledProgram<Edge> p;
  bool have_header = false;
  bool have_sinks = false;
  std::vector<std::pair<std::size_t, std::vector<NodeId>>> junctions;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    Cursor c(line, line_no);
    c.skip_spaces();
    if (c.done() || c.peek() == '#')
      continue;
    if (!have_header) {
      if (c.word() != keyword)
        c.fail("expected header starting with '" + std::string(keyword) + "'");
      c.skip_spaces();
      p.n = static_cast<int>(c.number());
      c.skip_spaces();
      p.layers = static_cast<int>(c.number());
      c.skip_spaces();
      c.number(); // width is derived, not trusted
      for (c.skip_spaces(); !c.done(); c.skip_spaces()) {
        if (c.accept("order=")) {
          p.order = VarOrder::parse(std::string(c.word()));
        } else if (c.accept("start=")) {
          p.start = node_number(c);
        } else {
          c.fail("unknown header field");
        }
      }
      if (p.order.size() != p.n)
        p.order = VarOrder::identity(p.n);
      have_header = true;
    } else if (c.accept("sinks:")) {
      for (auto v : parse_assignments(c)) {
        if (v > 1)
          c.fail("sink values are 0 or 1");
        p.accept.push_back(static_cast<std::uint8_t>(v));
      }
      have_sinks = true;
    } else if (c.peek() == 'J') {
      c.expect('J');
      const std::size_t layer = c.number();
      c.expect(':');
      std::vector<NodeId> map;
      for (auto v : parse_assignments(c))
        map.push_back(static_cast<NodeId>(v));
      if (layer < 1)
        c.fail("junction layers count from 1");
      junctions.emplace_back(layer, std::move(map));
    } else if (c.peek() == 'L') {
      c.expect('L');
      if (c.number() != p.levels.size() + 1)
        c.fail("levels must be listed in order");
      c.skip_spaces();
      if (!c.accept("var="))
        c.fail("expected 'var='");
      Level<Edge> level;
      level.var = static_cast<int>(c.number());
      c.expect(':');
      for (c.skip_spaces(); !c.done(); c.skip_spaces()) {
        if (c.number() != level.size())
          c.fail("nodes must be listed in order");
        c.expect(':');
        Edge e0{}, e1{};
        parse_edge(c, e0);
        c.expect(',');
        parse_edge(c, e1);
        level.edges.push_back(std::move(e0));
        level.edges.push_back(std::move(e1));
      }
      p.levels.push_back(std::move(level));
    } else {
      c.fail("unrecognised line");
    }
  }
  if (!have_header)
    throw ShapeError("missing program header");
  if (!have_sinks)
    throw ShapeError("missing sinks line");
  if (!junctions.empty()) {
    p.junctions.assign(static_cast<std::size_t>(std::max(p.layers - 1, 0)), {});
    for (auto &[layer, map] : junctions) {
      if (layer > p.junctions.size())
        throw ShapeError("junction after the last layer");
      p.junctions[layer - 1] = std::move(map);
    }
  }
  try {
    validate(p);
  } catch (const StructuralError &e) {
    throw ShapeError(e.what());
  }
  return p;
}

} // namespace

std::string to_text(const LeveledObdd &p) { return render(p, "obdd"); }
std::string to_text(const Nobdd &p) { return render(p, "nobdd"); }
std::string to_text(const Pobdd &p) { return render(p, "pobdd"); }

LeveledObdd obdd_from_text(const std::string &text) {
  return parse<DetEdge>(text, "obdd");
}
Nobdd nobdd_from_text(const std::string &text) {
  return parse<NondetEdge>(text, "nobdd");
}
Pobdd pobdd_from_text(const std::string &text) {
  return parse<ProbEdge>(text, "pobdd");
}

} // namespace obddlab
