#include "pwlcycles/config.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pwlcycles/emit.hpp"

namespace pwl {

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(std::string_view text, const json& doc) : text_(text), doc_(doc) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    const int line = line_of(field);
    std::ostringstream os;
    os << "config";
    if (line > 0) os << " line " << line;
    os << ", field '" << field << "': " << msg;
    throw ConfigError(line, field, os.str());
  }

  const json& require(const std::string& key) const {
    auto it = doc_.find(key);
    if (it == doc_.end()) fail(key, "missing");
    return *it;
  }

  double number(const std::string& key) const {
    const json& v = require(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  Eigen::Index dim() const {
    const json& v = require("dim");
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail("dim", "expected a non-negative integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
  }

  Eigen::VectorXd vector(const std::string& key, Eigen::Index n) const {
    return row(require(key), key, n);
  }

  Eigen::MatrixXd matrix(const std::string& key, Eigen::Index n) const {
    const json& v = require(key);
    if (!v.is_array()) fail(key, "expected an array of rows");
    if (static_cast<Eigen::Index>(v.size()) != n) {
      fail(key, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
    }
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m.row(i) = row(v[static_cast<std::size_t>(i)], key + "[" + std::to_string(i) + "]", n)
                     .transpose();
    }
    return m;
  }

  bool flag(const std::string& key) const {
    auto it = doc_.find(key);
    if (it == doc_.end()) return false;
    if (!it->is_boolean()) fail(key, "expected true or false");
    return it->get<bool>();
  }

 private:
  Eigen::VectorXd row(const json& v, const std::string& label, Eigen::Index n) const {
    if (!v.is_array()) fail(label, "expected an array");
    if (static_cast<Eigen::Index>(v.size()) != n) {
      fail(label, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    }
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& x = v[static_cast<std::size_t>(i)];
      if (!x.is_number()) fail(label, "entry " + std::to_string(i) + " is not a number");
      out(i) = x.get<double>();
    }
    return out;
  }

  // Line of the first occurrence of "key" in the source text, refined to
  // the row for fields like "A[2]"; 0 if absent.
  int line_of(const std::string& field) const {
    const auto bracket = field.find('[');
    const std::string key = "\"" + field.substr(0, bracket) + "\"";
    auto pos = text_.find(key);
    if (pos == std::string_view::npos) return 0;
    if (bracket != std::string::npos) {
      const auto row = std::stoul(field.substr(bracket + 1));
      pos = nth_element_start(text_.find('[', pos), row).value_or(pos);
    }
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }

  // Offset of the first character of element `index` of the array opening
  // at `open`. Strings are not expected inside numeric arrays.
  std::optional<std::size_t> nth_element_start(std::size_t open, std::size_t index) const {
    if (open == std::string_view::npos) return std::nullopt;
    int depth = 0;
    std::size_t seen = 0;
    for (std::size_t i = open; i < text_.size(); ++i) {
      const char c = text_[i];
      if (c == '[' || c == '{') {
        if (depth == 1 && seen == index) return i;
        ++depth;
      } else if (c == ']' || c == '}') {
        if (--depth == 0) return std::nullopt;
      } else if (c == ',' && depth == 1) {
        ++seen;
      } else if (depth == 1 && seen == index && !std::isspace(static_cast<unsigned char>(c))) {
        return i;
      }
    }
    return std::nullopt;
  }

  std::string_view text_;
  const json& doc_;
};

std::string vector_text(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v(i));
  }
  return s + "]";
}

std::string matrix_text(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return "[]";
  std::string s = "[\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += "    " + vector_text(m.row(i).transpose());
    s += i + 1 < m.rows() ? ",\n" : "\n";
  }
  return s + "  ]";
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ConfigError(line, "", "config line " + std::to_string(line) +
                                    ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw ConfigError(1, "", "config must be a JSON object");

  Reader r(text, doc);
  const json& kind = r.require("kind");
  if (!kind.is_string()) r.fail("kind", "expected \"canonical\" or \"plrnn\"");

  if (kind == "canonical") {
    const Eigen::Index m = r.dim();
    CanonicalSystem s;
    s.a = r.number("a");
    s.d = r.number("d");
    s.mu_hat = r.number("mu_hat");
    s.b = r.vector("b", m);
    s.e = r.vector("e", m);
    s.A = r.matrix("A", m);
    s.h_Y = r.vector("h_Y", m);
    return s;
  }
  if (kind == "plrnn") {
    const Eigen::Index m = r.dim();
    if (m < 1) r.fail("dim", "PLRNN needs dim >= 1");
    PLRNNSystem s;
    s.A_diag = r.vector("A_diag", m);
    s.W = r.matrix("W", m);
    s.h = r.vector("h", m);
    s.relaxed_diagonal = r.flag("relaxed_diagonal");
    return s;
  }
  r.fail("kind", "unknown kind '" + kind.get<std::string>() + "'");
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config '" + path.string() + "'");
  return parse_config(buf.str());
}

std::string write_config(const SystemConfig& cfg) {
  std::string out;
  if (const auto* c = std::get_if<CanonicalSystem>(&cfg)) {
    out += "{\n  \"kind\": \"canonical\",\n";
    out += "  \"dim\": " + std::to_string(c->block_dim()) + ",\n";
    out += "  \"a\": " + format_double(c->a) + ",\n";
    out += "  \"d\": " + format_double(c->d) + ",\n";
    out += "  \"mu_hat\": " + format_double(c->mu_hat) + ",\n";
    out += "  \"b\": " + vector_text(c->b) + ",\n";
    out += "  \"e\": " + vector_text(c->e) + ",\n";
    out += "  \"A\": " + matrix_text(c->A) + ",\n";
    out += "  \"h_Y\": " + vector_text(c->h_Y) + "\n}\n";
  } else {
    const auto& p = std::get<PLRNNSystem>(cfg);
    out += "{\n  \"kind\": \"plrnn\",\n";
    out += "  \"dim\": " + std::to_string(p.dim()) + ",\n";
    out += "  \"A_diag\": " + vector_text(p.A_diag) + ",\n";
    out += "  \"W\": " + matrix_text(p.W) + ",\n";
    out += "  \"h\": " + vector_text(p.h) + ",\n";
    out += std::string("  \"relaxed_diagonal\": ") +
           (p.relaxed_diagonal ? "true" : "false") + "\n}\n";
  }
  return out;
}

void save_config(const std::filesystem::path& path, const SystemConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config '" + path.string() + "'");
  out << write_config(cfg);
  if (!out) throw IoError("cannot write config '" + path.string() + "'");
}

}  // namespace pwl
