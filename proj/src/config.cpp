// Copyright 2026 The fls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fls/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace fls {

namespace {

using nlohmann::json;

struct Cursor {
  int line = 1;
  int last_line = 1;  // line of the most recent non-blank character
};

// Input iterator that reports consumed characters to a shared cursor.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, Cursor* c) : p_(p), c_(c) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    if (c_) {
      if (!std::isspace(static_cast<unsigned char>(*p_))) c_->last_line = c_->line;
      if (*p_ == '\n') ++c_->line;
    }
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  Cursor* c_ = nullptr;
};

// Records the source line of every JSON value by pointer.
class LineMapper : public nlohmann::json_sax<json> {
 public:
  explicit LineMapper(Cursor* c) : c_(c) {}
  std::map<std::string, int> lines;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };
  std::string here() const {
    std::string s;
    for (const auto& f : frames_) s += "/" + (f.array ? std::to_string(f.index) : f.key);
    return s;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar() {
    lines.emplace(here(), c_->last_line);
    advance();
    return true;
  }
  bool open(bool array) {
    lines.emplace(here(), c_->last_line);
    frames_.push_back(Frame{array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }
  Cursor* c_;
  std::vector<Frame> frames_;
};

class Reader {
 public:
  Reader(const json& root, std::map<std::string, int> lines) : root_(root), lines_(std::move(lines)) {}

  std::string where(const std::string& ptr) const {
    std::string p = ptr;
    while (!p.empty() && !lines_.count(p)) p = p.substr(0, p.rfind('/'));
    const auto it = lines_.find(p);
    const int line = it == lines_.end() ? 1 : it->second;
    return "line " + std::to_string(line) + ": " + (ptr.empty() ? "/" : ptr) + ": ";
  }

  [[noreturn]] void fail(const std::string& ptr, const std::string& what) const {
    throw Error(ErrorCode::Schema, where(ptr) + what);
  }

  void allow_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      bool ok = k == "description";
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) fail(ptr + "/" + k, "unknown key '" + k + "'");
    }
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(ptr, "number must be finite");
    return x;
  }

  Complex complex(const json& v, const std::string& ptr) const {
    if (v.is_number()) return {number(v, ptr), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], ptr + "/0"), number(v[1], ptr + "/1")};
    fail(ptr, "expected a number or a [re, im] pair");
  }

  ComplexVector complex_vector(const json& v, const std::string& ptr, int n) const {
    if (!v.is_array() || static_cast<int>(v.size()) != n) fail(ptr, "expected an array of length " + std::to_string(n));
    ComplexVector out(n);
    for (int i = 0; i < n; ++i) out(i) = complex(v[static_cast<std::size_t>(i)], ptr + "/" + std::to_string(i));
    return out;
  }

  ComplexMatrix complex_matrix(const json& v, const std::string& ptr, int n) const {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
      fail(ptr, "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    ComplexMatrix out(n, n);
    for (int i = 0; i < n; ++i)
      out.row(i) = complex_vector(v[static_cast<std::size_t>(i)], ptr + "/" + std::to_string(i), n).transpose();
    return out;
  }

  RealVector real_vector(const json& v, const std::string& ptr, int n) const {
    const ComplexVector c = complex_vector(v, ptr, n);
    if (c.imag().cwiseAbs().maxCoeff() > 0.0) fail(ptr, "entries must be real");
    return c.real();
  }

  RealMatrix real_matrix(const json& v, const std::string& ptr, int n) const {
    const ComplexMatrix c = complex_matrix(v, ptr, n);
    if (n > 0 && c.imag().cwiseAbs().maxCoeff() > 0.0) fail(ptr, "entries must be real");
    return c.real();
  }

  // Sum of coef * (product of up to two Fock operators), plus the adjoint when "hc" is set.
  LindbladOperator fock_terms(const json& terms, const std::string& ptr, int modes) const {
    if (!terms.is_array()) fail(ptr, "expected an array of terms");
    LindbladOperator acc = LindbladOperator::zero(modes);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string tp = ptr + "/" + std::to_string(k);
      const json& t = terms[k];
      allow_keys(t, tp, {"ops", "coef", "hc"});
      if (!t.contains("ops") || !t["ops"].is_array()) fail(tp, "term needs an 'ops' array");
      std::vector<std::pair<FockKind, int>> factors;
      for (std::size_t f = 0; f < t["ops"].size(); ++f) {
        const std::string fp = tp + "/ops/" + std::to_string(f);
        const json& x = t["ops"][f];
        if (!x.is_array() || x.size() != 2 || !x[0].is_string() || !x[1].is_number_integer())
          fail(fp, "expected [\"create\"|\"annihilate\", mode]");
        const std::string kind = x[0].get<std::string>();
        FockKind fk;
        if (kind == "create" || kind == "cdag")
          fk = FockKind::Create;
        else if (kind == "annihilate" || kind == "c")
          fk = FockKind::Annihilate;
        else
          fail(fp + "/0", "unknown Fock operator '" + kind + "'");
        const long n = x[1].get<long>();
        if (n < 0 || n >= modes) fail(fp + "/1", "mode index out of range");
        factors.emplace_back(fk, static_cast<int>(n));
      }
      if (factors.size() > 2) fail(tp + "/ops", "at most two Fock operators per term");
      const Complex coef = t.contains("coef") ? complex(t["coef"], tp + "/coef") : Complex(1.0);
      LindbladOperator op = fock_monomial(factors, modes, coef);
      if (t.contains("hc")) {
        if (!t["hc"].is_boolean()) fail(tp + "/hc", "expected a boolean");
        if (t["hc"].get<bool>()) op = op.plus(op.adjoint());
      }
      acc = acc.plus(op);
    }
    return acc;
  }

  // Hermitian quadratic-linear form given as alpha/beta or Fock terms; the constant is dropped.
  std::pair<RealMatrix, RealVector> generator(const json& g, const std::string& ptr, int modes,
                                              std::initializer_list<const char*> extra) const {
    const int n = 2 * modes;
    RealMatrix alpha = RealMatrix::Zero(n, n);
    RealVector beta = RealVector::Zero(n);
    std::vector<const char*> keys{"alpha", "beta", "terms"};
    keys.insert(keys.end(), extra.begin(), extra.end());
    for (const auto& [k, v] : g.items()) {
      bool ok = k == "description";
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) fail(ptr + "/" + k, "unknown key '" + k + "'");
    }
    if (g.contains("alpha")) alpha = real_matrix(g["alpha"], ptr + "/alpha", n);
    if (g.contains("beta")) beta = real_vector(g["beta"], ptr + "/beta", n);
    if (g.contains("terms")) {
      const LindbladOperator op = fock_terms(g["terms"], ptr + "/terms", modes);
      if (op.a.imag().cwiseAbs().maxCoeff() > 1e-12 || op.b.imag().cwiseAbs().maxCoeff() > 1e-12)
        fail(ptr + "/terms", "terms do not form a Hermitian operator (set \"hc\": true on off-diagonal terms)");
      alpha += op.a.real();
      beta += op.b.real();
    }
    if ((alpha + alpha.transpose()).cwiseAbs().maxCoeff() > 1e-12) fail(ptr + "/alpha", "alpha must be antisymmetric");
    return {alpha, beta};
  }

  void times(const json& s, const std::string& ptr, double t_default_end, double& t0, double& t1) const {
    t0 = s.contains("t_start") ? number(s["t_start"], ptr + "/t_start") : 0.0;
    t1 = s.contains("t_end") ? number(s["t_end"], ptr + "/t_end") : t_default_end;
    if (!(t1 > t0)) fail(ptr, "t_end must exceed t_start");
  }

  ChannelPiece piece(const json& s, const std::string& ptr, int modes, double t0, double t1) const {
    ChannelPiece p;
    p.t_start = t0;
    p.t_end = t1;
    if (s.contains("rate") || s.contains("generator")) {
      allow_keys(s, ptr, {"rate", "generator", "t_start", "t_end"});
      if (!s.contains("rate")) fail(ptr, "unitary jump needs a 'rate'");
      UnitaryJump j;
      j.rate = number(s["rate"], ptr + "/rate");
      if (j.rate < 0.0) fail(ptr + "/rate", "rate must be nonnegative");
      if (s.contains("generator")) {
        if (!s["generator"].is_object()) fail(ptr + "/generator", "expected an object");
        std::tie(j.alpha, j.beta) = generator(s["generator"], ptr + "/generator", modes, {});
      } else {
        j.alpha = RealMatrix::Zero(2 * modes, 2 * modes);
        j.beta = RealVector::Zero(2 * modes);
      }
      p.op = LindbladOperator::zero(modes);
      p.jump = j;
      return p;
    }
    allow_keys(s, ptr, {"a", "b", "d", "terms", "t_start", "t_end"});
    const int n = 2 * modes;
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    ComplexVector b = ComplexVector::Zero(n);
    Complex d = 0.0;
    if (s.contains("a")) a = complex_matrix(s["a"], ptr + "/a", n);
    if (s.contains("b")) b = complex_vector(s["b"], ptr + "/b", n);
    if (s.contains("d")) d = complex(s["d"], ptr + "/d");
    p.op = LindbladOperator::make(a, b, d);
    if (s.contains("terms")) p.op = p.op.plus(fock_terms(s["terms"], ptr + "/terms", modes));
    if (!s.contains("a") && !s.contains("b") && !s.contains("d") && !s.contains("terms"))
      fail(ptr, "Lindblad operator needs 'a', 'b', 'd', 'terms', or 'rate'");
    return p;
  }

  Model model() const {
    const json& r = root_;
    allow_keys(r, "", {"L", "hamiltonian", "lindblad", "class", "initial", "t_final", "target_epsilon", "seed"});
    if (!r.contains("L")) fail("", "missing 'L'");
    if (!r["L"].is_number_integer()) fail("/L", "expected an integer");
    const long l = r["L"].get<long>();
    if (l < 1 || l > 62) fail("/L", "mode count must lie in [1, 62]");
    const int modes = static_cast<int>(l);
    if (!r.contains("t_final")) fail("", "missing 't_final'");
    Model m;
    m.t_final = number(r["t_final"], "/t_final");
    if (!(m.t_final > 0.0)) fail("/t_final", "t_final must be positive");
    if (r.contains("target_epsilon")) {
      m.target_epsilon = number(r["target_epsilon"], "/target_epsilon");
      if (!(m.target_epsilon > 0.0 && m.target_epsilon < 1.0)) fail("/target_epsilon", "must lie in (0, 1)");
    }
    if (r.contains("seed")) {
      if (!r["seed"].is_number_unsigned()) fail("/seed", "seed must be a nonnegative integer");
      m.seed = r["seed"].get<std::uint64_t>();
    }
    if (!r.contains("initial")) fail("", "missing 'initial'");
    if (!r["initial"].is_string()) fail("/initial", "expected a bit string");
    const std::string bits = r["initial"].get<std::string>();
    if (static_cast<int>(bits.size()) != modes || bits.find_first_not_of("01") != std::string::npos)
      fail("/initial", "initial configuration must be a 0/1 string of length L");
    m.initial = FockConfiguration::from_string(bits);

    try {
      if (r.contains("hamiltonian")) {
        const json& h = r["hamiltonian"];
        if (!h.is_array() || h.empty()) fail("/hamiltonian", "expected a non-empty array of segments");
        std::vector<HamiltonianSegment> segs;
        for (std::size_t k = 0; k < h.size(); ++k) {
          const std::string sp = "/hamiltonian/" + std::to_string(k);
          if (!h[k].is_object()) fail(sp, "expected an object");
          HamiltonianSegment s;
          times(h[k], sp, m.t_final, s.t_start, s.t_end);
          std::tie(s.alpha, s.beta) = generator(h[k], sp, modes, {"t_start", "t_end"});
          segs.push_back(std::move(s));
        }
        m.hamiltonian = QuadraticHamiltonian(modes, std::move(segs));
        const auto rep = validate_hamiltonian(m.hamiltonian);
        if (!rep.ok) fail("/hamiltonian", rep.summary());
        if (m.hamiltonian.t_final() < m.t_final - 1e-12) fail("/hamiltonian", "schedule ends before t_final");
      } else {
        m.hamiltonian = QuadraticHamiltonian::zero(modes, m.t_final);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema && std::string(e.what()).rfind("line ", 0) == 0) throw;
      fail("/hamiltonian", e.what());
    }

    std::vector<LindbladChannel> channels;
    if (r.contains("lindblad")) {
      const json& ls = r["lindblad"];
      if (!ls.is_array()) fail("/lindblad", "expected an array");
      for (std::size_t k = 0; k < ls.size(); ++k) {
        const std::string cp = "/lindblad/" + std::to_string(k);
        const json& c = ls[k];
        if (!c.is_object()) fail(cp, "expected an object");
        try {
          std::vector<ChannelPiece> pieces;
          if (c.contains("schedule")) {
            allow_keys(c, cp, {"schedule"});
            const json& s = c["schedule"];
            if (!s.is_array() || s.empty()) fail(cp + "/schedule", "expected a non-empty array");
            for (std::size_t q = 0; q < s.size(); ++q) {
              const std::string pp = cp + "/schedule/" + std::to_string(q);
              if (!s[q].is_object()) fail(pp, "expected an object");
              double t0, t1;
              times(s[q], pp, m.t_final, t0, t1);
              pieces.push_back(piece(s[q], pp, modes, t0, t1));
            }
            if (pieces.front().t_start > 1e-12) fail(cp + "/schedule", "schedule must start at 0");
            if (pieces.back().t_end < m.t_final - 1e-12) fail(cp + "/schedule", "schedule ends before t_final");
          } else {
            pieces.push_back(piece(c, cp, modes, 0.0, kForever));
          }
          channels.emplace_back(std::move(pieces));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Schema && std::string(e.what()).rfind("line ", 0) == 0) throw;
          fail(cp, e.what());
        }
      }
    }
    ClassHint hint = ClassHint::Auto;
    if (r.contains("class")) {
      if (!r["class"].is_string()) fail("/class", "expected a string");
      try {
        hint = parse_class_hint(r["class"].get<std::string>());
      } catch (const Error& e) {
        fail("/class", e.what());
      }
    }
    try {
      m.lindblad = LindbladSet(modes, std::move(channels), hint);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema) fail("/lindblad", e.what());
      throw Error(e.code(), where(r.contains("class") ? "/class" : "/lindblad") + e.what());
    }
    const auto rep = validate_lindblad(m.lindblad);
    if (!rep.ok) fail("/lindblad", rep.summary());
    return m;
  }

 private:
  const json& root_;
  std::map<std::string, int> lines_;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    int line = 1, col = 1;
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto colon = what.find("parse error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw Error(ErrorCode::Schema, "line " + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  Cursor cursor;
  LineMapper mapper(&cursor);
  json::sax_parse(CountingIterator(text.data(), &cursor), CountingIterator(text.data() + text.size(), nullptr), &mapper);

  ExperimentConfig cfg;
  cfg.model = Reader(root, std::move(mapper.lines)).model();
  cfg.has_seed = root.is_object() && root.contains("seed");
  cfg.canonical = root.dump();
  cfg.hash = fnv1a64(cfg.canonical);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fls
